#pragma once
// Factorized transfer-matrix blocks, one per (k, l, lambda): the layer
// operator is kept as a product of 3k sparse elementary factors
//   V_0 V_1 ... V_k H_{0k} (V_0 H_{0,k-1}) ... (V_0 H_{01})
// (applied in that order), with V_i = -Q*I + D_i and H_{0i} = I - Q*J_{0i}.
// States are orbit representatives under mark relabelling; arrows carry the
// seminormal S_l matrix of the relabelling permutation, so each block is the
// lambda-isotypic multiplicity-space image of the layer operator.  The
// projector onto states without unmarked singletons is applied by truncation
// between layers.  Entries are polynomials in Q of the unnormalised operator;
// the (-1)^k Q^{-2k} normalisation is applied at evaluation sites.

#include <algorithm>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "binio.hpp"
#include "combinatorics.hpp"
#include "modular.hpp"
#include "partition_algebra.hpp"
#include "poly.hpp"
#include "types.hpp"
#include "young.hpp"

namespace flowpoly {

struct FactorEntry {
    uint32_t src = 0, dst = 0;  // component index = ext_state_index * irrep_dim + tableau_index
    uint8_t qexp = 0;           // power of Q carried by this arrow
    Rat w;                      // signed seminormal weight (never zero)
};

struct TransferFactor {
    char kind = 'V';  // 'V' or 'H'
    uint8_t index = 0;
    std::vector<FactorEntry> entries;  // sorted by (src, dst, qexp)
    Int clear = 1;                     // lcm of weight denominators
};

struct TransferBlock {
    unsigned k = 0, l = 0;
    YoungDiagram lam;
    bool deflated = false;
    unsigned irrep_dim = 1;
    std::vector<PState> ext;              // factor-closure of the basis states
    std::vector<uint32_t> tilde;          // projector range: no unmarked singleton
    std::vector<uint32_t> c1;             // tilde states with point 0 a marked singleton
    std::vector<uint32_t> c2;             // tilde minus c1
    std::vector<TransferFactor> factors;  // application order: factors[0] first
    bool tripwire_diagonal = false;       // verified: C1 columns = Q^{2k} * self within tilde rows
    bool tripwire_triangular = false;     // verified: C2 columns never feed C1 rows

    const std::vector<uint32_t>& basis() const { return deflated ? c2 : tilde; }
    size_t dimension() const { return basis().size() * irrep_dim; }
    size_t ext_components() const { return ext.size() * irrep_dim; }
    size_t removed_multiplicity() const { return deflated ? c1.size() * irrep_dim : 0; }
    size_t component(uint32_t ext_index, unsigned tab) const {
        return size_t(ext_index) * irrep_dim + tab;
    }
    Int clearing() const {
        Int c = 1;
        for (const auto& f : factors) c *= f.clear;
        return c;
    }
    std::string key_string() const {
        std::ostringstream os;
        os << "k" << k << "_l" << l << "_lam";
        if (lam.parts.empty()) os << "e";
        for (size_t i = 0; i < lam.parts.size(); ++i) os << (i ? "-" : "") << lam.parts[i];
        return os.str();
    }
};

// right-to-left factor product, listed in application order
inline std::vector<std::pair<char, uint8_t>> factor_sequence(unsigned k) {
    std::vector<std::pair<char, uint8_t>> seq;
    for (unsigned i = 0; i <= k; ++i) seq.emplace_back('V', static_cast<uint8_t>(i));
    seq.emplace_back('H', static_cast<uint8_t>(k));
    for (unsigned i = k - 1; i >= 1; --i) {
        seq.emplace_back('V', static_cast<uint8_t>(0));
        seq.emplace_back('H', static_cast<uint8_t>(i));
    }
    return seq;
}

namespace detail {

struct RawTerm {
    int sign;
    uint8_t qexp;
    PState state;
};

// V_i = -Q*I + D_i at fixed mark count: detaching a marked singleton would
// erase a label (a lower-sector contribution), so that part of D_i is weight
// zero here and the term is dropped.
inline std::vector<RawTerm> v_terms(const PState& s, unsigned i) {
    std::vector<RawTerm> out;
    out.push_back({-1, 1, s});
    size_t b = find_block(s, i);
    if (is_singleton(s[b])) {
        if (s[b].mark == 0) out.push_back({+1, 1, s});
    } else {
        PState t = s;
        t[b].pts &= static_cast<uint16_t>(~(uint16_t(1) << i));
        t.push_back(MarkedBlock{static_cast<uint16_t>(uint16_t(1) << i), 0});
        sort_blocks(t);
        out.push_back({+1, 0, std::move(t)});
    }
    return out;
}

// H_{0i} = I - Q*J_{0i} at fixed mark count: joining two marked blocks would
// merge two labels (again a lower sector), so that part of J is dropped.
inline std::vector<RawTerm> h_terms(const PState& s, unsigned i) {
    std::vector<RawTerm> out;
    out.push_back({+1, 0, s});
    size_t b0 = find_block(s, 0), bi = find_block(s, i);
    if (b0 == bi) {
        out.push_back({-1, 1, s});
        return out;
    }
    if (s[b0].mark != 0 && s[bi].mark != 0) return out;
    PState t = s;
    t[b0].pts |= t[bi].pts;
    if (t[b0].mark == 0) t[b0].mark = t[bi].mark;
    t.erase(t.begin() + static_cast<long>(bi));
    sort_blocks(t);
    out.push_back({-1, 1, std::move(t)});
    return out;
}

inline std::vector<RawTerm> factor_terms(char kind, unsigned i, const PState& s) {
    return kind == 'V' ? v_terms(s, i) : h_terms(s, i);
}

}  // namespace detail

// ---- disk cache ----

struct CacheConfig {
    std::string dir;  // empty disables caching

    static CacheConfig from_env() {
        CacheConfig c;
        if (const char* e = std::getenv("FLOWPOLY_CACHE")) {
            c.dir = e;
        } else if (const char* h = std::getenv("HOME")) {
            c.dir = std::string(h) + "/.cache/flowpoly";
        }
        return c;
    }
};

namespace detail {

constexpr char kBlockMagic[9] = "FPBLK001";

inline void save_block(const TransferBlock& b, const std::filesystem::path& path) {
    write_file_atomic(path, [&](std::ostream& os) {
        os.write(kBlockMagic, 8);
        put_u32(os, b.k);
        put_u32(os, b.l);
        put_u32(os, static_cast<uint32_t>(b.lam.parts.size()));
        for (auto p : b.lam.parts) put_u32(os, p);
        put_u32(os, b.irrep_dim);
        put_u32(os, static_cast<uint32_t>(b.ext.size()));
        for (const auto& s : b.ext) {
            put_u8(os, static_cast<uint8_t>(s.size()));
            for (const auto& blk : s) {
                put_u32(os, blk.pts);
                put_u8(os, blk.mark);
            }
        }
        auto put_list = [&](const std::vector<uint32_t>& v) {
            put_u32(os, static_cast<uint32_t>(v.size()));
            for (auto x : v) put_u32(os, x);
        };
        put_list(b.tilde);
        put_list(b.c1);
        put_list(b.c2);
        put_u32(os, static_cast<uint32_t>(b.factors.size()));
        for (const auto& f : b.factors) {
            put_u8(os, static_cast<uint8_t>(f.kind));
            put_u8(os, f.index);
            put_bigint(os, f.clear);
            put_u32(os, static_cast<uint32_t>(f.entries.size()));
            for (const auto& e : f.entries) {
                put_u32(os, e.src);
                put_u32(os, e.dst);
                put_u8(os, e.qexp);
                put_rat(os, e.w);
            }
        }
        put_u8(os, b.tripwire_diagonal ? 1 : 0);
        put_u8(os, b.tripwire_triangular ? 1 : 0);
    });
}

inline bool load_block(TransferBlock& b, unsigned k, unsigned l, const YoungDiagram& lam,
                       const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) return false;
    char magic[8];
    is.read(magic, 8);
    if (!is || std::string(magic, 8) != std::string(kBlockMagic, 8)) return false;
    if (get_u32(is) != k || get_u32(is) != l) return false;
    uint32_t np = get_u32(is);
    if (np != lam.parts.size()) return false;
    for (auto p : lam.parts)
        if (get_u32(is) != p) return false;
    b.k = k;
    b.l = l;
    b.lam = lam;
    b.deflated = false;
    b.irrep_dim = get_u32(is);
    b.ext.resize(get_u32(is));
    for (auto& s : b.ext) {
        s.resize(get_u8(is));
        for (auto& blk : s) {
            blk.pts = static_cast<uint16_t>(get_u32(is));
            blk.mark = get_u8(is);
        }
    }
    auto get_list = [&](std::vector<uint32_t>& v) {
        v.resize(get_u32(is));
        for (auto& x : v) x = get_u32(is);
    };
    get_list(b.tilde);
    get_list(b.c1);
    get_list(b.c2);
    b.factors.resize(get_u32(is));
    for (auto& f : b.factors) {
        f.kind = static_cast<char>(get_u8(is));
        f.index = get_u8(is);
        f.clear = get_bigint(is);
        f.entries.resize(get_u32(is));
        for (auto& e : f.entries) {
            e.src = get_u32(is);
            e.dst = get_u32(is);
            e.qexp = get_u8(is);
            e.w = get_rat(is);
        }
    }
    b.tripwire_diagonal = get_u8(is) != 0;
    b.tripwire_triangular = get_u8(is) != 0;
    return static_cast<bool>(is);
}

inline std::filesystem::path block_cache_path(const CacheConfig& cache, const TransferBlock& key) {
    return std::filesystem::path(cache.dir) / ("block_" + key.key_string() + ".bin");
}

}  // namespace detail

// ---- construction ----

inline TransferBlock build_block(unsigned k, unsigned l, const YoungDiagram& lam,
                                 const CacheConfig& cache = CacheConfig::from_env()) {
    if (k < 1 || k + 1 > kMaxPoints) throw std::invalid_argument("build_block: k out of range");
    if (l > k + 1) throw std::invalid_argument("build_block: l > k+1");
    if (lam.ell() != l) throw std::invalid_argument("build_block: diagram does not have l cells");

    TransferBlock b;
    b.k = k;
    b.l = l;
    b.lam = lam;
    b.irrep_dim = static_cast<unsigned>(young_dim(lam).convert_to<unsigned long>());

    std::filesystem::path cpath;
    if (!cache.dir.empty()) {
        cpath = detail::block_cache_path(cache, b);
        TransferBlock loaded;
        if (detail::load_block(loaded, k, l, lam, cpath)) return loaded;
    }

    // orbit representatives: canonical-labelled states without unmarked singletons
    std::vector<PState> states;
    for (auto& s : enumerate_basis(k, l)) {
        auto [rep, perm] = orbit_rep_and_perm(s);
        if (rep == s) states.push_back(std::move(rep));
    }
    size_t n_tilde_reps = states.size();

    // closure under all factor terms
    std::map<PState, uint32_t> index;
    for (const auto& s : states) index.emplace(s, 0);
    auto seq = factor_sequence(k);
    for (size_t head = 0; head < states.size(); ++head) {
        PState s = states[head];  // copy: states may reallocate
        for (const auto& [kind, i] : seq)
            for (auto& t : detail::factor_terms(kind, i, s)) {
                auto rep = orbit_rep_and_perm(t.state).first;
                if (index.emplace(rep, 0).second) states.push_back(std::move(rep));
            }
    }
    std::sort(states.begin(), states.end(),
              [](const PState& a, const PState& b2) { return encode_rgs(a) < encode_rgs(b2); });
    b.ext = std::move(states);
    index.clear();
    for (uint32_t i = 0; i < b.ext.size(); ++i) index[b.ext[i]] = i;

    SeminormalRep srep(lam, l);
    if (srep.dim() != b.irrep_dim) throw std::logic_error("build_block: tableau count != hook dimension");
    unsigned d = b.irrep_dim;

    for (const auto& [kind, i] : seq) {
        TransferFactor f;
        f.kind = kind;
        f.index = i;
        std::map<std::tuple<uint32_t, uint32_t, uint8_t>, Rat> acc;
        for (uint32_t si = 0; si < b.ext.size(); ++si)
            for (auto& t : detail::factor_terms(kind, i, b.ext[si])) {
                auto [rep, perm] = orbit_rep_and_perm(t.state);
                uint32_t ri = index.at(rep);
                const RatMatrix& rho = srep.rho(perm);
                for (unsigned bi = 0; bi < d; ++bi)
                    for (unsigned ci = 0; ci < d; ++ci) {
                        if (rho[bi][ci] == 0) continue;
                        acc[{static_cast<uint32_t>(b.component(si, bi)),
                             static_cast<uint32_t>(b.component(ri, ci)), t.qexp}] +=
                            Rat(t.sign) * rho[bi][ci];
                    }
            }
        for (auto& [key, w] : acc) {
            if (w == 0) continue;
            f.entries.push_back({std::get<0>(key), std::get<1>(key), std::get<2>(key), w});
            f.clear = boost::multiprecision::lcm(f.clear, den(w));
        }
        b.factors.push_back(std::move(f));
    }

    for (uint32_t i = 0; i < b.ext.size(); ++i) {
        const PState& s = b.ext[i];
        if (has_unmarked_singleton(s)) continue;
        b.tilde.push_back(i);
        if (point0_marked_singleton(s))
            b.c1.push_back(i);
        else
            b.c2.push_back(i);
    }

    // dimension bookkeeping tripwires against the counting module
    if (Int(b.tilde.size()) * factorial(l) != dim_marked_nosingleton(k + 1, l))
        throw std::logic_error("build_block: basis count mismatch for " + b.key_string());
    if (Int(b.c1.size()) != n_trivial(k, l))
        throw std::logic_error("build_block: trivial-class count mismatch for " + b.key_string());
    if (Int(n_tilde_reps) != static_cast<Int>(b.tilde.size()))
        throw std::logic_error("build_block: closure lost basis states for " + b.key_string());

    if (!cache.dir.empty()) detail::save_block(b, cpath);
    return b;
}

// ---- evaluation: compiled scalar chains ----

// One-layer application of the factor product over scalars S, with the
// projector applied by truncation between layers.
template <class S>
struct Chain {
    size_t ncomp = 0;
    std::vector<uint8_t> keep;  // basis() indicator per ext component
    struct F {
        std::vector<uint32_t> src, dst;
        std::vector<S> w;
    };
    std::vector<F> fs;

    void apply_factors(std::vector<S>& v, std::vector<S>& tmp) const {
        for (const auto& f : fs) {
            tmp.assign(ncomp, S(0));
            for (size_t e = 0; e < f.src.size(); ++e) {
                const S& x = v[f.src[e]];
                if (!(x == S(0))) tmp[f.dst[e]] += f.w[e] * x;
            }
            v.swap(tmp);
        }
    }
    void truncate(std::vector<S>& v) const {
        for (size_t i = 0; i < ncomp; ++i)
            if (!keep[i]) v[i] = S(0);
    }
    // v must be supported on the basis; afterwards it holds (P T P)^n v
    void apply_layers(std::vector<S>& v, std::vector<S>& tmp, unsigned n) const {
        for (unsigned layer = 0; layer < n; ++layer) {
            apply_factors(v, tmp);
            truncate(v);
        }
    }
};

namespace detail {
template <class S, class WeightFn>
Chain<S> compile_chain(const TransferBlock& blk, WeightFn&& wf) {
    Chain<S> ch;
    ch.ncomp = blk.ext_components();
    ch.keep.assign(ch.ncomp, 0);
    for (auto bi : blk.basis())
        for (unsigned t = 0; t < blk.irrep_dim; ++t) ch.keep[blk.component(bi, t)] = 1;
    for (const auto& f : blk.factors) {
        typename Chain<S>::F cf;
        for (const auto& e : f.entries) {
            S w = wf(e);
            if (w == S{}) continue;
            cf.src.push_back(e.src);
            cf.dst.push_back(e.dst);
            cf.w.push_back(std::move(w));
        }
        ch.fs.push_back(std::move(cf));
    }
    return ch;
}
}  // namespace detail

inline Chain<Rat> evaluate_rational(const TransferBlock& blk, const Rat& q) {
    return detail::compile_chain<Rat>(blk, [&](const FactorEntry& e) {
        Rat w = e.w;
        for (unsigned i = 0; i < e.qexp; ++i) w *= q;
        return w;
    });
}

inline Chain<std::complex<double>> evaluate_complex(const TransferBlock& blk, std::complex<double> q) {
    return detail::compile_chain<std::complex<double>>(blk, [&](const FactorEntry& e) {
        std::complex<double> w(to_double(e.w), 0.0);
        for (unsigned i = 0; i < e.qexp; ++i) w *= q;
        return w;
    });
}

inline Chain<PolyR> evaluate_symbolic(const TransferBlock& blk) {
    return detail::compile_chain<PolyR>(blk, [&](const FactorEntry& e) {
        return PolyR::monomial(e.w, e.qexp);
    });
}

// dense basis x basis matrix of the projected layer operator (unnormalised);
// guarded by the matrix-free threshold
template <class S>
std::vector<std::vector<S>> dense_matrix(const TransferBlock& blk, const Chain<S>& ch,
                                         size_t dense_limit = 2048) {
    size_t dim = blk.dimension();
    if (dim > dense_limit) throw std::length_error("dense_matrix: dimension above dense threshold");
    const auto& bas = blk.basis();
    unsigned d = blk.irrep_dim;
    std::vector<std::vector<S>> m(dim, std::vector<S>(dim, S(0)));
    std::vector<S> v(ch.ncomp, S(0)), tmp;
    for (size_t j = 0; j < dim; ++j) {
        std::fill(v.begin(), v.end(), S(0));
        v[blk.component(bas[j / d], static_cast<unsigned>(j % d))] = S(1);
        ch.apply_factors(v, tmp);
        for (size_t i = 0; i < dim; ++i)
            m[i][j] = v[blk.component(bas[i / d], static_cast<unsigned>(i % d))];
    }
    return m;
}

// ---- scaled-integer modular chain (shared by the trace engine and the
// ---- deflation tripwire) ----

// Applies C*T with C = prod of factor clearing constants, entries reduced
// mod p.  Accumulation uses 128-bit intermediates, valid for any p < 2^63.
struct ModChain {
    uint64_t p = 0;
    size_t ncomp = 0;
    std::vector<uint8_t> keep;
    struct F {
        std::vector<uint32_t> src, dst;
        std::vector<uint64_t> w;
    };
    std::vector<F> fs;

    void apply_factors(std::vector<uint64_t>& v, std::vector<unsigned __int128>& acc) const {
        for (const auto& f : fs) {
            acc.assign(ncomp, 0);
            for (size_t e = 0; e < f.src.size(); ++e)
                acc[f.dst[e]] += static_cast<unsigned __int128>(f.w[e]) * v[f.src[e]];
            for (size_t i = 0; i < ncomp; ++i) v[i] = static_cast<uint64_t>(acc[i] % p);
        }
    }
    void truncate(std::vector<uint64_t>& v) const {
        for (size_t i = 0; i < ncomp; ++i)
            if (!keep[i]) v[i] = 0;
    }
    void apply_layers(std::vector<uint64_t>& v, std::vector<unsigned __int128>& acc, unsigned n) const {
        for (unsigned layer = 0; layer < n; ++layer) {
            apply_factors(v, acc);
            truncate(v);
        }
    }
};

inline ModChain evaluate_mod(const TransferBlock& blk, int64_t q, uint64_t p) {
    if (p < 2) throw BadPrimeError("evaluate_mod: modulus too small");
    ModChain ch;
    ch.p = p;
    ch.ncomp = blk.ext_components();
    ch.keep.assign(ch.ncomp, 0);
    for (auto bi : blk.basis())
        for (unsigned t = 0; t < blk.irrep_dim; ++t) ch.keep[blk.component(bi, t)] = 1;
    Int qi = q;
    uint64_t qm = mod_of_int(qi, p);
    for (const auto& f : blk.factors) {
        if (mod_of_int(f.clear, p) == 0)
            throw BadPrimeError("evaluate_mod: p divides a clearing constant");
        ModChain::F cf;
        for (const auto& e : f.entries) {
            Int scaled = num(e.w) * (f.clear / den(e.w));  // integer by construction of clear
            uint64_t w = mod_of_int(scaled, p);
            for (unsigned i = 0; i < e.qexp; ++i) w = mulmod_u64(w, qm, p);
            if (w == 0) continue;
            cf.src.push_back(e.src);
            cf.dst.push_back(e.dst);
            cf.w.push_back(w);
        }
        ch.fs.push_back(std::move(cf));
    }
    return ch;
}

// Upper bound on any single component of (C*T)(q) applied to a basis unit
// vector (single layer): per-column sums of absolute scaled entries, maximised
// over basis columns.  Used to size the modulus budget of exact certificates.
inline Int column_abs_bound(const TransferBlock& blk, int64_t q) {
    size_t n = blk.ext_components();
    std::vector<Int> u(n, Int(1)), nu;
    Int qa = q < 0 ? Int(-q) : Int(q);
    for (auto it = blk.factors.rbegin(); it != blk.factors.rend(); ++it) {
        nu.assign(n, Int(0));
        for (const auto& e : it->entries) {
            Int w = num(e.w) * (it->clear / den(e.w));
            if (w < 0) w = -w;
            for (unsigned i = 0; i < e.qexp; ++i) w *= qa;
            nu[e.src] += w * u[e.dst];
        }
        u.swap(nu);
    }
    Int best = 0;
    for (auto bi : blk.basis())
        for (unsigned t = 0; t < blk.irrep_dim; ++t) best = std::max(best, u[blk.component(bi, t)]);
    return best;
}

// Bound on |tr((C*T)(q)^n)| with truncation between layers: ones-vector chain.
inline Int trace_abs_bound(const TransferBlock& blk, int64_t q, unsigned n) {
    size_t nc = blk.ext_components();
    std::vector<uint8_t> keep(nc, 0);
    for (auto bi : blk.basis())
        for (unsigned t = 0; t < blk.irrep_dim; ++t) keep[blk.component(bi, t)] = 1;
    std::vector<Int> v(nc, Int(0)), nv;
    for (size_t i = 0; i < nc; ++i)
        if (keep[i]) v[i] = 1;
    Int qa = q < 0 ? Int(-q) : Int(q);
    for (unsigned layer = 0; layer < n; ++layer) {
        for (const auto& f : blk.factors) {
            nv.assign(nc, Int(0));
            for (const auto& e : f.entries) {
                if (v[e.src].is_zero()) continue;
                Int w = num(e.w) * (f.clear / den(e.w));
                if (w < 0) w = -w;
                for (unsigned i = 0; i < e.qexp; ++i) w *= qa;
                nv[e.dst] += w * v[e.src];
            }
            v.swap(nv);
        }
        for (size_t i = 0; i < nc; ++i)
            if (!keep[i]) v[i] = 0;
    }
    Int s = 0;
    for (size_t i = 0; i < nc; ++i)
        if (keep[i]) s += v[i];
    return s;
}

// ---- deflation ----

namespace detail {

// Exact certificate that within the projected operator the C1 columns equal
// Q^{2k} times themselves (diagonal part) and, optionally, that C2 columns
// never feed C1 rows (triangular part).  Entries are polynomials of degree
// <= 3k, so agreement at 3k+1 integer points, established modulo enough
// 61-bit primes to exceed twice the magnitude bound, is an exact identity.
inline void run_tripwire(TransferBlock& blk, bool check_triangular) {
    unsigned deg = 3 * blk.k;
    Int C = blk.clearing();
    std::vector<uint8_t> in_c1(blk.ext.size(), 0), in_tilde(blk.ext.size(), 0);
    for (auto i : blk.c1) in_c1[i] = 1;
    for (auto i : blk.tilde) in_tilde[i] = 1;
    unsigned d = blk.irrep_dim;

    for (int64_t q = 1; q <= static_cast<int64_t>(deg) + 1; ++q) {
        Int bound = column_abs_bound(blk, q);
        Int target = C;
        for (unsigned i = 0; i < 2 * blk.k; ++i) target *= q;
        bound = std::max(bound, target);
        std::vector<uint64_t> primes;
        Int prod = 1;
        uint64_t pc = uint64_t(1) << 61;
        while (prod <= 2 * bound) {
            pc = prev_prime_u64(pc - 1);
            primes.push_back(pc);
            prod *= Int(pc);
        }
        for (uint64_t p : primes) {
            ModChain mc = evaluate_mod(blk, q, p);
            uint64_t expect = mulmod_u64(mod_of_int(C, p), powmod_u64(mod_of_int(Int(q), p), 2 * blk.k, p), p);
            std::vector<uint64_t> v(mc.ncomp);
            std::vector<unsigned __int128> acc;
            auto run_column = [&](uint32_t ei, unsigned t) {
                std::fill(v.begin(), v.end(), 0);
                v[blk.component(ei, t)] = 1;
                mc.apply_factors(v, acc);
            };
            for (auto ei : blk.c1)
                for (unsigned t = 0; t < d; ++t) {
                    run_column(ei, t);
                    for (auto ti : blk.c1)
                        for (unsigned tc = 0; tc < d; ++tc) {
                            uint64_t got = v[blk.component(ti, tc)];
                            uint64_t want = (ti == ei && tc == t) ? expect : 0;
                            if (got != want)
                                throw std::runtime_error(
                                    "deflate_trivial: trivial-class diagonal check failed for " +
                                    blk.key_string());
                        }
                }
            if (check_triangular)
                for (auto ei : blk.c2)
                    for (unsigned t = 0; t < d; ++t) {
                        run_column(ei, t);
                        for (auto ti : blk.c1)
                            for (unsigned tc = 0; tc < d; ++tc)
                                if (v[blk.component(ti, tc)] != 0)
                                    throw std::runtime_error(
                                        "deflate_trivial: triangularity check failed for " +
                                        blk.key_string());
                    }
        }
    }
    blk.tripwire_diagonal = true;
    if (check_triangular) blk.tripwire_triangular = true;
}

}  // namespace detail

// Split off the trivial eigenvalue: reorders the basis into C1 (point 0 a
// marked singleton) and C2, certifies the C1 x C1 sub-block equals
// Q^{2k} * identity, and returns the block restricted to C2.  The removed
// multiplicity is n_trivial(k, l) * irrep_dim.  Triangularity (C2 columns
// avoiding C1 rows) is certified when the C2 dimension is within the dense
// threshold; above it the Appendix block-triangular structure is relied upon.
inline TransferBlock deflate_trivial(TransferBlock blk,
                                     const CacheConfig& cache = CacheConfig::from_env()) {
    if (blk.deflated) throw std::invalid_argument("deflate_trivial: already deflated");
    if (blk.l == 0) {  // no trivial eigenvalue in the markless sector
        blk.deflated = true;
        return blk;
    }
    bool want_triangular = blk.c2.size() * blk.irrep_dim <= 2048;
    bool updated = false;
    if (!blk.tripwire_diagonal || (want_triangular && !blk.tripwire_triangular)) {
        detail::run_tripwire(blk, want_triangular);
        updated = true;
    }
    if (updated && !cache.dir.empty())
        detail::save_block(blk, detail::block_cache_path(cache, blk));
    blk.deflated = true;
    return blk;
}

}  // namespace flowpoly
