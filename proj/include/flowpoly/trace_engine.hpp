#pragma once
// Exact traces of powers of normalised transfer blocks as polynomials in Q:
// evaluate tr((C*T)(q)^n) mod many 16-bit primes at integer points q,
// reconstruct exact integers by CRT (with a surplus-prime checksum), divide
// out the clearing and normalisation factors exactly, and interpolate under
// the sector degree bound (with surplus evaluation points as checksums).

#include <atomic>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "binio.hpp"
#include "modular.hpp"
#include "poly.hpp"
#include "transfer.hpp"
#include "types.hpp"

namespace flowpoly {

struct EngineOptions {
    unsigned jobs = 1;           // worker threads for the (point, prime) sweep
    unsigned extra_points = 0;   // additional checksum points beyond d+2
    CacheConfig cache = CacheConfig::from_env();
    bool use_cache = true;
    uint32_t prime_limit = 65521;  // largest prime used in the sweep
};

// tr(T-hat^n) for the (k, l) sector is a polynomial in Q of degree at most
// n*(k + min(1-l, 0))
inline unsigned degree_bound(unsigned k, unsigned l, unsigned n) {
    if (l > k + 1) throw std::invalid_argument("degree_bound: l > k+1");
    unsigned drop = l >= 1 ? l - 1 : 0;
    return n * (k - drop);
}

struct EvaluationPlan {
    unsigned degree = 0;                        // interpolation degree bound
    int sign = 1;                               // (-1)^{kn} normalisation sign
    std::vector<int64_t> points;                // default 1..degree+2
    std::vector<std::vector<uint32_t>> primes;  // per point, last entry = surplus
    std::vector<Int> scaling;                   // per point: C^n * q^{2kn}
};

// residue of the scaled integer trace tr((C*T~(q))^n) mod p
inline uint64_t scaled_trace_mod(const TransferBlock& blk, unsigned n, int64_t q, uint32_t p) {
    ModChain mc = evaluate_mod(blk, q, p);
    const auto& bas = blk.basis();
    unsigned d = blk.irrep_dim;
    std::vector<uint64_t> v(mc.ncomp);
    std::vector<unsigned __int128> acc;
    uint64_t t = 0;
    for (auto bi : bas)
        for (unsigned tb = 0; tb < d; ++tb) {
            std::fill(v.begin(), v.end(), 0);
            size_t comp = blk.component(bi, tb);
            v[comp] = 1;
            mc.apply_layers(v, acc, n);
            t = addmod_u64(t, v[comp], p);
        }
    return t;
}

// residue of tr(T-hat(q)^n) = (-1)^{kn} q^{-2kn} tr(T~(q)^n) mod p
inline uint64_t trace_mod(const TransferBlock& blk, unsigned n, int64_t q, uint32_t p) {
    Int qi(q);
    if (mod_of_int(qi, p) == 0) throw BadPrimeError("trace_mod: q divisible by p");
    Int C = blk.clearing();
    if (mod_of_int(C, p) == 0) throw BadPrimeError("trace_mod: clearing constant divisible by p");
    uint64_t t = scaled_trace_mod(blk, n, q, p);
    uint64_t denom = mulmod_u64(powmod_u64(mod_of_int(C, p), n, p),
                                powmod_u64(mod_of_int(qi, p), 2ull * blk.k * n, p), p);
    t = mulmod_u64(t, invmod_u64(denom, p), p);
    if ((size_t(blk.k) * n) % 2 == 1) t = (p - t) % p;
    return t;
}

inline EvaluationPlan build_plan(const TransferBlock& blk, unsigned n, const EngineOptions& opts = {}) {
    EvaluationPlan plan;
    plan.degree = degree_bound(blk.k, blk.l, n);
    plan.sign = (size_t(blk.k) * n) % 2 == 1 ? -1 : 1;
    unsigned npts = plan.degree + 2 + opts.extra_points;
    Int C = blk.clearing();
    Int Cn = boost::multiprecision::pow(C, n);
    static const std::vector<uint32_t> pool_all = primes_descending(65521);
    std::vector<uint32_t> pool;
    for (auto p : pool_all)
        if (p <= opts.prime_limit) pool.push_back(p);
    for (int64_t q = 1; q <= static_cast<int64_t>(npts); ++q) {
        Int bound = trace_abs_bound(blk, q, n);
        std::vector<uint32_t> ps;
        Int prod = 1;
        bool have_surplus = false;
        for (auto p : pool) {
            if (q % p == 0 || mod_of_int(C, p) == 0) continue;
            if (!ps.empty() && prod > 2 * bound) {
                ps.push_back(p);  // checksum prime beyond the magnitude bound
                have_surplus = true;
                break;
            }
            ps.push_back(p);
            prod *= Int(p);
        }
        if (!have_surplus)
            throw std::runtime_error("build_plan: prime pool exhausted before magnitude bound");
        plan.points.push_back(q);
        plan.primes.push_back(std::move(ps));
        Int s = Cn;
        Int qp = boost::multiprecision::pow(Int(q), 2ull * blk.k * n);
        s *= qp;
        plan.scaling.push_back(s);
    }
    return plan;
}

// Newton interpolation through the first d+1 values (exact rationals)
inline PolyR interpolate(const std::vector<std::pair<int64_t, Rat>>& values, unsigned d) {
    if (values.size() < d + 1) throw std::invalid_argument("interpolate: not enough values");
    std::vector<Rat> x, dd;
    for (unsigned i = 0; i <= d; ++i) {
        x.push_back(Rat(values[i].first));
        dd.push_back(values[i].second);
    }
    // divided differences in place: dd[i] becomes f[x_0..x_i]
    for (unsigned j = 1; j <= d; ++j)
        for (unsigned i = d; i >= j; --i) dd[i] = (dd[i] - dd[i - 1]) / (x[i] - x[i - j]);
    PolyR p;          // accumulated polynomial
    PolyR basis = PolyR::constant(Rat(1));  // prod (Q - x_i)
    for (unsigned i = 0; i <= d; ++i) {
        p += basis * dd[i];
        basis = basis * (Q_var() - PolyR::constant(x[i]));
    }
    return p;
}

// interpolate through the first d+1 values and verify every remaining value
// as a checksum; mismatches report the offending evaluation points
inline PolyR interpolate_checked(const std::vector<std::pair<int64_t, Rat>>& values, unsigned d) {
    if (values.size() < d + 2)
        throw std::invalid_argument("interpolate_checked: need at least one surplus point");
    PolyR p = interpolate(values, d);
    std::vector<int64_t> bad;
    for (size_t i = d + 1; i < values.size(); ++i)
        if (p.eval(Rat(values[i].first)) != values[i].second) bad.push_back(values[i].first);
    if (!bad.empty()) {
        std::ostringstream os;
        os << "interpolate_checked: checksum failed at Q =";
        for (auto q : bad) os << " " << q;
        throw std::runtime_error(os.str());
    }
    return p;
}

namespace detail {

template <class Fn>
void parallel_tasks(size_t ntasks, unsigned jobs, Fn&& fn) {
    if (jobs <= 1 || ntasks <= 1) {
        for (size_t i = 0; i < ntasks; ++i) fn(i);
        return;
    }
    std::atomic<size_t> next{0};
    std::exception_ptr first_error;
    std::mutex err_mutex;
    auto worker = [&] {
        size_t i;
        while ((i = next.fetch_add(1)) < ntasks) {
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> g(err_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> ws;
    unsigned nw = jobs > ntasks ? static_cast<unsigned>(ntasks) : jobs;
    for (unsigned t = 0; t < nw; ++t) ws.emplace_back(worker);
    for (auto& w : ws) w.join();
    if (first_error) std::rethrow_exception(first_error);
}

constexpr char kTraceMagic[9] = "FPTRC001";

inline std::filesystem::path trace_cache_path(const CacheConfig& cache, unsigned k, unsigned l,
                                              const YoungDiagram& lam, unsigned n, bool deflated) {
    std::ostringstream os;
    os << "trace_k" << k << "_l" << l << "_lam";
    if (lam.parts.empty()) os << "e";
    for (size_t i = 0; i < lam.parts.size(); ++i) os << (i ? "-" : "") << lam.parts[i];
    os << "_n" << n << (deflated ? "_defl" : "_full") << ".bin";
    return std::filesystem::path(cache.dir) / os.str();
}

inline std::optional<PolyR> load_trace(const std::filesystem::path& path, unsigned k, unsigned l,
                                       const YoungDiagram& lam, unsigned n, bool deflated) {
    std::ifstream is(path, std::ios::binary);
    if (!is) return std::nullopt;
    char magic[8];
    is.read(magic, 8);
    if (!is || std::string(magic, 8) != std::string(kTraceMagic, 8)) return std::nullopt;
    if (get_u32(is) != k || get_u32(is) != l) return std::nullopt;
    uint32_t np = get_u32(is);
    if (np != lam.parts.size()) return std::nullopt;
    for (auto p : lam.parts)
        if (get_u32(is) != p) return std::nullopt;
    if (get_u32(is) != n || get_u8(is) != (deflated ? 1 : 0)) return std::nullopt;
    uint32_t nc = get_u32(is);
    PolyR poly;
    poly.c.resize(nc);
    for (auto& c : poly.c) c = get_rat(is);
    if (!is) return std::nullopt;
    poly.trim();
    return poly;
}

inline void save_trace(const std::filesystem::path& path, const PolyR& poly, unsigned k, unsigned l,
                       const YoungDiagram& lam, unsigned n, bool deflated) {
    write_file_atomic(path, [&](std::ostream& os) {
        os.write(kTraceMagic, 8);
        put_u32(os, k);
        put_u32(os, l);
        put_u32(os, static_cast<uint32_t>(lam.parts.size()));
        for (auto p : lam.parts) put_u32(os, p);
        put_u32(os, n);
        put_u8(os, deflated ? 1 : 0);
        put_u32(os, static_cast<uint32_t>(poly.c.size()));
        for (const auto& c : poly.c) put_rat(os, c);
    });
}

}  // namespace detail

// cache-only lookup so assemblers can skip block construction entirely
inline std::optional<PolyR> trace_cache_lookup(unsigned k, unsigned l, const YoungDiagram& lam,
                                               unsigned n, bool deflated,
                                               const EngineOptions& opts = {}) {
    if (!opts.use_cache || opts.cache.dir.empty()) return std::nullopt;
    return detail::load_trace(detail::trace_cache_path(opts.cache, k, l, lam, n, deflated), k, l, lam,
                              n, deflated);
}

// exact tr(T-hat(Q)^n) for the block, via the modular sweep
inline PolyR trace_polynomial(const TransferBlock& blk, unsigned n, const EngineOptions& opts = {}) {
    if (auto hit = trace_cache_lookup(blk.k, blk.l, blk.lam, n, blk.deflated, opts)) return *hit;

    EvaluationPlan plan = build_plan(blk, n, opts);
    size_t npts = plan.points.size();
    std::vector<std::pair<size_t, size_t>> tasks;  // (point index, prime slot)
    for (size_t pi = 0; pi < npts; ++pi)
        for (size_t si = 0; si < plan.primes[pi].size(); ++si) tasks.emplace_back(pi, si);
    std::vector<std::vector<uint64_t>> residues(npts);
    for (size_t pi = 0; pi < npts; ++pi) residues[pi].resize(plan.primes[pi].size());
    detail::parallel_tasks(tasks.size(), opts.jobs, [&](size_t t) {
        auto [pi, si] = tasks[t];
        residues[pi][si] = scaled_trace_mod(blk, n, plan.points[pi], plan.primes[pi][si]);
    });

    std::vector<std::pair<int64_t, Rat>> values;
    for (size_t pi = 0; pi < npts; ++pi) {
        std::vector<std::pair<uint64_t, uint64_t>> pr;
        for (size_t si = 0; si < plan.primes[pi].size(); ++si)
            pr.emplace_back(plan.primes[pi][si], residues[pi][si]);
        Int scaled = crt_reconstruct(pr);  // includes the surplus-prime check
        if (plan.sign < 0) scaled = -scaled;
        values.emplace_back(plan.points[pi], Rat(scaled, plan.scaling[pi]));
    }
    PolyR poly = interpolate_checked(values, plan.degree);

    if (opts.use_cache && !opts.cache.dir.empty())
        detail::save_trace(detail::trace_cache_path(opts.cache, blk.k, blk.l, blk.lam, n, blk.deflated),
                           poly, blk.k, blk.l, blk.lam, n, blk.deflated);
    return poly;
}

}  // namespace flowpoly
