#pragma once
// Numeric eigen-analysis of the normalised transfer blocks at complex Q:
// matrix-free subspace iteration for the two largest-modulus eigenvalues per
// sector, dominance ordering across sectors (the removed trivial eigenvalue
// (-1)^k is tracked as a pseudo-sector with its closed-form amplitude),
// classification of limiting features, bisection for the largest real
// accumulation point Q_c(k), direct-search equimodularity curves, the
// four-case parity classification at real crossings, and the 1/k
// extrapolation of Q_c.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_complex.hpp>

#include "combinatorics.hpp"
#include "trace_engine.hpp"
#include "transfer.hpp"
#include "types.hpp"

namespace flowpoly {

// ---------------------------------------------------------------------------
// sector bookkeeping

struct SectorKey {
    unsigned l = 0;
    YoungDiagram lam;
    bool trivial_pseudo = false;

    bool operator==(const SectorKey& o) const {
        return trivial_pseudo == o.trivial_pseudo && l == o.l && lam.parts == o.lam.parts;
    }
    bool operator!=(const SectorKey& o) const { return !(*this == o); }
    bool operator<(const SectorKey& o) const {
        if (trivial_pseudo != o.trivial_pseudo) return trivial_pseudo < o.trivial_pseudo;
        if (l != o.l) return l < o.l;
        return lam.parts < o.lam.parts;
    }
    std::string str() const {
        if (trivial_pseudo) return "trivial";
        std::string s = "(" + std::to_string(l);
        if (!lam.parts.empty()) {
            s += ",(";
            for (size_t i = 0; i < lam.parts.size(); ++i)
                s += (i ? "," : "") + std::to_string(lam.parts[i]);
            s += ")";
        }
        return s + ")";
    }
};

inline SectorKey sector(unsigned l, std::vector<unsigned> parts) {
    SectorKey k;
    k.l = l;
    k.lam.parts = std::move(parts);
    return k;
}

inline SectorKey trivial_sector() {
    SectorKey k;
    k.trivial_pseudo = true;
    return k;
}

// symmetric-row diagram (l) used by restricted scans and the l=k block
inline SectorKey row_sector(unsigned l) { return l == 0 ? sector(0, {}) : sector(l, {l}); }

struct SectorEig {
    SectorKey key;
    std::complex<double> mu1{0.0, 0.0};  // largest-modulus eigenvalue of T-hat
    std::complex<double> mu2{0.0, 0.0};  // second largest
    double residual = 0.0;               // relative residual of mu1 (worst of the two)
    bool converged = true;
    unsigned dim = 0;                    // deflated block dimension
    std::complex<double> amplitude{0.0, 0.0};  // alpha / beta / gamma at q
};

struct SpectrumSample {
    std::complex<double> q;
    std::vector<SectorEig> sectors;  // sorted by |mu1| descending
    bool flagged = false;            // some sector failed to converge
};

enum class FeatureKind { isolated_a, curve_b };
enum class Parity { all_n, odd_n, even_n, non_real, unknown };

inline const char* parity_name(Parity p) {
    switch (p) {
        case Parity::all_n: return "all-n";
        case Parity::odd_n: return "odd-n";
        case Parity::even_n: return "even-n";
        case Parity::non_real: return "non-real";
        case Parity::unknown: return "unknown";
    }
    return "?";
}

struct LimitingFeature {
    FeatureKind kind = FeatureKind::curve_b;
    std::complex<double> location{0.0, 0.0};
    std::vector<SectorKey> witnesses;
    Parity parity = Parity::unknown;  // set for real curve-b points
};

struct SpectraOptions {
    EngineOptions engine;
    double residual_tol = 1e-10;     // relative eigen-residual target
    double equimodular_tol = 1e-8;   // relative modulus tie tolerance
    unsigned subspace_dim = 5;
    unsigned max_iterations = 4000;
    unsigned restarts = 2;
    std::optional<bool> restrict_sectors;  // default: restrict for k >= 6
    uint64_t seed = 0x5eed5eedULL;
};

// candidate sectors participating in dominance scans: all deflated sectors
// for small k; for large k only the fully symmetric diagrams with l <= 3
// (the documented shortcut; the remaining sectors stay subdominant in the
// scanned windows), plus the l=k representative block and the trivial value
inline std::vector<SectorKey> candidate_sectors(unsigned k, bool restricted) {
    std::vector<SectorKey> out;
    if (!restricted) {
        for (unsigned l = 0; l + 1 <= k; ++l)
            for (const auto& lam : young_diagrams(l)) {
                SectorKey key;
                key.l = l;
                key.lam = lam;
                out.push_back(key);
            }
        out.push_back(row_sector(k));
    } else {
        for (unsigned l = 0; l <= std::min(3u, k >= 1 ? k - 1 : 0u); ++l) out.push_back(row_sector(l));
    }
    out.push_back(trivial_sector());
    return out;
}

// amplitude attached to a sector in the assembled polynomial: alpha for
// l <= k-1, beta_k for the l=k representative, gamma_{k+1} for the trivial value
inline PolyR sector_amplitude(unsigned k, const SectorKey& key) {
    if (key.trivial_pseudo) return gamma(k);
    if (key.l == k) return beta(k);
    return alpha(key.l, key.lam);
}

inline std::complex<double> eval_poly_complex(const PolyR& p, std::complex<double> q) {
    std::complex<double> acc(0.0, 0.0);
    for (size_t i = p.c.size(); i-- > 0;) acc = acc * q + std::complex<double>(to_double(p.c[i]), 0.0);
    return acc;
}

// ---------------------------------------------------------------------------
// small dense complex helpers (generic over the complex scalar type)

namespace detail {

template <class CT>
using real_of = decltype(abs(std::declval<CT>()));

template <class CT>
std::vector<CT> small_matmul(const std::vector<CT>& A, const std::vector<CT>& B, size_t m) {
    std::vector<CT> C(m * m, CT(0));
    for (size_t i = 0; i < m; ++i)
        for (size_t l = 0; l < m; ++l) {
            CT a = A[i * m + l];
            if (a == CT(0)) continue;
            for (size_t j = 0; j < m; ++j) C[i * m + j] += a * B[l * m + j];
        }
    return C;
}

// characteristic polynomial (monic, ascending coefficients) by the
// trace-recursion scheme
template <class CT>
std::vector<CT> small_charpoly(const std::vector<CT>& A, size_t m) {
    std::vector<CT> c(m + 1, CT(0));
    c[m] = CT(1);
    std::vector<CT> M(m * m, CT(0));
    for (size_t i = 0; i < m; ++i) M[i * m + i] = CT(1);  // M = I
    for (size_t j = 1; j <= m; ++j) {
        M = small_matmul(A, M, m);
        CT tr(0);
        for (size_t i = 0; i < m; ++i) tr += M[i * m + i];
        CT cj = -tr / CT(double(j));
        c[m - j] = cj;
        for (size_t i = 0; i < m; ++i) M[i * m + i] += cj;
    }
    return c;
}

// Durand-Kerner roots of a monic complex polynomial of small degree
template <class CT>
std::vector<CT> small_poly_roots(const std::vector<CT>& c, size_t m) {
    using RT = real_of<CT>;
    if (m == 0) return {};
    std::vector<CT> z(m);
    CT seed(0.4, 0.9);
    CT w(1.0, 0.0);
    for (size_t i = 0; i < m; ++i) {
        w *= seed;
        z[i] = w;
    }
    for (unsigned it = 0; it < 500; ++it) {
        RT worst(0);
        for (size_t i = 0; i < m; ++i) {
            CT pv = c[m];
            for (size_t j = m; j-- > 0;) pv = pv * z[i] + c[j];
            CT denom(1.0, 0.0);
            for (size_t j = 0; j < m; ++j) {
                if (j == i) continue;
                CT d = z[i] - z[j];
                if (abs(d) == RT(0)) d = CT(1e-30, 1e-30);
                denom *= d;
            }
            CT step = pv / denom;
            z[i] -= step;
            RT rel = abs(step) / (RT(1) + abs(z[i]));
            if (rel > worst) worst = rel;
        }
        if (worst < RT(1e-28)) break;
    }
    return z;
}

// solve (A - theta I) x = b by Gaussian elimination with partial pivoting
template <class CT>
std::vector<CT> small_shifted_solve(std::vector<CT> A, size_t m, CT theta, std::vector<CT> b) {
    using RT = real_of<CT>;
    for (size_t i = 0; i < m; ++i) A[i * m + i] -= theta;
    std::vector<size_t> piv(m);
    for (size_t col = 0; col < m; ++col) {
        size_t best = col;
        RT mx = abs(A[col * m + col]);
        for (size_t r = col + 1; r < m; ++r)
            if (abs(A[r * m + col]) > mx) {
                mx = abs(A[r * m + col]);
                best = r;
            }
        if (mx == RT(0)) {
            A[col * m + col] = CT(1e-30, 0.0);
        } else if (best != col) {
            for (size_t j = 0; j < m; ++j) std::swap(A[col * m + j], A[best * m + j]);
            std::swap(b[col], b[best]);
        }
        for (size_t r = col + 1; r < m; ++r) {
            CT f = A[r * m + col] / A[col * m + col];
            if (f == CT(0)) continue;
            for (size_t j = col; j < m; ++j) A[r * m + j] -= f * A[col * m + j];
            b[r] -= f * b[col];
        }
    }
    std::vector<CT> x(m, CT(0));
    for (size_t i = m; i-- > 0;) {
        CT s = b[i];
        for (size_t j = i + 1; j < m; ++j) s -= A[i * m + j] * x[j];
        x[i] = s / A[i * m + i];
    }
    return x;
}

// ---------------------------------------------------------------------------
// matrix-free subspace iteration on a compiled chain

template <class CT>
struct SectorEigsRaw {
    std::vector<CT> eigs;  // Ritz values of the un-normalised layer operator
    double residual = 1.0;
    bool converged = false;
};

// orthonormalise columns in place (modified Gram-Schmidt); returns rank
template <class CT>
size_t mgs(std::vector<std::vector<CT>>& X) {
    using RT = real_of<CT>;
    size_t rank = 0;
    for (size_t j = 0; j < X.size(); ++j) {
        for (size_t i = 0; i < rank; ++i) {
            CT dot(0);
            for (size_t t = 0; t < X[j].size(); ++t) dot += conj(X[i][t]) * X[j][t];
            for (size_t t = 0; t < X[j].size(); ++t) X[j][t] -= dot * X[i][t];
        }
        RT nrm(0);
        for (size_t t = 0; t < X[j].size(); ++t) nrm += norm(X[j][t]);
        nrm = sqrt(nrm);
        if (nrm > RT(1e-200)) {
            for (size_t t = 0; t < X[j].size(); ++t) X[j][t] /= CT(nrm); // NOLINT
            if (j != rank) X[rank].swap(X[j]);
            ++rank;
        }
    }
    X.resize(rank);
    return rank;
}

// two largest-modulus eigenvalues of the projected layer operator of `blk`
// via m-dimensional subspace iteration with Rayleigh-Ritz extraction
template <class CT>
SectorEigsRaw<CT> subspace_eigs(const TransferBlock& blk, const Chain<CT>& ch, unsigned m,
                                double tol, unsigned maxit, unsigned restarts, uint64_t seed) {
    using RT = real_of<CT>;
    SectorEigsRaw<CT> out;
    size_t dim = blk.dimension();
    if (dim == 0) {
        out.converged = true;
        out.residual = 0.0;
        return out;
    }
    m = static_cast<unsigned>(std::min<size_t>(m, dim));
    size_t ncomp = ch.ncomp;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);

    for (unsigned attempt = 0; attempt <= restarts; ++attempt) {
        std::vector<std::vector<CT>> X(m, std::vector<CT>(ncomp, CT(0)));
        for (auto& col : X) {
            for (size_t i = 0; i < ncomp; ++i)
                if (ch.keep[i]) col[i] = CT(uni(rng), uni(rng));
        }
        mgs(X);
        std::vector<CT> tmp;
        unsigned period = 4;  // Ritz extraction every few power steps
        for (unsigned it = 0; it < maxit; it += period) {
            for (unsigned s = 0; s + 1 < period; ++s) {
                for (auto& col : X) ch.apply_layers(col, tmp, 1);
                if (mgs(X) < X.size()) break;
            }
            // Y = T X, then H = X^H Y
            std::vector<std::vector<CT>> Y = X;
            for (auto& col : Y) ch.apply_layers(col, tmp, 1);
            size_t mm = X.size();
            if (mm == 0) break;
            std::vector<CT> H(mm * mm, CT(0));
            for (size_t i = 0; i < mm; ++i)
                for (size_t j = 0; j < mm; ++j) {
                    CT dot(0);
                    for (size_t t = 0; t < ncomp; ++t) dot += conj(X[i][t]) * Y[j][t];
                    H[i * mm + j] = dot;
                }
            auto cp = small_charpoly(H, mm);
            auto theta = small_poly_roots(cp, mm);
            std::sort(theta.begin(), theta.end(), [](const CT& a, const CT& b) { return abs(a) > abs(b); });
            // residuals of the top (up to) two Ritz pairs
            double worst = 0.0;
            unsigned want = static_cast<unsigned>(std::min<size_t>(2, mm));
            for (unsigned r = 0; r < want; ++r) {
                std::vector<CT> rhs(mm);
                std::mt19937_64 rng2(seed + 17 * r + 5);
                for (auto& v : rhs) v = CT(uni(rng2), uni(rng2));
                CT shift = theta[r] * CT(1.0 + 1e-13, 1e-13);
                auto w = small_shifted_solve(H, mm, shift, rhs);
                w = small_shifted_solve(H, mm, shift, w);
                RT wn(0);
                for (auto& v : w) wn += norm(v);
                wn = sqrt(wn);
                if (wn == RT(0)) {
                    worst = 1.0;
                    continue;
                }
                for (auto& v : w) v /= CT(wn);
                // v = X w ; r = Y w - theta X w
                RT rn(0), vn(0);
                for (size_t t = 0; t < ncomp; ++t) {
                    CT vv(0), yy(0);
                    for (size_t j = 0; j < mm; ++j) {
                        vv += X[j][t] * w[j];
                        yy += Y[j][t] * w[j];
                    }
                    rn += norm(yy - theta[r] * vv);
                    vn += norm(vv);
                }
                RT scale = abs(theta[r]);
                double rel;
                if (scale == RT(0))
                    rel = sqrt(static_cast<double>(rn / (vn > RT(0) ? vn : RT(1))));
                else
                    rel = static_cast<double>(sqrt(rn) / (sqrt(vn) * scale));
                worst = std::max(worst, rel);
            }
            out.eigs.assign(theta.begin(), theta.end());
            out.residual = worst;
            if (worst <= tol) {
                out.converged = true;
                return out;
            }
            X.swap(Y);
            mgs(X);
        }
        seed = seed * 6364136223846793005ULL + 1442695040888963407ULL;
    }
    return out;  // converged = false; best effort values retained
}

}  // namespace detail

// ---------------------------------------------------------------------------
// the engine: cached blocks + warm-started per-sector eigensolves

using QuadComplex = boost::multiprecision::cpp_complex_quad;

inline Chain<QuadComplex> evaluate_quad(const TransferBlock& blk, const QuadComplex& q) {
    using QF = QuadComplex::value_type;
    return detail::compile_chain<QuadComplex>(blk, [&](const FactorEntry& e) {
        QuadComplex w(QF(num(e.w)) / QF(den(e.w)), QF(0));
        for (unsigned i = 0; i < e.qexp; ++i) w *= q;
        return w;
    });
}

class SpectraEngine {
  public:
    explicit SpectraEngine(unsigned k, const SpectraOptions& opts = {})
        : k_(k), opts_(opts) {
        bool restricted = opts.restrict_sectors.value_or(k >= 6);
        keys_ = candidate_sectors(k, restricted);
    }

    unsigned k() const { return k_; }
    const std::vector<SectorKey>& sectors() const { return keys_; }
    const SpectraOptions& options() const { return opts_; }

    const TransferBlock& block(const SectorKey& key) {
        auto it = blocks_.find(key);
        if (it != blocks_.end()) return it->second;
        CacheConfig cache = opts_.engine.use_cache ? opts_.engine.cache : CacheConfig{};
        TransferBlock blk = build_block(k_, key.l, key.lam, cache);
        deflate_trivial(blk, cache);
        return blocks_.emplace(key, std::move(blk)).first->second;
    }

    // eigenvalues of T-hat = (-1)^k q^{-2k} T~ for one sector at q
    SectorEig sector_eigs(const SectorKey& key, std::complex<double> q, double tol_override = 0.0) {
        SectorEig se;
        se.key = key;
        se.amplitude = eval_poly_complex(sector_amplitude(k_, key), q);
        if (key.trivial_pseudo) {
            se.mu1 = std::complex<double>(k_ % 2 ? -1.0 : 1.0, 0.0);
            se.dim = 1;
            se.residual = 0.0;
            return se;
        }
        const TransferBlock& blk = block(key);
        se.dim = static_cast<unsigned>(blk.dimension());
        if (se.dim == 0) return se;
        double tol = tol_override > 0 ? tol_override : opts_.residual_tol;
        Chain<std::complex<double>> ch = evaluate_complex(blk, q);
        uint64_t seed = opts_.seed ^ (uint64_t(key.l) << 32) ^ std::hash<std::string>{}(key.str());
        auto raw = detail::subspace_eigs<std::complex<double>>(blk, ch, opts_.subspace_dim, tol,
                                                               opts_.max_iterations, opts_.restarts, seed);
        std::complex<double> nu = std::pow(q, -2.0 * double(k_));
        if (k_ % 2) nu = -nu;
        if (!raw.eigs.empty()) se.mu1 = nu * raw.eigs[0];
        if (raw.eigs.size() >= 2) se.mu2 = nu * raw.eigs[1];
        se.residual = raw.residual;
        se.converged = raw.converged;
        return se;
    }

    // quad-precision recompute of mu1/mu2 for near-ties
    SectorEig sector_eigs_precise(const SectorKey& key, std::complex<double> q) {
        SectorEig se;
        se.key = key;
        se.amplitude = eval_poly_complex(sector_amplitude(k_, key), q);
        if (key.trivial_pseudo) {
            se.mu1 = std::complex<double>(k_ % 2 ? -1.0 : 1.0, 0.0);
            se.dim = 1;
            return se;
        }
        const TransferBlock& blk = block(key);
        se.dim = static_cast<unsigned>(blk.dimension());
        if (se.dim == 0) return se;
        QuadComplex qq(q.real(), q.imag());
        Chain<QuadComplex> ch = evaluate_quad(blk, qq);
        uint64_t seed = opts_.seed ^ (uint64_t(key.l) << 32) ^ std::hash<std::string>{}(key.str());
        auto raw = detail::subspace_eigs<QuadComplex>(blk, ch, opts_.subspace_dim, 1e-24,
                                                      opts_.max_iterations, opts_.restarts, seed);
        QuadComplex nu = pow(qq, -2 * static_cast<int>(k_));
        if (k_ % 2) nu = -nu;
        auto lower = [](const QuadComplex& z) {
            return std::complex<double>(z.real().convert_to<double>(), z.imag().convert_to<double>());
        };
        if (!raw.eigs.empty()) se.mu1 = lower(nu * raw.eigs[0]);
        if (raw.eigs.size() >= 2) se.mu2 = lower(nu * raw.eigs[1]);
        se.residual = raw.residual;
        se.converged = raw.converged;
        return se;
    }

    SpectrumSample sample(std::complex<double> q) {
        SpectrumSample s;
        s.q = q;
        for (const auto& key : keys_) {
            SectorEig se = sector_eigs(key, q);
            if (!se.converged) s.flagged = true;
            if (se.dim > 0 || se.key.trivial_pseudo) s.sectors.push_back(std::move(se));
        }
        std::sort(s.sectors.begin(), s.sectors.end(),
                  [](const SectorEig& a, const SectorEig& b) { return std::abs(a.mu1) > std::abs(b.mu1); });
        return s;
    }

  private:
    unsigned k_;
    SpectraOptions opts_;
    std::vector<SectorKey> keys_;
    std::map<SectorKey, TransferBlock> blocks_;
};

// convenience wrappers matching the operation signatures
inline SpectrumSample leading_eigs(unsigned k, std::complex<double> q,
                                   const std::vector<SectorKey>& sectors,
                                   const SpectraOptions& opts = {}) {
    SpectraEngine eng(k, opts);
    SpectrumSample s;
    s.q = q;
    for (const auto& key : sectors) {
        SectorEig se = eng.sector_eigs(key, q);
        if (!se.converged) s.flagged = true;
        s.sectors.push_back(std::move(se));
    }
    std::sort(s.sectors.begin(), s.sectors.end(),
              [](const SectorEig& a, const SectorEig& b) { return std::abs(a.mu1) > std::abs(b.mu1); });
    return s;
}

inline SpectrumSample leading_eigs(unsigned k, std::complex<double> q, const SpectraOptions& opts = {}) {
    SpectraEngine eng(k, opts);
    return eng.sample(q);
}

// ---------------------------------------------------------------------------
// parity classification at a real curve-b point (pure four-case table)

inline Parity parity_classify(double mu1, double mu2, double amp1, double amp2,
                              double rel_tol = 1e-6) {
    double scale = std::max(std::abs(mu1), std::abs(mu2));
    if (scale == 0.0) throw std::invalid_argument("parity_classify: zero eigenvalues");
    if (std::abs(std::abs(mu1) - std::abs(mu2)) > rel_tol * scale)
        throw std::invalid_argument("parity_classify: eigenvalues are not equimodular");
    if (amp1 == 0.0 || amp2 == 0.0)
        throw std::invalid_argument("parity_classify: vanishing amplitude (defer to classify_point)");
    bool opposite = (mu1 > 0) != (mu2 > 0);
    bool amp_same_sign = (amp1 > 0) == (amp2 > 0);
    if (amp_same_sign && opposite) return Parity::odd_n;
    if (!amp_same_sign && opposite) return Parity::even_n;
    if (!amp_same_sign && !opposite) return Parity::all_n;
    return Parity::non_real;  // equal eigenvalues, amplitudes of equal sign
}

// ---------------------------------------------------------------------------
// point classification (Theorem-5.1 style cases)

enum class ClassifyKind { none, isolated_a, curve_b, unresolved };

struct ClassifyResult {
    ClassifyKind kind = ClassifyKind::none;
    std::optional<LimitingFeature> feature;
};

namespace detail {

// modulus-ranked (sector, which-eigenvalue) indices of a sample
struct RankedIndex {
    size_t sector_pos;
    bool second;
    double modulus;
    std::complex<double> mu;
};

inline std::vector<RankedIndex> ranked_indices(const SpectrumSample& s) {
    std::vector<RankedIndex> idx;
    for (size_t i = 0; i < s.sectors.size(); ++i) {
        const auto& se = s.sectors[i];
        if (se.dim == 0 && !se.key.trivial_pseudo) continue;
        idx.push_back({i, false, std::abs(se.mu1), se.mu1});
        if (se.dim >= 2 && !se.key.trivial_pseudo) idx.push_back({i, true, std::abs(se.mu2), se.mu2});
    }
    std::sort(idx.begin(), idx.end(),
              [](const RankedIndex& a, const RankedIndex& b) { return a.modulus > b.modulus; });
    return idx;
}

}  // namespace detail

inline ClassifyResult classify_point(unsigned k, std::complex<double> q, const SpectraOptions& opts = {}) {
    SpectraEngine eng(k, opts);
    SpectrumSample s = eng.sample(q);
    ClassifyResult out;
    if (s.flagged) {
        out.kind = ClassifyKind::unresolved;
        return out;
    }
    auto idx = detail::ranked_indices(s);
    if (idx.size() < 2 || idx[0].modulus == 0.0) return out;
    double gap = (idx[0].modulus - idx[1].modulus) / idx[0].modulus;
    double tol = opts.equimodular_tol;
    if (gap <= 100 * tol && gap > tol) {
        // ambiguous band: recompute the two contenders at higher precision
        SectorEig a = eng.sector_eigs_precise(s.sectors[idx[0].sector_pos].key, q);
        SectorEig b = eng.sector_eigs_precise(s.sectors[idx[1].sector_pos].key, q);
        double m0 = idx[0].second ? std::abs(a.mu2) : std::abs(a.mu1);
        double m1 = idx[1].second ? std::abs(b.mu2) : std::abs(b.mu1);
        if (m0 == 0.0) {
            out.kind = ClassifyKind::unresolved;
            return out;
        }
        gap = (m0 - m1) / m0;
        if (std::abs(gap) <= 100 * tol && std::abs(gap) > tol) {
            out.kind = ClassifyKind::unresolved;
            return out;
        }
    }
    const SectorEig& top = s.sectors[idx[0].sector_pos];
    if (std::abs(gap) <= tol) {
        LimitingFeature f;
        f.kind = FeatureKind::curve_b;
        f.location = q;
        f.witnesses.push_back(top.key);
        const SectorEig& snd = s.sectors[idx[1].sector_pos];
        if (snd.key != top.key || idx[1].second) f.witnesses.push_back(snd.key);
        if (std::abs(q.imag()) < 1e-12) {
            // parity for real locations when both values are real with
            // nonvanishing amplitudes
            bool real1 = std::abs(idx[0].mu.imag()) < 1e-12 * (1 + idx[0].modulus);
            bool real2 = std::abs(idx[1].mu.imag()) < 1e-12 * (1 + idx[1].modulus);
            double a1 = top.amplitude.real(), a2 = snd.amplitude.real();
            if (real1 && real2 && std::abs(a1) > 1e-9 && std::abs(a2) > 1e-9)
                f.parity = parity_classify(idx[0].mu.real(), idx[1].mu.real(), a1, a2, 1e-5);
        }
        out.kind = ClassifyKind::curve_b;
        out.feature = f;
        return out;
    }
    // unique dominant index: isolated-a requires its amplitude to vanish
    double amp_scale = std::max(1.0, std::abs(top.mu1));
    if (std::abs(top.amplitude) < 1e-9 * amp_scale) {
        LimitingFeature f;
        f.kind = FeatureKind::isolated_a;
        f.location = q;
        f.witnesses.push_back(top.key);
        out.kind = ClassifyKind::isolated_a;
        out.feature = f;
        return out;
    }
    return out;  // none
}

// ---------------------------------------------------------------------------
// Q_c bisection

struct QcResult {
    double qc = 0.0;
    SectorKey below, above;                  // dominant sectors at the bracket ends
    std::complex<double> mu_below{0.0, 0.0};  // eigenvalues at qc
    std::complex<double> mu_above{0.0, 0.0};
    Parity parity = Parity::unknown;
};

inline QcResult find_qc(unsigned k, double lo, double hi, const SpectraOptions& opts = {}) {
    if (!(lo < hi)) throw std::invalid_argument("find_qc: empty bracket");
    SpectraEngine eng(k, opts);
    auto dominant = [&](double q) -> SectorKey {
        SpectrumSample s = eng.sample({q, 0.0});
        if (s.sectors.empty()) throw std::runtime_error("find_qc: no sectors");
        if (s.flagged) throw std::runtime_error("find_qc: eigensolve failed to converge");
        return s.sectors.front().key;
    };
    SectorKey A = dominant(lo), B = dominant(hi);
    if (A == B) throw std::runtime_error("find_qc: no dominance change across the bracket");
    auto diff = [&](double q) -> double {
        SectorEig ea = eng.sector_eigs(A, {q, 0.0}, 1e-12);
        SectorEig eb = eng.sector_eigs(B, {q, 0.0}, 1e-12);
        double d = std::abs(ea.mu1) - std::abs(eb.mu1);
        double scale = std::max(std::abs(ea.mu1), std::abs(eb.mu1));
        if (scale > 0 && std::abs(d) < 1e-11 * scale) {
            // near-tie: escalate to quad precision for a trustworthy sign
            SectorEig pa = eng.sector_eigs_precise(A, {q, 0.0});
            SectorEig pb = eng.sector_eigs_precise(B, {q, 0.0});
            d = std::abs(pa.mu1) - std::abs(pb.mu1);
        }
        return d;
    };
    double flo = diff(lo), fhi = diff(hi);
    if (flo == 0.0) return {lo, A, B, {}, {}, Parity::unknown};
    if (fhi == 0.0) return {hi, A, B, {}, {}, Parity::unknown};
    if ((flo > 0) == (fhi > 0))
        throw std::runtime_error("find_qc: no sign change of the modulus difference in the bracket");
    double a = lo, b = hi;
    while (b - a > 1e-10) {
        double mid = 0.5 * (a + b);
        double fm = diff(mid);
        if (fm == 0.0) {
            a = b = mid;
            break;
        }
        if ((fm > 0) == (flo > 0))
            a = mid;
        else
            b = mid;
    }
    QcResult res;
    res.qc = 0.5 * (a + b);
    res.below = A;
    res.above = B;
    SectorEig ea = eng.sector_eigs(A, {res.qc, 0.0}, 1e-12);
    SectorEig eb = eng.sector_eigs(B, {res.qc, 0.0}, 1e-12);
    res.mu_below = ea.mu1;
    res.mu_above = eb.mu1;
    bool real1 = std::abs(ea.mu1.imag()) < 1e-10 * (1 + std::abs(ea.mu1));
    bool real2 = std::abs(eb.mu1.imag()) < 1e-10 * (1 + std::abs(eb.mu1));
    double a1 = ea.amplitude.real(), a2 = eb.amplitude.real();
    if (real1 && real2 && std::abs(a1) > 1e-9 && std::abs(a2) > 1e-9) {
        double m1 = ea.mu1.real(), m2 = eb.mu1.real();
        if (std::abs(std::abs(m1) - std::abs(m2)) <= 1e-5 * std::max(std::abs(m1), std::abs(m2)))
            res.parity = parity_classify(m1, m2, a1, a2, 1e-5);
    }
    return res;
}

// ---------------------------------------------------------------------------
// direct-search equimodularity curves

struct CurveSegment {
    unsigned id = 0;
    SectorKey a, b;  // sector pair whose moduli tie along this segment
    std::vector<std::complex<double>> points;
};

struct CurveResult {
    std::vector<CurveSegment> segments;
    std::vector<std::string> unresolved;  // diagnostics for cells left open
};

namespace detail {

struct GridSample {
    SectorKey top;
    double m1 = 0.0, m2 = 0.0;
};

}  // namespace detail

// samples the rectangle [re0,re1] x [im0,im1] on a res x res grid, finds the
// grid edges across which the dominant sector changes, refines each crossing
// by bisection, and chains crossings through cells into polylines
inline CurveResult trace_curve(unsigned k, std::complex<double> lo, std::complex<double> hi,
                               unsigned res, const SpectraOptions& opts = {}) {
    if (res < 2) throw std::invalid_argument("trace_curve: resolution too small");
    SpectraEngine eng(k, opts);
    const unsigned nx = res + 1, ny = res + 1;
    auto qat = [&](unsigned i, unsigned j) {
        double t = nx > 1 ? double(i) / res : 0.0;
        double u = ny > 1 ? double(j) / res : 0.0;
        return std::complex<double>(lo.real() + t * (hi.real() - lo.real()),
                                    lo.imag() + u * (hi.imag() - lo.imag()));
    };
    std::vector<detail::GridSample> grid(size_t(nx) * ny);
    std::vector<uint8_t> ok(size_t(nx) * ny, 1);
    CurveResult out;
    for (unsigned j = 0; j < ny; ++j)
        for (unsigned i = 0; i < nx; ++i) {
            SpectrumSample s = eng.sample(qat(i, j));
            auto& g = grid[size_t(j) * nx + i];
            if (s.sectors.empty() || s.flagged) {
                ok[size_t(j) * nx + i] = 0;
                std::ostringstream os;
                os << "unconverged sample at (" << qat(i, j).real() << "," << qat(i, j).imag() << ")";
                out.unresolved.push_back(os.str());
                continue;
            }
            g.top = s.sectors.front().key;
            g.m1 = std::abs(s.sectors.front().mu1);
            g.m2 = s.sectors.size() > 1 ? std::abs(s.sectors[1].mu1) : 0.0;
        }

    // refine one crossing along the straight segment [qa, qb]
    auto refine = [&](std::complex<double> qa, std::complex<double> qb, const SectorKey& A,
                      const SectorKey& B) -> std::optional<std::complex<double>> {
        auto f = [&](std::complex<double> q) {
            SectorEig ea = eng.sector_eigs(A, q);
            SectorEig eb = eng.sector_eigs(B, q);
            return std::abs(ea.mu1) - std::abs(eb.mu1);
        };
        double fa = f(qa), fb = f(qb);
        if (fa == 0.0) return qa;
        if (fb == 0.0) return qb;
        if ((fa > 0) == (fb > 0)) return std::nullopt;
        for (unsigned it = 0; it < 60; ++it) {
            std::complex<double> qm = 0.5 * (qa + qb);
            double fm = f(qm);
            if (fm == 0.0) return qm;
            if ((fm > 0) == (fa > 0)) {
                qa = qm;
                fa = fm;
            } else {
                qb = qm;
            }
            if (std::abs(qb - qa) < 1e-10 * (1.0 + std::abs(qm))) break;
        }
        return 0.5 * (qa + qb);
    };

    // crossing points keyed by (cell-ish) edge id: horizontal edges then vertical
    struct Crossing {
        std::complex<double> at;
        SectorKey a, b;
    };
    std::map<std::pair<unsigned, unsigned>, Crossing> hcross, vcross;  // (i,j) edge start
    for (unsigned j = 0; j < ny; ++j)
        for (unsigned i = 0; i + 1 < nx; ++i) {
            const auto &ga = grid[size_t(j) * nx + i], &gb = grid[size_t(j) * nx + i + 1];
            if (!ok[size_t(j) * nx + i] || !ok[size_t(j) * nx + i + 1]) continue;
            if (ga.top == gb.top) continue;
            auto at = refine(qat(i, j), qat(i + 1, j), ga.top, gb.top);
            if (at)
                hcross[{i, j}] = {*at, ga.top, gb.top};
            else {
                std::ostringstream os;
                os << "unresolved edge (" << i << "," << j << ")-(" << i + 1 << "," << j << ")";
                out.unresolved.push_back(os.str());
            }
        }
    for (unsigned j = 0; j + 1 < ny; ++j)
        for (unsigned i = 0; i < nx; ++i) {
            const auto &ga = grid[size_t(j) * nx + i], &gb = grid[size_t(j + 1) * nx + i];
            if (!ok[size_t(j) * nx + i] || !ok[size_t(j + 1) * nx + i]) continue;
            if (ga.top == gb.top) continue;
            auto at = refine(qat(i, j), qat(i, j + 1), ga.top, gb.top);
            if (at)
                vcross[{i, j}] = {*at, ga.top, gb.top};
            else {
                std::ostringstream os;
                os << "unresolved edge (" << i << "," << j << ")-(" << i << "," << j + 1 << ")";
                out.unresolved.push_back(os.str());
            }
        }

    // connect crossings cell by cell; each cell contributes a segment between
    // the crossings on its boundary (cells with > 2 crossings are reported)
    struct CellLink {
        std::vector<std::pair<int, std::pair<unsigned, unsigned>>> edges;  // (0=h,1=v), key
    };
    auto edge_point = [&](int kind, std::pair<unsigned, unsigned> key) -> const Crossing& {
        return kind == 0 ? hcross.at(key) : vcross.at(key);
    };
    std::map<std::pair<int, std::pair<unsigned, unsigned>>, std::vector<size_t>> edge_to_cells;
    std::vector<CellLink> cells;
    for (unsigned j = 0; j + 1 < ny; ++j)
        for (unsigned i = 0; i + 1 < nx; ++i) {
            CellLink cl;
            if (hcross.count({i, j})) cl.edges.push_back({0, {i, j}});
            if (hcross.count({i, j + 1})) cl.edges.push_back({0, {i, j + 1}});
            if (vcross.count({i, j})) cl.edges.push_back({1, {i, j}});
            if (vcross.count({i + 1, j})) cl.edges.push_back({1, {i + 1, j}});
            if (cl.edges.empty()) continue;
            if (cl.edges.size() > 2) {
                std::ostringstream os;
                os << "cell (" << i << "," << j << ") meets " << cl.edges.size() << " crossings";
                out.unresolved.push_back(os.str());
            }
            size_t ci = cells.size();
            for (auto& e : cl.edges) edge_to_cells[e].push_back(ci);
            cells.push_back(std::move(cl));
        }
    // walk chains of cells sharing crossing edges
    std::vector<uint8_t> cell_used(cells.size(), 0);
    unsigned seg_id = 0;
    for (size_t c0 = 0; c0 < cells.size(); ++c0) {
        if (cell_used[c0] || cells[c0].edges.size() != 2) continue;
        // extend in both directions from this cell
        std::vector<std::pair<int, std::pair<unsigned, unsigned>>> chain;
        chain.push_back(cells[c0].edges[0]);
        chain.push_back(cells[c0].edges[1]);
        cell_used[c0] = 1;
        bool grew = true;
        while (grew) {
            grew = false;
            for (int dir = 0; dir < 2; ++dir) {
                auto endEdge = dir == 0 ? chain.back() : chain.front();
                for (size_t cn : edge_to_cells[endEdge]) {
                    if (cell_used[cn] || cells[cn].edges.size() != 2) continue;
                    auto other = cells[cn].edges[0] == endEdge ? cells[cn].edges[1] : cells[cn].edges[0];
                    if (dir == 0)
                        chain.push_back(other);
                    else
                        chain.insert(chain.begin(), other);
                    cell_used[cn] = 1;
                    grew = true;
                    break;
                }
            }
        }
        CurveSegment seg;
        seg.id = seg_id++;
        const Crossing& first = edge_point(chain.front().first, chain.front().second);
        seg.a = first.a;
        seg.b = first.b;
        for (auto& e : chain) seg.points.push_back(edge_point(e.first, e.second).at);
        out.segments.push_back(std::move(seg));
    }
    // isolated single-crossing cells still yield one-point segments
    for (size_t c = 0; c < cells.size(); ++c) {
        if (cell_used[c] || cells[c].edges.empty()) continue;
        CurveSegment seg;
        seg.id = seg_id++;
        const Crossing& cr = edge_point(cells[c].edges[0].first, cells[c].edges[0].second);
        seg.a = cr.a;
        seg.b = cr.b;
        for (auto& e : cells[c].edges) seg.points.push_back(edge_point(e.first, e.second).at);
        cell_used[c] = 1;
        out.segments.push_back(std::move(seg));
    }
    return out;
}

// angles on the circle |q| = radius at which the top two moduli across all
// candidate indices tie (asymptotic outward branches of the limiting curves)
inline std::vector<double> equimodular_angles(unsigned k, double radius, unsigned samples = 720,
                                              const SpectraOptions& opts = {}) {
    SpectraEngine eng(k, opts);
    auto topgap = [&](double th) {
        std::complex<double> q = std::polar(radius, th);
        SpectrumSample s = eng.sample(q);
        auto idx = detail::ranked_indices(s);
        if (idx.size() < 2 || idx[0].modulus == 0.0) return 1.0;
        return (idx[0].modulus - idx[1].modulus) / idx[0].modulus;
    };
    auto topkey = [&](double th) {
        std::complex<double> q = std::polar(radius, th);
        SpectrumSample s = eng.sample(q);
        return s.sectors.front().key;
    };
    std::vector<double> out;
    double step = 2.0 * 3.141592653589793 / samples;
    for (unsigned i = 0; i < samples; ++i) {
        double a = -3.141592653589793 + i * step, b = a + step;
        SectorKey ka = topkey(a), kb = topkey(b);
        if (ka == kb) continue;
        // dominant sector changes across [a, b]: bisect on the modulus difference
        SpectraEngine* e = &eng;
        auto f = [&, ka, kb](double th) {
            std::complex<double> q = std::polar(radius, th);
            SectorEig ea = e->sector_eigs(ka, q);
            SectorEig eb = e->sector_eigs(kb, q);
            return std::abs(ea.mu1) - std::abs(eb.mu1);
        };
        double fa = f(a), fb = f(b);
        if (fa == 0.0) {
            out.push_back(a);
            continue;
        }
        if ((fa > 0) == (fb > 0)) continue;
        for (unsigned it = 0; it < 50 && b - a > 1e-12; ++it) {
            double m = 0.5 * (a + b);
            double fm = f(m);
            if ((fm > 0) == (fa > 0)) {
                a = m;
                fa = fm;
            } else {
                b = m;
            }
        }
        out.push_back(0.5 * (a + b));
        (void)topgap;
    }
    std::sort(out.begin(), out.end());
    return out;
}

// ---------------------------------------------------------------------------
// extrapolation of Q_c in 1/k

struct QcFit {
    // constant, linear, quadratic coefficients of the fit in x = 1/k
    double c0 = 0.0, c1 = 0.0, c2 = 0.0;
    std::vector<unsigned> used_k;
};

struct QcExtrapolation {
    QcFit even, odd;
    double limit_even = 0.0, limit_odd = 0.0, spread = 0.0;
};

namespace detail {

inline QcFit fit_quadratic(const std::vector<std::pair<unsigned, double>>& pts) {
    // least squares on (1, x, x^2) with x = 1/k, via 3x3 normal equations
    double S[5] = {0, 0, 0, 0, 0};
    double T[3] = {0, 0, 0};
    for (auto [k, y] : pts) {
        double x = 1.0 / double(k);
        double xp = 1.0;
        for (int d = 0; d <= 4; ++d) {
            S[d] += xp;
            if (d <= 2) T[d] += y * xp;
            xp *= x;
        }
    }
    double A[3][4] = {{S[0], S[1], S[2], T[0]}, {S[1], S[2], S[3], T[1]}, {S[2], S[3], S[4], T[2]}};
    for (int c = 0; c < 3; ++c) {
        int best = c;
        for (int r = c + 1; r < 3; ++r)
            if (std::abs(A[r][c]) > std::abs(A[best][c])) best = r;
        std::swap(A[c], A[best]);
        if (A[c][c] == 0.0) throw std::runtime_error("extrapolate_qc: singular normal equations");
        for (int r = 0; r < 3; ++r) {
            if (r == c) continue;
            double f = A[r][c] / A[c][c];
            for (int j = c; j < 4; ++j) A[r][j] -= f * A[c][j];
        }
    }
    QcFit fit;
    fit.c0 = A[0][3] / A[0][0];
    fit.c1 = A[1][3] / A[1][1];
    fit.c2 = A[2][3] / A[2][2];
    for (auto [k, y] : pts) {
        fit.used_k.push_back(k);
        (void)y;
    }
    return fit;
}

}  // namespace detail

// least-squares quadratic in 1/k separately on even and odd k, using the four
// largest k of each parity (the asymptotic window; small k are pre-asymptotic)
inline QcExtrapolation extrapolate_qc(const std::map<unsigned, double>& table) {
    std::vector<std::pair<unsigned, double>> ev, od;
    for (auto [k, v] : table) (k % 2 == 0 ? ev : od).push_back({k, v});
    if (ev.size() < 3) throw std::invalid_argument("extrapolate_qc: need >= 3 even-k entries");
    if (od.size() < 3) throw std::invalid_argument("extrapolate_qc: need >= 3 odd-k entries");
    auto window = [](std::vector<std::pair<unsigned, double>>& v) {
        std::sort(v.begin(), v.end());
        if (v.size() > 4) v.erase(v.begin(), v.end() - 4);
    };
    window(ev);
    window(od);
    QcExtrapolation out;
    out.even = detail::fit_quadratic(ev);
    out.odd = detail::fit_quadratic(od);
    out.limit_even = out.even.c0;
    out.limit_odd = out.odd.c0;
    out.spread = std::abs(out.limit_even - out.limit_odd);
    return out;
}

}  // namespace flowpoly
