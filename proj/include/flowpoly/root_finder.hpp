#pragma once
// Root location for integer polynomials: simultaneous (Aberth-Ehrlich)
// iteration over a rising-precision ladder with certified inclusion discs,
// exact counting of distinct real roots in rational intervals (Descartes
// bisection on the squarefree part), Sturm chains, and exact sign/evaluation
// certificates at rational points.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include <boost/multiprecision/cpp_complex.hpp>

#include "poly.hpp"
#include "types.hpp"

namespace flowpoly {

// ---------------------------------------------------------------------------
// exact integer-polynomial utilities

inline Int content_z(const PolyZ& p) {
    Int g = 0;
    for (const auto& c : p.c) g = boost::multiprecision::gcd(g, boost::multiprecision::abs(c));
    return g;
}

// clear denominators and content; make the leading coefficient positive
inline PolyZ primitive_part(const PolyR& p) {
    PolyR q = p;
    q.trim();
    if (q.c.empty()) return PolyZ{};
    Int lcm = 1;
    for (const auto& c : q.c) lcm = boost::multiprecision::lcm(lcm, den(c));
    PolyZ z;
    z.c.reserve(q.c.size());
    for (const auto& c : q.c) z.c.push_back(num(c) * (lcm / den(c)));
    Int g = content_z(z);
    if (g != 0)
        for (auto& c : z.c) c /= g;
    if (sign(z.leading()) < 0)
        for (auto& c : z.c) c = -c;
    return z;
}

inline PolyZ primitive_part(const PolyZ& p) { return primitive_part(to_rational_poly(p)); }

// primitive polynomial-remainder-sequence gcd over the integers
inline PolyZ gcd_z(PolyZ a, PolyZ b) {
    a = primitive_part(a);
    b = primitive_part(b);
    if (a.degree() < b.degree()) std::swap(a, b);
    while (!b.c.empty()) {
        auto [quot, rem] = divmod(to_rational_poly(a), to_rational_poly(b));
        (void)quot;
        a = b;
        b = primitive_part(rem);
    }
    return a;
}

// product of the distinct irreducible factors, each to the first power
inline PolyZ squarefree_part(const PolyZ& p) {
    PolyZ q = primitive_part(p);
    if (q.degree() <= 0) return q;
    PolyZ g = gcd_z(q, q.derivative());
    if (g.degree() <= 0) return q;
    return primitive_part(divexact(to_rational_poly(q), to_rational_poly(g)));
}

inline Rat evaluate_exact(const PolyZ& p, const Rat& x) { return to_rational_poly(p).eval(x); }

inline unsigned root_multiplicity_at(const PolyZ& p, const Rat& x) {
    PolyR q = to_rational_poly(p);
    PolyR factor = Q_var() - PolyR::constant(x);
    unsigned m = 0;
    while (q.degree() >= 1 && q.eval(x) == 0) {
        q = divexact(q, factor);
        ++m;
    }
    return m;
}

// B with every real root of p inside (-B, B): 1 + max |a_i / a_n|
inline Rat cauchy_root_bound(const PolyZ& p) {
    PolyZ q = p;
    q.trim();
    if (q.degree() <= 0) return Rat(1);
    Rat m = 0;
    Rat lead = Rat(boost::multiprecision::abs(q.leading()));
    for (int i = 0; i < q.degree(); ++i) {
        Rat r = Rat(boost::multiprecision::abs(q.c[size_t(i)])) / lead;
        if (r > m) m = r;
    }
    return m + 1;
}

// Fujiwara-style bound, much tighter than Cauchy when only the upper
// coefficients are large: 2 * max_i ceil((|a_{n-i}| / |a_n|)^{1/i})
inline Rat lagrange_root_bound(const PolyZ& p) {
    PolyZ q = p;
    q.trim();
    if (q.degree() <= 0) return Rat(1);
    unsigned n = static_cast<unsigned>(q.degree());
    Int lead = boost::multiprecision::abs(q.leading());
    Int best = 1;
    for (unsigned i = 1; i <= n; ++i) {
        Int mag = boost::multiprecision::abs(q.c[n - i]);
        if (mag == 0) continue;
        // smallest integer t with t^i * |a_n| >= |a_{n-i}|
        Int lo = 1, hi = 2;
        while (boost::multiprecision::pow(hi, i) * lead < mag) hi *= 2;
        while (lo < hi) {
            Int mid = (lo + hi) / 2;
            if (boost::multiprecision::pow(mid, i) * lead >= mag)
                hi = mid;
            else
                lo = mid + 1;
        }
        if (lo > best) best = lo;
    }
    return Rat(2 * best + 1);
}

namespace detail {

// Taylor shift: returns p(x + a)
inline PolyR taylor_shift(const PolyR& p, const Rat& a) {
    PolyR out;
    // synthetic: repeatedly divide by (x - (-a))... use Horner-style expansion
    // out accumulates via the binomial-free O(n^2) in-place scheme
    std::vector<Rat> c = p.c;
    size_t n = c.size();
    for (size_t i = 0; i + 1 < n; ++i)
        for (size_t j = n - 1; j >= 1 && j >= i + 1; --j) c[j - 1] += a * c[j];
    out.c = std::move(c);
    out.trim();
    return out;
}

inline PolyR scale_arg(const PolyR& p, const Rat& s) {  // p(s*x)
    PolyR out = p;
    Rat pw = 1;
    for (size_t i = 0; i < out.c.size(); ++i) {
        out.c[i] *= pw;
        pw *= s;
    }
    out.trim();
    return out;
}

inline PolyR reverse_coeffs(const PolyR& p, unsigned n) {  // x^n * p(1/x)
    PolyR out;
    out.c.assign(n + 1, Rat(0));
    for (size_t i = 0; i < p.c.size() && i <= n; ++i) out.c[n - i] = p.c[i];
    out.trim();
    return out;
}

inline unsigned sign_variations(const PolyR& p) {
    unsigned v = 0;
    int last = 0;
    for (const auto& c : p.c) {
        int s = sign(c);
        if (s == 0) continue;
        if (last != 0 && s != last) ++v;
        last = s;
    }
    return v;
}

// distinct roots of squarefree q in the open interval (a, b)
inline unsigned count_roots_open_sf(const PolyR& q, const Rat& a, const Rat& b) {
    if (!(a < b)) return 0;
    unsigned n = static_cast<unsigned>(q.degree());
    // map (a,b) -> (0,inf):  r(y) = (1+y)^n q((a + b y)/(1 + y))
    PolyR shifted = taylor_shift(q, a);            // q(x + a), roots now in (0, b-a)
    PolyR scaled = scale_arg(shifted, b - a);      // roots in (0, 1)
    PolyR reversed = reverse_coeffs(scaled, n);    // roots in (1, inf)
    PolyR moebius = taylor_shift(reversed, Rat(1));  // roots in (0, inf)
    unsigned v = sign_variations(moebius);
    if (v == 0) return 0;
    if (v == 1) return 1;
    Rat mid = (a + b) / 2;
    unsigned extra = q.eval(mid) == 0 ? 1u : 0u;
    return count_roots_open_sf(q, a, mid) + extra + count_roots_open_sf(q, mid, b);
}

}  // namespace detail

// exact number of distinct real roots of p in the open interval (a, b)
inline unsigned count_real_roots_in(const PolyZ& p, const Rat& a, const Rat& b) {
    PolyZ sf = squarefree_part(p);
    if (sf.degree() <= 0) return 0;
    return detail::count_roots_open_sf(to_rational_poly(sf), a, b);
}

// ---------------------------------------------------------------------------
// Sturm chains

namespace detail {

// clear denominators and content but keep the sign of the polynomial
inline PolyZ primitive_signed(const PolyR& p) {
    PolyR q = p;
    q.trim();
    if (q.c.empty()) return PolyZ{};
    Int lcm = 1;
    for (const auto& c : q.c) lcm = boost::multiprecision::lcm(lcm, den(c));
    PolyZ z;
    z.c.reserve(q.c.size());
    for (const auto& c : q.c) z.c.push_back(num(c) * (lcm / den(c)));
    Int g = content_z(z);
    if (g != 0)
        for (auto& c : z.c) c /= g;
    return z;
}

}  // namespace detail

// Sturm chain of the squarefree part; entries primitive integer polynomials
// scaled only by positive constants, so all sign variations are preserved
inline std::vector<PolyZ> sturm_chain(const PolyZ& p) {
    std::vector<PolyZ> chain;
    PolyZ a = squarefree_part(p);
    if (a.c.empty()) return chain;
    chain.push_back(a);
    PolyZ b = detail::primitive_signed(to_rational_poly(a.derivative()));
    while (!b.c.empty()) {
        chain.push_back(b);
        auto [quot, rem] = divmod(to_rational_poly(a), to_rational_poly(b));
        (void)quot;
        PolyR neg = rem;
        for (auto& c : neg.c) c = -c;
        a = b;
        b = detail::primitive_signed(neg);
    }
    return chain;
}

inline unsigned sturm_variations(const std::vector<PolyZ>& chain, const Rat& x) {
    unsigned v = 0;
    int last = 0;
    for (const auto& q : chain) {
        int s = sign(to_rational_poly(q).eval(x));
        if (s == 0) continue;
        if (last != 0 && s != last) ++v;
        last = s;
    }
    return v;
}

// distinct real roots in (a, b]
inline unsigned sturm_count(const PolyZ& p, const Rat& a, const Rat& b) {
    auto chain = sturm_chain(p);
    if (chain.empty()) return 0;
    return sturm_variations(chain, a) - sturm_variations(chain, b);
}

// ---------------------------------------------------------------------------
// sign certificates at rational endpoints

struct RealRootCertificate {
    Rat lo, hi;
    Rat value_lo, value_hi;  // exact evaluations at the endpoints
    int sign_lo = 0, sign_hi = 0;
    bool sign_change = false;                 // odd number of roots in (lo, hi)
    std::optional<unsigned> distinct_roots;   // exact count in (lo, hi], via Sturm
};

inline RealRootCertificate certify_real_root(const PolyZ& p, const Rat& lo, const Rat& hi,
                                             unsigned sturm_degree_limit = 200) {
    RealRootCertificate cert;
    cert.lo = lo;
    cert.hi = hi;
    cert.value_lo = evaluate_exact(p, lo);
    cert.value_hi = evaluate_exact(p, hi);
    cert.sign_lo = sign(cert.value_lo);
    cert.sign_hi = sign(cert.value_hi);
    cert.sign_change = cert.sign_lo * cert.sign_hi < 0;
    if (p.degree() >= 1 && static_cast<unsigned>(p.degree()) <= sturm_degree_limit)
        cert.distinct_roots = sturm_count(p, lo, hi);
    return cert;
}

// ---------------------------------------------------------------------------
// the cubic whose root in (2, 3) bounds the root-free interval above Q = 2

inline PolyZ jackson_cubic() {
    PolyZ p;
    p.c = {Int(-32), Int(29), Int(-9), Int(1)};
    return p;
}

// rational bracket (lo, hi) around the (2,3) root of the cubic, hi - lo <= eps
inline std::pair<Rat, Rat> jackson_delta_bracket(const Rat& eps) {
    PolyR d = to_rational_poly(jackson_cubic());
    Rat lo = 2, hi = 3;
    while (hi - lo > eps) {
        Rat mid = (lo + hi) / 2;
        int s = sign(d.eval(mid));
        if (s == 0) return {mid, mid};
        if (s < 0)
            lo = mid;
        else
            hi = mid;
    }
    return {lo, hi};
}

// ---------------------------------------------------------------------------
// Aberth-Ehrlich simultaneous iteration over a precision ladder

struct RootResult {
    std::complex<double> value;
    double radius = 0;         // certified inclusion-disc radius for the cluster
    unsigned multiplicity = 1;  // number of inclusion discs merged into the cluster
};

struct RootOptions {
    double target_radius = 1e-11;  // stop once every cluster disc is this tight
    unsigned max_iterations = 400;
};

namespace detail {

template <unsigned Digits>
using BigComplex = boost::multiprecision::cpp_complex<Digits>;

template <unsigned Digits>
using BigFloat = typename BigComplex<Digits>::value_type;

// p(z) and p'(z) by Horner, plus a rigorous bound on the evaluation error of p
template <unsigned Digits>
void horner_with_error(const std::vector<BigFloat<Digits>>& a, const BigComplex<Digits>& z,
                       BigComplex<Digits>& pv, BigComplex<Digits>& dv, BigFloat<Digits>& err) {
    using F = BigFloat<Digits>;
    size_t n = a.size();  // degree + 1 coefficients, ascending
    BigComplex<Digits> b(a[n - 1]), d(0);
    F az = abs(z);
    F ones(abs(a[n - 1]));
    for (size_t i = n - 1; i-- > 0;) {
        d = d * z + b;
        b = b * z + a[i];
        ones = ones * az + abs(a[i]);
    }
    pv = b;
    dv = d;
    // floating error of Horner is bounded by ~2n * eps * sum |a_i||z|^i
    err = ones * F(4 * n) * std::numeric_limits<F>::epsilon();
}

template <unsigned Digits>
bool aberth_stage(const std::vector<Int>& coeff, std::vector<std::complex<double>>& zs,
                  std::vector<double>& radii, const RootOptions& opts) {
    using C = BigComplex<Digits>;
    using F = BigFloat<Digits>;
    size_t n = coeff.size() - 1;  // degree
    std::vector<F> a;
    a.reserve(coeff.size());
    for (const auto& c : coeff) a.emplace_back(c);
    std::vector<C> z;
    z.reserve(n);
    for (auto& zd : zs) z.emplace_back(F(zd.real()), F(zd.imag()));

    F eps_stop = boost::multiprecision::pow(F(10), -(static_cast<int>(Digits) - 6));
    for (unsigned it = 0; it < opts.max_iterations; ++it) {
        F worst(0);
        for (size_t i = 0; i < n; ++i) {
            C pv, dv;
            F err;
            horner_with_error<Digits>(a, z[i], pv, dv, err);
            C sum(0);
            for (size_t j = 0; j < n; ++j) {
                if (j == i) continue;
                C diff = z[i] - z[j];
                if (abs(diff) == 0) diff = C(F(1) / boost::multiprecision::pow(F(10), int(Digits)), 0);
                sum += C(1) / diff;
            }
            if (abs(dv) == 0) {  // nudge off a critical point
                z[i] += C(F(1) / boost::multiprecision::pow(F(10), int(Digits) / 2), 0);
                worst = F(1);
                continue;
            }
            C g = pv / dv;
            C denom = C(1) - g * sum;
            C w = abs(denom) == 0 ? g : g / denom;
            z[i] -= w;
            F rel = abs(w) / (F(1) + abs(z[i]));
            if (rel > worst) worst = rel;
        }
        if (worst < eps_stop) break;
    }

    // certified inclusion radii: every root lies in the union of the discs
    // |x - z_i| <= n * |p(z_i)| / (|a_n| * prod_{j != i} |z_i - z_j|), and any
    // connected component of m discs contains exactly m roots
    radii.assign(n, 0.0);
    bool all_tight = true;
    F lead = abs(a[n]);
    for (size_t i = 0; i < n; ++i) {
        C pv, dv;
        F err;
        horner_with_error<Digits>(a, z[i], pv, dv, err);
        F numer = (abs(pv) + err) * F(n);
        F denomp = lead;
        for (size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            denomp *= abs(z[i] - z[j]);
        }
        F r = denomp == 0 ? F(1e300) : numer / denomp;
        r *= F(1) + F(8 * n) * std::numeric_limits<F>::epsilon();
        double rd = r.template convert_to<double>();
        if (!(rd > 0)) rd = 5e-324;
        radii[i] = rd;
        double scale = 1.0 + std::abs(std::complex<double>(z[i].real().template convert_to<double>(),
                                                           z[i].imag().template convert_to<double>()));
        if (rd > opts.target_radius * scale) all_tight = false;
    }
    for (size_t i = 0; i < n; ++i)
        zs[i] = std::complex<double>(z[i].real().template convert_to<double>(),
                                     z[i].imag().template convert_to<double>());
    return all_tight;
}

inline double log2_abs(const Int& v) {
    if (v == 0) return -1e9;
    Int a = boost::multiprecision::abs(v);
    size_t bits = boost::multiprecision::msb(a);
    // refine with the top 53 bits
    double top;
    if (bits >= 52) {
        Int shifted = a >> (bits - 52);
        top = shifted.convert_to<double>();
        return std::log2(top) + double(bits - 52);
    }
    top = a.convert_to<double>();
    return std::log2(top);
}

}  // namespace detail

// all complex roots (with multiplicity via inclusion-disc clusters), sorted by
// (real, imaginary) part
inline std::vector<RootResult> all_roots(const PolyZ& poly, const RootOptions& opts = {}) {
    PolyZ p = poly;
    p.trim();
    if (p.degree() <= 0) return {};
    std::vector<RootResult> out;
    // factor out roots at the origin exactly
    size_t tz = 0;
    while (tz < p.c.size() && p.c[tz] == 0) ++tz;
    if (tz > 0) {
        RootResult zero;
        zero.value = {0.0, 0.0};
        zero.radius = 0.0;
        zero.multiplicity = static_cast<unsigned>(tz);
        out.push_back(zero);
        p.c.erase(p.c.begin(), p.c.begin() + static_cast<long>(tz));
    }
    size_t n = static_cast<size_t>(p.degree());
    if (n >= 1) {
        // Fujiwara-style radius from coefficient magnitudes, in the log domain
        double la_n = detail::log2_abs(p.leading());
        double lr = -1e9;
        for (size_t i = 0; i < n; ++i) {
            double li = detail::log2_abs(p.c[i]);
            if (li < -1e8) continue;
            double term = (li - la_n - (i == 0 ? 1.0 : 0.0)) / double(n - i);
            lr = std::max(lr, term);
        }
        double radius = lr < -1e8 ? 1.0 : std::exp2(lr + 1.0);
        radius = std::min(std::max(radius, 1e-6), 1e30);
        std::vector<std::complex<double>> zs(n);
        for (size_t j = 0; j < n; ++j) {
            double ang = 2.0 * 3.141592653589793 * (double(j) + 0.354) / double(n) + 0.5;
            zs[j] = std::polar(radius * (0.6 + 0.4 * double(j % 7) / 6.0), ang);
        }
        std::vector<double> radii(n, 1e300);
        bool done = detail::aberth_stage<50>(p.c, zs, radii, opts);
        if (!done) done = detail::aberth_stage<100>(p.c, zs, radii, opts);
        if (!done) done = detail::aberth_stage<200>(p.c, zs, radii, opts);
        if (!done) detail::aberth_stage<400>(p.c, zs, radii, opts);

        // merge overlapping inclusion discs into clusters
        std::vector<size_t> order(n);
        for (size_t i = 0; i < n; ++i) order[i] = i;
        std::vector<int> cluster(n, -1);
        int nc = 0;
        for (size_t i = 0; i < n; ++i) {
            if (cluster[i] >= 0) continue;
            cluster[i] = nc;
            std::vector<size_t> stack{i};
            while (!stack.empty()) {
                size_t u = stack.back();
                stack.pop_back();
                for (size_t v = 0; v < n; ++v) {
                    if (cluster[v] >= 0) continue;
                    if (std::abs(zs[u] - zs[v]) <= radii[u] + radii[v]) {
                        cluster[v] = nc;
                        stack.push_back(v);
                    }
                }
            }
            ++nc;
        }
        for (int ci = 0; ci < nc; ++ci) {
            std::complex<double> center{0, 0};
            unsigned m = 0;
            for (size_t i = 0; i < n; ++i)
                if (cluster[i] == ci) {
                    center += zs[i];
                    ++m;
                }
            center /= double(m);
            double r = 0;
            for (size_t i = 0; i < n; ++i)
                if (cluster[i] == ci) r = std::max(r, std::abs(zs[i] - center) + radii[i]);
            RootResult rr;
            rr.value = center;
            rr.radius = r;
            rr.multiplicity = m;
            out.push_back(rr);
        }
    }
    std::sort(out.begin(), out.end(), [](const RootResult& a, const RootResult& b) {
        if (a.value.real() != b.value.real()) return a.value.real() < b.value.real();
        return a.value.imag() < b.value.imag();
    });
    return out;
}

}  // namespace flowpoly
