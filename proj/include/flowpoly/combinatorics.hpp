#pragma once
// Counting and amplitude formulas for the marked-partition transfer-matrix
// decomposition: Bell/Stirling/no-singleton numbers, block dimensions,
// eigenvalue amplitudes alpha/beta/gamma and multiplicity counts.

#include <map>
#include <stdexcept>
#include <vector>

#include "poly.hpp"
#include "types.hpp"

namespace flowpoly {

constexpr unsigned kMemoLimit = 64;  // covers desk-scale degree bounds

namespace detail {

struct Tables {
    std::vector<Int> bell;                  // B_0..B_64
    std::vector<Int> nosing;                // S_0..S_64
    std::vector<std::vector<Int>> stir;     // {n brace l}
    Tables() {
        bell.resize(kMemoLimit + 1);
        stir.assign(kMemoLimit + 1, std::vector<Int>(kMemoLimit + 1, 0));
        stir[0][0] = 1;
        for (unsigned n = 1; n <= kMemoLimit; ++n)
            for (unsigned l = 1; l <= n; ++l)
                stir[n][l] = Int(l) * stir[n - 1][l] + stir[n - 1][l - 1];
        for (unsigned n = 0; n <= kMemoLimit; ++n) {
            Int b = 0;
            for (unsigned l = 0; l <= n; ++l) b += stir[n][l];
            bell[n] = b;
        }
        nosing.resize(kMemoLimit + 1);
        for (unsigned n = 0; n <= kMemoLimit; ++n) {
            Int s = 0;
            for (unsigned q = 0; q <= n; ++q) {
                Int t = binomial(n, q) * bell[q];
                s += ((n - q) % 2 == 0) ? t : -t;
            }
            nosing[n] = s;
        }
    }
};

inline const Tables& tables() {
    static const Tables t;
    return t;
}

}  // namespace detail

inline Int bell(unsigned n) {
    if (n > kMemoLimit) throw std::out_of_range("bell: n > memo limit");
    return detail::tables().bell[n];
}

inline Int stirling2(unsigned n, unsigned l) {
    if (n > kMemoLimit) throw std::out_of_range("stirling2: n > memo limit");
    if (l > n) return 0;
    return detail::tables().stir[n][l];
}

// S_n: partitions of n points with no singleton block
inline Int no_singleton_count(unsigned n) {
    if (n > kMemoLimit) throw std::out_of_range("no_singleton_count: n > memo limit");
    return detail::tables().nosing[n];
}

// |A_k^(l)|: partitions of k points with l marked distinguishable blocks
inline Int dim_marked(unsigned k, unsigned l) {
    Int s = 0;
    for (unsigned p = l; p <= k; ++p)
        s += binomial(k, p) * stirling2(p, l) * bell(k - p);
    return factorial(l) * s;
}

// |Atilde_k^(l)|: as above but with no unmarked singleton
inline Int dim_marked_nosingleton(unsigned k, unsigned l) {
    Int s = 0;
    for (unsigned p = l; p <= k; ++p)
        s += binomial(k, p) * stirling2(p, l) * no_singleton_count(k - p);
    return factorial(l) * s;
}

// ---------------------------------------------------------------------------
// Young diagrams

struct YoungDiagram {
    std::vector<unsigned> parts;  // weakly decreasing, no zero parts
    unsigned ell() const {
        unsigned s = 0;
        for (auto p : parts) s += p;
        return s;
    }
    bool operator==(const YoungDiagram& o) const { return parts == o.parts; }
    bool operator<(const YoungDiagram& o) const { return parts < o.parts; }
    std::string str() const {
        std::string s = "(";
        for (size_t i = 0; i < parts.size(); ++i)
            s += (i ? "," : "") + std::to_string(parts[i]);
        return s + ")";
    }
};

// reverse-lexicographic order of parts: (l), (l-1,1), ..., (1,...,1);
// this order is the canonical lambda index everywhere downstream
inline std::vector<YoungDiagram> young_diagrams(unsigned l) {
    std::vector<YoungDiagram> out;
    std::vector<unsigned> cur;
    auto rec = [&](auto&& self, unsigned rem, unsigned maxpart) -> void {
        if (rem == 0) {
            out.push_back({cur});
            return;
        }
        for (unsigned p = std::min(rem, maxpart); p >= 1; --p) {
            cur.push_back(p);
            self(self, rem - p, p);
            cur.pop_back();
        }
    };
    rec(rec, l, l == 0 ? 1 : l);
    return out;
}

inline Int young_dim(const YoungDiagram& lam) {  // hook length formula
    unsigned n = lam.ell();
    if (n == 0) return 1;
    std::vector<unsigned> conj(lam.parts.empty() ? 0 : lam.parts[0], 0);
    for (auto r : lam.parts)
        for (unsigned c = 0; c < r; ++c) ++conj[c];
    Int prod = 1;
    for (unsigned i = 0; i < lam.parts.size(); ++i)
        for (unsigned j = 0; j < lam.parts[i]; ++j)
            prod *= (lam.parts[i] - j) + (conj[j] - i) - 1;
    return factorial(n) / prod;
}

// Y_l: total number of standard Young tableaux over all shapes of l cells
inline Int young_count(unsigned l) {
    Int s = 0;
    for (unsigned p = 0; 2 * p <= l; ++p)
        s += factorial(2 * p) / (factorial(p) * (Int(1) << p)) * binomial(l, 2 * p);
    return s;
}

// ---------------------------------------------------------------------------
// Amplitudes

// alpha_{l,lam} = (dim lam / l!) prod_{i=0}^{l-1} (Q - i - lam_{l-i}), lam zero-padded
inline PolyR alpha(unsigned l, const YoungDiagram& lam) {
    if (lam.ell() != l) throw std::invalid_argument("alpha: diagram size mismatch");
    std::vector<unsigned> padded(lam.parts);
    padded.resize(l, 0);
    PolyR p = PolyR::constant(Rat(young_dim(lam), factorial(l)));
    for (unsigned i = 0; i < l; ++i)
        p *= Q_shift(-Rat(long(i) + long(padded[l - 1 - i])));
    return p;
}

// beta_l = sum_i (-1)^(l-i) C(l,i) Q^underline(i)  (falling factorials)
inline PolyR beta(unsigned l) {
    PolyR s;
    for (unsigned i = 0; i <= l; ++i) {
        PolyR falling = PolyR::constant(Rat(1));
        for (unsigned j = 0; j < i; ++j) falling *= Q_shift(-Rat(long(j)));
        falling *= Rat(binomial(l, i) * ((l - i) % 2 == 0 ? 1 : -1));
        s += falling;
    }
    return s;
}

// Ntilde_{k,1}(l): multiplicity/l! of the trivial eigenvalue in sector l
inline Int n_trivial(unsigned k, unsigned l) {
    if (l == 0) return 0;
    return dim_marked_nosingleton(k, l - 1) / factorial(l - 1);
}

// Ntilde_{k,0}(l): number of non-trivial eigenvalues in sector l;
// deflated-orbit count times Y_l, pinned to k at l=k and 0 at l=k+1
inline Int n_nontrivial(unsigned k, unsigned l) {
    if (l == k + 1) return 0;
    if (l == k) return k;
    Int orbits = dim_marked_nosingleton(k + 1, l) / factorial(l);
    return (orbits - n_trivial(k, l)) * young_count(l);
}

inline Int d_tilde(unsigned k) {  // 1 + sum_l Ntilde_{k,0}(l)
    Int s = 1;
    for (unsigned l = 0; l <= k + 1; ++l) s += n_nontrivial(k, l);
    return s;
}

// gamma_{k+1} = beta_{k+1} + sum_{l=1}^{k} Ntilde_{k,1}(l) beta_l
inline PolyR gamma(unsigned k) {
    PolyR s = beta(k + 1);
    for (unsigned l = 1; l <= k; ++l) s += beta(l) * Rat(n_trivial(k, l));
    return s;
}

}  // namespace flowpoly
