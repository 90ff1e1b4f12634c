#pragma once
// Standard Young tableaux and Young's seminormal representation of the
// symmetric group S_l, used to resolve transfer blocks by irreducible
// mark-permutation symmetry type.

#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "combinatorics.hpp"
#include "types.hpp"

namespace flowpoly {

using Tableau = std::vector<std::vector<unsigned>>;  // rows; entries 1..n, standard
using RatMatrix = std::vector<std::vector<Rat>>;
// one-line permutation of {1..l}: perm[i] = image of i+1
using PermOneLine = std::vector<uint8_t>;

inline std::vector<Tableau> standard_tableaux(const YoungDiagram& lam) {
    unsigned n = lam.ell();
    if (n == 0) return {Tableau{}};
    unsigned rows = static_cast<unsigned>(lam.parts.size());
    std::vector<Tableau> res;
    Tableau filled(rows);
    auto rec = [&](auto&& self, unsigned placed) -> void {
        if (placed == n) {
            res.push_back(filled);
            return;
        }
        unsigned v = placed + 1;
        for (unsigned r = 0; r < rows; ++r) {
            unsigned c = static_cast<unsigned>(filled[r].size());
            if (c < lam.parts[r] && (r == 0 || filled[r - 1].size() > c)) {
                filled[r].push_back(v);
                self(self, placed + 1);
                filled[r].pop_back();
            }
        }
    };
    rec(rec, 0);
    return res;
}

inline RatMatrix rat_identity(unsigned d) {
    RatMatrix m(d, std::vector<Rat>(d, Rat(0)));
    for (unsigned i = 0; i < d; ++i) m[i][i] = Rat(1);
    return m;
}

inline RatMatrix rat_matmul(const RatMatrix& a, const RatMatrix& b) {
    unsigned n = static_cast<unsigned>(a.size());
    unsigned m = static_cast<unsigned>(b.size());
    unsigned p = m ? static_cast<unsigned>(b[0].size()) : 0;
    RatMatrix c(n, std::vector<Rat>(p, Rat(0)));
    for (unsigned i = 0; i < n; ++i)
        for (unsigned t = 0; t < m; ++t) {
            if (a[i][t] == 0) continue;
            for (unsigned j = 0; j < p; ++j)
                if (b[t][j] != 0) c[i][j] += a[i][t] * b[t][j];
        }
    return c;
}

// Seminormal representation. Convention (fixed; the transfer builder depends
// on it): rho(s_j) acts on column vectors indexed by standard tableaux; for a
// tableau t with j, j+1 in the same row/column the diagonal entry is +1/-1;
// otherwise the 2x2 block on (t, t') with t' = t with j and j+1 swapped and
// index(t') > index(t) is
//   [ 1/ax     1 - 1/ax^2 ]
//   [ 1        -1/ax      ]
// with ax = content(j+1) - content(j) measured in t (content = col - row).
// rho of a general permutation is composed from adjacent transpositions via
// bubble-sort decomposition; the resulting map satisfies
// rho(a) * rho(b) = rho(compose(b, a)) where compose(b,a)(x) = b(a(x)).
class SeminormalRep {
public:
    SeminormalRep(const YoungDiagram& lam, unsigned l) : lam_(lam), l_(l) {
        if (lam.ell() != l) throw std::invalid_argument("SeminormalRep: diagram size != l");
        tabs_ = standard_tableaux(lam);
        dim_ = static_cast<unsigned>(tabs_.size());
        std::map<Tableau, unsigned> index;
        for (unsigned i = 0; i < dim_; ++i) index[tabs_[i]] = i;
        for (unsigned j = 1; j + 1 <= l_; ++j) gens_.push_back(make_gen(j, index));
    }

    unsigned dim() const { return dim_; }
    const YoungDiagram& diagram() const { return lam_; }
    const std::vector<Tableau>& tableaux() const { return tabs_; }
    const RatMatrix& generator(unsigned j) const { return gens_.at(j - 1); }  // rho(s_j)

    const RatMatrix& rho(const PermOneLine& perm) const {
        if (perm.size() != l_) throw std::invalid_argument("rho: wrong permutation degree");
        auto it = cache_.find(perm);
        if (it != cache_.end()) return it->second;
        // bubble-sort decomposition: sort a copy to identity recording swaps
        std::vector<uint8_t> a(perm);
        std::vector<unsigned> swaps;
        bool changed = true;
        while (changed) {
            changed = false;
            for (unsigned i = 0; i + 1 < a.size(); ++i)
                if (a[i] > a[i + 1]) {
                    std::swap(a[i], a[i + 1]);
                    swaps.push_back(i + 1);  // adjacent transposition s_{i+1}
                    changed = true;
                }
        }
        RatMatrix m = rat_identity(dim_);
        for (auto jt = swaps.rbegin(); jt != swaps.rend(); ++jt)
            m = rat_matmul(gens_[*jt - 1], m);
        // rebuild the permutation from the swap list to confirm the factorisation
        std::vector<uint8_t> test(l_);
        for (unsigned i = 0; i < l_; ++i) test[i] = static_cast<uint8_t>(i + 1);
        for (auto jt = swaps.rbegin(); jt != swaps.rend(); ++jt)
            std::swap(test[*jt - 1], test[*jt]);
        if (test != perm) throw std::logic_error("rho: swap decomposition mismatch");
        return cache_.emplace(perm, std::move(m)).first->second;
    }

private:
    static std::pair<unsigned, unsigned> tab_pos(const Tableau& t, unsigned v) {
        for (unsigned r = 0; r < t.size(); ++r)
            for (unsigned c = 0; c < t[r].size(); ++c)
                if (t[r][c] == v) return {r, c};
        throw std::logic_error("tab_pos: value not found");
    }

    RatMatrix make_gen(unsigned j, const std::map<Tableau, unsigned>& index) const {
        RatMatrix m(dim_, std::vector<Rat>(dim_, Rat(0)));
        for (unsigned ti = 0; ti < dim_; ++ti) {
            const Tableau& t = tabs_[ti];
            auto [r1, c1] = tab_pos(t, j);
            auto [r2, c2] = tab_pos(t, j + 1);
            long ax = (long(c2) - long(r2)) - (long(c1) - long(r1));
            if (r1 == r2) {
                m[ti][ti] = Rat(1);
            } else if (c1 == c2) {
                m[ti][ti] = Rat(-1);
            } else {
                Tableau t2 = t;
                t2[r1][c1] = j + 1;
                t2[r2][c2] = j;
                unsigned t2i = index.at(t2);
                Rat inv_ax = Rat(1) / Rat(ax);
                m[ti][ti] = inv_ax;
                if (t2i > ti) {
                    m[t2i][ti] = Rat(1);
                    m[ti][t2i] = Rat(1) - inv_ax * inv_ax;
                    m[t2i][t2i] = -inv_ax;
                }
            }
        }
        return m;
    }

    YoungDiagram lam_;
    unsigned l_;
    std::vector<Tableau> tabs_;
    unsigned dim_ = 0;
    std::vector<RatMatrix> gens_;
    mutable std::map<PermOneLine, RatMatrix> cache_;
};

}  // namespace flowpoly
