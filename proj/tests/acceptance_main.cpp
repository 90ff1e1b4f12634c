// Acceptance gate: runs every release criterion end to end and prints one
// [PASS]/[FAIL] line per criterion.  Exits nonzero if any criterion fails.
//
// The checks here are deliberately independent of the unit suite: reference
// values are frozen inline, spectra are certified with exact rational and
// modular arithmetic, and every assembled polynomial is run through the
// structural validation battery at the end.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdint>
#include <exception>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "flowpoly/combinatorics.hpp"
#include "flowpoly/flow_assembler.hpp"
#include "flowpoly/gp_graph.hpp"
#include "flowpoly/io.hpp"
#include "flowpoly/modular.hpp"
#include "flowpoly/poly.hpp"
#include "flowpoly/root_finder.hpp"
#include "flowpoly/spectra.hpp"
#include "flowpoly/transfer.hpp"
#include "flowpoly/young.hpp"

#ifndef FLOWPOLY_SOURCE_DIR
#define FLOWPOLY_SOURCE_DIR "."
#endif

using namespace flowpoly;
using flowpoly::io::Fixture;
using flowpoly::io::load_cofactor_fixture;

namespace {

// ---------------------------------------------------------------------------
// reporting

void check(bool cond, const std::string& msg) {
    if (!cond) throw std::runtime_error(msg);
}

std::string fmt(double x, int prec = 10) {
    std::ostringstream o;
    o << std::setprecision(prec) << x;
    return o.str();
}

struct Gate {
    bool all_ok = true;

    template <typename F>
    void run(int number, F&& body) {
        auto t0 = std::chrono::steady_clock::now();
        bool ok = true;
        std::string detail;
        try {
            detail = body();
        } catch (const std::exception& e) {
            ok = false;
            detail = std::string("FAILED: ") + e.what();
        } catch (...) {
            ok = false;
            detail = "FAILED: unknown exception";
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::cout << (ok ? "[PASS]" : "[FAIL]") << " criterion " << number << ": " << detail
                  << " [" << std::fixed << std::setprecision(1) << secs << " s]"
                  << std::defaultfloat << std::endl;
        if (!ok) all_ok = false;
    }
};

// state shared between criteria
struct Shared {
    std::vector<AssembledFlow> assembled;          // everything built, for the validation battery
    std::map<unsigned, QcResult> qc;               // crossings found by the bisection runs
    std::map<unsigned, std::string> qc_error;      // stretch runs that did not complete
};

bool near_real_root(const std::vector<RootResult>& roots, double target, double tol) {
    for (const auto& r : roots)
        if (std::abs(r.value.real() - target) <= tol && std::abs(r.value.imag()) <= tol) return true;
    return false;
}

PolyZ int_poly(std::vector<long long> asc) {
    PolyZ p;
    for (long long v : asc) p.c.push_back(Int(v));
    p.trim();
    return p;
}

PolyR rat_poly(std::vector<long long> asc) {
    PolyR p;
    for (long long v : asc) p.c.push_back(Rat(v));
    p.trim();
    return p;
}

// ---------------------------------------------------------------------------
// dense exact / modular linear algebra used by the spectrum certificates

using MatRat = std::vector<std::vector<Rat>>;
using PolyP = std::vector<uint64_t>;  // ascending coefficients mod p

void pp_trim(PolyP& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

PolyP pp_derivative(const PolyP& f, uint64_t p) {
    PolyP d;
    for (size_t i = 1; i < f.size(); ++i) d.push_back(mulmod_u64(f[i], i % p, p));
    pp_trim(d);
    return d;
}

uint64_t pp_eval(const PolyP& f, uint64_t x, uint64_t p) {
    uint64_t r = 0;
    for (size_t i = f.size(); i-- > 0;) r = addmod_u64(mulmod_u64(r, x, p), f[i], p);
    return r;
}

// monic gcd mod p
PolyP pp_gcd(PolyP a, PolyP b, uint64_t p) {
    pp_trim(a);
    pp_trim(b);
    while (!b.empty()) {
        uint64_t inv = invmod_u64(b.back(), p);
        while (a.size() >= b.size()) {
            uint64_t c = mulmod_u64(a.back(), inv, p);
            size_t shift = a.size() - b.size();
            for (size_t i = 0; i < b.size(); ++i)
                a[shift + i] = submod_u64(a[shift + i], mulmod_u64(c, b[i], p), p);
            pp_trim(a);
            if (a.empty()) break;
        }
        std::swap(a, b);
    }
    if (!a.empty()) {
        uint64_t inv = invmod_u64(a.back(), p);
        for (auto& c : a) c = mulmod_u64(c, inv, p);
    }
    return a;
}

bool pp_coprime(const PolyP& f, const PolyP& g, uint64_t p) { return pp_gcd(f, g, p).size() == 1; }

bool pp_squarefree(const PolyP& f, uint64_t p) {
    return pp_gcd(f, pp_derivative(f, p), p).size() == 1;
}

// characteristic polynomial mod p: similarity reduction to upper Hessenberg
// form, then the leading-principal-minor recurrence
PolyP charpoly_mod(std::vector<std::vector<uint64_t>> a, uint64_t p) {
    size_t n = a.size();
    for (size_t j = 0; j + 2 < n; ++j) {
        size_t piv = j + 1;
        while (piv < n && a[piv][j] == 0) ++piv;
        if (piv == n) continue;
        if (piv != j + 1) {
            a[piv].swap(a[j + 1]);
            for (auto& row : a) std::swap(row[piv], row[j + 1]);
        }
        uint64_t inv = invmod_u64(a[j + 1][j], p);
        for (size_t i = j + 2; i < n; ++i) {
            if (a[i][j] == 0) continue;
            uint64_t m = mulmod_u64(a[i][j], inv, p);
            for (size_t c = j; c < n; ++c)
                a[i][c] = submod_u64(a[i][c], mulmod_u64(m, a[j + 1][c], p), p);
            for (size_t r = 0; r < n; ++r)
                a[r][j + 1] = addmod_u64(a[r][j + 1], mulmod_u64(m, a[r][i], p), p);
        }
    }
    std::vector<PolyP> c(n + 1);
    c[0] = {1};
    for (size_t m = 1; m <= n; ++m) {
        PolyP f(c[m - 1].size() + 1, 0);
        for (size_t i = 0; i < c[m - 1].size(); ++i) {
            f[i + 1] = addmod_u64(f[i + 1], c[m - 1][i], p);
            f[i] = submod_u64(f[i], mulmod_u64(a[m - 1][m - 1] % p, c[m - 1][i], p), p);
        }
        uint64_t prod = 1;
        for (size_t i = m - 1; i >= 1; --i) {
            prod = mulmod_u64(prod, a[i][i - 1], p);
            if (prod == 0) break;
            uint64_t w = mulmod_u64(a[i - 1][m - 1], prod, p);
            if (w == 0) continue;
            for (size_t t = 0; t < c[i - 1].size(); ++t)
                f[t] = submod_u64(f[t], mulmod_u64(w, c[i - 1][t], p), p);
        }
        c[m] = std::move(f);
    }
    return c[n];
}

std::vector<std::vector<uint64_t>> mat_mod(const MatRat& m, uint64_t p) {
    std::vector<std::vector<uint64_t>> out(m.size(), std::vector<uint64_t>(m.size(), 0));
    for (size_t i = 0; i < m.size(); ++i)
        for (size_t j = 0; j < m.size(); ++j) out[i][j] = mod_of_rat(m[i][j], p);
    return out;
}

// exact characteristic polynomial over Q (Faddeev-LeVerrier); for the small
// shared-spectrum blocks only
PolyR charpoly_rat(const MatRat& a) {
    size_t n = a.size();
    auto matmul = [n](const MatRat& x, const MatRat& y) {
        MatRat z(n, std::vector<Rat>(n, Rat(0)));
        for (size_t i = 0; i < n; ++i)
            for (size_t t = 0; t < n; ++t) {
                if (x[i][t] == 0) continue;
                for (size_t j = 0; j < n; ++j) z[i][j] += x[i][t] * y[t][j];
            }
        return z;
    };
    std::vector<Rat> coef(n + 1, Rat(0));
    coef[n] = Rat(1);
    MatRat m = a;
    for (size_t i = 1; i <= n; ++i) {
        Rat tr = 0;
        for (size_t d = 0; d < n; ++d) tr += m[d][d];
        Rat ci = -tr / Rat(static_cast<long long>(i));
        coef[n - i] = ci;
        if (i == n) break;
        for (size_t d = 0; d < n; ++d) m[d][d] += ci;
        m = matmul(a, m);
    }
    PolyR f;
    f.c = std::move(coef);
    f.trim();
    return f;
}

// ---------------------------------------------------------------------------
// criterion 5: exact spectrum certificates for the deflated sectors, k <= 4

struct SectorMat {
    unsigned l = 0;
    YoungDiagram lam;
    MatRat m;  // unnormalised layer operator at Q0 (trivial eigenvalue Q0^{2k})
    bool shares_row_spectrum = false;  // l == k, lam != (k): spectrum repeats the row sector's
};

// modular pass: squarefree within each block, trivial value excluded from
// every deflated block, and pairwise-coprime characteristic polynomials
// across blocks with independent spectra.  Any of these certified mod p
// implies the corresponding exact statement over Q (one-sided).
void certify_mod_p(const std::vector<SectorMat>& mats, unsigned k, long long q0, uint64_t p) {
    std::vector<PolyP> indep;
    std::vector<std::string> names;
    uint64_t triv = powmod_u64(static_cast<uint64_t>(q0) % p, 2ull * k, p);
    for (const auto& s : mats) {
        PolyP f = charpoly_mod(mat_mod(s.m, p), p);
        check(pp_eval(f, triv, p) != 0,
              "trivial value not excluded from deflated sector (" + std::to_string(s.l) + "," +
                  s.lam.str() + ")");
        if (s.shares_row_spectrum) continue;  // covered by the row sector's polynomial
        check(pp_squarefree(f, p), "repeated eigenvalue inside sector (" + std::to_string(s.l) +
                                       "," + s.lam.str() + ")");
        indep.push_back(std::move(f));
        names.push_back("(" + std::to_string(s.l) + "," + s.lam.str() + ")");
    }
    for (size_t i = 0; i < indep.size(); ++i)
        for (size_t j = i + 1; j < indep.size(); ++j)
            check(pp_coprime(indep[i], indep[j], p),
                  "sectors " + names[i] + " and " + names[j] + " share an eigenvalue");
}

// full certificate at one rational evaluation point
void certify_spectra_at(unsigned k, long long q0, const CacheConfig& cache) {
    std::vector<SectorMat> mats;
    PolyR row_char;  // characteristic polynomial of the l == k row-type block
    for (unsigned l = 0; l <= k; ++l) {
        for (const auto& lam : young_diagrams(l)) {
            TransferBlock blk = deflate_trivial(build_block(k, l, lam, cache), cache);
            if (blk.dimension() == 0) continue;
            Chain<Rat> ch = evaluate_rational(blk, Rat(q0));
            SectorMat s;
            s.l = l;
            s.lam = lam;
            s.m = dense_matrix(blk, ch);
            s.shares_row_spectrum = (l == k && lam.parts != std::vector<unsigned>{k});
            mats.push_back(std::move(s));
        }
    }

    // exact shared-spectrum identity at l == k: every lambda-block's
    // characteristic polynomial is the row block's raised to dim(lambda)
    for (const auto& s : mats) {
        if (s.l != k) continue;
        if (!s.shares_row_spectrum) row_char = charpoly_rat(s.m);
    }
    Rat triv(1);
    for (unsigned i = 0; i < 2 * k; ++i) triv *= Rat(q0);
    check(row_char.degree() == static_cast<int>(k), "row sector does not have k eigenvalues");
    check(row_char.eval(triv) != 0, "trivial value not excluded from the row sector (exact)");
    for (const auto& s : mats) {
        if (!s.shares_row_spectrum) continue;
        unsigned d = static_cast<unsigned>(young_dim(s.lam).convert_to<unsigned long>());
        check(charpoly_rat(s.m) == row_char.pow(d),
              "sector (" + std::to_string(s.l) + "," + s.lam.str() +
                  ") does not share the row sector's spectrum");
    }

    // modular distinctness pass, retried over primes to dodge unlucky
    // reductions (a bad prime can only hide a success, never fake one)
    uint64_t p = prev_prime_u64(uint64_t(1) << 61);
    std::string last;
    for (int attempt = 0; attempt < 5; ++attempt) {
        try {
            certify_mod_p(mats, k, q0, p);
            return;
        } catch (const std::exception& e) {
            last = e.what();
            p = prev_prime_u64(p);
        }
    }
    throw std::runtime_error(last + " (5 primes, Q0=" + std::to_string(q0) + ")");
}

std::string criterion5() {
    CacheConfig cache = CacheConfig::from_env();
    for (unsigned k = 1; k <= 4; ++k) {
        // structural certificates: the basis split removes the trivial
        // eigenvalue with the counted multiplicity in every sector
        for (unsigned l = 0; l <= k + 1; ++l) {
            Int removed_total = 0;
            for (const auto& lam : young_diagrams(l)) {
                TransferBlock blk = deflate_trivial(build_block(k, l, lam, cache), cache);
                Int dim_lam = young_dim(lam);
                check(Int(blk.c1.size()) == n_trivial(k, l),
                      "trivial-class count off in (" + std::to_string(l) + "," + lam.str() + ")");
                check(blk.c1.size() + blk.c2.size() == blk.tilde.size(),
                      "basis split lost states in (" + std::to_string(l) + "," + lam.str() + ")");
                check(Int(blk.removed_multiplicity()) == Int(blk.c1.size()) * dim_lam,
                      "removed multiplicity off in (" + std::to_string(l) + "," + lam.str() + ")");
                if (l >= 1) {
                    check(blk.tripwire_diagonal,
                          "diagonal tripwire off in (" + std::to_string(l) + "," + lam.str() + ")");
                    check(blk.tripwire_triangular, "triangular tripwire off in (" +
                                                       std::to_string(l) + "," + lam.str() + ")");
                }
                if (l == k + 1)
                    check(blk.c2.empty(), "sector l=k+1 kept a nontrivial eigenvalue");
                else if (l == k)
                    check(blk.c2.size() == k, "sector l=k does not have k shared eigenvalues");
                else
                    check(Int(blk.c2.size()) * young_count(l) == n_nontrivial(k, l),
                          "nontrivial orbit count off in (" + std::to_string(l) + "," + lam.str() +
                              ")");
                removed_total += dim_lam * Int(blk.removed_multiplicity());
            }
            check(removed_total == n_trivial(k, l) * factorial(l),
                  "aggregate trivial multiplicity in sector l=" + std::to_string(l) +
                      " is not n_trivial*l!");
        }
        // spectrum certificates at an exact rational point, retried over
        // evaluation points in case of a genuine collision at one of them
        std::string last;
        bool done = false;
        for (long long q0 : {7LL, 13LL, 29LL}) {
            try {
                certify_spectra_at(k, q0, cache);
                done = true;
                break;
            } catch (const std::exception& e) {
                last = e.what();
            }
        }
        check(done, "k=" + std::to_string(k) + ": " + last);
    }
    return "exact spectra for k<=4: trivial eigenvalue removed with multiplicity "
           "n_trivial(k,l)*l! in every sector (diagonal+triangular certificates), the l=k "
           "sector shares exactly k eigenvalues across all irreducible types (exact "
           "characteristic-polynomial identity), and all remaining eigenvalues are pairwise "
           "distinct (squarefree/coprime certificates mod 61-bit primes)";
}

// ---------------------------------------------------------------------------
// criteria 7/8 reference data

const std::map<unsigned, double> kCrossingTable = {
    {1, 3.0},           {2, 3.6180339887}, {3, 3.7818423129}, {4, 4.5697435537},
    {5, 4.9029018077},  {6, 5.1079785012}, {7, 5.2352605291}, {8, 5.3246966903},
    {9, 5.3886186958},  {10, 5.4364766073}, {11, 5.4729804532},
};

}  // namespace

int main() {
    std::cout << "flow-polynomial engine acceptance gate\n" << std::endl;
    Gate gate;
    Shared sh;

    // 1. transfer-matrix assembly vs the edge-subset oracle on every member
    //    with at most 26 edges
    gate.run(1, [&] {
        const std::vector<std::pair<unsigned, unsigned>> cases = {
            {1, 3}, {1, 4}, {1, 5}, {1, 6}, {1, 7}, {1, 8}, {2, 2}, {2, 3}, {2, 4}, {3, 2}};
        for (auto [k, layers] : cases) {
            unsigned n = k * layers;
            AssembledFlow af = assemble_complete(k, layers);
            FlowPolynomial oracle = flow_poly_bruteforce(build(n, k));
            check(af.poly == oracle.poly,
                  "G(" + std::to_string(n) + "," + std::to_string(k) + ") mismatch");
            sh.assembled.push_back(std::move(af));
        }
        return "assembled flows equal the edge-subset oracle coefficient-for-coefficient on "
               "all 10 members with <=26 edges: G(3..8,1), G(4,2), G(6,2), G(8,2), G(6,3)";
    });

    // 2. closed forms: the three-eigenvalue formula for k = 1 and the exact
    //    factorisation of the 10-vertex member
    gate.run(2, [&] {
        for (unsigned n = 3; n <= 12; ++n) {
            AssembledFlow af = assemble_complete(1, n);
            check(af.poly == flow_poly_closed_gn1(n).poly,
                  "G(" + std::to_string(n) + ",1) disagrees with the closed form");
            if (n > 8) sh.assembled.push_back(std::move(af));  // n <= 8 already collected
        }
        AssembledFlow pet = from_bruteforce(5, 2);
        PolyZ expected = int_poly({-1, 1}) * int_poly({-2, 1}) * int_poly({-3, 1}) *
                         int_poly({-4, 1}) * int_poly({10, -5, 1});
        check(pet.poly == expected, "G(5,2) does not factor as stated");
        sh.assembled.push_back(std::move(pet));
        return "closed three-eigenvalue form reproduced exactly for G(n,1), n=3..12; G(5,2) "
               "equals (Q-1)(Q-2)(Q-3)(Q-4)(Q^2-5Q+10) exactly";
    });

    // 3. counting: distinct-eigenvalue totals and the amplitude sum rules
    gate.run(3, [&] {
        auto t0 = std::chrono::steady_clock::now();
        const Int want[] = {Int(3),    Int(7),     Int(36),    Int(229),
                            Int(1658), Int(12803), Int(105934)};
        for (unsigned k = 1; k <= 7; ++k)
            check(d_tilde(k) == want[k - 1], "distinct-eigenvalue total off at k=" + std::to_string(k));
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        check(secs < 1.0, "counting took " + fmt(secs, 3) + " s (budget 1 s)");
        for (unsigned k = 0; k <= 8; ++k) {
            PolyR plain, nosing;
            for (unsigned l = 0; l <= k; ++l) {
                plain += beta(l) * Rat(dim_marked(k, l), factorial(l));
                nosing += beta(l) * Rat(dim_marked_nosingleton(k, l), factorial(l));
            }
            check(plain == PolyR::monomial(Rat(1), k), "Q^k sum rule fails at k=" + std::to_string(k));
            check(nosing == Q_shift(Rat(-1)).pow(k),
                  "(Q-1)^k sum rule fails at k=" + std::to_string(k));
        }
        return "distinct-eigenvalue totals 3, 7, 36, 229, 1658, 12803, 105934 for k=1..7 in " +
               fmt(secs, 3) + " s; both amplitude sum rules hold as polynomial identities for k<=8";
    });

    // 4. frozen amplitude tables
    gate.run(4, [&] {
        const std::vector<std::vector<long long>> beta_table = {
            {1},
            {-1, 1},
            {1, -3, 1},
            {-1, 8, -6, 1},
            {1, -24, 29, -10, 1},
            {-1, 89, -145, 75, -15, 1},
            {1, -415, 814, -545, 160, -21, 1},
            {-1, 2372, -5243, 4179, -1575, 301, -28, 1}};
        for (unsigned l = 0; l < beta_table.size(); ++l)
            check(beta(l) == rat_poly(beta_table[l]), "beta_" + std::to_string(l) + " off");
        const std::vector<std::vector<long long>> gamma_table = {
            {1, -3, 1},
            {-1, 6, -5, 1},
            {1, -11, 15, -7, 1},
            {-1, 20, -38, 28, -9, 1},
            {1, -37, 90, -90, 45, -11, 1},
            {-1, 70, -207, 260, -175, 66, -13, 1},
            {1, -135, 469, -707, 595, -301, 91, -15, 1}};
        for (unsigned k = 1; k <= 7; ++k)
            check(gamma(k) == rat_poly(gamma_table[k - 1]),
                  "gamma_" + std::to_string(k + 1) + " off");
        // independent cross-check of the quadratic clearing amplitude: no
        // sector contributes a trivial correction at k = 1, so gamma_2 must
        // coincide with beta_2
        check(n_trivial(1, 1) == 0 && gamma(1u) == beta(2), "gamma_2 != beta_2");
        // every gamma evaluates to (-1)^k at Q = 1, a parity the two
        // misprinted source values both break
        for (unsigned k = 1; k <= 7; ++k)
            check(gamma(k).eval(Rat(1)) == Rat(k % 2 == 0 ? 1 : -1),
                  "gamma parity at Q=1 off for k=" + std::to_string(k));
        return "beta_0..beta_7 and gamma_2..gamma_8 match the frozen integer tables exactly; "
               "two misprinted source values resolved and documented (README): gamma_2 = "
               "Q^2 - 3Q + 1 (equals beta_2 since no trivial correction exists at k=1) and "
               "gamma_6 linear coefficient -37 (the defining sum reproduces all other printed "
               "coefficients and the (-1)^k value at Q=1)";
    });

    // 5. exact spectrum structure for k <= 4
    gate.run(5, [&] { return criterion5(); });

    // 6. real roots of the 28- and 30-vertex members
    gate.run(6, [&] {
        struct Case {
            unsigned k, layers;
            double r1, r2;
        };
        const std::vector<Case> cases = {{4, 7, 4.0002086861, 4.3876416603},
                                         {5, 6, 4.0000786673, 4.4867394006}};
        std::string out;
        for (const auto& c : cases) {
            AssembledFlow af = assemble_complete(c.k, c.layers);
            auto roots = all_roots(af.poly);
            std::string name =
                "G(" + std::to_string(c.k * c.layers) + "," + std::to_string(c.k) + ")";
            check(near_real_root(roots, c.r1, 1e-8), name + ": no root near " + fmt(c.r1));
            check(near_real_root(roots, c.r2, 1e-8), name + ": no root near " + fmt(c.r2));
            out += (out.empty() ? "" : "; ") + name + " has real roots " + fmt(c.r1) + " and " +
                   fmt(c.r2) + " (each within 1e-8)";
            sh.assembled.push_back(std::move(af));
        }
        return out;
    });

    // 7. real equimodular crossings: bisection for k = 1..5 (required),
    //    k = 6, 7 (stretch), and the quadratic extrapolation
    gate.run(7, [&] {
        auto t0 = std::chrono::steady_clock::now();
        const std::map<unsigned, std::pair<double, double>> brackets = {
            {1, {2.5, 3.5}},    {2, {3.5, 3.75}},  {3, {3.7, 3.9}},   {4, {4.42, 4.72}},
            {5, {4.75, 5.05}},  {6, {4.96, 5.26}}, {7, {5.09, 5.38}}};
        std::string out;
        for (unsigned k = 1; k <= 5; ++k) {
            QcResult r = find_qc(k, brackets.at(k).first, brackets.at(k).second);
            double want = kCrossingTable.at(k);
            check(std::abs(r.qc - want) <= 1e-8,
                  "k=" + std::to_string(k) + ": crossing " + fmt(r.qc) + " vs " + fmt(want));
            sh.qc[k] = r;
            out += (out.empty() ? "Q_c(k) for k=1..5: " : ", ") + fmt(r.qc);
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        check(secs < 3600.0, "required crossings took " + fmt(secs, 4) + " s (budget 1 h)");
        out += " (each within 1e-8, " + fmt(secs, 4) + " s)";

        for (unsigned k = 6; k <= 7; ++k) {
            try {
                QcResult r = find_qc(k, brackets.at(k).first, brackets.at(k).second);
                sh.qc[k] = r;
                double want = kCrossingTable.at(k);
                if (std::abs(r.qc - want) <= 1e-6)
                    out += "; stretch k=" + std::to_string(k) + ": " + fmt(r.qc) +
                           " (within 1e-6)";
                else
                    out += "; stretch k=" + std::to_string(k) + ": " + fmt(r.qc) + " vs " +
                           fmt(want) + " (outside 1e-6)";
            } catch (const std::exception& e) {
                sh.qc_error[k] = e.what();
                out += "; stretch k=" + std::to_string(k) + " did not complete: " + e.what();
            }
        }

        QcExtrapolation ex = extrapolate_qc(kCrossingTable);
        check(ex.limit_even >= 5.73 && ex.limit_even <= 5.77,
              "even-parity limit " + fmt(ex.limit_even) + " outside [5.73, 5.77]");
        check(ex.limit_odd >= 5.73 && ex.limit_odd <= 5.77,
              "odd-parity limit " + fmt(ex.limit_odd) + " outside [5.73, 5.77]");
        out += "; extrapolated accumulation point " + fmt(ex.limit_even, 6) + " (even) / " +
               fmt(ex.limit_odd, 6) + " (odd), both in [5.73, 5.77]";
        return out;
    });

    // 8. the isolated real accumulation point at Q = 5 and the crossing
    //    classifications for k = 6, 7
    gate.run(8, [&] {
        SectorKey row3 = sector(3, {3});
        std::string out;

        SpectrumSample s6 = leading_eigs(6, {5.0, 0.0});
        check(!s6.sectors.empty() && s6.sectors[0].key == row3,
              "k=6: sector (3,(3)) is not dominant at Q=5");
        double m1 = std::abs(s6.sectors[0].mu1);
        check(s6.sectors.size() >= 2 && std::abs(s6.sectors[1].mu1) < m1 * (1.0 - 1e-6),
              "k=6: dominance at Q=5 is not unique");
        check(std::abs(s6.sectors[0].mu1 - std::complex<double>(177.122, 0.0)) <= 1e-3,
              "k=6: dominant eigenvalue " + fmt(s6.sectors[0].mu1.real()) + " not 177.122 +- 1e-3");
        check(alpha(3, YoungDiagram{{3}}).eval(Rat(5)) == 0,
              "k=6: dominant amplitude does not vanish exactly at Q=5");
        check(std::abs(s6.sectors[0].amplitude) <= 1e-9, "k=6: sampled amplitude not ~0 at Q=5");
        ClassifyResult c6 = classify_point(6, {5.0, 0.0});
        check(c6.kind == ClassifyKind::isolated_a &&
                  c6.feature && c6.feature->witnesses.size() == 1 &&
                  c6.feature->witnesses[0] == row3,
              "k=6: Q=5 not classified as an isolated dominant-amplitude zero");
        out += "k=6: sector (3,(3)) uniquely dominant at Q=5 with mu = " +
               fmt(s6.sectors[0].mu1.real(), 9) +
               " (177.122 +- 1e-3) and exactly vanishing amplitude; classified isolated";

        SpectrumSample s7 = leading_eigs(7, {5.0, 0.0}, {row3});
        check(!s7.sectors.empty() &&
                  std::abs(s7.sectors[0].mu1 - std::complex<double>(-621.779, 0.0)) <= 1e-3,
              "k=7: sector (3,(3)) eigenvalue at Q=5 not -621.779 +- 1e-3");
        out += "; k=7: same sector gives mu = " + fmt(s7.sectors[0].mu1.real(), 9) +
               " (-621.779 +- 1e-3)";

        check(sh.qc.count(6),
              "k=6 crossing unavailable" + (sh.qc_error.count(6) ? ": " + sh.qc_error[6] : ""));
        check(sh.qc.at(6).parity == Parity::non_real,
              std::string("k=6 crossing parity is ") + parity_name(sh.qc.at(6).parity) +
                  ", expected non-real");
        out += "; k=6 crossing at " + fmt(sh.qc.at(6).qc) +
               " classified non-real (equal dominant eigenvalues " +
               fmt(std::abs(sh.qc.at(6).mu_below), 6) + " with same-sign amplitudes)";

        check(sh.qc.count(7),
              "k=7 crossing unavailable" + (sh.qc_error.count(7) ? ": " + sh.qc_error[7] : ""));
        check(sh.qc.at(7).parity == Parity::odd_n,
              std::string("k=7 crossing parity is ") + parity_name(sh.qc.at(7).parity) +
                  ", expected odd-n");
        out += "; k=7 crossing at " + fmt(sh.qc.at(7).qc) + " classified odd-n (sectors " +
               sh.qc.at(7).below.str() + " / " + sh.qc.at(7).above.str() + ")";
        return out;
    });

    // 9. the shipped 120-vertex cofactor fixture
    gate.run(9, [&] {
        auto t0 = std::chrono::steady_clock::now();
        Fixture fx = load_cofactor_fixture(std::string(FLOWPOLY_SOURCE_DIR) +
                                           "/data/gp119_7_cofactor.txt");
        check(fx.flow.eval(Int(4)) == Int("1133172760943853528"), "flow(4) mismatch");
        check(fx.flow.eval(Int(5)) == Int("4488918995790513676672232799446257724715600"),
              "flow(5) mismatch");
        auto roots = all_roots(fx.flow);
        check(near_real_root(roots, 5.0000197675, 1e-9), "no root near 5.0000197675");
        check(near_real_root(roots, 5.1653424423, 1e-9), "no root near 5.1653424423");

        auto rel_ok = [](const Rat& v, double want) {
            return std::abs(to_double(v) - want) <= 1e-3 * std::abs(want);
        };
        RealRootCertificate lo =
            certify_real_root(fx.flow, Rat(500001, 100000), Rat(500002, 100000));
        check(lo.sign_lo > 0 && lo.sign_hi < 0 && lo.sign_change,
              "no (+,-) sign change on (5.00001, 5.00002)");
        check(rel_ok(lo.value_lo, 2.21791e42) && rel_ok(lo.value_hi, -5.27937e40),
              "endpoint values off on (5.00001, 5.00002)");
        check(lo.distinct_roots && *lo.distinct_roots == 1,
              "root count in (5.00001, 5.00002] is not 1");
        RealRootCertificate hi =
            certify_real_root(fx.flow, Rat(516534, 100000), Rat(516535, 100000));
        check(hi.sign_lo < 0 && hi.sign_hi > 0 && hi.sign_change,
              "no (-,+) sign change on (5.16534, 5.16535)");
        check(rel_ok(hi.value_lo, -1.46592e42) && rel_ok(hi.value_hi, 4.53729e42),
              "endpoint values off on (5.16534, 5.16535)");
        check(hi.distinct_roots && *hi.distinct_roots == 1,
              "root count in (5.16534, 5.16535] is not 1");
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        check(secs < 300.0, "fixture checks took " + fmt(secs, 4) + " s (budget 5 min)");
        return "fixture flow evaluates exactly at Q=4 and Q=5; real roots 5.0000197675 and "
               "5.1653424423 located within 1e-9; exact sign certificates (+,-) on (5.00001, "
               "5.00002) and (-,+) on (5.16534, 5.16535), one simple root in each (" +
               fmt(secs, 4) + " s)";
    });

    // 10. structural validation battery over every polynomial assembled above
    gate.run(10, [&] {
        check(!sh.assembled.empty(), "no assembled polynomials collected");
        for (const auto& af : sh.assembled) {
            ValidationReport rep = validate(af);
            check(rep.ok, "G(" + std::to_string(af.graph.n) + "," + std::to_string(af.graph.k) +
                              "): " + (rep.failures.empty() ? "?" : rep.failures.front()));
        }
        return "validation battery (degree/monicity, large-Q coefficients, sign rules and "
               "simple zeros at 1 and 2, zero-free window above 2, parity at Q=3, positivity "
               "at Q=4..6, alternating coefficients) passed by all " +
               std::to_string(sh.assembled.size()) +
               " assembled polynomials; from-scratch recomputation of the 119x7 and 144x6 "
               "members stays out of this gate's budget and is documented as a stretch goal "
               "(reference real root 4.9987003379)";
    });

    std::cout << "\n" << (gate.all_ok ? "acceptance: ALL CRITERIA PASSED" : "acceptance: FAILURES")
              << std::endl;
    return gate.all_ok ? 0 : 1;
}
