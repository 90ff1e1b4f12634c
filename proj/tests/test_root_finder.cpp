// Certified root location: exact counting, sign certificates, inclusion discs.
#include <catch_amalgamated.hpp>

#include <cmath>

#include "flowpoly/io.hpp"
#include "flowpoly/root_finder.hpp"

using namespace flowpoly;
using namespace flowpoly::io;

namespace {

PolyZ zp(std::initializer_list<long long> asc) {
    std::vector<Int> v;
    for (long long c : asc) v.push_back(Int(c));
    return PolyZ(std::move(v));
}

PolyZ linear(long r) { return zp({-r, 1}); }  // Q - r

const char* kFixturePath = FLOWPOLY_SOURCE_DIR "/data/gp119_7_cofactor.txt";

}  // namespace

TEST_CASE("primitive part and integer gcd", "[root_finder]") {
    PolyR p = Q_shift(Rat(1, 2)) * Rat(4, 3);   // (4/3) Q + 2/3
    REQUIRE(primitive_part(p) == zp({1, 2}));
    REQUIRE(primitive_part(zp({-4, 0, -8})) == zp({1, 0, 2}));  // sign normalised
    REQUIRE(content_z(zp({6, -9, 12})) == 3);

    PolyZ a = linear(1) * linear(2) * linear(3);
    PolyZ b = linear(2) * linear(5);
    REQUIRE(gcd_z(a, b) == linear(2));
    REQUIRE(gcd_z(a, zp({7})).degree() == 0);
}

TEST_CASE("squarefree part strips repeated factors", "[root_finder]") {
    PolyZ sq = linear(2) * linear(2) * linear(5);
    REQUIRE(squarefree_part(sq) == linear(2) * linear(5));
    PolyZ cube = linear(-1) * linear(-1) * linear(-1);
    REQUIRE(squarefree_part(cube) == linear(-1));
    REQUIRE(squarefree_part(linear(7)) == linear(7));
}

TEST_CASE("exact evaluation and root multiplicity", "[root_finder]") {
    PolyZ p = linear(2) * linear(2) * linear(5);
    REQUIRE(evaluate_exact(p, Rat(2)) == 0);
    REQUIRE(evaluate_exact(p, Rat(3)) == -2);
    REQUIRE(evaluate_exact(p, Rat(1, 2)) == Rat(-81, 8));
    REQUIRE(root_multiplicity_at(p, Rat(2)) == 2);
    REQUIRE(root_multiplicity_at(p, Rat(5)) == 1);
    REQUIRE(root_multiplicity_at(p, Rat(3)) == 0);
}

TEST_CASE("root bounds actually bound", "[root_finder]") {
    std::vector<PolyZ> samples = {
        linear(1) * linear(2) * linear(3),
        zp({-100, 0, 1}),             // roots +-10
        zp({1, 1000000, 1}),          // one root near -1e6
        linear(-7) * linear(12) * linear(-3)};
    for (const auto& p : samples) {
        Rat cb = cauchy_root_bound(p);
        Rat lb = lagrange_root_bound(p);
        for (const auto& r : all_roots(p)) {
            double m = std::abs(r.value);
            REQUIRE(m < to_double(cb));
            REQUIRE(m < to_double(lb));
        }
    }
    // the scaled bound stays small when only high coefficients are large:
    // a monic flow-like polynomial of degree d with second coefficient -3d
    PolyZ f = linear(1) * linear(2) * linear(3) * linear(4) * linear(5);
    REQUIRE(lagrange_root_bound(f) <= Rat(2 * 15 + 1));
}

TEST_CASE("distinct real roots in open intervals", "[root_finder]") {
    PolyZ p = linear(1) * linear(2) * linear(3);
    REQUIRE(count_real_roots_in(p, Rat(0), Rat(4)) == 3);
    REQUIRE(count_real_roots_in(p, Rat(1), Rat(3)) == 1);  // endpoints excluded
    REQUIRE(count_real_roots_in(p, Rat(3), Rat(10)) == 0);
    REQUIRE(count_real_roots_in(p, Rat(-5), Rat(1)) == 0);
    REQUIRE(count_real_roots_in(p, Rat(2), Rat(2)) == 0);

    // repeated factors do not stall the bisection and count once
    PolyZ sq = linear(2) * linear(2) * linear(5);
    REQUIRE(count_real_roots_in(sq, Rat(0), Rat(3)) == 1);
    REQUIRE(count_real_roots_in(sq, Rat(0), Rat(6)) == 2);

    // irrational roots
    PolyZ two = zp({-2, 0, 1});
    REQUIRE(count_real_roots_in(two, Rat(1), Rat(2)) == 1);
    REQUIRE(count_real_roots_in(two, Rat(-2), Rat(0)) == 1);
    REQUIRE(count_real_roots_in(two, Rat(2), Rat(3)) == 0);

    // no real roots at all
    REQUIRE(count_real_roots_in(zp({10, -5, 1}), Rat(-100), Rat(100)) == 0);
}

TEST_CASE("Sturm chains count roots in half-open intervals", "[root_finder]") {
    PolyZ p = linear(1) * linear(2) * linear(3);
    auto chain = sturm_chain(p);
    REQUIRE(chain.size() == 4);
    REQUIRE(sturm_count(p, Rat(0), Rat(4)) == 3);
    REQUIRE(sturm_count(p, Rat(1), Rat(3)) == 2);  // (1, 3] holds 2 and 3
    REQUIRE(sturm_count(p, Rat(0), Rat(1)) == 1);
    REQUIRE(sturm_count(p, Rat(3), Rat(9)) == 0);

    // repeated roots count once
    PolyZ sq = linear(2) * linear(2) * linear(5);
    REQUIRE(sturm_count(sq, Rat(1), Rat(3)) == 1);
    REQUIRE(sturm_count(sq, Rat(1), Rat(6)) == 2);
}

TEST_CASE("real-root certificates", "[root_finder]") {
    PolyZ p = linear(2);
    RealRootCertificate yes = certify_real_root(p, Rat(1), Rat(3));
    REQUIRE(yes.sign_lo == -1);
    REQUIRE(yes.sign_hi == 1);
    REQUIRE(yes.sign_change);
    REQUIRE(yes.distinct_roots.has_value());
    REQUIRE(*yes.distinct_roots == 1);

    RealRootCertificate no = certify_real_root(p, Rat(3), Rat(4));
    REQUIRE_FALSE(no.sign_change);
    REQUIRE(*no.distinct_roots == 0);

    // degree above the Sturm limit: signs still reported, count omitted
    PolyZ big = PolyZ::monomial(Int(1), 201) - PolyZ::constant(Int(2));
    RealRootCertificate cert = certify_real_root(big, Rat(0), Rat(2));
    REQUIRE(cert.sign_change);
    REQUIRE_FALSE(cert.distinct_roots.has_value());
}

TEST_CASE("cubic threshold bracket", "[root_finder]") {
    PolyZ d = jackson_cubic();
    REQUIRE(evaluate_exact(d, Rat(2)) == -2);
    REQUIRE(evaluate_exact(d, Rat(3)) == 1);
    auto [lo, hi] = jackson_delta_bracket(Rat(1, 1000000000));
    REQUIRE(hi - lo <= Rat(1, 1000000000));
    REQUIRE(lo > Rat(2));
    REQUIRE(hi < Rat(3));
    REQUIRE(evaluate_exact(d, lo) < 0);
    REQUIRE(evaluate_exact(d, hi) > 0);
    // the threshold is near 2.5466
    REQUIRE(lo > Rat(25466, 10000));
    REQUIRE(hi < Rat(25467, 10000));
}

TEST_CASE("all complex roots of a factored polynomial", "[root_finder]") {
    // (Q-1)(Q-2)(Q-3)(Q-4)(Q^2-5Q+10): real 1..4 plus 5/2 +- i sqrt(15)/2
    PolyZ p = linear(1) * linear(2) * linear(3) * linear(4) * zp({10, -5, 1});
    auto roots = all_roots(p);
    REQUIRE(roots.size() == 6);
    unsigned total = 0;
    for (const auto& r : roots) total += r.multiplicity;
    REQUIRE(total == 6);

    double s15 = std::sqrt(15.0) / 2.0;
    std::vector<std::pair<double, double>> expect = {
        {1, 0}, {2, 0}, {2.5, -s15}, {2.5, s15}, {3, 0}, {4, 0}};
    for (size_t i = 0; i < 6; ++i) {
        REQUIRE(std::abs(roots[i].value.real() - expect[i].first) < 1e-10);
        REQUIRE(std::abs(roots[i].value.imag() - expect[i].second) < 1e-10);
        REQUIRE(roots[i].radius < 1e-10);
        REQUIRE(roots[i].multiplicity == 1);
    }
}

TEST_CASE("roots at the origin are split off exactly", "[root_finder]") {
    PolyZ p = PolyZ::monomial(Int(1), 2) * linear(1);  // Q^2 (Q - 1)
    auto roots = all_roots(p);
    REQUIRE(roots.size() == 2);
    REQUIRE(roots[0].value == std::complex<double>(0.0, 0.0));
    REQUIRE(roots[0].radius == 0.0);
    REQUIRE(roots[0].multiplicity == 2);
    REQUIRE(std::abs(roots[1].value.real() - 1.0) < 1e-12);
}

TEST_CASE("repeated roots merge into one cluster", "[root_finder]") {
    PolyZ p = linear(2) * linear(2) * linear(2);
    auto roots = all_roots(p);
    REQUIRE(roots.size() == 1);
    REQUIRE(roots[0].multiplicity == 3);
    REQUIRE(std::abs(roots[0].value.real() - 2.0) < 1e-6);
    REQUIRE(std::abs(roots[0].value.imag()) < 1e-6);
}

TEST_CASE("product roots are the union of factor roots", "[root_finder]") {
    PolyZ a = linear(1) * linear(2);
    PolyZ b = zp({1, 0, 1});  // Q^2 + 1
    auto roots = all_roots(a * b);
    REQUIRE(roots.size() == 4);
    std::vector<std::pair<double, double>> expect = {{0, -1}, {0, 1}, {1, 0}, {2, 0}};
    for (size_t i = 0; i < 4; ++i) {
        REQUIRE(std::abs(roots[i].value.real() - expect[i].first) < 1e-10);
        REQUIRE(std::abs(roots[i].value.imag() - expect[i].second) < 1e-10);
    }
    REQUIRE(all_roots(PolyZ::constant(Int(5))).empty());
}

TEST_CASE("large fixture: exact values and isolated zeros", "[root_finder]") {
    Fixture fx = load_cofactor_fixture(kFixturePath);
    REQUIRE(fx.cofactor.degree() == 117);
    REQUIRE(fx.flow.degree() == 120);

    REQUIRE(evaluate_exact(fx.flow, Rat(4)) == Rat(Int("1133172760943853528")));
    REQUIRE(evaluate_exact(fx.flow, Rat(5)) ==
            Rat(Int("4488918995790513676672232799446257724715600")));
    REQUIRE(evaluate_exact(fx.flow, Rat(1)) == 0);
    REQUIRE(evaluate_exact(fx.flow, Rat(2)) == 0);
    REQUIRE(evaluate_exact(fx.flow, Rat(3)) == 0);

    // the two isolated real zeros just above Q = 5
    auto roots = all_roots(fx.flow);
    unsigned total = 0;
    for (const auto& r : roots) total += r.multiplicity;
    REQUIRE(total == 120);
    bool found_q1 = false, found_q2 = false;
    for (const auto& r : roots) {
        if (std::abs(r.value.imag()) > 1e-9) continue;
        if (std::abs(r.value.real() - 5.0000197675) < 1e-9) found_q1 = true;
        if (std::abs(r.value.real() - 5.1653424423) < 1e-9) found_q2 = true;
    }
    REQUIRE(found_q1);
    REQUIRE(found_q2);

    // sign certificates on the two published brackets
    RealRootCertificate c1 =
        certify_real_root(fx.flow, Rat(5) + Rat(1, 100000), Rat(5) + Rat(2, 100000));
    REQUIRE(c1.sign_lo == 1);
    REQUIRE(c1.sign_hi == -1);
    REQUIRE(c1.sign_change);
    REQUIRE(std::abs(to_double(c1.value_lo) / 2.21791e42 - 1.0) < 1e-4);
    REQUIRE(std::abs(to_double(c1.value_hi) / -5.27937e40 - 1.0) < 1e-4);

    RealRootCertificate c2 =
        certify_real_root(fx.flow, Rat(516534, 100000), Rat(516535, 100000));
    REQUIRE(c2.sign_lo == -1);
    REQUIRE(c2.sign_hi == 1);
    REQUIRE(c2.sign_change);
    REQUIRE(std::abs(to_double(c2.value_lo) / -1.46592e42 - 1.0) < 1e-4);
    REQUIRE(std::abs(to_double(c2.value_hi) / 4.53729e42 - 1.0) < 1e-4);
}
