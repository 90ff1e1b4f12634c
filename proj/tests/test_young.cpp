// Standard tableaux and the seminormal symmetric-group representation.
#include <catch_amalgamated.hpp>

#include "flowpoly/combinatorics.hpp"
#include "flowpoly/young.hpp"

using namespace flowpoly;

namespace {

PermOneLine compose(const PermOneLine& b, const PermOneLine& a) {
    // compose(b,a)(x) = b(a(x))
    PermOneLine c(a.size());
    for (size_t i = 0; i < a.size(); ++i) c[i] = b[a[i] - 1];
    return c;
}

bool is_identity(const RatMatrix& m) {
    for (size_t i = 0; i < m.size(); ++i)
        for (size_t j = 0; j < m.size(); ++j)
            if (m[i][j] != Rat(i == j ? 1 : 0)) return false;
    return true;
}

}  // namespace

TEST_CASE("standard tableaux counts match hook-length dimensions", "[young]") {
    for (unsigned l = 0; l <= 6; ++l)
        for (const auto& lam : young_diagrams(l))
            REQUIRE(Int(standard_tableaux(lam).size()) == young_dim(lam));

    // tableaux are standard: rows and columns strictly increase
    for (const auto& t : standard_tableaux({{3, 2}})) {
        for (const auto& row : t)
            for (size_t j = 1; j < row.size(); ++j) REQUIRE(row[j] > row[j - 1]);
        for (size_t r = 1; r < t.size(); ++r)
            for (size_t j = 0; j < t[r].size(); ++j) REQUIRE(t[r][j] > t[r - 1][j]);
    }
}

TEST_CASE("generators are involutions", "[young]") {
    for (unsigned l = 2; l <= 5; ++l)
        for (const auto& lam : young_diagrams(l)) {
            SeminormalRep rep(lam, l);
            for (unsigned j = 1; j + 1 <= l; ++j) {
                const RatMatrix& g = rep.generator(j);
                REQUIRE(is_identity(rat_matmul(g, g)));
            }
        }
}

TEST_CASE("braid and commutation relations", "[young]") {
    for (unsigned l = 3; l <= 5; ++l)
        for (const auto& lam : young_diagrams(l)) {
            SeminormalRep rep(lam, l);
            for (unsigned j = 1; j + 2 <= l; ++j) {
                const RatMatrix& a = rep.generator(j);
                const RatMatrix& b = rep.generator(j + 1);
                REQUIRE(rat_matmul(a, rat_matmul(b, a)) == rat_matmul(b, rat_matmul(a, b)));
            }
            for (unsigned i = 1; i + 1 <= l; ++i)
                for (unsigned j = i + 2; j + 1 <= l; ++j) {
                    const RatMatrix& a = rep.generator(i);
                    const RatMatrix& b = rep.generator(j);
                    REQUIRE(rat_matmul(a, b) == rat_matmul(b, a));
                }
        }
}

TEST_CASE("one-dimensional shapes give sign and trivial characters", "[young]") {
    SeminormalRep triv({{4}}, 4), sgn({{1, 1, 1, 1}}, 4);
    REQUIRE(triv.dim() == 1);
    REQUIRE(sgn.dim() == 1);
    for (unsigned j = 1; j <= 3; ++j) {
        REQUIRE(triv.generator(j)[0][0] == Rat(1));
        REQUIRE(sgn.generator(j)[0][0] == Rat(-1));
    }
}

TEST_CASE("general permutations compose with reversed order", "[young]") {
    // rho(a) * rho(b) = rho(compose(b, a))
    std::vector<PermOneLine> perms = {
        {1, 2, 3, 4}, {2, 1, 3, 4}, {4, 3, 2, 1}, {2, 3, 4, 1}, {3, 1, 4, 2}, {1, 4, 2, 3}};
    for (const auto& lam : young_diagrams(4)) {
        SeminormalRep rep(lam, 4);
        for (const auto& a : perms)
            for (const auto& b : perms)
                REQUIRE(rat_matmul(rep.rho(a), rep.rho(b)) == rep.rho(compose(b, a)));
    }
}

TEST_CASE("character of the identity and of a transposition", "[young]") {
    // trace of rho(id) = dim; trace of any adjacent transposition in the
    // (2,1) shape is 0 (character value chi_{(2,1)}(transposition) = 0)
    SeminormalRep rep({{2, 1}}, 3);
    REQUIRE(rep.dim() == 2);
    PermOneLine id{1, 2, 3};
    const RatMatrix& m = rep.rho(id);
    REQUIRE(is_identity(m));
    for (unsigned j = 1; j <= 2; ++j) {
        const RatMatrix& g = rep.generator(j);
        REQUIRE(g[0][0] + g[1][1] == Rat(0));
    }
}

TEST_CASE("input validation", "[young]") {
    REQUIRE_THROWS_AS(SeminormalRep({{2, 1}}, 4), std::invalid_argument);
    SeminormalRep rep({{2, 1}}, 3);
    REQUIRE_THROWS_AS(rep.rho(PermOneLine{1, 2}), std::invalid_argument);
}
