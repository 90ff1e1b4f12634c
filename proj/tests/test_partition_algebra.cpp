// Marked set partitions: canonical form, encoding, enumeration, operators.
#include <catch_amalgamated.hpp>

#include <set>

#include "flowpoly/partition_algebra.hpp"

using namespace flowpoly;

namespace {

MarkedBlock mb(std::initializer_list<unsigned> pts, uint8_t mark = 0) {
    MarkedBlock b;
    for (unsigned p : pts) b.pts |= uint16_t(1) << p;
    b.mark = mark;
    return b;
}

}  // namespace

TEST_CASE("canonicalize accepts valid states and sorts blocks", "[partition_algebra]") {
    PState s{mb({2, 3}), mb({0, 1}, 1)};
    PState c = canonicalize(s);
    REQUIRE(c.size() == 2);
    REQUIRE(least_point(c[0].pts) == 0);
    REQUIRE(c[0].mark == 1);
    REQUIRE(point_count(c) == 4);
    REQUIRE(mark_count(c) == 1);
}

TEST_CASE("canonicalize rejects invalid states", "[partition_algebra]") {
    REQUIRE_THROWS_AS(canonicalize({mb({0, 1}), mb({1, 2})}), std::invalid_argument);  // overlap
    REQUIRE_THROWS_AS(canonicalize({mb({0, 1}), mb({3})}), std::invalid_argument);     // gap at 2
    REQUIRE_THROWS_AS(canonicalize({mb({0}, 1), mb({1}, 1)}), std::invalid_argument);  // dup label
    REQUIRE_THROWS_AS(canonicalize({mb({0, 1}, 2)}), std::invalid_argument);  // labels not 1..l
    REQUIRE_THROWS_AS(canonicalize({mb({0, 1}), mb({2})}), std::invalid_argument);  // unmarked singleton
    REQUIRE_NOTHROW(canonicalize({mb({0, 1}), mb({2})}, true));
    REQUIRE_THROWS_AS(canonicalize({MarkedBlock{}}), std::invalid_argument);  // empty block
}

TEST_CASE("state predicates", "[partition_algebra]") {
    PState s = canonicalize({mb({0}, 1), mb({1, 2})});
    REQUIRE(point0_marked_singleton(s));
    REQUIRE_FALSE(has_unmarked_singleton(s));
    PState t = canonicalize({mb({0, 1}, 1), mb({2})}, true);
    REQUIRE_FALSE(point0_marked_singleton(t));
    REQUIRE(has_unmarked_singleton(t));
}

TEST_CASE("rgs encoding round-trips and orders deterministically", "[partition_algebra]") {
    for (unsigned k = 1; k <= 5; ++k)
        for (unsigned l = 0; l <= k + 1; ++l) {
            auto basis = enumerate_basis(k, l);
            std::set<RgsEncoding> seen;
            for (const auto& s : basis) {
                RgsEncoding e = encode_rgs(s);
                REQUIRE(seen.insert(e).second);  // all distinct
                PState back = decode_rgs(e);
                REQUIRE(canonicalize(back) == s);
            }
        }
    REQUIRE_THROWS_AS(decode_rgs(RgsEncoding{{0, 3}, {0}}), std::invalid_argument);
}

TEST_CASE("dump renders blocks and marks", "[partition_algebra]") {
    PState s = canonicalize({mb({0, 2}, 1), mb({1, 3})});
    REQUIRE(dump(s) == "[[0,2],[1,3]] marks [0:1]");
}

TEST_CASE("basis enumeration counts match marked-partition dimensions", "[partition_algebra]") {
    for (unsigned k = 1; k <= 7; ++k)
        for (unsigned l = 0; l <= k + 1; ++l) {
            auto basis = enumerate_basis(k, l);
            REQUIRE(Int(basis.size()) == dim_marked_nosingleton(k + 1, l));
            for (const auto& s : basis) {
                REQUIRE(point_count(s) == k + 1);
                REQUIRE(mark_count(s) == l);
                REQUIRE_FALSE(has_unmarked_singleton(s));
            }
        }
    // the (k, k+1) sector: every point a marked singleton, (k+1)! labelings
    REQUIRE(Int(enumerate_basis(3, 4).size()) == factorial(4));
}

TEST_CASE("detach operator: idempotent up to the loop weight", "[partition_algebra]") {
    PState s = canonicalize({mb({0, 1, 2}, 1)});

    auto first = detach(s, 2);
    REQUIRE(first.size() == 1);
    REQUIRE(first[0].coeff == PolyR::constant(Rat(1)));
    const PState& t = first[0].state;
    REQUIRE(has_unmarked_singleton(t));  // {2} split off
    REQUIRE(t.size() == 2);

    // detaching an existing singleton multiplies by Q: D^2 = Q D
    auto second = detach(t, 2);
    REQUIRE(second.size() == 1);
    REQUIRE(second[0].coeff == Q_var());
    REQUIRE(second[0].state == t);

    // a marked singleton also just picks up Q
    PState ms = canonicalize({mb({0}, 1), mb({1, 2})});
    auto third = detach(ms, 0);
    REQUIRE(third[0].coeff == Q_var());
    REQUIRE(third[0].state == ms);
}

TEST_CASE("join operator: idempotent, keeps the smaller label", "[partition_algebra]") {
    PState s = canonicalize({mb({0, 1}, 2), mb({2, 3}, 1)});
    PState j = join(s, 1, 2);
    REQUIRE(j.size() == 1);
    REQUIRE(j[0].mark == 1);        // smaller label survives
    REQUIRE(point_count(j) == 4);
    REQUIRE(join(j, 0, 3) == j);    // already joined: identity

    // label compaction: dropping label 1 shifts 2 down
    PState u = canonicalize({mb({0, 1}, 1), mb({2, 3}, 2)});
    PState ju = join(u, 0, 2);
    REQUIRE(ju.size() == 1);
    REQUIRE(ju[0].mark == 1);

    // three blocks, drop middle label, remaining labels stay contiguous
    PState v = canonicalize({mb({0, 1}, 2), mb({2, 3}, 3), mb({4, 5}, 1)});
    PState jv = join(v, 0, 2);
    REQUIRE_NOTHROW(canonicalize(jv));
    REQUIRE(mark_count(jv) == 2);
}

TEST_CASE("orbit representative and labeling permutation", "[partition_algebra]") {
    PState s = canonicalize({mb({0, 1}, 2), mb({2, 3}, 1)});
    auto [rep, perm] = orbit_rep_and_perm(s);
    REQUIRE(rep[0].mark == 1);
    REQUIRE(rep[1].mark == 2);
    REQUIRE(perm == PermOneLine{2, 1});

    // canonical states give the identity permutation
    auto [rep2, perm2] = orbit_rep_and_perm(rep);
    REQUIRE(rep2 == rep);
    REQUIRE(perm2 == PermOneLine{1, 2});
}
