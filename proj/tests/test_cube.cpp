#include <doctest.h>

#include <random>

#include "monocube/cube.hpp"
#include "monocube/describe.hpp"
#include "monocube/error.hpp"
#include "monocube/oracle.hpp"
#include "oracles.hpp"

using namespace monocube;

namespace {

MonotoneSet from_members(int n, std::initializer_list<Index> xs) {
    CubeSubset s(n);
    for (auto x : xs) s.insert(x);
    return MonotoneSet::from_subset(s);
}

}  // namespace

TEST_CASE("points print coordinate n first") {
    const CubePoint p = CubePoint::parse("100");
    CHECK(p.index == 4);
    CHECK(p.n == 3);
    CHECK(p.bit(2));
    CHECK_FALSE(p.bit(0));
    CHECK(p.to_string() == "100");
    CHECK(p.flipped(0).to_string() == "101");
    CHECK(CubePoint::parse("0110").weight() == 2);
    CHECK_THROWS_AS(CubePoint::parse("10a"), Error);
    CHECK_THROWS_AS(CubePoint::parse(""), Error);
}

TEST_CASE("make_upset closes upward") {
    auto a = make_upset(2, {0b11});
    CHECK(a.size() == 1);
    CHECK(a.density() == 0.25);

    auto b = make_upset(2, {0b01});
    CHECK(oracle::members_of(b) == oracle::Members{0b01, 0b11});
    CHECK(b.density() == 0.5);

    auto c = make_upset(3, {0b110, 0b101, 0b011});
    CHECK(c.size() == 4);
    CHECK(c == threshold_set(3, 2));
    CHECK(oracle::members_of(c) == oracle::closure(3, {0b110, 0b101, 0b011}));

    CHECK_THROWS_WITH_AS(make_upset(3, {}), "empty set not allowed", Error);
    CHECK_THROWS_AS(make_upset(2, {0b100}), Error);
}

TEST_CASE("threshold and dictator sets") {
    CHECK(threshold_set(3, 0).is_full());
    CHECK(threshold_set(3, 0).density() == 1.0);
    CHECK(threshold_set(3, 2).size() == 4);
    CHECK(threshold_set(3, 2).density() == 0.5);
    const auto single = threshold_set(3, 3);
    CHECK(single.size() == 1);
    CHECK(single.contains(0b111));

    const auto d = dictator_set(4, 3);
    CHECK(d.size() == 8);
    for (auto x : d.members()) CHECK((x >> 3) == 1);
}

TEST_CASE("is_monotone") {
    CubeSubset s(2);
    s.insert(0b00);
    s.insert(0b11);
    CHECK_FALSE(is_monotone(s));
    CHECK_THROWS_WITH_AS(MonotoneSet::from_subset(s), "set is not upward closed", Error);

    CubeSubset t(2);
    for (Index x : {0b01u, 0b10u, 0b11u}) t.insert(x);
    CHECK(is_monotone(t));

    CHECK_THROWS_WITH_AS(MonotoneSet::from_subset(CubeSubset(3)), "empty set not allowed", Error);

    std::mt19937_64 rng(7);
    for (int k = 0; k < 50; ++k) {
        const int n = 1 + static_cast<int>(rng() % 12);
        const auto a = random_upset(n, 1 + static_cast<int>(rng() % 5), rng());
        CHECK(is_monotone(a.subset()));
        CHECK(a.contains(a.all_ones()));
    }
}

TEST_CASE("word-level monotonicity agrees with a pairwise check") {
    std::mt19937_64 rng(11);
    for (int k = 0; k < 300; ++k) {
        const int n = 1 + static_cast<int>(rng() % 4);
        CubeSubset s(n);
        oracle::Members m;
        for (Index x = 0; x < (1u << n); ++x)
            if (rng() % 3 != 0) {
                s.insert(x);
                m.insert(x);
            }
        CHECK(is_monotone(s) == oracle::upward_closed(n, m));
    }
}

TEST_CASE("split slices by the highest coordinate") {
    const auto sp = split(threshold_set(3, 2));
    REQUIRE(sp.slice0);
    CHECK(*sp.slice0 == threshold_set(2, 2));
    CHECK(sp.slice1 == threshold_set(2, 1));
    CHECK(sp.density0 == 0.25);
    CHECK(sp.density1 == 0.75);

    const auto full = split(threshold_set(3, 0));
    REQUIRE(full.slice0);
    CHECK(*full.slice0 == threshold_set(2, 0));
    CHECK(full.slice1 == threshold_set(2, 0));

    const auto top = split(from_members(3, {0b111}));
    CHECK_FALSE(top.slice0);
    CHECK(oracle::members_of(top.slice1) == oracle::Members{0b11});
    CHECK(top.size0 == 0);

    CHECK_THROWS_WITH_AS(split(threshold_set(1, 1)), "cannot split dimension 1", Error);
}

TEST_CASE("enumeration matches a brute-force filter") {
    for (int n = 1; n <= 4; ++n) {
        const auto sets = enumerate_monotone(n);
        const auto brute = oracle::all_monotone(n);
        std::set<oracle::Members> lib, ref(brute.begin(), brute.end());
        for (const auto& s : sets) lib.insert(oracle::members_of(s));
        CHECK(lib.size() == sets.size());
        CHECK(lib == ref);
    }
    CHECK(enumerate_monotone(1).size() == 2);
    CHECK(enumerate_monotone(2).size() == 5);
    CHECK(enumerate_monotone(3).size() == 19);
    CHECK(enumerate_monotone(4).size() == 167);
    std::size_t count5 = 0;
    for_each_monotone(5, [&](const MonotoneSet&) { ++count5; });
    CHECK(count5 == 7580);
    CHECK_THROWS_AS(enumerate_monotone(6), Error);
}

TEST_CASE("split properties over every small monotone set") {
    for (int n = 2; n <= 4; ++n)
        for (const auto& a : enumerate_monotone(n)) {
            const auto sp = split(a);
            CHECK(join(sp.slice0, sp.slice1) == a);
            CHECK(a.size() == sp.size0 + sp.size1);
            CHECK(a.density() == (sp.density0 + sp.density1) / 2);
            if (sp.slice0)
                for (auto x : sp.slice0->members()) CHECK(sp.slice1.contains(x));
            CHECK(a.contains(a.all_ones()));
        }
}

TEST_CASE("rank, minimal elements and degree") {
    const auto a = random_upset(9, 4, 3);
    std::size_t r = 0;
    for (Index x = 0; x < (1u << 9); ++x) {
        const auto rk = a.rank(x);
        CHECK(rk.has_value() == a.contains(x));
        if (rk) CHECK(*rk == r++);
    }
    const auto mins = a.minimal_elements();
    CHECK(make_upset(9, mins) == a);
    CHECK(threshold_set(3, 2).degree(0b111) == 3);
    CHECK(threshold_set(3, 2).degree(0b011) == 1);
}

TEST_CASE("dense storage cap") {
    CHECK_THROWS_AS(threshold_set(kMaxDenseDim + 1, 1), Error);
    CHECK(binomial(62, 31) == 465428353255261088ULL);
    CHECK(binomial(5, 6) == 0);
}

TEST_CASE("oracles") {
    CHECK(MembershipOracle::threshold(5, 3).materialize() == threshold_set(5, 3));
    CHECK(MembershipOracle::dictator(5, 2).materialize() == dictator_set(5, 2));
    const auto a = random_upset(6, 3, 9);
    CHECK(MembershipOracle::of(a).materialize() == a);
    CHECK(MembershipOracle::tribes(6, 3).materialize().size() == 64 - 7 * 7);

    const auto t = MembershipOracle::threshold(40, 20);
    CHECK(t.dim() == 40);
    CHECK_FALSE(spot_check_monotone(t, 2000, 1));

    const auto bad = MembershipOracle::custom(6, [](std::uint64_t x) { return x == 0; });
    CHECK(spot_check_monotone(bad, 2000, 1));
}

TEST_CASE("stationary coordinate mean") {
    CHECK(stationary_coordinate_mean(3, 0) == doctest::Approx(0.5));
    CHECK(stationary_coordinate_mean(3, 3) == doctest::Approx(1.0));
    CHECK(stationary_coordinate_mean(3, 2) == doctest::Approx(0.75));
    for (int k = 0; k <= 8; ++k) {
        const auto a = threshold_set(8, k);
        double hits = 0;
        for (auto x : a.members()) hits += x & 1;
        CHECK(stationary_coordinate_mean(8, k) == doctest::Approx(hits / a.size()).epsilon(1e-14));
    }
    CHECK(stationary_coordinate_mean(MembershipOracle::threshold(8, 3), 5) ==
          doctest::Approx(stationary_coordinate_mean(8, 3)));
    CHECK_THROWS_AS(stationary_coordinate_mean(MembershipOracle::dictator(8, 3), 0), Error);
}

TEST_CASE("set descriptions") {
    CHECK(parse_set_description("threshold 5 3").build() == threshold_set(5, 3));
    CHECK(parse_set_description("dictator 4 1").build() == dictator_set(4, 0));
    CHECK(parse_set_description("upset 3 110,101,011").build() == threshold_set(3, 2));
    CHECK(parse_set_description("upset 3 011").oracle()(0b111));
    CHECK_FALSE(parse_set_description("upset 3 011").oracle()(0b101));
    CHECK_THROWS_AS(parse_set_description("dictator 4 0"), Error);
    CHECK_THROWS_AS(parse_set_description("upset 3 01"), Error);
    CHECK_THROWS_AS(parse_set_description("cube 3 1"), Error);
    CHECK(parse_set_descriptions("# sets\nthreshold 3 2\n\ndictator 3 2 # x_2\n").size() == 2);
    CHECK(describe_generators(threshold_set(3, 2)) == "011,101,110");
}
