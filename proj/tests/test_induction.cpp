#include <doctest.h>

#include <Eigen/LU>
#include <memory>
#include <random>

#include "monocube/induction.hpp"

using namespace monocube;

TEST_CASE("five-point inequality at a hand-checked point") {
    const InductionParams<double> p{0.5, 1.0, 0.0, 1.0, 0.0, 0.5};
    const auto r = five_point(p);
    CHECK(r.lhs == doctest::Approx(0.125));
    CHECK(r.rhs == doctest::Approx(1.0 / 24));
    CHECK(r.holds);
}

TEST_CASE("five-point inequality with equal densities and flat values") {
    const InductionParams<double> p{0.4, 0.4, 0.7, 0.7, 0.7, 0.5};
    const auto r = five_point(p);
    CHECK(r.lhs == 0.0);
    CHECK(r.rhs == 0.0);
    CHECK(r.holds);
    CHECK_THROWS_AS(five_point(InductionParams<double>{0, 0, 1, 2, 3, 0.5}), Error);
    CHECK_THROWS_AS(five_point(InductionParams<double>{0.6, 0.5, 1, 2, 3, 0.5}), Error);
}

TEST_CASE("cleared gap matches both the raw inequality and the quadratic in T") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> unit(0, 1), sym(-1, 1);
    for (int k = 0; k < 2000; ++k) {
        double a0 = unit(rng), a1 = unit(rng);
        if (a0 > a1) std::swap(a0, a1);
        const InductionParams<double> p{a0, a1, sym(rng), sym(rng), sym(rng), 0.25 + unit(rng)};
        const double r = std::sqrt(1 - p.a()), t = p.t();
        const auto raw = five_point(p);
        const double cleared = cleared_five_point_gap(p);
        const double scale = std::max({std::abs(cleared), 1e-3});
        CHECK(std::abs(cleared - 2 * (r + t) * (1 + r) * (raw.lhs - raw.rhs)) <= 1e-11 * scale);
        if (const auto tt = t_variable(p)) {
            const double ag = p.alpha - p.gamma;
            const auto q = quad_coeffs(p.a0, p.a1, p.c);
            CHECK(std::abs(cleared - ag * ag * q(*tt)) <= 1e-11 * scale);
        }
    }
}

TEST_CASE("kernels instantiate in extended precision") {
    const InductionParams<long double> p{0.5L, 1.0L, 0.0L, 1.0L, 0.0L, 0.5L};
    CHECK(static_cast<double>(five_point(p).lhs) == doctest::Approx(0.125));
    const auto m = g_psd_margin<long double>(0.2L, 0.9L);
    CHECK(std::abs(static_cast<double>(m.direct - m.factored)) < 1e-17);
    CHECK(discriminant<long double>(0.3L, 0.6L, 0.5L).delta <= 0);
}

TEST_CASE("PSD margin") {
    CHECK(g_psd_margin(1.0, 1.0).direct == 0.0);
    CHECK(g_psd_margin(0.0, 0.0).direct == 0.0);
    for (double a1 : {0.1, 0.5, 0.9, 1.0}) {
        const double r = std::sqrt(1 - a1 / 2), t = std::sqrt(1 - a1);
        CHECK(g_psd_margin(0.0, a1).direct == doctest::Approx(r * (r - t + 1) - 1));
        CHECK(g_psd_margin(0.0, a1).direct >= 0.0);
    }
    const auto g = g_matrix(0.3, 0.8);
    CHECK(g(0, 1) == g(1, 0));
    const auto m = g_psd_margin(0.3, 0.8);
    CHECK(g.determinant() == doctest::Approx(0.3 * 0.3 / 4 * m.direct));
    CHECK(m.direct == doctest::Approx(m.factored));

    const auto sweep = psd_grid_sweep(101);
    CHECK(sweep.points == 101 * 102 / 2);
    CHECK(sweep.min_margin >= -1e-12);
    CHECK(sweep.max_form_disagreement <= 1e-12);
}

TEST_CASE("discriminant") {
    const auto zero = discriminant(0.0, 0.0, 0.5);
    CHECK(zero.delta == 0.0);
    const auto q = quad_coeffs(0.0, 0.0, 0.5);
    CHECK(q.coefA == 0.0);
    CHECK(q.coefB == 0.0);

    const auto half = discriminant(0.5, 0.5, 0.5);
    CHECK(half.delta < 0);
    CHECK(half.reduced < 0);
    CHECK(half.reduced / (std::sqrt(0.5) + 1) == doctest::Approx(0.5 - 2 + std::sqrt(2.0)));
    REQUIRE(half.signs_agree);
    CHECK(*half.signs_agree);
    CHECK_FALSE(discriminant(0.5, 0.5, 0.7).signs_agree);

    const auto sweep = discriminant_grid_sweep(201, 0.5);
    CHECK(sweep.max_delta <= 1e-12);
    CHECK(sweep.violations.empty());
    CHECK(sweep.sign_disagreements == 0);

    const auto bad = discriminant_grid_sweep(201, 2.0);
    CHECK(bad.max_delta > 0);
    CHECK_FALSE(bad.violations.empty());
}

TEST_CASE("at c = 1/2 the discriminant factors through the reduced form") {
    for (int i = 0; i <= 40; ++i)
        for (int j = i; j <= 40; ++j) {
            const double a0 = i / 40.0, a1 = j / 40.0;
            const double y = a1, r = std::sqrt(1 - (a0 + a1) / 2), t = std::sqrt(1 - a1);
            const auto d = discriminant(a0, a1, 0.5);
            CHECK(d.delta == doctest::Approx(y * (r + t) * d.reduced).epsilon(1e-12).scale(1));
        }
}

TEST_CASE("five-point sweep and feasible constants") {
    const auto ok = five_point_sweep(0.5, 100000, 42);
    CHECK(ok.violations == 0);
    CHECK(ok.witnesses.empty());

    CHECK(constant_feasible(0.5, 201, 20000, 1));
    CHECK(constant_feasible(0.3, 201, 20000, 1));
    std::optional<GridPoint> w;
    CHECK_FALSE(constant_feasible(2.0, 201, 20000, 1, &w));
    CHECK(w.has_value());

    const auto best = best_feasible_c(201, 20000, 1);
    CHECK(best.best >= 0.5);
    CHECK(best.best < 0.6);
    CHECK(best.infeasible_above > best.best);
}

TEST_CASE("square-root identities") {
    const auto eq = sqrt_identities(0.4, 0.4);
    CHECK(eq.first == 0.0);
    const auto ends = sqrt_identities(0.0, 1.0);
    CHECK(ends.first < 1e-15);
    CHECK(ends.second < 1e-15);
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> unit(0, 1);
    for (int k = 0; k < 10000; ++k) {
        double a0 = unit(rng), a1 = unit(rng);
        if (a0 > a1) std::swap(a0, a1);
        const auto r = sqrt_identities(a0, a1);
        CHECK(r.first < 1e-14);
        CHECK(r.second < 1e-14);
    }
}

TEST_CASE("averaging reduction") {
    const auto t42 = std::make_shared<const MonotoneSet>(threshold_set(4, 2));
    const auto sp = split(*t42);
    const auto piecewise = SetFunction::from(t42, [&](Index x) {
        if (!(x >> 3)) return -0.4;
        return sp.slice0->contains(x & 7) ? 0.9 : 0.1;
    });
    const auto flat = jensen_reduction_check(piecewise);
    CHECK(flat.lhs_averaged == doctest::Approx(flat.lhs_full).epsilon(1e-14));
    CHECK(flat.params.alpha == doctest::Approx(0.9));
    CHECK(flat.params.beta == doctest::Approx(0.1));
    CHECK(flat.params.gamma == doctest::Approx(-0.4));

    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto j = jensen_reduction_check(random_function(t42, seed));
        CHECK(j.reduced());
        CHECK(j.upper_variance_residual <= 1e-12);
        CHECK(j.lower_variance_residual <= 1e-12);
        CHECK(j.five_point_residual <= 1e-10);
        CHECK(j.rhs_averaged == doctest::Approx(j.rhs_full).epsilon(1e-12));
    }
}

TEST_CASE("the quadratic in T is nonnegative at c = 1/2") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> unit(0, 1), wide(-50, 50);
    double worst = INFINITY;
    for (int k = 0; k < 100; ++k) {
        double a0 = unit(rng), a1 = unit(rng);
        if (a0 > a1) std::swap(a0, a1);
        const auto q = quad_coeffs(a0, a1, 0.5);
        CHECK(q.coefA >= 0);
        for (int j = 0; j < 100000; ++j) {
            const double t = wide(rng);
            worst = std::min(worst, q(t) / std::max({1.0, q.coefA * t * t, std::abs(q.coefC)}));
        }
    }
    CHECK(worst >= -1e-12);
}
