#include "monocube/induction.hpp"

#include <algorithm>
#include <random>
#include <tuple>

#include "monocube/numeric.hpp"

namespace monocube {

namespace {

constexpr std::size_t kMaxWitnesses = 16;

template <typename Visit>
void for_each_grid_point(int resolution, Visit&& visit) {
    if (resolution < 2) throw Error("grid resolution must be at least 2");
    const double step = 1.0 / (resolution - 1);
    for (int j = 0; j < resolution; ++j) {
        // Exact endpoints; j * step can land a hair off 1.
        const double a1 = j == resolution - 1 ? 1.0 : j * step;
        for (int i = 0; i <= j; ++i) visit(GridPoint{i == j ? a1 : i * step, a1});
    }
}

bool grid_less(const GridPoint& x, const GridPoint& y) { return std::tie(x.a0, x.a1) < std::tie(y.a0, y.a1); }

struct FivePointTerms {
    double lhs;
    double rhs;
};

// Both sides of the five-point inequality before the piecewise-constant reduction.
FivePointTerms five_point_terms(const SetFunction& f0, const SetFunction& f1, double a0, double a1, double c) {
    const double r = std::sqrt(1 - (a0 + a1) / 2);
    CompensatedSum<> gap;
    const auto members0 = f0.set().members();
    for (std::size_t k = 0; k < members0.size(); ++k) {
        const double d = f0.values()[static_cast<Eigen::Index>(k)] - f1.at(members0[k]);
        gap += d * d;
    }
    const double mean_gap = gap.value() / static_cast<double>(members0.size());
    const double lhs = c * a1 * (r - std::sqrt(1 - a1)) * variance(f1) +
                       c * a0 * (r - std::sqrt(1 - a0)) * variance(f0) + a0 / 2 * mean_gap;
    const double dm = f1.mean() - f0.mean();
    const double rhs = c * a1 * a0 / (a0 + a1) * (1 - r) * dm * dm;
    return {lhs, rhs};
}

}  // namespace

PsdSweep psd_grid_sweep(int resolution) {
    PsdSweep out;
    out.resolution = resolution;
    out.min_margin = std::numeric_limits<double>::infinity();
    out.min_trace = std::numeric_limits<double>::infinity();
    for_each_grid_point(resolution, [&](GridPoint p) {
        ++out.points;
        const auto m = g_psd_margin(p.a0, p.a1);
        if (m.direct < out.min_margin) {
            out.min_margin = m.direct;
            out.argmin = p;
        }
        out.min_trace = std::min(out.min_trace, g_matrix(p.a0, p.a1).trace());
        out.max_form_disagreement = std::max(out.max_form_disagreement, std::abs(m.direct - m.factored));
    });
    return out;
}

DiscriminantSweep discriminant_grid_sweep(int resolution, double c) {
    DiscriminantSweep out;
    out.resolution = resolution;
    out.c = c;
    out.max_delta = -std::numeric_limits<double>::infinity();
    for_each_grid_point(resolution, [&](GridPoint p) {
        ++out.points;
        const auto d = discriminant(p.a0, p.a1, c);
        if (d.delta > out.max_delta) {
            out.max_delta = d.delta;
            out.argmax = p;
        }
        if (d.signs_agree && !*d.signs_agree) ++out.sign_disagreements;
        if (d.delta > kDiscriminantSlack && out.violations.size() < kMaxWitnesses) out.violations.push_back(p);
    });
    std::sort(out.violations.begin(), out.violations.end(), grid_less);
    return out;
}

FivePointSweep five_point_sweep(double c, std::size_t draws, std::uint64_t seed) {
    FivePointSweep out;
    out.c = c;
    out.seed = seed;
    out.draws = draws;
    out.worst_margin = std::numeric_limits<double>::infinity();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> value(-1.0, 1.0);
    for (std::size_t k = 0; k < draws; ++k) {
        InductionParams<double> p;
        p.a0 = unit(rng);
        p.a1 = unit(rng);
        if (p.a0 > p.a1) std::swap(p.a0, p.a1);
        p.alpha = value(rng);
        p.beta = value(rng);
        p.gamma = value(rng);
        p.c = c;
        if (p.a0 + p.a1 <= 0) continue;
        const auto res = five_point(p);
        out.worst_margin = std::min(out.worst_margin, res.lhs - res.rhs + inequality_slack(res.lhs, res.rhs));
        if (!res.holds) {
            ++out.violations;
            if (out.witnesses.size() < kMaxWitnesses) out.witnesses.push_back(p);
        }
    }
    std::sort(out.witnesses.begin(), out.witnesses.end(), [](const auto& x, const auto& y) {
        return std::tie(x.a0, x.a1, x.alpha, x.beta, x.gamma) < std::tie(y.a0, y.a1, y.alpha, y.beta, y.gamma);
    });
    return out;
}

bool constant_feasible(double c, int resolution, std::size_t draws, std::uint64_t seed,
                       std::optional<GridPoint>* witness) {
    const auto grid = discriminant_grid_sweep(resolution, c);
    if (grid.max_delta > kDiscriminantSlack) {
        if (witness) *witness = grid.argmax;
        return false;
    }
    const auto sweep = five_point_sweep(c, draws, seed);
    if (sweep.violations > 0) {
        if (witness) *witness = GridPoint{sweep.witnesses.front().a0, sweep.witnesses.front().a1};
        return false;
    }
    return true;
}

FeasibleC best_feasible_c(int resolution, std::size_t draws, std::uint64_t seed) {
    if (resolution < 100) throw Error("grid resolution must be at least 100");
    FeasibleC out;
    double lo = 0.0, hi = 2.0;
    std::optional<GridPoint> w;
    if (constant_feasible(hi, resolution, draws, seed, &w)) {
        out.best = hi;
        out.infeasible_above = hi;
        return out;
    }
    out.witness = w;
    while (hi - lo > 1e-9) {
        const double mid = (lo + hi) / 2;
        ++out.iterations;
        if (constant_feasible(mid, resolution, draws, seed, &w)) {
            lo = mid;
        } else {
            hi = mid;
            out.witness = w;
        }
    }
    out.best = lo;
    out.infeasible_above = hi;
    return out;
}

JensenCheck jensen_reduction_check(const SetFunction& f, double c) {
    const Restriction r = restrict(f);
    if (!r.f0) throw Error("reduction needs a non-empty lower slice");
    const double a0 = r.split.density0;
    const double a1 = r.split.density1;
    const SetFunction& f0 = *r.f0;
    const SetFunction& f1 = r.f1;

    const auto& slice0 = f0.set();
    CompensatedSum<> on_lower, on_rest;
    std::size_t rest_count = 0;
    const auto members1 = f1.set().members();
    for (std::size_t k = 0; k < members1.size(); ++k) {
        const double v = f1.values()[static_cast<Eigen::Index>(k)];
        if (slice0.contains(members1[k])) {
            on_lower += v;
        } else {
            on_rest += v;
            ++rest_count;
        }
    }
    const double alpha = on_lower.value() / static_cast<double>(slice0.size());
    const double beta = rest_count ? on_rest.value() / static_cast<double>(rest_count) : alpha;
    const double gamma = r.mean0;

    const SetFunction f1_avg = SetFunction::from(f1.set_ptr(), [&](Index x) {
        return slice0.contains(x) ? alpha : beta;
    });
    const SetFunction f0_avg = SetFunction::constant(f0.set_ptr(), gamma);

    JensenCheck out;
    const auto full = five_point_terms(f0, f1, a0, a1, c);
    const auto avg = five_point_terms(f0_avg, f1_avg, a0, a1, c);
    out.lhs_full = full.lhs;
    out.rhs_full = full.rhs;
    out.lhs_averaged = avg.lhs;
    out.rhs_averaged = avg.rhs;
    out.params = InductionParams<double>{a0, a1, alpha, beta, gamma, c};

    const double closed = (a1 * a0 - a0 * a0) / (a1 * a1) * (alpha - beta) * (alpha - beta);
    out.upper_variance_residual = std::abs(variance(f1_avg) - closed);
    out.lower_variance_residual = std::abs(variance(f0_avg));

    const auto fp = five_point(out.params);
    const double scale = a0 / a1;
    out.five_point_residual = std::max(relative_difference(avg.lhs, scale * fp.lhs, avg.lhs, 1.0),
                                       relative_difference(avg.rhs, scale * fp.rhs, avg.rhs, 1.0));
    return out;
}

}  // namespace monocube
