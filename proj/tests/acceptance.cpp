// Acceptance suite: one line per criterion, non-zero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "monocube/commands.hpp"
#include "monocube/forms.hpp"
#include "monocube/induction.hpp"
#include "monocube/spectral.hpp"
#include "monocube/walk.hpp"
#include "oracles.hpp"

using namespace monocube;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

Outcome exhaustive_theorem() {
    const auto t0 = Clock::now();
    const std::size_t expected[] = {2, 5, 19, 167};
    bool counts_ok = true, bounds_ok = true;
    double min_slack_fp = INFINITY, min_slack_ours = INFINITY;
    for (int n = 1; n <= 4; ++n) {
        const auto sets = enumerate_monotone(n);
        counts_ok = counts_ok && sets.size() == expected[n - 1];
        for (const auto& s : sets) {
            const auto cert = verify_theorem(std::make_shared<const MonotoneSet>(s));
            bounds_ok = bounds_ok && cert.passed();
            min_slack_fp = std::min(min_slack_fp, cert.spectral.slack_fp());
            min_slack_ours = std::min(min_slack_ours, cert.spectral.slack_ours());
        }
    }
    const double secs = seconds_since(t0);
    return {counts_ok && bounds_ok && secs < 60,
            fmt("counts 2/5/19/167 %s, min slack %.3g (1/(1-r)) and %.3g (2/(1-r)), %.2fs",
                counts_ok ? "ok" : "WRONG", min_slack_fp, min_slack_ours, secs)};
}

Outcome full_cube_tightness() {
    double worst_c = 0, worst_ratio = INFINITY;
    for (int n = 2; n <= 10; ++n) {
        const auto cert = verify_theorem(std::make_shared<const MonotoneSet>(threshold_set(n, 0)));
        worst_c = std::max(worst_c, std::abs(cert.spectral.cstar - 1.0));
        worst_ratio = std::min(worst_ratio, cert.witness ? cert.witness_ratio : 0.0);
    }
    return {worst_c <= 1e-9 && worst_ratio >= 1 - 1e-9,
            fmt("max |C*-1| = %.3g, min witness ratio = %.12f over n=2..10", worst_c, worst_ratio)};
}

Outcome decomposition_identities() {
    double worst_d = 0, worst_v = 0;
    int failures = 0;
    for (int k = 0; k < 1000; ++k) {
        const int n = 2 + k % 9;
        std::mt19937_64 rng(kDefaultSeed + static_cast<std::uint64_t>(k));
        const int gens = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(2 * n));
        auto set = std::make_shared<const MonotoneSet>(random_upset(n, gens, rng()));
        const auto f = random_function(set, rng());
        const auto d = check_dirichlet_decomposition(f, 1e-10);
        const auto v = check_variance_decomposition(f, 1e-10);
        worst_d = std::max(worst_d, d.relative_residual);
        worst_v = std::max(worst_v, v.relative_residual);
        failures += !d.passed() + !v.passed();
    }
    return {failures == 0, fmt("1000 pairs, max residual %.3g (Dirichlet) %.3g (variance), %d failures", worst_d,
                               worst_v, failures)};
}

Outcome induction_suite() {
    const auto t0 = Clock::now();
    const auto psd = psd_grid_sweep(kDefaultGridResolution);
    const auto disc = discriminant_grid_sweep(kDefaultGridResolution, 0.5);
    const auto fp = five_point_sweep(0.5, 1'000'000, kDefaultSeed);
    const auto best = best_feasible_c(kDefaultGridResolution, 100'000, kDefaultSeed);
    const double secs = seconds_since(t0);
    const bool ok = psd.min_margin >= -1e-12 && disc.max_delta <= 1e-12 && fp.violations == 0 &&
                    best.best >= 0.5 && secs < 120;
    return {ok, fmt("min PSD margin %.3g, max discriminant %.3g, %zu/1e6 violations, best c %.6f, %.2fs",
                    psd.min_margin, disc.max_delta, fp.violations, best.best, secs)};
}

Outcome jensen_reduction() {
    double worst = -INFINITY;
    int failures = 0;
    const auto t42 = std::make_shared<const MonotoneSet>(threshold_set(4, 2));
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto j = jensen_reduction_check(random_function(t42, kDefaultSeed + seed));
        worst = std::max(worst, j.lhs_averaged - j.lhs_full);
        failures += !(j.lhs_averaged <= j.lhs_full + 1e-12);
    }
    return {failures == 0, fmt("100 instances, max (averaged - full) = %.3g", worst)};
}

Outcome mixing_table() {
    const auto t0 = Clock::now();
    const auto rows = scaling_experiment({3, 5, 7, 9, 11, 13}, 0.5, 0.25);
    bool ordered = true;
    double lo = INFINITY, hi = 0;
    for (const auto& r : rows) {
        ordered = ordered && r.ordered();
        const double shape = r.bound_poincare / (r.n * r.n * std::log(std::ldexp(4.0, r.n)));
        lo = std::min(lo, shape);
        hi = std::max(hi, shape);
    }
    const double secs = seconds_since(t0);
    std::string tm;
    for (const auto& r : rows) tm += (tm.empty() ? "" : "/") + std::to_string(r.tmix);
    return {ordered && hi / lo <= 4 && secs < 600,
            fmt("ordering %s, t_mix %s, Poincare/(n^2 ln(2^n*4)) band %.3f..%.3f (x%.2f), %.1fs",
                ordered ? "ok" : "VIOLATED", tm.c_str(), lo, hi, hi / lo, secs)};
}

Outcome oracle_equivalence() {
    double worst = 0;
    for (int n = 1; n <= 4; ++n)
        for (const auto& s : enumerate_monotone(n)) {
            const auto a = std::make_shared<const MonotoneSet>(s);
            const auto lap = induced_laplacian(*a);
            for (std::uint64_t seed = 0; seed < 10; ++seed) {
                const auto f = random_function(a, seed);
                const double e = dirichlet_form(f);
                const double quad = lap.quadratic_form(f.values()) / (2.0 * a->size());
                const double ref = std::max(std::abs(quad), 1e-300);
                worst = std::max({worst, std::abs(e - quad) / ref, std::abs(e - oracle::edge_dirichlet(f)) / ref});
            }
        }
    const CensoredKernel k(threshold_set(5, 3), 0.5);
    const long exact = exact_tmix(k, 0.25).t_mix;
    const long dense = oracle::dense_tmix(k.set(), 0.5, 0.25);
    return {worst <= 1e-12 && exact == dense,
            fmt("max relative form mismatch %.3g, t_mix threshold(5,3) %ld vs dense oracle %ld", worst, exact, dense)};
}

Outcome monte_carlo() {
    const int n = 25, k = 13;
    const OracleKernel kernel{MembershipOracle::threshold(n, k), 0.5};
    const CubePoint start{(std::uint64_t{1} << k) - 1, n};
    const auto steps = static_cast<std::size_t>(4 * n * n);
    const auto a = simulate_chains(kernel, start, steps, 64, kDefaultSeed);
    const auto b = simulate_chains(kernel, start, steps, 64, kDefaultSeed);
    const double truth = stationary_coordinate_mean(n, k);
    const double z = (a.pooled_mean - truth) / a.pooled_stderr;
    const bool same = a.pooled_mean == b.pooled_mean && a.coordinate_means == b.coordinate_means;
    return {std::abs(z) <= 3 && same,
            fmt("mean %.6f vs analytic %.6f, %.2f standard errors, rerun %s", a.pooled_mean, truth, z,
                same ? "identical" : "DIFFERS")};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"exhaustive theorem check n <= 4", exhaustive_theorem},
        {"full cube tightness n = 2..10", full_cube_tightness},
        {"decomposition identities", decomposition_identities},
        {"induction-step suite", induction_suite},
        {"averaging reduction", jensen_reduction},
        {"majority mixing table", mixing_table},
        {"oracle equivalence", oracle_equivalence},
        {"Monte Carlo threshold(25,13)", monte_carlo},
    };
    int failed = 0, idx = 0;
    for (const auto& [name, run] : criteria) {
        ++idx;
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += !o.pass;
        std::printf("[%s] criterion %d: %s: %s\n", o.pass ? "PASS" : "FAIL", idx, name, o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", idx - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
