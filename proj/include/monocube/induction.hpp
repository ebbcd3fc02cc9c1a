#pragma once

// Scalar certification of the induction step: the five-point inequality, the
// 2x2 Gram matrix behind the averaging reduction, the square-root identities
// and the discriminant of the final quadratic. The scalar kernels are
// templated so sweeps can be re-run in extended precision.

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "monocube/error.hpp"
#include "monocube/forms.hpp"

namespace monocube {

inline constexpr double kInequalityRelTol = 1e-12;
inline constexpr double kDiscriminantSlack = 1e-12;
inline constexpr double kDefaultConstant = 0.5;
inline constexpr int kDefaultGridResolution = 1001;
inline constexpr std::uint64_t kDefaultSeed = 20250101;

/// Densities of the two slices (a0 <= a1), the values of the piecewise
/// constant restrictions (alpha = f1 on A0, beta = f1 on A1 \ A0,
/// gamma = f0 on A0) and the candidate constant c.
template <typename Scalar>
struct InductionParams {
    Scalar a0{0}, a1{0};
    Scalar alpha{0}, beta{0}, gamma{0};
    Scalar c{kDefaultConstant};

    Scalar a() const { return (a0 + a1) / 2; }
    Scalar s() const { using std::sqrt; return sqrt(1 - a0); }
    Scalar t() const { using std::sqrt; return sqrt(1 - a1); }
};

template <typename Scalar>
void check_densities(Scalar a0, Scalar a1) {
    if (!(a0 >= 0 && a1 <= 1 && a0 <= a1)) throw Error("densities must satisfy 0 <= a0 <= a1 <= 1");
}

/// Absolute slack 1e-12 scaled by max(|lhs|, |rhs|, 1).
template <typename Scalar>
Scalar inequality_slack(Scalar lhs, Scalar rhs) {
    using std::abs;
    return Scalar(kInequalityRelTol) * std::max({abs(lhs), abs(rhs), Scalar(1)});
}

template <typename Scalar>
struct FivePointResult {
    Scalar lhs;
    Scalar rhs;
    bool holds;
};

/// c (sqrt(1-a) - sqrt(1-a1)) (a1-a0) (alpha-beta)^2 + (a1/2) (gamma-alpha)^2
///   >= c/(a1+a0) (1 - sqrt(1-a)) [a1 (beta-gamma) + a0 (alpha-beta)]^2
template <typename Scalar>
FivePointResult<Scalar> five_point(const InductionParams<Scalar>& p) {
    using std::sqrt;
    check_densities(p.a0, p.a1);
    if (p.a0 + p.a1 <= 0) throw Error("degenerate densities");
    const Scalar r = sqrt(1 - p.a());
    const Scalar ab = p.alpha - p.beta;
    const Scalar ga = p.gamma - p.alpha;
    const Scalar mix = p.a1 * (p.beta - p.gamma) + p.a0 * ab;
    const Scalar lhs = p.c * (r - p.t()) * (p.a1 - p.a0) * ab * ab + p.a1 / 2 * ga * ga;
    const Scalar rhs = p.c / (p.a1 + p.a0) * (1 - r) * mix * mix;
    return {lhs, rhs, lhs >= rhs - inequality_slack(lhs, rhs)};
}

/// The inequality cleared of square-root denominators, i.e.
/// 2 (sqrt(1-a1) + sqrt(1-a)) (1 + sqrt(1-a)) (lhs - rhs) of five_point:
///   c (1-t) (a1-a0)^2 (alpha-beta)^2 + a1 (1 + r - c a1) (r + t) (alpha-gamma)^2
///   - 2 c (r + t) a1 (a0-a1) (alpha-beta) (alpha-gamma)
template <typename Scalar>
Scalar cleared_five_point_gap(const InductionParams<Scalar>& p) {
    using std::sqrt;
    const Scalar r = sqrt(1 - p.a());
    const Scalar t = p.t();
    const Scalar ab = p.alpha - p.beta;
    const Scalar ag = p.alpha - p.gamma;
    const Scalar da = p.a1 - p.a0;
    return p.c * (1 - t) * da * da * ab * ab + p.a1 * (1 + r - p.c * p.a1) * (r + t) * ag * ag -
           2 * p.c * (r + t) * p.a1 * (p.a0 - p.a1) * ab * ag;
}

/// G = [[a0 (r - s + 1)/2, a0/2], [a0/2, a0 (r - t + 1)/2]] with r = sqrt(1-a).
template <typename Scalar>
Eigen::Matrix<Scalar, 2, 2> g_matrix(Scalar a0, Scalar a1) {
    using std::sqrt;
    check_densities(a0, a1);
    const Scalar r = sqrt(1 - (a0 + a1) / 2);
    Eigen::Matrix<Scalar, 2, 2> g;
    g << a0 * (r - sqrt(1 - a0) + 1) / 2, a0 / 2,
         a0 / 2, a0 * (r - sqrt(1 - a1) + 1) / 2;
    return g;
}

template <typename Scalar>
struct PsdMargin {
    Scalar direct;    // (r - s + 1)(r - t + 1) - 1
    Scalar factored;  // -(1/2)(s + t - 2)(sqrt(2) sqrt(s^2 + t^2) - s - t)
};

/// det(G) = (a0^2/4) * margin, so margin >= 0 is the PSD condition.
template <typename Scalar>
PsdMargin<Scalar> g_psd_margin(Scalar a0, Scalar a1) {
    using std::sqrt;
    check_densities(a0, a1);
    const Scalar s = sqrt(1 - a0);
    const Scalar t = sqrt(1 - a1);
    const Scalar r = sqrt((s * s + t * t) / 2);
    const Scalar direct = (r - s + 1) * (r - t + 1) - 1;
    const Scalar factored = -(s + t - 2) * (sqrt(Scalar(2)) * sqrt(s * s + t * t) - s - t) / 2;
    return {direct, factored};
}

/// Coefficients of coefA T^2 + coefB T + coefC, the cleared gap divided by
/// (alpha - gamma)^2 with T = (alpha - beta)(a1 - a0)/(alpha - gamma).
template <typename Scalar>
struct QuadCoeffs {
    Scalar coefA, coefB, coefC;

    Scalar operator()(Scalar t) const { return (coefA * t + coefB) * t + coefC; }
    Scalar discriminant() const { return coefB * coefB - 4 * coefA * coefC; }
};

template <typename Scalar>
QuadCoeffs<Scalar> quad_coeffs(Scalar a0, Scalar a1, Scalar c) {
    using std::sqrt;
    check_densities(a0, a1);
    const Scalar r = sqrt(1 - (a0 + a1) / 2);
    const Scalar t = sqrt(1 - a1);
    return {c * (1 - t), 2 * c * (r + t) * a1, a1 * (1 + r - c * a1) * (r + t)};
}

/// T for the given parameters; nullopt in the alpha == gamma case, where the
/// inequality holds without it.
template <typename Scalar>
std::optional<Scalar> t_variable(const InductionParams<Scalar>& p) {
    if (p.alpha == p.gamma) return std::nullopt;
    return (p.alpha - p.beta) / (p.alpha - p.gamma) * (p.a1 - p.a0);
}

template <typename Scalar>
struct DiscriminantResult {
    Scalar delta;    // coefB^2 - 4 coefA coefC
    Scalar reduced;  // (sqrt(1 - (a0+a1)/2) + 1)(a1 - 2 + 2 sqrt(1 - a1))
    /// At c = 1/2 only: whether delta <= slack and reduced <= slack agree.
    std::optional<bool> signs_agree;
};

template <typename Scalar>
DiscriminantResult<Scalar> discriminant(Scalar a0, Scalar a1, Scalar c) {
    using std::sqrt;
    const auto q = quad_coeffs(a0, a1, c);
    const Scalar reduced = (sqrt(1 - (a0 + a1) / 2) + 1) * (a1 - 2 + 2 * sqrt(1 - a1));
    DiscriminantResult<Scalar> out{q.discriminant(), reduced, std::nullopt};
    if (c == Scalar(kDefaultConstant)) {
        const Scalar slack(kDiscriminantSlack);
        out.signs_agree = (out.delta <= slack) == (reduced <= slack);
    }
    return out;
}

template <typename Scalar>
struct SqrtResiduals {
    Scalar first;   // sqrt(1-a) - sqrt(1-a1) = (a1-a0) / (2 (sqrt(1-a) + sqrt(1-a1)))
    Scalar second;  // 1 - sqrt(1-a) = (a1+a0) / (2 (1 + sqrt(1-a)))
};

/// Relative residuals, with an absolute floor of 1 on the scale.
template <typename Scalar>
SqrtResiduals<Scalar> sqrt_identities(Scalar a0, Scalar a1) {
    using std::abs;
    using std::sqrt;
    check_densities(a0, a1);
    const Scalar r = sqrt(1 - (a0 + a1) / 2);
    const Scalar t = sqrt(1 - a1);
    const Scalar lhs1 = r - t;
    const Scalar rhs1 = (r + t) > 0 ? (a1 - a0) / (2 * (r + t)) : Scalar(0);
    const Scalar lhs2 = 1 - r;
    const Scalar rhs2 = (a1 + a0) / (2 * (1 + r));
    return {abs(lhs1 - rhs1) / std::max(abs(lhs1), Scalar(1)), abs(lhs2 - rhs2) / std::max(abs(lhs2), Scalar(1))};
}

// ---------------------------------------------------------------------------
// Sweeps over the triangular grid {(i/(res-1), j/(res-1)) : i <= j} and over
// seeded random parameter draws.

struct GridPoint {
    double a0 = 0.0;
    double a1 = 0.0;
};

struct PsdSweep {
    int resolution = 0;
    std::size_t points = 0;
    double min_margin = 0.0;
    GridPoint argmin;
    double min_trace = 0.0;
    double max_form_disagreement = 0.0;  // |direct - factored|
};

PsdSweep psd_grid_sweep(int resolution = kDefaultGridResolution);

struct DiscriminantSweep {
    int resolution = 0;
    double c = kDefaultConstant;
    std::size_t points = 0;
    double max_delta = 0.0;
    GridPoint argmax;
    std::size_t sign_disagreements = 0;
    std::vector<GridPoint> violations;  // delta > slack, sorted, capped
};

DiscriminantSweep discriminant_grid_sweep(int resolution = kDefaultGridResolution, double c = kDefaultConstant);

struct FivePointSweep {
    double c = kDefaultConstant;
    std::uint64_t seed = kDefaultSeed;
    std::size_t draws = 0;
    std::size_t violations = 0;
    double worst_margin = 0.0;  // min over draws of lhs - rhs + slack
    std::vector<InductionParams<double>> witnesses;  // first few, sorted by a0 then a1
};

/// Draws a0 <= a1 from two sorted uniforms on [0,1] and alpha, beta, gamma uniform on [-1,1].
FivePointSweep five_point_sweep(double c, std::size_t draws, std::uint64_t seed = kDefaultSeed);

struct FeasibleC {
    double best = 0.0;
    double infeasible_above = 0.0;
    std::optional<GridPoint> witness;  // a failing grid point at infeasible_above, if any
    int iterations = 0;
};

/// Whether c passes both the discriminant grid and the five-point sweep.
bool constant_feasible(double c, int resolution, std::size_t draws, std::uint64_t seed,
                       std::optional<GridPoint>* witness = nullptr);

/// Bisection on c over [0, 2] for the largest feasible constant.
FeasibleC best_feasible_c(int resolution = kDefaultGridResolution, std::size_t draws = 100000,
                          std::uint64_t seed = kDefaultSeed);

struct JensenCheck {
    double lhs_full = 0.0;
    double lhs_averaged = 0.0;
    double rhs_full = 0.0;
    double rhs_averaged = 0.0;
    InductionParams<double> params;  // a0, a1, alpha, beta, gamma, c of the averaged function
    /// |Var_{A1}[averaged f1] - (a1 a0 - a0^2)/a1^2 (alpha - beta)^2| and |Var_{A0}[averaged f0]|.
    double upper_variance_residual = 0.0;
    double lower_variance_residual = 0.0;
    /// The averaged sides equal (a0/a1) times the five-point sides; worst relative mismatch.
    double five_point_residual = 0.0;

    bool reduced() const { return lhs_averaged <= lhs_full + kInequalityRelTol; }
};

/// Left and right sides of
///   c a1 (r - t) Var_{A1}[f1] + c a0 (r - s) Var_{A0}[f0] + (a0/2) E_{A0}[(f0-f1)^2]
///     >= c a1 a0 / (a0 + a1) (1 - r) (mu1 - mu0)^2
/// for f and for f with f1 averaged on A0 and on A1 \ A0 and f0 averaged on A0.
JensenCheck jensen_reduction_check(const SetFunction& f, double c = kDefaultConstant);

}  // namespace monocube
