#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "monocube/cube.hpp"

namespace monocube {

/// Relative tolerance for the decomposition identities, and the absolute
/// floor used when the left-hand side vanishes.
inline constexpr double kIdentityRelTol = 1e-10;
inline constexpr double kIdentityAbsFloor = 1e-14;

/// A real function on the members of a monotone set, values stored in
/// ascending member order.
class SetFunction {
public:
    SetFunction(std::shared_ptr<const MonotoneSet> set, Eigen::VectorXd values);
    SetFunction(const MonotoneSet& set, Eigen::VectorXd values);

    static SetFunction from(std::shared_ptr<const MonotoneSet> set, const std::function<double(Index)>& fn);
    static SetFunction constant(std::shared_ptr<const MonotoneSet> set, double c);

    const MonotoneSet& set() const noexcept { return *set_; }
    const std::shared_ptr<const MonotoneSet>& set_ptr() const noexcept { return set_; }
    const Eigen::VectorXd& values() const noexcept { return values_; }

    /// Value at member x; errors if x is not a member.
    double at(Index x) const;
    double mean() const;

private:
    std::shared_ptr<const MonotoneSet> set_;
    Eigen::VectorXd values_;
};

SetFunction dictator_function(std::shared_ptr<const MonotoneSet> set, int coord);
SetFunction weight_function(std::shared_ptr<const MonotoneSet> set);
SetFunction indicator_function(std::shared_ptr<const MonotoneSet> set, Index point);
/// Independent uniform values in [-1, 1].
SetFunction random_function(std::shared_ptr<const MonotoneSet> set, std::uint64_t seed);

/// (1/4) sum_i E_{x~A}[(f(x) - f(x^i))^2 1{x^i in A}].
double dirichlet_form(const SetFunction& f);

/// Variance of f(x) for x uniform on A.
double variance(const SetFunction& f);

/// Var_A[f] / E_A(f); nullopt when the form vanishes.
std::optional<double> poincare_ratio(const SetFunction& f);

/// f0(x') = f(x', 0) on slice0 and f1(x') = f(x', 1) on slice1.
struct Restriction {
    SplitPair split;
    std::optional<SetFunction> f0;  // absent when slice0 is empty
    SetFunction f1;
    double mean0 = 0.0;
    double mean1 = 0.0;
};

Restriction restrict(const SetFunction& f);

struct DecompositionReport {
    std::string identity;
    double lhs = 0.0;
    std::vector<std::pair<std::string, double>> terms;
    double residual = 0.0;
    double relative_residual = 0.0;
    /// Variance identity only: mismatch between the two written forms of the
    /// cross coefficient.
    double coefficient_residual = 0.0;
    double tol = kIdentityRelTol;

    double rhs() const;
    bool passed() const { return relative_residual <= tol && coefficient_residual <= tol; }
};

/// E_A(f) against (a1/2a) E_{A1}(f1) + (a0/2a) E_{A0}(f0) + (a0/4a) E_{A0}[(f0 - f1)^2].
DecompositionReport check_dirichlet_decomposition(const SetFunction& f, double tol = kIdentityRelTol);

/// Var_A[f] against (a1/2a) Var_{A1}[f1] + (a0/2a) Var_{A0}[f0] + a1 a0/(a0+a1)^2 (mu1 - mu0)^2.
DecompositionReport check_variance_decomposition(const SetFunction& f, double tol = kIdentityRelTol);

/// The cross coefficient written two ways: (a1 a0^2 + a0 a1^2)/(8 a^3) and a1 a0/(a0+a1)^2.
std::pair<double, double> variance_cross_coefficients(double a0, double a1);

}  // namespace monocube
