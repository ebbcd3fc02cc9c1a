#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "monocube/cube.hpp"
#include "monocube/forms.hpp"

namespace monocube {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Sets up to this many members use the dense symmetric eigensolver.
inline constexpr std::size_t kDenseEigenCap = 1024;
inline constexpr double kEigenTol = 1e-10;
/// Relative slack allowed when comparing the optimal constant to a bound.
inline constexpr double kBoundRelTol = 1e-9;

enum class EigenMethod { automatic, dense, iterative, trivial };

std::string to_string(EigenMethod m);
EigenMethod parse_eigen_method(const std::string& s);

/// Degree-minus-adjacency matrix of the subgraph of the hypercube induced on
/// A, rows and columns in ascending member order.
class InducedLaplacian {
public:
    explicit InducedLaplacian(const MonotoneSet& set);

    std::size_t size() const noexcept { return static_cast<std::size_t>(matrix_.rows()); }
    const SparseMatrix& matrix() const noexcept { return matrix_; }
    const Eigen::VectorXd& degrees() const noexcept { return degrees_; }
    std::size_t edge_count() const noexcept { return edges_; }

    /// f^T L f = sum over edges (f(x) - f(y))^2.
    double quadratic_form(const Eigen::VectorXd& f) const;

private:
    SparseMatrix matrix_;
    Eigen::VectorXd degrees_;
    std::size_t edges_ = 0;
};

inline InducedLaplacian induced_laplacian(const MonotoneSet& set) { return InducedLaplacian(set); }

/// Whether the induced subgraph is connected.
bool is_connected(const SparseMatrix& adjacency_pattern);

struct EigenPair {
    double value = 0.0;
    Eigen::VectorXd vector;  // unit norm, orthogonal to constants
    double residual = 0.0;   // ||L v - value v|| / ||v||
    EigenMethod method = EigenMethod::automatic;
    int iterations = 0;
};

/// Smallest eigenvalue of a symmetric positive semidefinite matrix restricted
/// to the complement of the constant vector. Requires at least two rows.
/// Dense tridiagonalization up to kDenseEigenCap rows under `automatic`;
/// restarted Lanczos with full reorthogonalization otherwise.
EigenPair smallest_nonconstant_eigenpair(const SparseMatrix& m, EigenMethod method = EigenMethod::automatic,
                                         double tol = kEigenTol);

/// Second-smallest Laplacian eigenvalue; errors for singletons and for
/// disconnected induced subgraphs.
EigenPair lambda2(const InducedLaplacian& lap, EigenMethod method = EigenMethod::automatic, double tol = kEigenTol);

struct SpectralResult {
    int n = 0;
    std::size_t size = 0;
    double density = 0.0;
    double lambda2 = 0.0;
    double cstar = 0.0;       // 2 / lambda2, or 0 for a singleton
    double bound_fp = 0.0;    // 1 / (1 - sqrt(1 - a))
    double bound_ours = 0.0;  // 2 / (1 - sqrt(1 - a))
    EigenMethod method = EigenMethod::automatic;
    double residual = 0.0;
    Eigen::VectorXd eigenvector;

    double slack_fp() const { return bound_fp - cstar; }
    double slack_ours() const { return bound_ours - cstar; }
};

/// Optimal constant C*(A) = 2 / lambda2, the smallest C with Var_A[f] <= C E_A(f).
SpectralResult poincare_constant(const MonotoneSet& set, EigenMethod method = EigenMethod::automatic);

/// The two density bounds, 1/(1 - sqrt(1 - a)) and twice that.
std::pair<double, double> poincare_bounds(double density);

struct TheoremCertificate {
    SpectralResult spectral;
    bool pass_fp = false;
    bool pass_ours = false;
    std::optional<SetFunction> witness;  // eigenvector achieving the ratio cstar
    double witness_ratio = 0.0;

    bool passed() const { return pass_fp && pass_ours; }
};

/// Checks C*(A) against both bounds (relative slack kBoundRelTol). Singletons
/// pass vacuously with C* = 0.
TheoremCertificate verify_theorem(std::shared_ptr<const MonotoneSet> set,
                                  EigenMethod method = EigenMethod::automatic);

}  // namespace monocube
