#include "monocube/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCore>
#include <cmath>
#include <queue>
#include <random>

#include "monocube/error.hpp"

namespace monocube {

namespace {

constexpr int kKrylovDim = 80;
constexpr int kMaxRestarts = 2000;

void remove_mean(Eigen::Ref<Eigen::VectorXd> v) { v.array() -= v.mean(); }

EigenPair dense_pair(const SparseMatrix& m) {
    const Eigen::MatrixXd dense = Eigen::MatrixXd(m);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense);
    if (es.info() != Eigen::Success) throw ConvergenceError("dense eigensolver failed", 0.0);
    // Constants span the kernel of a connected Laplacian; the second eigenpair
    // is the smallest on their complement.
    EigenPair out;
    out.method = EigenMethod::dense;
    out.vector = es.eigenvectors().col(1);
    remove_mean(out.vector);
    out.vector.normalize();
    out.value = out.vector.dot(m * out.vector);
    out.residual = (m * out.vector - out.value * out.vector).norm();
    return out;
}

// Explicitly restarted Lanczos on the mean-zero subspace. Each cycle builds a
// Krylov basis with full reorthogonalization and restarts from the smallest
// Ritz vector until ||M y - theta y|| <= tol.
EigenPair lanczos_pair(const SparseMatrix& m, double tol) {
    const Eigen::Index n = m.rows();
    const int dim = static_cast<int>(std::min<Eigen::Index>(kKrylovDim, n - 1));

    Eigen::VectorXd start(n);
    std::mt19937_64 rng(0x9e3779b97f4a7c15ULL);
    std::normal_distribution<double> gauss;
    for (Eigen::Index k = 0; k < n; ++k) start[k] = gauss(rng);
    remove_mean(start);
    start.normalize();

    Eigen::MatrixXd basis(n, dim + 1);
    Eigen::VectorXd alpha(dim), beta(dim);
    double residual = std::numeric_limits<double>::infinity();
    EigenPair out;
    out.method = EigenMethod::iterative;

    for (int restart = 0; restart < kMaxRestarts; ++restart) {
        basis.col(0) = start;
        int steps = dim;
        for (int j = 0; j < dim; ++j) {
            Eigen::VectorXd w = m * basis.col(j);
            alpha[j] = basis.col(j).dot(w);
            w -= alpha[j] * basis.col(j);
            if (j > 0) w -= beta[j - 1] * basis.col(j - 1);
            for (int pass = 0; pass < 2; ++pass) {
                const auto active = basis.leftCols(j + 1);
                w -= active * (active.transpose() * w);
                remove_mean(w);
            }
            beta[j] = w.norm();
            if (beta[j] <= 1e-13 * std::max(1.0, std::abs(alpha[j]))) {
                steps = j + 1;
                break;
            }
            basis.col(j + 1) = w / beta[j];
        }

        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
        tri.computeFromTridiagonal(alpha.head(steps), beta.head(std::max(steps - 1, 0)));
        Eigen::VectorXd y = basis.leftCols(steps) * tri.eigenvectors().col(0);
        remove_mean(y);
        y.normalize();

        const Eigen::VectorXd my = m * y;
        const double theta = y.dot(my);
        residual = (my - theta * y).norm();
        out.iterations = restart + 1;
        if (residual <= tol) {
            out.value = theta;
            out.vector = std::move(y);
            out.residual = residual;
            return out;
        }
        start = std::move(y);
    }
    throw ConvergenceError("Lanczos did not reach residual tolerance", residual);
}

}  // namespace

std::string to_string(EigenMethod m) {
    switch (m) {
        case EigenMethod::automatic: return "auto";
        case EigenMethod::dense: return "dense";
        case EigenMethod::iterative: return "iterative";
        case EigenMethod::trivial: return "trivial";
    }
    return "unknown";
}

EigenMethod parse_eigen_method(const std::string& s) {
    if (s == "auto") return EigenMethod::automatic;
    if (s == "dense") return EigenMethod::dense;
    if (s == "iterative") return EigenMethod::iterative;
    throw Error("unknown eigen method '" + s + "'");
}

InducedLaplacian::InducedLaplacian(const MonotoneSet& set) {
    const auto members = set.members();
    const auto size = static_cast<Eigen::Index>(members.size());
    std::vector<Eigen::Triplet<double>> entries;
    entries.reserve(members.size() * static_cast<std::size_t>(set.dim() + 1));
    degrees_.setZero(size);
    for (Eigen::Index r = 0; r < size; ++r) {
        const Index x = members[static_cast<std::size_t>(r)];
        for (int i = 0; i < set.dim(); ++i) {
            if (auto c = set.rank(x ^ (Index{1} << i))) {
                entries.emplace_back(r, static_cast<Eigen::Index>(*c), -1.0);
                degrees_[r] += 1.0;
            }
        }
        entries.emplace_back(r, r, degrees_[r]);
    }
    matrix_.resize(size, size);
    matrix_.setFromTriplets(entries.begin(), entries.end());
    edges_ = static_cast<std::size_t>(degrees_.sum()) / 2;
}

double InducedLaplacian::quadratic_form(const Eigen::VectorXd& f) const { return f.dot(matrix_ * f); }

bool is_connected(const SparseMatrix& pattern) {
    const Eigen::Index n = pattern.rows();
    if (n == 0) return true;
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    std::queue<Eigen::Index> q;
    q.push(0);
    seen[0] = 1;
    Eigen::Index reached = 1;
    while (!q.empty()) {
        const auto r = q.front();
        q.pop();
        for (SparseMatrix::InnerIterator it(pattern, r); it; ++it) {
            if (it.value() == 0.0 || seen[static_cast<std::size_t>(it.col())]) continue;
            seen[static_cast<std::size_t>(it.col())] = 1;
            ++reached;
            q.push(it.col());
        }
    }
    return reached == n;
}

EigenPair smallest_nonconstant_eigenpair(const SparseMatrix& m, EigenMethod method, double tol) {
    if (m.rows() < 2) throw Error("no spectral gap for singleton");
    if (method == EigenMethod::automatic)
        method = static_cast<std::size_t>(m.rows()) <= kDenseEigenCap ? EigenMethod::dense : EigenMethod::iterative;
    if (method == EigenMethod::dense) return dense_pair(m);
    if (method == EigenMethod::iterative) return lanczos_pair(m, tol);
    throw Error("unsupported eigen method");
}

EigenPair lambda2(const InducedLaplacian& lap, EigenMethod method, double tol) {
    if (lap.size() < 2) throw Error("no spectral gap for singleton");
    if (!is_connected(lap.matrix())) throw Error("induced subgraph is disconnected");
    return smallest_nonconstant_eigenpair(lap.matrix(), method, tol);
}

std::pair<double, double> poincare_bounds(double density) {
    const double fp = 1.0 / (1.0 - std::sqrt(1.0 - density));
    return {fp, 2.0 * fp};
}

SpectralResult poincare_constant(const MonotoneSet& set, EigenMethod method) {
    SpectralResult out;
    out.n = set.dim();
    out.size = set.size();
    out.density = set.density();
    std::tie(out.bound_fp, out.bound_ours) = poincare_bounds(out.density);
    if (set.size() == 1) {
        // Var and E both vanish; the constant is 0 by convention.
        out.method = EigenMethod::trivial;
        out.eigenvector = Eigen::VectorXd::Zero(1);
        return out;
    }
    const InducedLaplacian lap(set);
    EigenPair pair = lambda2(lap, method);
    out.lambda2 = pair.value;
    out.cstar = 2.0 / pair.value;
    out.method = pair.method;
    out.residual = pair.residual;
    out.eigenvector = std::move(pair.vector);
    return out;
}

TheoremCertificate verify_theorem(std::shared_ptr<const MonotoneSet> set, EigenMethod method) {
    TheoremCertificate cert;
    cert.spectral = poincare_constant(*set, method);
    const auto& s = cert.spectral;
    cert.pass_fp = s.cstar <= s.bound_fp * (1.0 + kBoundRelTol);
    cert.pass_ours = s.cstar <= s.bound_ours * (1.0 + kBoundRelTol);
    if (set->size() > 1) {
        cert.witness = SetFunction(set, s.eigenvector);
        cert.witness_ratio = poincare_ratio(*cert.witness).value_or(0.0);
    }
    return cert;
}

}  // namespace monocube
