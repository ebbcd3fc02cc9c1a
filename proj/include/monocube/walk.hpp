#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <span>
#include <vector>

#include "monocube/cube.hpp"
#include "monocube/oracle.hpp"
#include "monocube/spectral.hpp"

namespace monocube {

inline constexpr double kDefaultLaziness = 0.5;
inline constexpr double kDefaultEpsilon = 0.25;
/// Sets up to this many members get an exhaustive worst-start scan.
inline constexpr std::size_t kExhaustiveStartCap = 4096;
/// Sets up to this many members get a direct dense eigensolve of P in chain_gap.
inline constexpr std::size_t kDirectGapCap = 2048;

/// Probability vector over the members of A, ascending member order.
using DistVector = Eigen::VectorXd;

/// The censored walk on A with holding probability theta: from x, propose
/// each coordinate flip with probability (1 - theta)/n and accept iff the
/// neighbor lies in A; all remaining mass stays at x. P is symmetric, so
/// the uniform law on A is stationary.
class CensoredKernel {
public:
    CensoredKernel(std::shared_ptr<const MonotoneSet> set, double theta = kDefaultLaziness);
    CensoredKernel(const MonotoneSet& set, double theta = kDefaultLaziness);

    const MonotoneSet& set() const noexcept { return *set_; }
    const std::shared_ptr<const MonotoneSet>& set_ptr() const noexcept { return set_; }
    double laziness() const noexcept { return theta_; }
    std::size_t size() const noexcept { return set_->size(); }

    /// Transition matrix, rows and columns in member order.
    const SparseMatrix& matrix() const noexcept { return p_; }

    /// P(x, y) for members x, y.
    double transition(Index x, Index y) const;

private:
    std::shared_ptr<const MonotoneSet> set_;
    double theta_;
    SparseMatrix p_;
};

DistVector uniform_distribution(const CensoredKernel& k);
DistVector point_mass(const CensoredKernel& k, Index x);

/// One application of P: returns dist P.
DistVector step(const CensoredKernel& k, const DistVector& dist);

/// Half the L1 distance, compensated summation.
double tv_distance(const Eigen::Ref<const Eigen::VectorXd>& p, const Eigen::Ref<const Eigen::VectorXd>& q);

enum class StartPolicy { automatic, exhaustive, heuristic };

std::string to_string(StartPolicy p);

struct MixingReport {
    int n = 0;
    std::size_t size = 0;
    double density = 0.0;
    double theta = 0.0;
    double epsilon = 0.0;
    long t_mix = 0;
    /// exhaustive: exact worst case. heuristic: max over minimal elements and
    /// the all-ones point, a lower bound on the worst case.
    StartPolicy policy = StartPolicy::exhaustive;
    Index worst_start = 0;
    std::size_t starts = 0;
    bool tv_monotone = true;  // per-start TV never increased
    double gap = 0.0;
    double t_rel = 0.0;
    double pi_min = 0.0;
    double log_factor = 0.0;  // ln(1 / (epsilon pi_min))
    long bound_spectral = 0;
    long bound_poincare = 0;
};

/// Smallest t with max over starts of ||P^t(u, .) - pi||_TV <= epsilon.
/// Fills the gap and both bounds when theta >= 1/2 and |A| >= 2.
MixingReport exact_tmix(const CensoredKernel& k, double epsilon, StartPolicy policy = StartPolicy::automatic,
                        int threads = 1, long max_steps = 1'000'000);

/// TV from each given start after t steps, one column per start.
Eigen::VectorXd tv_after(const CensoredKernel& k, std::span<const Index> starts, long t);

struct ChainGap {
    double gap = 0.0;                  // (1 - theta) lambda2 / n
    std::optional<double> direct;      // 1 - (second largest eigenvalue of P), small sets only
    double lambda2 = 0.0;
};

/// Spectral gap of P via the induced Laplacian; for |A| <= kDirectGapCap
/// also by a dense eigensolve of P, erroring if the two disagree beyond 1e-9.
ChainGap chain_gap(const CensoredKernel& k);

struct TmixBounds {
    long spectral = 0;   // ceil(ln(1/(eps pi_min)) / gap)
    long poincare = 0;   // ceil(ln(1/(eps pi_min)) n / ((1-theta)(1 - sqrt(1-a))))
    double log_factor = 0.0;
    double t_rel = 0.0;
    double t_rel_poincare = 0.0;
};

/// Relaxation-time bounds on t_mix(eps); requires theta >= 1/2.
TmixBounds tmix_bound(const CensoredKernel& k, double epsilon);
TmixBounds tmix_bound(const CensoredKernel& k, double epsilon, const ChainGap& gap);

/// Censored walk driven by a membership oracle, for dimensions beyond dense storage.
struct OracleKernel {
    MembershipOracle oracle;
    double theta = kDefaultLaziness;
};

struct SimulationStats {
    std::vector<double> tail_means;  // per coordinate, over the post-burn-in tail
    CubePoint final_point;
    std::size_t steps = 0;
    std::size_t tail_steps = 0;
    std::size_t accepted_moves = 0;
    bool stayed_inside = true;
};

/// One trajectory; the stream index selects an independent RNG stream under the same seed.
SimulationStats simulate(const OracleKernel& k, CubePoint start, std::size_t steps, std::uint64_t seed,
                         std::uint64_t stream = 0, double burn_in_fraction = 0.5);

struct EnsembleStats {
    std::vector<SimulationStats> chains;
    std::vector<double> coordinate_means;  // average over chains
    double pooled_mean = 0.0;              // mean over chains of the coordinate-averaged tail mean
    double pooled_stderr = 0.0;            // standard error of that mean across chains
};

EnsembleStats simulate_chains(const OracleKernel& k, CubePoint start, std::size_t steps, std::size_t chains,
                              std::uint64_t seed, int threads = 1, double burn_in_fraction = 0.5);

struct ScalingRow {
    int n = 0;
    int k = 0;
    std::size_t size = 0;
    double density = 0.0;
    double theta = 0.0;
    double epsilon = 0.0;
    long tmix = 0;
    StartPolicy policy = StartPolicy::exhaustive;
    double gap = 0.0;
    long bound_spectral = 0;
    long bound_poincare = 0;
    double log_factor = 0.0;
    double t_rel = 0.0;

    bool ordered() const { return tmix <= bound_spectral && bound_spectral <= bound_poincare; }
};

/// Majority sets {x : |x| >= (n+1)/2} for odd n.
std::vector<ScalingRow> scaling_experiment(const std::vector<int>& n_list, double theta, double epsilon,
                                           int threads = 1);

}  // namespace monocube
