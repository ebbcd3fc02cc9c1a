#include "monocube/walk.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <future>
#include <random>

#include "monocube/error.hpp"
#include "monocube/numeric.hpp"

namespace monocube {

namespace {

constexpr Eigen::Index kStartBlock = 256;

void check_epsilon(double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw Error("epsilon must lie in (0, 1)");
}

// Runs fn(0..count-1) over up to `threads` workers; results are written by index.
template <typename Fn>
void parallel_for(std::size_t count, int threads, Fn&& fn) {
    const auto workers = static_cast<std::size_t>(std::max(1, threads));
    if (workers == 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::future<void>> jobs;
    for (std::size_t w = 0; w < std::min(workers, count); ++w)
        jobs.push_back(std::async(std::launch::async, [&, w] {
            for (std::size_t i = w; i < count; i += workers) fn(i);
        }));
    for (auto& j : jobs) j.get();
}

struct BlockResult {
    std::vector<long> hit;  // first t with TV <= eps, per column
    bool monotone = true;
};

// Evolves the point masses at `starts` until every column is within eps of uniform.
BlockResult evolve_block(const CensoredKernel& k, std::span<const Index> starts, double epsilon, long max_steps) {
    const auto n = static_cast<Eigen::Index>(k.size());
    const auto cols = static_cast<Eigen::Index>(starts.size());
    const double pi = 1.0 / static_cast<double>(n);
    Eigen::MatrixXd dist = Eigen::MatrixXd::Zero(n, cols);
    for (Eigen::Index c = 0; c < cols; ++c)
        dist(static_cast<Eigen::Index>(*k.set().rank(starts[static_cast<std::size_t>(c)])), c) = 1.0;

    BlockResult out;
    out.hit.assign(static_cast<std::size_t>(cols), -1);
    std::vector<double> last(static_cast<std::size_t>(cols), 2.0);
    const Eigen::VectorXd uniform = Eigen::VectorXd::Constant(n, pi);
    Eigen::Index remaining = cols;
    for (long t = 0;; ++t) {
        for (Eigen::Index c = 0; c < cols; ++c) {
            const auto ci = static_cast<std::size_t>(c);
            if (out.hit[ci] >= 0) continue;
            const double tv = tv_distance(dist.col(c), uniform);
            if (tv > last[ci] + 1e-13) out.monotone = false;
            last[ci] = tv;
            if (tv <= epsilon) {
                out.hit[ci] = t;
                --remaining;
            }
        }
        if (remaining == 0) return out;
        if (t >= max_steps) throw Error("t_mix exceeds step cap " + std::to_string(max_steps));
        // P is symmetric, so column evolution P * dist is the row-vector law times P.
        dist = k.matrix() * dist;
    }
}

}  // namespace

CensoredKernel::CensoredKernel(std::shared_ptr<const MonotoneSet> set, double theta)
    : set_(std::move(set)), theta_(theta) {
    if (!set_) throw Error("kernel needs a set");
    if (!(theta >= 0.0 && theta < 1.0)) throw Error("laziness must lie in [0, 1)");
    const auto members = set_->members();
    const int n = set_->dim();
    const double move = (1.0 - theta) / n;
    std::vector<Eigen::Triplet<double>> entries;
    entries.reserve(members.size() * static_cast<std::size_t>(n + 1));
    for (std::size_t r = 0; r < members.size(); ++r) {
        const auto row = static_cast<Eigen::Index>(r);
        int accepted = 0;
        for (int i = 0; i < n; ++i) {
            if (auto c = set_->rank(members[r] ^ (Index{1} << i))) {
                entries.emplace_back(row, static_cast<Eigen::Index>(*c), move);
                ++accepted;
            }
        }
        entries.emplace_back(row, row, theta + (1.0 - theta) * (n - accepted) / n);
    }
    const auto size = static_cast<Eigen::Index>(members.size());
    p_.resize(size, size);
    p_.setFromTriplets(entries.begin(), entries.end());
}

CensoredKernel::CensoredKernel(const MonotoneSet& set, double theta)
    : CensoredKernel(std::make_shared<const MonotoneSet>(set), theta) {}

double CensoredKernel::transition(Index x, Index y) const {
    const auto rx = set_->rank(x);
    const auto ry = set_->rank(y);
    if (!rx || !ry) throw Error("transition endpoints must be members");
    return p_.coeff(static_cast<Eigen::Index>(*rx), static_cast<Eigen::Index>(*ry));
}

DistVector uniform_distribution(const CensoredKernel& k) {
    const auto n = static_cast<Eigen::Index>(k.size());
    return DistVector::Constant(n, 1.0 / static_cast<double>(n));
}

DistVector point_mass(const CensoredKernel& k, Index x) {
    const auto r = k.set().rank(x);
    if (!r) throw Error("start point is not a member");
    DistVector d = DistVector::Zero(static_cast<Eigen::Index>(k.size()));
    d[static_cast<Eigen::Index>(*r)] = 1.0;
    return d;
}

DistVector step(const CensoredKernel& k, const DistVector& dist) {
    if (static_cast<std::size_t>(dist.size()) != k.size()) throw Error("distribution length mismatch");
    return k.matrix() * dist;
}

double tv_distance(const Eigen::Ref<const Eigen::VectorXd>& p, const Eigen::Ref<const Eigen::VectorXd>& q) {
    CompensatedSum<> s;
    for (Eigen::Index i = 0; i < p.size(); ++i) s += std::abs(p[i] - q[i]);
    return 0.5 * s.value();
}

std::string to_string(StartPolicy p) {
    switch (p) {
        case StartPolicy::automatic: return "auto";
        case StartPolicy::exhaustive: return "exhaustive";
        case StartPolicy::heuristic: return "heuristic";
    }
    return "unknown";
}

Eigen::VectorXd tv_after(const CensoredKernel& k, std::span<const Index> starts, long t) {
    Eigen::VectorXd out(static_cast<Eigen::Index>(starts.size()));
    const DistVector u = uniform_distribution(k);
    for (std::size_t c = 0; c < starts.size(); ++c) {
        DistVector d = point_mass(k, starts[c]);
        for (long s = 0; s < t; ++s) d = step(k, d);
        out[static_cast<Eigen::Index>(c)] = tv_distance(d, u);
    }
    return out;
}

MixingReport exact_tmix(const CensoredKernel& k, double epsilon, StartPolicy policy, int threads, long max_steps) {
    check_epsilon(epsilon);
    const MonotoneSet& a = k.set();
    if (policy == StartPolicy::automatic)
        policy = a.size() <= kExhaustiveStartCap ? StartPolicy::exhaustive : StartPolicy::heuristic;

    std::vector<Index> starts;
    if (policy == StartPolicy::exhaustive) {
        starts.assign(a.members().begin(), a.members().end());
    } else {
        starts = a.minimal_elements();
        if (std::find(starts.begin(), starts.end(), a.all_ones()) == starts.end()) starts.push_back(a.all_ones());
    }

    const std::size_t blocks = (starts.size() + kStartBlock - 1) / kStartBlock;
    std::vector<BlockResult> results(blocks);
    parallel_for(blocks, threads, [&](std::size_t b) {
        const std::size_t lo = b * kStartBlock;
        const std::size_t len = std::min<std::size_t>(kStartBlock, starts.size() - lo);
        results[b] = evolve_block(k, std::span<const Index>(starts).subspan(lo, len), epsilon, max_steps);
    });

    MixingReport rep;
    rep.n = a.dim();
    rep.size = a.size();
    rep.density = a.density();
    rep.theta = k.laziness();
    rep.epsilon = epsilon;
    rep.policy = policy;
    rep.starts = starts.size();
    rep.pi_min = 1.0 / static_cast<double>(a.size());
    rep.t_mix = -1;
    for (std::size_t b = 0; b < blocks; ++b) {
        rep.tv_monotone = rep.tv_monotone && results[b].monotone;
        for (std::size_t c = 0; c < results[b].hit.size(); ++c) {
            if (results[b].hit[c] > rep.t_mix) {
                rep.t_mix = results[b].hit[c];
                rep.worst_start = starts[b * kStartBlock + c];
            }
        }
    }

    if (a.size() >= 2 && k.laziness() >= 0.5) {
        const ChainGap g = chain_gap(k);
        const TmixBounds bounds = tmix_bound(k, epsilon, g);
        rep.gap = g.gap;
        rep.t_rel = bounds.t_rel;
        rep.log_factor = bounds.log_factor;
        rep.bound_spectral = bounds.spectral;
        rep.bound_poincare = bounds.poincare;
    }
    return rep;
}

ChainGap chain_gap(const CensoredKernel& k) {
    const MonotoneSet& a = k.set();
    if (a.size() < 2) throw Error("no spectral gap for singleton");
    ChainGap out;
    const InducedLaplacian lap(a);
    out.lambda2 = lambda2(lap).value;
    out.gap = (1.0 - k.laziness()) * out.lambda2 / a.dim();
    if (a.size() <= kDirectGapCap) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Eigen::MatrixXd(k.matrix()), Eigen::EigenvaluesOnly);
        const auto& ev = es.eigenvalues();  // ascending
        out.direct = 1.0 - ev[ev.size() - 2];
        if (std::abs(*out.direct - out.gap) > 1e-9)
            throw Error("chain gap mismatch: Laplacian route " + std::to_string(out.gap) + " vs direct " +
                        std::to_string(*out.direct));
    }
    return out;
}

TmixBounds tmix_bound(const CensoredKernel& k, double epsilon) {
    if (k.size() < 2) return tmix_bound(k, epsilon, ChainGap{});
    return tmix_bound(k, epsilon, chain_gap(k));
}

TmixBounds tmix_bound(const CensoredKernel& k, double epsilon, const ChainGap& gap) {
    check_epsilon(epsilon);
    if (k.laziness() < 0.5) throw Error("laziness required for this bound");
    TmixBounds out;
    const MonotoneSet& a = k.set();
    if (a.size() < 2) return out;
    out.log_factor = std::log(static_cast<double>(a.size()) / epsilon);
    out.t_rel = 1.0 / gap.gap;
    out.t_rel_poincare = a.dim() / ((1.0 - k.laziness()) * (1.0 - std::sqrt(1.0 - a.density())));
    out.spectral = static_cast<long>(std::ceil(out.log_factor * out.t_rel));
    out.poincare = static_cast<long>(std::ceil(out.log_factor * out.t_rel_poincare));
    return out;
}

SimulationStats simulate(const OracleKernel& k, CubePoint start, std::size_t steps, std::uint64_t seed,
                         std::uint64_t stream, double burn_in_fraction) {
    const int n = k.oracle.dim();
    if (start.n != n) throw Error("start point has the wrong dimension");
    if (!k.oracle.contains(start)) throw Error("start point is not a member");
    if (!(burn_in_fraction >= 0.0 && burn_in_fraction < 1.0)) throw Error("burn-in fraction must lie in [0, 1)");

    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::uniform_int_distribution<int> coord(0, n - 1);

    SimulationStats out;
    out.steps = steps;
    const auto burn_in = static_cast<std::size_t>(std::floor(burn_in_fraction * static_cast<double>(steps)));
    out.tail_steps = steps - burn_in;
    std::vector<std::uint64_t> ones(static_cast<std::size_t>(n), 0);

    std::uint64_t x = start.index;
    for (std::size_t s = 0; s < steps; ++s) {
        if (coin(rng) >= k.theta) {
            const std::uint64_t y = x ^ (std::uint64_t{1} << coord(rng));
            if (k.oracle(y)) {
                x = y;
                ++out.accepted_moves;
                out.stayed_inside = out.stayed_inside && k.oracle(x);
            }
        }
        if (s >= burn_in)
            for (int i = 0; i < n; ++i) ones[static_cast<std::size_t>(i)] += (x >> i) & 1u;
    }
    out.final_point = CubePoint{x, n};
    out.tail_means.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        out.tail_means[static_cast<std::size_t>(i)] =
            out.tail_steps ? static_cast<double>(ones[static_cast<std::size_t>(i)]) / static_cast<double>(out.tail_steps)
                           : 0.0;
    return out;
}

EnsembleStats simulate_chains(const OracleKernel& k, CubePoint start, std::size_t steps, std::size_t chains,
                              std::uint64_t seed, int threads, double burn_in_fraction) {
    if (chains == 0) throw Error("need at least one chain");
    EnsembleStats out;
    out.chains.resize(chains);
    parallel_for(chains, threads, [&](std::size_t c) {
        out.chains[c] = simulate(k, start, steps, seed, c, burn_in_fraction);
    });

    const int n = k.oracle.dim();
    out.coordinate_means.assign(static_cast<std::size_t>(n), 0.0);
    std::vector<double> pooled(chains);
    for (std::size_t c = 0; c < chains; ++c) {
        double sum = 0.0;
        for (int i = 0; i < n; ++i) {
            const double m = out.chains[c].tail_means[static_cast<std::size_t>(i)];
            out.coordinate_means[static_cast<std::size_t>(i)] += m / static_cast<double>(chains);
            sum += m;
        }
        pooled[c] = sum / n;
    }
    double mean = 0.0;
    for (double v : pooled) mean += v;
    mean /= static_cast<double>(chains);
    double ss = 0.0;
    for (double v : pooled) ss += (v - mean) * (v - mean);
    out.pooled_mean = mean;
    out.pooled_stderr = chains > 1 ? std::sqrt(ss / static_cast<double>(chains - 1) / static_cast<double>(chains)) : 0.0;
    return out;
}

std::vector<ScalingRow> scaling_experiment(const std::vector<int>& n_list, double theta, double epsilon,
                                           int threads) {
    check_epsilon(epsilon);
    std::vector<ScalingRow> rows;
    for (int n : n_list) {
        if (n < 1 || n % 2 == 0) throw Error("majority sets need odd n, got " + std::to_string(n));
        const int k = (n + 1) / 2;
        const CensoredKernel kernel(threshold_set(n, k), theta);
        const MixingReport rep = exact_tmix(kernel, epsilon, StartPolicy::automatic, threads);
        ScalingRow row;
        row.n = n;
        row.k = k;
        row.size = rep.size;
        row.density = rep.density;
        row.theta = theta;
        row.epsilon = epsilon;
        row.tmix = rep.t_mix;
        row.policy = rep.policy;
        row.gap = rep.gap;
        row.bound_spectral = rep.bound_spectral;
        row.bound_poincare = rep.bound_poincare;
        row.log_factor = rep.log_factor;
        row.t_rel = rep.t_rel;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace monocube
