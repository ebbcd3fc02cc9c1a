#include "monocube/oracle.hpp"

#include <algorithm>
#include <bit>
#include <memory>
#include <random>

#include "monocube/error.hpp"

namespace monocube {

namespace {

void check_oracle_dim(int n) {
    if (n < 1 || n > kMaxOracleDim) throw Error("oracle dimension outside [1, 63]");
}

std::uint64_t full_mask(int n) { return n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1; }

}  // namespace

std::string to_string(OracleFamily f) {
    switch (f) {
        case OracleFamily::threshold: return "threshold";
        case OracleFamily::dictator: return "dictator";
        case OracleFamily::tribes: return "tribes";
        case OracleFamily::custom: return "custom";
    }
    return "unknown";
}

MembershipOracle::MembershipOracle(int n, OracleFamily family, int param,
                                   std::function<bool(std::uint64_t)> predicate)
    : n_(n), family_(family), param_(param), predicate_(std::move(predicate)) {}

MembershipOracle MembershipOracle::threshold(int n, int k) {
    check_oracle_dim(n);
    if (k < 0 || k > n) throw Error("threshold k outside [0, n]");
    return {n, OracleFamily::threshold, k, [k](std::uint64_t x) { return std::popcount(x) >= k; }};
}

MembershipOracle MembershipOracle::dictator(int n, int coord) {
    check_oracle_dim(n);
    if (coord < 0 || coord >= n) throw Error("coordinate outside [0, n)");
    return {n, OracleFamily::dictator, coord, [coord](std::uint64_t x) { return ((x >> coord) & 1u) != 0; }};
}

MembershipOracle MembershipOracle::tribes(int n, int width) {
    check_oracle_dim(n);
    if (width < 1 || width > n) throw Error("tribe width outside [1, n]");
    return {n, OracleFamily::tribes, width, [n, width](std::uint64_t x) {
                for (int start = 0; start < n; start += width) {
                    const int w = std::min(width, n - start);
                    const std::uint64_t block = full_mask(w) << start;
                    if ((x & block) == block) return true;
                }
                return false;
            }};
}

MembershipOracle MembershipOracle::custom(int n, std::function<bool(std::uint64_t)> predicate) {
    check_oracle_dim(n);
    if (!predicate) throw Error("custom oracle needs a predicate");
    return {n, OracleFamily::custom, 0, std::move(predicate)};
}

MembershipOracle MembershipOracle::of(const MonotoneSet& set) {
    // Shares the dense bits; the oracle stays valid independently of `set`.
    auto bits = std::make_shared<const CubeSubset>(set.subset());
    return {set.dim(), OracleFamily::custom, 0,
            [bits](std::uint64_t x) { return x < bits->num_points() && bits->contains(static_cast<Index>(x)); }};
}

MonotoneSet MembershipOracle::materialize() const {
    CubeSubset s(n_);
    for (std::uint64_t x = 0; x < s.num_points(); ++x)
        if (predicate_(x)) s.insert(static_cast<Index>(x));
    return MonotoneSet::from_subset(std::move(s));
}

std::optional<std::pair<CubePoint, CubePoint>> spot_check_monotone(const MembershipOracle& oracle,
                                                                   int samples, std::uint64_t seed) {
    const int n = oracle.dim();
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::uint64_t> pick(0, full_mask(n));
    for (int s = 0; s < samples; ++s) {
        const std::uint64_t x = pick(rng);
        const std::uint64_t y = x | pick(rng);
        if (oracle(x) && !oracle(y)) return std::pair{CubePoint{x, n}, CubePoint{y, n}};
    }
    return std::nullopt;
}

double stationary_coordinate_mean(int n, int k) {
    if (n < 1 || n > 62) throw Error("stationary_coordinate_mean supports 1 <= n <= 62");
    if (k < 0 || k > n) throw Error("threshold k outside [0, n]");
    long double ones = 0, total = 0;
    for (int j = k; j <= n; ++j) {
        total += static_cast<long double>(binomial(n, j));
        if (j >= 1) ones += static_cast<long double>(binomial(n - 1, j - 1));
    }
    return static_cast<double>(ones / total);
}

double stationary_coordinate_mean(const MembershipOracle& oracle, int coord) {
    if (oracle.family() != OracleFamily::threshold)
        throw Error("analytic stationary mean is only available for the threshold family");
    if (coord < 0 || coord >= oracle.dim()) throw Error("coordinate outside [0, n)");
    return stationary_coordinate_mean(oracle.dim(), oracle.parameter());
}

}  // namespace monocube
