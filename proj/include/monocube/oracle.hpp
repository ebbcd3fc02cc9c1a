#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "monocube/cube.hpp"

namespace monocube {

/// Largest dimension for oracle-only workflows (points are 64-bit masks).
inline constexpr int kMaxOracleDim = 63;

enum class OracleFamily { threshold, dictator, tribes, custom };

std::string to_string(OracleFamily f);

/// Membership predicate for sets too large to store densely. Family-tagged
/// oracles are monotone by construction; custom ones are monotone by the
/// caller's contract, which spot_check_monotone samples.
class MembershipOracle {
public:
    static MembershipOracle threshold(int n, int k);
    static MembershipOracle dictator(int n, int coord);
    /// OR over consecutive blocks of `width` coordinates of the AND within each block.
    static MembershipOracle tribes(int n, int width);
    static MembershipOracle custom(int n, std::function<bool(std::uint64_t)> predicate);
    static MembershipOracle of(const MonotoneSet& set);

    int dim() const noexcept { return n_; }
    OracleFamily family() const noexcept { return family_; }
    /// Family parameter: k for threshold, the coordinate for dictator, block width for tribes.
    int parameter() const noexcept { return param_; }

    bool operator()(std::uint64_t x) const { return predicate_(x); }
    bool contains(const CubePoint& p) const { return predicate_(p.index); }

    /// Dense materialization; requires n <= kMaxDenseDim.
    MonotoneSet materialize() const;

private:
    MembershipOracle(int n, OracleFamily family, int param, std::function<bool(std::uint64_t)> predicate);

    int n_;
    OracleFamily family_;
    int param_;
    std::function<bool(std::uint64_t)> predicate_;
};

/// Samples random comparable pairs x <= y and returns a violating pair
/// (x in A, y not in A) if one is found.
std::optional<std::pair<CubePoint, CubePoint>> spot_check_monotone(const MembershipOracle& oracle,
                                                                   int samples, std::uint64_t seed);

/// E[x_i] under the uniform law on {x : |x| >= k}; the same for every i.
double stationary_coordinate_mean(int n, int k);

/// Family-checked form: errors unless the oracle is a threshold set.
double stationary_coordinate_mean(const MembershipOracle& oracle, int coord);

}  // namespace monocube
