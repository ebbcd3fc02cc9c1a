#pragma once

// Text descriptions of sets and functions, one per line:
//
//   threshold n k        {x : |x| >= k}
//   dictator n i         {x : x_i = 1}, i in 1..n
//   tribes n w           OR of ANDs over blocks of w coordinates
//   upset n p1,p2,...    upward closure of the points, binary strings with
//                        coordinate n first
//
// Functions on a set:
//
//   dictator i           f(x) = x_i, i in 1..n
//   weight               f(x) = |x|
//   indicator p          f(x) = 1{x = p}
//   random seed          independent uniform values on [-1, 1]

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "monocube/cube.hpp"
#include "monocube/forms.hpp"
#include "monocube/oracle.hpp"

namespace monocube {

struct SetDescription {
    std::string text;
    OracleFamily family = OracleFamily::custom;
    int n = 0;
    int param = 0;                   // k, zero-based coordinate, or block width
    std::vector<CubePoint> points;  // upset generators

    MonotoneSet build() const;
    MembershipOracle oracle() const;
};

SetDescription parse_set_description(std::string_view line);

/// One description per non-blank line; '#' starts a comment.
std::vector<SetDescription> parse_set_descriptions(std::string_view text);

struct FunctionDescription {
    enum class Kind { dictator, weight, indicator, random };

    std::string text;
    Kind kind = Kind::weight;
    int coord = 0;  // zero-based
    CubePoint point;
    std::uint64_t seed = 0;

    SetFunction build(std::shared_ptr<const MonotoneSet> set) const;
};

FunctionDescription parse_function_description(std::string_view line);

/// Comma-separated list of points, minimal elements first, e.g. "011,101".
std::string describe_generators(const MonotoneSet& set);

}  // namespace monocube
