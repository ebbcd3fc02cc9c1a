#include "monocube/describe.hpp"

#include <charconv>
#include <sstream>

#include "monocube/error.hpp"

namespace monocube {

namespace {

std::vector<std::string> tokens(std::string_view line) {
    std::istringstream in{std::string(line)};
    std::vector<std::string> out;
    for (std::string tok; in >> tok;) out.push_back(tok);
    return out;
}

template <typename Int>
Int parse_int(const std::string& tok, std::string_view what) {
    Int v{};
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || ptr != tok.data() + tok.size())
        throw Error("bad " + std::string(what) + " '" + tok + "'");
    return v;
}

int parse_coordinate(const std::string& tok, int n) {
    const int i = parse_int<int>(tok, "coordinate");
    if (i < 1 || (n > 0 && i > n)) throw Error("coordinate " + tok + " outside 1..n");
    return i - 1;
}

}  // namespace

SetDescription parse_set_description(std::string_view line) {
    const auto t = tokens(line);
    if (t.empty()) throw Error("empty set description");
    SetDescription d;
    d.text = std::string(line);
    const auto& kind = t[0];
    if (t.size() != 3) throw Error("set description '" + d.text + "' needs exactly three fields");
    d.n = parse_int<int>(t[1], "dimension");
    if (d.n < 1 || d.n > kMaxOracleDim) throw Error("dimension outside [1, 63]");
    if (kind == "threshold") {
        d.family = OracleFamily::threshold;
        d.param = parse_int<int>(t[2], "threshold");
        if (d.param < 0 || d.param > d.n) throw Error("threshold k outside [0, n]");
    } else if (kind == "dictator") {
        d.family = OracleFamily::dictator;
        d.param = parse_coordinate(t[2], d.n);
    } else if (kind == "tribes") {
        d.family = OracleFamily::tribes;
        d.param = parse_int<int>(t[2], "tribe width");
        if (d.param < 1 || d.param > d.n) throw Error("tribe width outside [1, n]");
    } else if (kind == "upset") {
        d.family = OracleFamily::custom;
        std::string_view rest = t[2];
        while (!rest.empty()) {
            const auto comma = rest.find(',');
            const auto piece = rest.substr(0, comma);
            CubePoint p = CubePoint::parse(piece);
            if (p.n != d.n) throw Error("point '" + std::string(piece) + "' does not have n bits");
            d.points.push_back(p);
            if (comma == std::string_view::npos) break;
            rest.remove_prefix(comma + 1);
        }
        if (d.points.empty()) throw Error("empty set not allowed");
    } else {
        throw Error("unknown set family '" + kind + "'");
    }
    return d;
}

std::vector<SetDescription> parse_set_descriptions(std::string_view text) {
    std::vector<SetDescription> out;
    std::istringstream in{std::string(text)};
    for (std::string line; std::getline(in, line);) {
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        if (tokens(line).empty()) continue;
        out.push_back(parse_set_description(line));
    }
    return out;
}

MonotoneSet SetDescription::build() const {
    if (n > kMaxDenseDim) throw Error("dimension " + std::to_string(n) + " exceeds the dense cap");
    switch (family) {
        case OracleFamily::threshold: return threshold_set(n, param);
        case OracleFamily::dictator: return dictator_set(n, param);
        case OracleFamily::tribes: return MembershipOracle::tribes(n, param).materialize();
        case OracleFamily::custom: {
            std::vector<Index> gens;
            for (const auto& p : points) gens.push_back(static_cast<Index>(p.index));
            return make_upset(n, gens);
        }
    }
    throw Error("unknown family");
}

MembershipOracle SetDescription::oracle() const {
    switch (family) {
        case OracleFamily::threshold: return MembershipOracle::threshold(n, param);
        case OracleFamily::dictator: return MembershipOracle::dictator(n, param);
        case OracleFamily::tribes: return MembershipOracle::tribes(n, param);
        case OracleFamily::custom: {
            std::vector<std::uint64_t> gens;
            for (const auto& p : points) gens.push_back(p.index);
            return MembershipOracle::custom(n, [gens](std::uint64_t x) {
                for (auto g : gens)
                    if (precedes(g, x)) return true;
                return false;
            });
        }
    }
    throw Error("unknown family");
}

FunctionDescription parse_function_description(std::string_view line) {
    const auto t = tokens(line);
    if (t.empty()) throw Error("empty function description");
    FunctionDescription d;
    d.text = std::string(line);
    const auto& kind = t[0];
    if (kind == "weight") {
        if (t.size() != 1) throw Error("'weight' takes no arguments");
        d.kind = FunctionDescription::Kind::weight;
        return d;
    }
    if (t.size() != 2) throw Error("function description '" + d.text + "' needs one argument");
    if (kind == "dictator") {
        d.kind = FunctionDescription::Kind::dictator;
        d.coord = parse_coordinate(t[1], 0);
    } else if (kind == "indicator") {
        d.kind = FunctionDescription::Kind::indicator;
        d.point = CubePoint::parse(t[1]);
    } else if (kind == "random") {
        d.kind = FunctionDescription::Kind::random;
        d.seed = parse_int<std::uint64_t>(t[1], "seed");
    } else {
        throw Error("unknown function '" + kind + "'");
    }
    return d;
}

SetFunction FunctionDescription::build(std::shared_ptr<const MonotoneSet> set) const {
    switch (kind) {
        case Kind::weight: return weight_function(std::move(set));
        case Kind::dictator:
            if (coord >= set->dim()) throw Error("dictator coordinate exceeds the set dimension");
            return dictator_function(std::move(set), coord);
        case Kind::indicator:
            if (point.n != set->dim()) throw Error("indicator point has the wrong dimension");
            return indicator_function(std::move(set), static_cast<Index>(point.index));
        case Kind::random: return random_function(std::move(set), seed);
    }
    throw Error("unknown function kind");
}

std::string describe_generators(const MonotoneSet& set) {
    std::string out;
    for (Index x : set.minimal_elements()) {
        if (!out.empty()) out += ',';
        out += CubePoint{x, set.dim()}.to_string();
    }
    return out;
}

}  // namespace monocube
