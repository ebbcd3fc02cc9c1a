#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "monocube/induction.hpp"
#include "monocube/spectral.hpp"
#include "monocube/walk.hpp"

namespace monocube {

inline constexpr const char* kVersion = "0.1.0";

/// Exit codes: all checks pass, usage or configuration error, mathematical violation.
enum ExitCode : int { kExitPass = 0, kExitUsage = 1, kExitViolation = 2 };

/// Everything that determines a run. Equal specs give byte-identical output.
struct ExperimentSpec {
    std::string command;
    std::vector<std::string> sets;
    std::vector<std::string> functions;
    std::optional<int> enumerate;

    double epsilon = kDefaultEpsilon;
    double theta = kDefaultLaziness;
    double tol = kIdentityRelTol;
    double c = kDefaultConstant;
    int grid = kDefaultGridResolution;
    std::uint64_t seed = kDefaultSeed;
    long long draws = 1'000'000;
    int pairs = 1000;
    int jensen = 100;
    long long search_draws = 100'000;

    std::string family = "majority";
    std::vector<int> n_list;
    long long steps = 0;  // 0 selects 4 n^2
    int chains = 64;
    std::string start;    // binary string; empty selects a minimal element
    std::string method = "auto";

    std::string out;
    std::string format = "json";
    std::string svg;
    int threads = 1;
};

nlohmann::json to_json(const ExperimentSpec& spec);
/// Keys mirror the struct fields; unknown keys are an error.
ExperimentSpec spec_from_json(const nlohmann::json& j);

/// Result of one suite. Fails exactly when at least one witness is recorded.
struct Certificate {
    std::string suite;
    nlohmann::json counts = nlohmann::json::object();
    double worst_slack = 0.0;
    nlohmann::json witnesses = nlohmann::json::array();
    nlohmann::json details = nlohmann::json::object();

    bool pass() const { return witnesses.empty(); }
    void add_witness(nlohmann::json w) { witnesses.push_back(std::move(w)); }
};

nlohmann::json to_json(const Certificate& cert, const ExperimentSpec& spec);

struct CommandOutput {
    int exit_code = kExitPass;
    std::string text;  // the report in the requested format
    std::string svg;   // optional plot
};

CommandOutput run_verify(const ExperimentSpec& spec);
CommandOutput run_spectral(const ExperimentSpec& spec);
CommandOutput run_lemmas(const ExperimentSpec& spec);
CommandOutput run_mix(const ExperimentSpec& spec);
CommandOutput run_simulate(const ExperimentSpec& spec);
CommandOutput run_enumerate(const ExperimentSpec& spec);

/// Dispatches on spec.command; errors become kExitUsage with the message as text.
CommandOutput run_command(const ExperimentSpec& spec);

std::string spectral_csv_header();
std::string spectral_csv_row(const std::string& set_id, const SpectralResult& r);
std::string scaling_csv(const std::vector<ScalingRow>& rows);
nlohmann::json to_json(const MixingReport& r);
nlohmann::json to_json(const ScalingRow& r);

/// Log-log line plot of t_mix and both bounds against n.
std::string scaling_svg(const std::vector<ScalingRow>& rows);

/// Shortest round-trip decimal form, as used in every CSV cell.
std::string format_double(double v);

}  // namespace monocube
