#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "monocube/commands.hpp"
#include "monocube/describe.hpp"
#include "monocube/error.hpp"

using namespace monocube;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write '" + path + "'");
    out << text;
}

// The config file seeds the spec; flags given on the command line override it.
ExperimentSpec initial_spec(int argc, char** argv) {
    for (int i = 1; i < argc; ++i) {
        std::string arg = argv[i];
        std::string path;
        if (arg == "--config" && i + 1 < argc) path = argv[i + 1];
        else if (arg.rfind("--config=", 0) == 0) path = arg.substr(9);
        if (!path.empty()) return spec_from_json(nlohmann::json::parse(read_file(path)));
    }
    return {};
}

}  // namespace

int main(int argc, char** argv) {
    ExperimentSpec spec;
    try {
        spec = initial_spec(argc, argv);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    if (const char* env = std::getenv("MONOCUBE_THREADS")) spec.threads = std::max(1, std::atoi(env));

    CLI::App app{"Poincare constants and censored walks on monotone subsets of the hypercube"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);
    app.fallthrough();

    std::string config, sets_file;
    bool print_spec = false;
    app.add_option("--config", config, "JSON experiment spec; flags override its values");
    app.add_option("--seed", spec.seed, "RNG seed");
    app.add_option("--threads", spec.threads, "worker threads")->check(CLI::PositiveNumber);
    app.add_option("-o,--out", spec.out, "write the report here instead of stdout");
    app.add_option("--format", spec.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    app.add_flag("--print-spec", print_spec, "print the resolved spec as JSON and exit");

    auto add_sets = [&](CLI::App* sub) {
        sub->add_option("--set", spec.sets, "set description, e.g. 'threshold 5 3' (repeatable)");
        sub->add_option("--sets-file", sets_file, "file with one set description per line");
    };
    auto add_method = [&](CLI::App* sub) {
        sub->add_option("--method", spec.method, "eigen solver")
            ->check(CLI::IsMember({"auto", "dense", "iterative"}));
    };

    auto* verify = app.add_subcommand("verify", "check C*(A) against both bounds");
    add_sets(verify);
    add_method(verify);
    verify->add_option("--enumerate", spec.enumerate, "every non-empty monotone set for this n (n <= 5)");
    verify->add_option("--function", spec.functions, "test function, e.g. 'dictator 1' (repeatable)");

    auto* spectral = app.add_subcommand("spectral", "spectral gap and Poincare constant of each set");
    add_sets(spectral);
    add_method(spectral);
    spectral->add_option("--enumerate", spec.enumerate, "every non-empty monotone set for this n (n <= 5)");

    auto* lemmas = app.add_subcommand("lemmas", "decomposition identities and the two-point inequality");
    lemmas->add_option("--tol", spec.tol, "relative tolerance for the identities");
    lemmas->add_option("--c", spec.c, "constant in the five-point inequality");
    lemmas->add_option("--grid", spec.grid, "grid resolution for (a0, a1)");
    lemmas->add_option("--draws", spec.draws, "random draws for the five-point inequality");
    lemmas->add_option("--pairs", spec.pairs, "random (A, f) pairs for the identities");
    lemmas->add_option("--jensen", spec.jensen, "instances for the averaging reduction");
    lemmas->add_option("--search-draws", spec.search_draws, "draws per step of the constant search");

    auto* mix = app.add_subcommand("mix", "exact mixing times and bounds");
    mix->add_option("--set", spec.sets, "set description (repeatable)");
    mix->add_option("--family", spec.family, "set family for --n runs");
    mix->add_option("--n", spec.n_list, "dimensions, comma separated")->delimiter(',');
    mix->add_option("--theta", spec.theta, "holding probability");
    mix->add_option("--eps", spec.epsilon, "total variation threshold");
    mix->add_option("--svg", spec.svg, "write a log-log plot here");

    auto* simulate = app.add_subcommand("simulate", "Monte Carlo walk through a membership oracle");
    simulate->add_option("--set", spec.sets, "set description");
    simulate->add_option("--theta", spec.theta, "holding probability");
    simulate->add_option("--steps", spec.steps, "steps per chain (default 4 n^2)");
    simulate->add_option("--chains", spec.chains, "independent chains");
    simulate->add_option("--start", spec.start, "start point, coordinate n first (default: a minimal element)");

    auto* enumerate = app.add_subcommand("enumerate", "list every non-empty monotone set");
    enumerate->add_option("--n", spec.enumerate, "dimension (n <= 5)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitPass : kExitUsage;
    }

    spec.command = app.get_subcommands().front()->get_name();
    try {
        if (!sets_file.empty())
            for (const auto& d : parse_set_descriptions(read_file(sets_file))) spec.sets.push_back(d.text);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    if (print_spec) {
        std::cout << to_json(spec).dump(2) << "\n";
        return kExitPass;
    }

    const CommandOutput out = run_command(spec);
    if (out.exit_code == kExitUsage) {
        std::cerr << out.text;
        return out.exit_code;
    }
    try {
        if (spec.out.empty()) std::cout << out.text;
        else write_file(spec.out, out.text);
        if (!spec.svg.empty()) write_file(spec.svg, out.svg);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return out.exit_code;
}
