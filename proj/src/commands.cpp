#include "monocube/commands.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "monocube/describe.hpp"
#include "monocube/error.hpp"

namespace monocube {

using nlohmann::json;

namespace {

constexpr std::size_t kMaxWitnessesPerCheck = 16;

std::string dump(const json& j) { return j.dump(2) + "\n"; }

void require(bool ok, const std::string& message) {
    if (!ok) throw Error(message);
}

struct NamedSet {
    std::string id;
    std::shared_ptr<const MonotoneSet> set;
};

std::vector<NamedSet> collect_sets(const ExperimentSpec& spec) {
    std::vector<NamedSet> out;
    if (spec.enumerate) {
        const int n = *spec.enumerate;
        std::size_t idx = 0;
        for_each_monotone(n, [&](const MonotoneSet& s) {
            out.push_back({"enum" + std::to_string(n) + "#" + std::to_string(idx++) + " " + describe_generators(s),
                           std::make_shared<const MonotoneSet>(s)});
        });
    }
    for (const auto& text : spec.sets) {
        const auto d = parse_set_description(text);
        out.push_back({d.text, std::make_shared<const MonotoneSet>(d.build())});
    }
    require(!out.empty(), "no sets given: use --enumerate N or --set DESCRIPTION");
    return out;
}

json spectral_row_json(const std::string& id, const SpectralResult& r) {
    return json{{"set_id", id},          {"n", r.n},
                {"size", r.size},        {"density", r.density},
                {"lambda2", r.lambda2},  {"cstar", r.cstar},
                {"bound_fp", r.bound_fp}, {"bound_ours", r.bound_ours},
                {"slack_fp", r.slack_fp()}, {"method", to_string(r.method)},
                {"residual", r.residual}};
}

void push_capped(Certificate& cert, std::size_t& count, json w) {
    if (count++ < kMaxWitnessesPerCheck) cert.add_witness(std::move(w));
}

CubePoint default_start(const MembershipOracle& oracle) {
    const int n = oracle.dim();
    std::uint64_t x = n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
    if (!oracle(x)) throw Error("set is empty");
    for (int i = 0; i < n; ++i) {
        const std::uint64_t y = x & ~(std::uint64_t{1} << i);
        if (oracle(y)) x = y;
    }
    return {x, n};
}

std::string fixed2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

json to_json(const ExperimentSpec& s) {
    json j{{"command", s.command},   {"sets", s.sets},     {"functions", s.functions},
           {"epsilon", s.epsilon},   {"theta", s.theta},   {"tol", s.tol},
           {"c", s.c},               {"grid", s.grid},     {"seed", s.seed},
           {"draws", s.draws},       {"pairs", s.pairs},   {"jensen", s.jensen},
           {"search_draws", s.search_draws}, {"family", s.family}, {"n", s.n_list},
           {"steps", s.steps},       {"chains", s.chains}, {"start", s.start},
           {"method", s.method}};
    j["enumerate"] = s.enumerate ? json(*s.enumerate) : json(nullptr);
    return j;
}

ExperimentSpec spec_from_json(const json& j) {
    require(j.is_object(), "config must be a JSON object");
    ExperimentSpec s;
    for (const auto& [key, v] : j.items()) {
        if (key == "command") s.command = v.get<std::string>();
        else if (key == "sets") s.sets = v.get<std::vector<std::string>>();
        else if (key == "functions") s.functions = v.get<std::vector<std::string>>();
        else if (key == "enumerate") { if (!v.is_null()) s.enumerate = v.get<int>(); }
        else if (key == "epsilon") s.epsilon = v.get<double>();
        else if (key == "theta") s.theta = v.get<double>();
        else if (key == "tol") s.tol = v.get<double>();
        else if (key == "c") s.c = v.get<double>();
        else if (key == "grid") s.grid = v.get<int>();
        else if (key == "seed") s.seed = v.get<std::uint64_t>();
        else if (key == "draws") s.draws = v.get<long long>();
        else if (key == "pairs") s.pairs = v.get<int>();
        else if (key == "jensen") s.jensen = v.get<int>();
        else if (key == "search_draws") s.search_draws = v.get<long long>();
        else if (key == "family") s.family = v.get<std::string>();
        else if (key == "n") s.n_list = v.get<std::vector<int>>();
        else if (key == "steps") s.steps = v.get<long long>();
        else if (key == "chains") s.chains = v.get<int>();
        else if (key == "start") s.start = v.get<std::string>();
        else if (key == "method") s.method = v.get<std::string>();
        else if (key == "out") s.out = v.get<std::string>();
        else if (key == "format") s.format = v.get<std::string>();
        else if (key == "svg") s.svg = v.get<std::string>();
        else throw Error("unknown config key '" + key + "'");
    }
    return s;
}

json to_json(const Certificate& cert, const ExperimentSpec& spec) {
    return json{{"suite", cert.suite},
                {"pass", cert.pass()},
                {"counts", cert.counts},
                {"worst_slack", cert.worst_slack},
                {"witnesses", cert.witnesses},
                {"details", cert.details},
                {"environment", {{"version", kVersion}, {"seed", spec.seed}}},
                {"spec", to_json(spec)}};
}

std::string spectral_csv_header() {
    return "set_id,n,size,density,lambda2,cstar,bound_fp,bound_ours,slack_fp,method,residual\n";
}

std::string spectral_csv_row(const std::string& set_id, const SpectralResult& r) {
    std::string id = set_id;
    if (id.find_first_of(",\"") != std::string::npos) {
        std::string quoted = "\"";
        for (char ch : id) quoted += ch == '"' ? std::string("\"\"") : std::string(1, ch);
        id = quoted + "\"";
    }
    std::ostringstream os;
    os << id << ',' << r.n << ',' << r.size << ',' << format_double(r.density) << ',' << format_double(r.lambda2)
       << ',' << format_double(r.cstar) << ',' << format_double(r.bound_fp) << ',' << format_double(r.bound_ours)
       << ',' << format_double(r.slack_fp()) << ',' << to_string(r.method) << ',' << format_double(r.residual)
       << '\n';
    return os.str();
}

std::string scaling_csv(const std::vector<ScalingRow>& rows) {
    std::ostringstream os;
    os << "n,k,size,density,theta,epsilon,tmix_exact,tmix_policy,gap,bound_spectral,bound_poincare\n";
    for (const auto& r : rows)
        os << r.n << ',' << r.k << ',' << r.size << ',' << format_double(r.density) << ','
           << format_double(r.theta) << ',' << format_double(r.epsilon) << ',' << r.tmix << ','
           << to_string(r.policy) << ',' << format_double(r.gap) << ',' << r.bound_spectral << ','
           << r.bound_poincare << '\n';
    return os.str();
}

json to_json(const MixingReport& r) {
    return json{{"n", r.n},
                {"size", r.size},
                {"density", r.density},
                {"theta", r.theta},
                {"epsilon", r.epsilon},
                {"t_mix", r.t_mix},
                {"start_policy", to_string(r.policy)},
                {"worst_start", CubePoint{r.worst_start, r.n}.to_string()},
                {"starts", r.starts},
                {"tv_monotone", r.tv_monotone},
                {"gap", r.gap},
                {"t_rel", r.t_rel},
                {"pi_min", r.pi_min},
                {"log_factor", r.log_factor},
                {"bound_spectral", r.bound_spectral},
                {"bound_poincare", r.bound_poincare}};
}

json to_json(const ScalingRow& r) {
    return json{{"n", r.n},
                {"k", r.k},
                {"size", r.size},
                {"density", r.density},
                {"theta", r.theta},
                {"epsilon", r.epsilon},
                {"tmix_exact", r.tmix},
                {"tmix_policy", to_string(r.policy)},
                {"gap", r.gap},
                {"bound_spectral", r.bound_spectral},
                {"bound_poincare", r.bound_poincare},
                {"log_factor", r.log_factor},
                {"t_rel", r.t_rel}};
}

std::string scaling_svg(const std::vector<ScalingRow>& rows) {
    constexpr double width = 640, height = 400, left = 70, right = 150, top = 30, bottom = 50;
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (rows.empty()) {
        os << "</svg>\n";
        return os.str();
    }
    double nmin = rows.front().n, nmax = nmin, ymin = 1e300, ymax = 0;
    for (const auto& r : rows) {
        nmin = std::min<double>(nmin, r.n);
        nmax = std::max<double>(nmax, r.n);
        for (double v : {double(r.tmix), double(r.bound_spectral), double(r.bound_poincare)}) {
            if (v <= 0) continue;
            ymin = std::min(ymin, v);
            ymax = std::max(ymax, v);
        }
    }
    if (ymin > ymax) ymin = ymax = 1;
    const double lx0 = std::log(nmin), lx1 = std::log(nmax) > lx0 ? std::log(nmax) : lx0 + 1;
    const double ly0 = std::log(ymin), ly1 = std::log(ymax) > ly0 ? std::log(ymax) : ly0 + 1;
    auto px = [&](double n) { return left + (std::log(n) - lx0) / (lx1 - lx0) * (width - left - right); };
    auto py = [&](double y) {
        return height - bottom - (std::log(std::max(y, 1.0)) - ly0) / (ly1 - ly0) * (height - top - bottom);
    };

    os << "<line x1=\"" << left << "\" y1=\"" << height - bottom << "\" x2=\"" << width - right << "\" y2=\""
       << height - bottom << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << height - bottom
       << "\" stroke=\"black\"/>\n";
    for (const auto& r : rows)
        os << "<text x=\"" << fixed2(px(r.n)) << "\" y=\"" << height - bottom + 18
           << "\" font-size=\"11\" text-anchor=\"middle\">" << r.n << "</text>\n";
    os << "<text x=\"" << fixed2((left + width - right) / 2) << "\" y=\"" << height - 10
       << "\" font-size=\"12\" text-anchor=\"middle\">n (log scale)</text>\n";
    os << "<text x=\"15\" y=\"" << fixed2(top - 10) << "\" font-size=\"12\">steps (log scale), ymin="
       << format_double(ymin) << " ymax=" << format_double(ymax) << "</text>\n";

    struct Series {
        const char* name;
        const char* color;
        long ScalingRow::*field;
    };
    const Series series[] = {{"t_mix", "#1f77b4", &ScalingRow::tmix},
                             {"spectral bound", "#ff7f0e", &ScalingRow::bound_spectral},
                             {"Poincare bound", "#2ca02c", &ScalingRow::bound_poincare}};
    int legend = 0;
    for (const auto& s : series) {
        os << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"2\" points=\"";
        for (std::size_t i = 0; i < rows.size(); ++i)
            os << (i ? " " : "") << fixed2(px(rows[i].n)) << ',' << fixed2(py(double(rows[i].*s.field)));
        os << "\"/>\n";
        for (const auto& r : rows)
            os << "<circle cx=\"" << fixed2(px(r.n)) << "\" cy=\"" << fixed2(py(double(r.*s.field)))
               << "\" r=\"3\" fill=\"" << s.color << "\"/>\n";
        const double ly = top + 20.0 * legend++;
        os << "<rect x=\"" << width - right + 10 << "\" y=\"" << ly << "\" width=\"12\" height=\"12\" fill=\""
           << s.color << "\"/>\n";
        os << "<text x=\"" << width - right + 28 << "\" y=\"" << ly + 10 << "\" font-size=\"11\">" << s.name
           << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

CommandOutput run_verify(const ExperimentSpec& spec) {
    const auto sets = collect_sets(spec);
    std::vector<FunctionDescription> fns;
    for (const auto& f : spec.functions) fns.push_back(parse_function_description(f));
    const EigenMethod method = parse_eigen_method(spec.method);

    Certificate cert;
    cert.suite = "verify";
    json rows = json::array(), fn_rows = json::array();
    std::string csv = spectral_csv_header();
    std::size_t passed = 0, witnesses = 0;
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& [id, set] : sets) {
        const auto tc = verify_theorem(set, method);
        const auto& s = tc.spectral;
        rows.push_back(spectral_row_json(id, s));
        csv += spectral_csv_row(id, s);
        worst = std::min(worst, s.slack_fp());
        const bool ratio_ok = !tc.witness || std::abs(tc.witness_ratio - s.cstar) <= 1e-9 * std::max(1.0, s.cstar);
        if (tc.passed() && ratio_ok) {
            ++passed;
        } else {
            push_capped(cert, witnesses,
                        json{{"set_id", id}, {"cstar", s.cstar}, {"bound_fp", s.bound_fp},
                             {"bound_ours", s.bound_ours}, {"witness_ratio", tc.witness_ratio}});
        }
        for (const auto& fd : fns) {
            const SetFunction f = fd.build(set);
            const auto ratio = poincare_ratio(f);
            json row{{"set_id", id}, {"function", fd.text}, {"variance", variance(f)},
                     {"dirichlet", dirichlet_form(f)}, {"bound_fp", s.bound_fp}};
            row["ratio"] = ratio ? json(*ratio) : json(nullptr);
            const bool ok = !ratio || *ratio <= s.bound_fp * (1.0 + kBoundRelTol);
            row["pass"] = ok;
            if (!ok) push_capped(cert, witnesses, row);
            fn_rows.push_back(row);
        }
    }
    cert.counts = {{"sets", sets.size()}, {"passed", passed}, {"functions", fn_rows.size()}};
    cert.worst_slack = worst;
    cert.details = {{"rows", rows}, {"functions", fn_rows}};

    CommandOutput out;
    out.exit_code = cert.pass() ? kExitPass : kExitViolation;
    out.text = spec.format == "csv" ? csv : dump(to_json(cert, spec));
    return out;
}

CommandOutput run_spectral(const ExperimentSpec& spec) {
    const auto sets = collect_sets(spec);
    const EigenMethod method = parse_eigen_method(spec.method);
    json rows = json::array();
    std::string csv = spectral_csv_header();
    bool ok = true;
    for (const auto& [id, set] : sets) {
        const auto r = poincare_constant(*set, method);
        rows.push_back(spectral_row_json(id, r));
        csv += spectral_csv_row(id, r);
        ok = ok && r.cstar <= r.bound_fp * (1.0 + kBoundRelTol);
    }
    CommandOutput out;
    out.exit_code = ok ? kExitPass : kExitViolation;
    out.text = spec.format == "csv" ? csv : dump(json{{"rows", rows}, {"version", kVersion}});
    return out;
}

CommandOutput run_lemmas(const ExperimentSpec& spec) {
    require(spec.draws > 0, "--draws must be positive");
    require(spec.search_draws > 0, "--search-draws must be positive");
    require(spec.grid >= 100, "--grid must be at least 100");
    require(spec.pairs >= 0 && spec.jensen >= 0, "--pairs and --jensen must be non-negative");
    require(spec.c > 0, "--c must be positive");

    Certificate cert;
    cert.suite = "lemmas";
    std::size_t count = 0;

    // Decomposition identities on random (A, f), n cycling through 2..10.
    double max_dirichlet = 0, max_variance = 0, max_coefficient = 0;
    for (int k = 0; k < spec.pairs; ++k) {
        const int n = 2 + k % 9;
        std::mt19937_64 rng(spec.seed + static_cast<std::uint64_t>(k));
        const int gens = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(2 * n));
        auto set = std::make_shared<const MonotoneSet>(random_upset(n, gens, rng()));
        const SetFunction f = random_function(set, rng());
        const auto d = check_dirichlet_decomposition(f, spec.tol);
        const auto v = check_variance_decomposition(f, spec.tol);
        max_dirichlet = std::max(max_dirichlet, d.relative_residual);
        max_variance = std::max(max_variance, v.relative_residual);
        max_coefficient = std::max(max_coefficient, v.coefficient_residual);
        if (!d.passed() || !v.passed())
            push_capped(cert, count, json{{"check", "decomposition"}, {"pair", k}, {"n", n},
                                          {"dirichlet_residual", d.relative_residual},
                                          {"variance_residual", v.relative_residual}});
    }

    const auto psd = psd_grid_sweep(spec.grid);
    if (psd.min_margin < -kInequalityRelTol || psd.max_form_disagreement > 1e-12 || psd.min_trace < -kInequalityRelTol)
        push_capped(cert, count, json{{"check", "psd"}, {"a0", psd.argmin.a0}, {"a1", psd.argmin.a1},
                                      {"margin", psd.min_margin},
                                      {"form_disagreement", psd.max_form_disagreement}});

    const auto disc = discriminant_grid_sweep(spec.grid, spec.c);
    for (const auto& p : disc.violations)
        push_capped(cert, count, json{{"check", "discriminant"}, {"a0", p.a0}, {"a1", p.a1},
                                      {"delta", discriminant(p.a0, p.a1, spec.c).delta}});
    if (disc.sign_disagreements > 0)
        push_capped(cert, count, json{{"check", "discriminant_reduced_sign"}, {"count", disc.sign_disagreements}});

    const auto fp = five_point_sweep(spec.c, static_cast<std::size_t>(spec.draws), spec.seed);
    for (const auto& p : fp.witnesses)
        push_capped(cert, count, json{{"check", "five_point"}, {"a0", p.a0}, {"a1", p.a1}, {"alpha", p.alpha},
                                      {"beta", p.beta}, {"gamma", p.gamma}, {"c", p.c}});

    double max_sqrt = 0;
    const double step = 1.0 / (spec.grid - 1);
    for (int j = 0; j < spec.grid; ++j)
        for (int i = 0; i <= j; ++i) {
            const auto r = sqrt_identities(i * step, std::min(1.0, j * step));
            max_sqrt = std::max({max_sqrt, r.first, r.second});
        }
    if (max_sqrt > 1e-14) push_capped(cert, count, json{{"check", "sqrt_identities"}, {"residual", max_sqrt}});

    // Averaging reduction: threshold(4,2) and random upsets with a non-empty lower slice.
    double max_increase = -std::numeric_limits<double>::infinity(), max_closed = 0;
    for (int k = 0; k < spec.jensen; ++k) {
        std::mt19937_64 rng(spec.seed ^ (0xA5A5A5A5ULL + static_cast<std::uint64_t>(k)));
        std::shared_ptr<const MonotoneSet> set;
        if (k % 2 == 0) {
            set = std::make_shared<const MonotoneSet>(threshold_set(4, 2));
        } else {
            const int n = 3 + static_cast<int>(rng() % 6);
            do {
                set = std::make_shared<const MonotoneSet>(random_upset(n, 1 + static_cast<int>(rng() % 6), rng()));
            } while (!split(*set).slice0);
        }
        const auto jc = jensen_reduction_check(random_function(set, rng()), kDefaultConstant);
        max_increase = std::max(max_increase, jc.lhs_averaged - jc.lhs_full);
        max_closed = std::max({max_closed, jc.upper_variance_residual, jc.lower_variance_residual});
        if (!jc.reduced() || jc.upper_variance_residual > 1e-12 || jc.five_point_residual > 1e-10)
            push_capped(cert, count, json{{"check", "jensen"}, {"instance", k}, {"lhs_full", jc.lhs_full},
                                          {"lhs_averaged", jc.lhs_averaged}});
    }

    const auto best = best_feasible_c(spec.grid, static_cast<std::size_t>(spec.search_draws), spec.seed);
    if (best.best < kDefaultConstant)
        push_capped(cert, count, json{{"check", "best_feasible_c"}, {"best", best.best}});

    cert.counts = {{"decomposition_pairs", spec.pairs},
                   {"grid_points", psd.points},
                   {"draws", spec.draws},
                   {"jensen_instances", spec.jensen},
                   {"violations", count}};
    cert.worst_slack = std::min({psd.min_margin, -disc.max_delta, fp.worst_margin});
    json best_json{{"value", best.best}, {"infeasible_above", best.infeasible_above}};
    if (best.witness) best_json["witness"] = {{"a0", best.witness->a0}, {"a1", best.witness->a1}};
    cert.details = {{"grid", spec.grid},
                    {"seed", spec.seed},
                    {"draws", spec.draws},
                    {"c", spec.c},
                    {"min_psd_margin", psd.min_margin},
                    {"max_discriminant", disc.max_delta},
                    {"max_discriminant_at", {{"a0", disc.argmax.a0}, {"a1", disc.argmax.a1}}},
                    {"five_point_violations", fp.violations},
                    {"best_feasible_c", best.best},
                    {"best_feasible_c_search", best_json},
                    {"max_dirichlet_residual", max_dirichlet},
                    {"max_variance_residual", max_variance},
                    {"max_coefficient_residual", max_coefficient},
                    {"max_sqrt_residual", max_sqrt},
                    {"max_jensen_increase", max_increase},
                    {"max_closed_form_residual", max_closed}};

    CommandOutput out;
    out.exit_code = cert.pass() ? kExitPass : kExitViolation;
    out.text = dump(to_json(cert, spec));
    return out;
}

CommandOutput run_mix(const ExperimentSpec& spec) {
    require(spec.epsilon > 0 && spec.epsilon < 1, "--eps must lie in (0, 1)");
    require(spec.theta >= 0 && spec.theta < 1, "--theta must lie in [0, 1)");
    CommandOutput out;
    if (!spec.sets.empty()) {
        json reports = json::array();
        bool ok = true;
        for (const auto& text : spec.sets) {
            const auto d = parse_set_description(text);
            const CensoredKernel kernel(d.build(), spec.theta);
            const auto rep = exact_tmix(kernel, spec.epsilon, StartPolicy::automatic, spec.threads);
            json j = to_json(rep);
            j["set"] = d.text;
            if (rep.size >= 2 && spec.theta >= 0.5)
                ok = ok && rep.t_mix <= rep.bound_spectral && rep.bound_spectral <= rep.bound_poincare;
            reports.push_back(j);
        }
        out.exit_code = ok ? kExitPass : kExitViolation;
        out.text = dump(reports.size() == 1 ? reports.front() : reports);
        return out;
    }
    require(spec.family == "majority", "unknown family '" + spec.family + "' (supported: majority)");
    require(!spec.n_list.empty(), "--n is required for family runs");
    const auto rows = scaling_experiment(spec.n_list, spec.theta, spec.epsilon, spec.threads);
    bool ok = true;
    json jrows = json::array();
    for (const auto& r : rows) {
        if (spec.theta >= 0.5 && r.size >= 2) ok = ok && r.ordered();
        jrows.push_back(to_json(r));
    }
    out.exit_code = ok ? kExitPass : kExitViolation;
    out.text = spec.format == "csv" ? scaling_csv(rows) : dump(json{{"rows", jrows}, {"version", kVersion}});
    if (!spec.svg.empty()) out.svg = scaling_svg(rows);
    return out;
}

CommandOutput run_simulate(const ExperimentSpec& spec) {
    require(spec.sets.size() == 1, "simulate needs exactly one --set");
    require(spec.chains > 0, "--chains must be positive");
    require(spec.theta >= 0 && spec.theta < 1, "--theta must lie in [0, 1)");
    const auto d = parse_set_description(spec.sets.front());
    const OracleKernel kernel{d.oracle(), spec.theta};
    const CubePoint start = spec.start.empty() ? default_start(kernel.oracle) : CubePoint::parse(spec.start);
    const auto steps = spec.steps > 0 ? static_cast<std::size_t>(spec.steps) : static_cast<std::size_t>(4 * d.n * d.n);
    const auto ens = simulate_chains(kernel, start, steps, static_cast<std::size_t>(spec.chains), spec.seed,
                                     spec.threads);

    bool inside = true;
    json finals = json::array();
    for (const auto& c : ens.chains) {
        inside = inside && c.stayed_inside;
        finals.push_back(c.final_point.to_string());
    }
    json j{{"set", d.text},
           {"n", d.n},
           {"theta", spec.theta},
           {"steps", steps},
           {"chains", spec.chains},
           {"seed", spec.seed},
           {"start", start.to_string()},
           {"pooled_mean", ens.pooled_mean},
           {"pooled_stderr", ens.pooled_stderr},
           {"coordinate_means", ens.coordinate_means},
           {"stayed_inside", inside},
           {"final_points", finals},
           {"version", kVersion}};
    if (d.family == OracleFamily::threshold) {
        const double truth = stationary_coordinate_mean(d.n, d.param);
        j["analytic_mean"] = truth;
        const double z = ens.pooled_stderr > 0 ? (ens.pooled_mean - truth) / ens.pooled_stderr : 0.0;
        j["z_score"] = z;
        j["within_3se"] = std::abs(z) <= 3.0;
    }
    CommandOutput out;
    out.exit_code = inside ? kExitPass : kExitViolation;
    out.text = dump(j);
    return out;
}

CommandOutput run_enumerate(const ExperimentSpec& spec) {
    require(spec.enumerate.has_value(), "--n is required");
    const int n = *spec.enumerate;
    json sets = json::array();
    std::ostringstream csv;
    csv << "set_id,n,size,density,generators\n";
    std::size_t idx = 0;
    for_each_monotone(n, [&](const MonotoneSet& s) {
        const std::string gens = describe_generators(s);
        sets.push_back(json{{"id", idx}, {"size", s.size()}, {"density", s.density()}, {"generators", gens}});
        csv << idx << ',' << n << ',' << s.size() << ',' << format_double(s.density()) << ",\"" << gens << "\"\n";
        ++idx;
    });
    CommandOutput out;
    out.text = spec.format == "csv" ? csv.str() : dump(json{{"n", n}, {"count", idx}, {"sets", sets}});
    return out;
}

CommandOutput run_command(const ExperimentSpec& spec) {
    try {
        require(spec.format == "json" || spec.format == "csv", "--format must be json or csv");
        if (spec.command == "verify") return run_verify(spec);
        if (spec.command == "spectral") return run_spectral(spec);
        if (spec.command == "lemmas") return run_lemmas(spec);
        if (spec.command == "mix") return run_mix(spec);
        if (spec.command == "simulate") return run_simulate(spec);
        if (spec.command == "enumerate") return run_enumerate(spec);
        throw Error("unknown command '" + spec.command + "'");
    } catch (const Error& e) {
        return CommandOutput{kExitUsage, std::string("error: ") + e.what() + "\n", {}};
    } catch (const nlohmann::json::exception& e) {
        return CommandOutput{kExitUsage, std::string("error: ") + e.what() + "\n", {}};
    }
}

}  // namespace monocube
