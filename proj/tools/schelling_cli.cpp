// schelling: command-line front end for the engines, the exact oracle, the
// QUBO encoder, the walk baselines and the benchmark pipeline.
//
// Exit codes: 0 = completed (Unsatisfiable/TimedOut results are data),
// 2 = usage error, 3 = resource-cap rejection.

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "schelling/bench.hpp"
#include "schelling/count_first.hpp"
#include "schelling/errors.hpp"
#include "schelling/fitting.hpp"
#include "schelling/markov_oracle.hpp"
#include "schelling/qubo.hpp"
#include "schelling/topology.hpp"
#include "schelling/traditional.hpp"
#include "schelling/version.hpp"
#include "schelling/walks.hpp"

using nlohmann::json;
using namespace schelling;

namespace {

struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

void emit(const json& envelope, bool as_json) {
    if (as_json) std::cout << envelope.dump(2) << '\n';
}

void echo_config(const json& config, bool as_json) {
    if (as_json) return;  // embedded in the envelope instead
    std::cout << "config:";
    for (auto it = config.begin(); it != config.end(); ++it)
        std::cout << ' ' << it.key() << '=' << it.value().dump();
    std::cout << '\n';
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
    std::string topology;
    std::string engine;
    uint32_t clique_size = 0;
    uint32_t path_length = 0;
    uint32_t rows = 0, cols = 0;
    std::string grid;  // "RxC" alternative to --rows/--cols
    bool eight_connected = false;
    uint32_t agents_a = 0, agents_b = 0;
    std::string tau = "1/2";
    uint64_t seed = 1;
    uint64_t max_steps = 1'000'000;
    uint32_t trials = 1;
    bool skip_clique_internal = false;
    bool exact_bridge = false;
    bool geometric_jump = false;
    bool self_inclusive_clique_test = false;
    std::string trace_file;
};

std::pair<uint32_t, uint32_t> parse_grid(const std::string& s) {
    const auto x = s.find('x');
    if (x == std::string::npos) throw UsageError("--grid expects RxC, e.g. 3x3");
    return {static_cast<uint32_t>(std::stoul(s.substr(0, x))),
            static_cast<uint32_t>(std::stoul(s.substr(x + 1)))};
}

json outcome_json(const SimOutcome& o) {
    json j;
    j["outcome"] = outcome_name(o.kind);
    j["T"] = o.moves;
    j["seed"] = o.seed;
    j["wall_time_ns"] = o.wall_time.count();
    return j;
}

int cmd_simulate(const SimulateArgs& args, bool as_json) {
    const Threshold tau = Threshold::parse(args.tau);
    SchellingParams params;
    params.count_a = args.agents_a;
    params.count_b = args.agents_b;
    params.tau = tau;
    params.max_steps = args.max_steps;

    const bool count_first = args.engine == "count-first";
    if (!count_first && args.engine != "traditional")
        throw UsageError("--engine must be traditional or count-first");

    uint32_t rows = args.rows, cols = args.cols;
    if (!args.grid.empty()) std::tie(rows, cols) = parse_grid(args.grid);

    if (count_first && args.topology == "grid")
        throw UsageError("the count-first engine supports lollipop, clique and path only");
    if (args.topology == "lollipop" && args.clique_size == 0)
        throw UsageError("lollipop needs --clique-size >= 1");
    if (args.topology == "grid" && (rows == 0 || cols == 0))
        throw UsageError("grid needs --grid RxC (or --rows/--cols)");
    if ((args.skip_clique_internal || args.exact_bridge || args.geometric_jump) &&
        !(count_first && args.topology == "lollipop"))
        throw UsageError(
            "--skip-clique-internal/--exact-bridge/--geometric-jump apply to the "
            "count-first engine on lollipops");

    json config{{"topology", args.topology},
                {"engine", args.engine},
                {"tau", tau.str()},
                {"agents_a", args.agents_a},
                {"agents_b", args.agents_b},
                {"seed", args.seed},
                {"max_steps", args.max_steps},
                {"trials", args.trials}};
    if (args.topology == "lollipop") {
        config["clique_size"] = args.clique_size;
        config["path_length"] = args.path_length;
        config["exact_bridge"] = args.exact_bridge;
        config["skip_clique_internal"] = args.skip_clique_internal;
        config["geometric_jump"] = args.geometric_jump;
    }
    if (args.topology == "clique") config["clique_size"] = args.clique_size;
    if (args.topology == "path") config["path_length"] = args.path_length;
    if (args.topology == "grid") {
        config["grid"] = std::to_string(rows) + "x" + std::to_string(cols);
        config["eight_connected"] = args.eight_connected;
    }
    echo_config(config, as_json);

    // clique + count-first is the O(1) decision, no simulation at all
    if (count_first && args.topology == "clique") {
        SimOutcome out = decide_clique(args.agents_a, args.agents_b, tau);
        if (!as_json)
            std::cout << (out.is_satisfied() ? "satisfied(T=0)" : "unsatisfiable") << '\n';
        emit(json{{"version", kVersion},
                  {"command", "simulate"},
                  {"config", config},
                  {"result", json{{"decision", outcome_name(out.kind)}, {"T", out.moves}}}},
             as_json);
        return 0;
    }

    std::optional<Topology> topo;
    LollipopSpec spec;
    if (!count_first) {
        if (args.topology == "lollipop")
            topo.emplace(build_lollipop(args.clique_size, args.path_length));
        else if (args.topology == "clique")
            topo.emplace(build_clique(args.clique_size));
        else if (args.topology == "path")
            topo.emplace(build_path(args.path_length));
        else if (args.topology == "grid")
            topo.emplace(build_grid(rows, cols, args.eight_connected));
        else
            throw UsageError("unknown topology '" + args.topology + "'");
    } else {
        spec = LollipopSpec{args.clique_size, args.path_length, {0, args.clique_size}};
    }
    CountFirstOptions cf_options;
    cf_options.bridge = args.exact_bridge ? BridgeMode::Exact : BridgeMode::Ignore;
    cf_options.skip_clique_internal = args.skip_clique_internal;
    cf_options.geometric_jump = args.geometric_jump;
    cf_options.self_inclusive_clique_test = args.self_inclusive_clique_test;

    json results = json::array();
    std::vector<double> satisfied_t, wall_seconds;
    uint32_t timeouts = 0;
    Trace trace;
    for (uint32_t trial = 0; trial < args.trials; ++trial) {
        const uint64_t seed = args.trials == 1 ? args.seed : mix_seed({args.seed, trial});
        Trace* trace_ptr = (!args.trace_file.empty() && trial == 0) ? &trace : nullptr;
        const auto t0 = std::chrono::steady_clock::now();
        SimOutcome out;
        if (count_first && args.topology == "path")
            out = simulate_path(args.path_length, params, seed, trace_ptr);
        else if (count_first)
            out = simulate_lollipop_count_first(spec, params, seed, cf_options, trace_ptr);
        else
            out = simulate_traditional(*topo, params, seed, {}, trace_ptr);
        out.wall_time = std::chrono::steady_clock::now() - t0;

        if (out.is_satisfied()) {
            satisfied_t.push_back(double(out.moves));
            wall_seconds.push_back(1e-9 * double(out.wall_time.count()));
        } else {
            ++timeouts;
        }
        if (!as_json)
            std::cout << "trial " << trial << " seed " << seed << ": " << out.str() << "  ("
                      << 1e-6 * double(out.wall_time.count()) << " ms)\n";
        results.push_back(outcome_json(out));
    }
    json aggregate;
    if (args.trials > 1 && !satisfied_t.empty()) {
        double mean = 0, m2 = 0;
        for (double t : satisfied_t) mean += t;
        mean /= double(satisfied_t.size());
        for (double t : satisfied_t) m2 += (t - mean) * (t - mean);
        const double stddev =
            satisfied_t.size() > 1 ? std::sqrt(m2 / double(satisfied_t.size() - 1)) : 0.0;
        double mean_wall = 0;
        for (double w : wall_seconds) mean_wall += w;
        mean_wall /= double(wall_seconds.size());
        aggregate = json{{"satisfied_trials", satisfied_t.size()},
                         {"timeouts", timeouts},
                         {"mean_T", mean},
                         {"stddev_T", stddev},
                         {"mean_wall_seconds", mean_wall}};
        if (!as_json)
            std::cout << "aggregate: satisfied=" << satisfied_t.size()
                      << " timeouts=" << timeouts << " mean_T=" << mean
                      << " stddev_T=" << stddev << " mean_wall=" << mean_wall << " s\n";
    }
    if (!args.trace_file.empty()) {
        std::ofstream f(args.trace_file);
        trace.write_csv(f);
        if (!as_json) std::cout << "trace written to " << args.trace_file << '\n';
    }
    json result{{"trials", results}};
    if (!aggregate.is_null()) result["aggregate"] = aggregate;
    emit(json{{"version", kVersion},
              {"command", "simulate"},
              {"config", config},
              {"result", result}},
         as_json);
    return 0;
}

// -------------------------------------------------------------------- bench

struct BenchArgs {
    std::string sizes;
    uint32_t trials = 500;
    double density = 0.8;
    double split = 0.5;
    double clique_frac = 0.1;
    std::string tau = "1/2";
    std::string engines = "traditional,count-first";
    uint64_t master_seed = 1;
    uint64_t max_steps = 0;
    std::string out_file = "results.csv";
    std::string plot_prefix;
    unsigned jobs = 1;
};

std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream is(s);
    std::string item;
    while (std::getline(is, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

int cmd_bench(const BenchArgs& args, bool as_json) {
    ExperimentPlan plan;
    for (const auto& s : split_csv(args.sizes)) plan.sizes.push_back(std::stoull(s));
    plan.trials_per_size = args.trials;
    plan.density = args.density;
    plan.split = args.split;
    plan.clique_fraction = args.clique_frac;
    plan.tau = Threshold::parse(args.tau);
    plan.engines.clear();
    for (const auto& e : split_csv(args.engines)) {
        if (e == "traditional")
            plan.engines.push_back(EngineKind::Traditional);
        else if (e == "count-first" || e == "count_first")
            plan.engines.push_back(EngineKind::CountFirst);
        else
            throw UsageError("unknown engine '" + e + "'");
    }
    plan.master_seed = args.master_seed;
    plan.max_steps = args.max_steps;
    plan.jobs = args.jobs;

    json config{{"sizes", plan.sizes},          {"trials", plan.trials_per_size},
                {"density", plan.density},      {"split", plan.split},
                {"clique_frac", plan.clique_fraction}, {"tau", plan.tau.str()},
                {"engines", args.engines},      {"master_seed", plan.master_seed},
                {"max_steps", plan.max_steps},  {"jobs", plan.jobs},
                {"out", args.out_file}};
    echo_config(config, as_json);

    auto records = run_experiment(plan, &std::cerr);
    {
        std::ofstream f(args.out_file);
        if (!f) throw std::runtime_error("cannot write " + args.out_file);
        write_results_csv(f, records);
    }
    json result{{"records", records.size()}, {"out", args.out_file}};
    json summary = json::array();
    for (EngineKind engine : plan.engines) {
        auto agg = aggregate_by_size(records, engine);
        if (!args.plot_prefix.empty()) {
            const std::string path =
                args.plot_prefix + "_" + engine_name(engine) + ".dat";
            std::ofstream f(path);
            write_plot_data(f, agg);
        }
        for (const auto& a : agg) {
            summary.push_back(json{{"engine", engine_name(engine)},
                                   {"size", a.size},
                                   {"satisfied", a.satisfied},
                                   {"timeouts", a.timeouts},
                                   {"mean_wall_seconds", a.mean_wall_seconds},
                                   {"mean_T", a.mean_moves}});
            if (!as_json)
                std::cout << engine_name(engine) << " size=" << a.size
                          << " satisfied=" << a.satisfied << " timeouts=" << a.timeouts
                          << " mean_wall=" << a.mean_wall_seconds
                          << " s mean_T=" << a.mean_moves << '\n';
        }
    }
    result["summary"] = std::move(summary);
    if (!as_json) std::cout << "results written to " << args.out_file << '\n';
    emit(json{{"version", kVersion}, {"command", "bench"}, {"config", config},
              {"result", result}},
         as_json);
    return 0;
}

// ---------------------------------------------------------------------- fit

struct CsvRow {
    std::string engine;
    uint64_t size;
    std::string outcome;
    double wall_seconds;
};

std::vector<CsvRow> read_results_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot read " + path);
    std::vector<CsvRow> rows;
    std::string line;
    std::getline(f, line);  // header
    while (std::getline(f, line)) {
        std::istringstream is(line);
        std::string engine, size, trial, seed, outcome, moves, wall;
        std::getline(is, engine, ',');
        std::getline(is, size, ',');
        std::getline(is, trial, ',');
        std::getline(is, seed, ',');
        std::getline(is, outcome, ',');
        std::getline(is, moves, ',');
        std::getline(is, wall, ',');
        if (wall.empty()) continue;
        rows.push_back({engine, std::stoull(size), outcome, 1e-9 * std::stod(wall)});
    }
    return rows;
}

int cmd_fit(const std::string& input, const std::string& out_file, bool as_json) {
    auto rows = read_results_csv(input);
    json config{{"input", input}, {"out", out_file}};
    echo_config(config, as_json);

    std::map<std::string, std::map<uint64_t, std::pair<double, uint32_t>>> by_engine;
    for (const auto& r : rows) {
        if (r.outcome != "satisfied") continue;
        auto& [sum, count] = by_engine[r.engine][r.size];
        sum += r.wall_seconds;
        count++;
    }
    json engines_json = json::array();
    for (auto& [engine, sizes] : by_engine) {
        Series series;
        for (auto& [size, agg] : sizes)
            series.emplace_back(double(size), agg.first / agg.second);
        json entry{{"engine", engine}};
        if (series.size() < 4) {
            entry["diagnostic"] = "need >= 4 sizes with satisfied runs to fit";
        } else {
            FitReport fit = fit_models(series);
            ExponentReport exponents = estimate_exponents(series);
            entry.update(fit_to_json(series, fit, exponents));
            if (!as_json) {
                std::cout << engine << ": best=" << fit.best_model;
                for (const auto& m : fit.models)
                    if (m.ok && m.name == "Power")
                        std::cout << "  power: a=" << m.coeffs[0] << " b=" << m.coeffs[1]
                                  << " r2=" << m.r_squared;
                std::cout << "  exponents: polyfit=" << exponents.polyfit_loglog
                          << " nls=" << exponents.nonlinear_ls
                          << " local=" << exponents.local_exponent << '\n';
            }
        }
        engines_json.push_back(std::move(entry));
    }
    json result{{"engines", engines_json}};
    if (!out_file.empty()) {
        std::ofstream f(out_file);
        if (!f) throw std::runtime_error("cannot write " + out_file);
        f << json{{"version", kVersion}, {"command", "fit"}, {"config", config},
                  {"result", result}}
                 .dump(2)
          << '\n';
        if (!as_json) std::cout << "fit written to " << out_file << '\n';
    }
    emit(json{{"version", kVersion}, {"command", "fit"}, {"config", config},
              {"result", result}},
         as_json);
    return 0;
}

// --------------------------------------------------------------------- qubo

int cmd_qubo(const std::string& grid, uint32_t agents_a, uint32_t agents_b,
             const std::string& out_file, bool as_json) {
    auto [rows, cols] = parse_grid(grid);
    json config{{"grid", grid}, {"agents_a", agents_a}, {"agents_b", agents_b}};
    echo_config(config, as_json);

    Topology topo = build_grid(rows, cols);
    SchellingParams params;
    params.count_a = agents_a;
    params.count_b = agents_b;
    auto [qubo, report] = encode_qubo(topo, params);
    if (!as_json) {
        std::cout << "qubits: " << report.num_qubits << '\n'
                  << "terms: " << report.term_count << '\n'
                  << "encode_time_ms: " << 1e-6 * double(report.encode_wall_time.count())
                  << '\n';
    }
    if (!out_file.empty()) {
        std::ofstream f(out_file);
        if (!f) throw std::runtime_error("cannot write " + out_file);
        f << qubo.to_json().dump() << '\n';
        if (!as_json) std::cout << "qubo written to " << out_file << '\n';
    }
    emit(json{{"version", kVersion},
              {"command", "qubo"},
              {"config", config},
              {"result", json{{"num_qubits", report.num_qubits},
                              {"term_count", report.term_count},
                              {"encode_time_ms",
                               1e-6 * double(report.encode_wall_time.count())},
                              {"out", out_file}}}},
         as_json);
    return 0;
}

// -------------------------------------------------------------------- walks

int cmd_walks_hypercube(uint32_t n, uint32_t trials, bool exact, uint64_t seed,
                        uint64_t max_steps, bool as_json) {
    json config{{"n", n}, {"trials", trials}, {"exact", exact}, {"seed", seed},
                {"max_steps", max_steps}};
    echo_config(config, as_json);
    json result;
    if (exact) {
        const BigRational e = hypercube_hitting_exact(n);
        result["exact"] = e.convert_to<double>();
        result["exact_rational"] = e.str();
        if (!as_json)
            std::cout << "exact: " << e.convert_to<double>() << "  (= " << e.str() << ")\n";
    }
    if (trials > 0) {
        double sum = 0;
        uint32_t found = 0;
        json per_trial = json::array();
        for (uint32_t t = 0; t < trials; ++t) {
            WalkOutcome out = hypercube_hitting_simulate(n, mix_seed({seed, t}), max_steps);
            per_trial.push_back(json{{"steps", out.steps_or_queries}, {"found", out.found}});
            if (!as_json && trials <= 20)
                std::cout << "trial " << t << ": steps=" << out.steps_or_queries
                          << (out.found ? "" : " (cap reached)") << '\n';
            if (out.found) {
                sum += double(out.steps_or_queries);
                ++found;
            }
        }
        result["trials"] = trials;
        result["found"] = found;
        if (found > 0) result["mean_steps"] = sum / found;
        if (trials <= 20) result["per_trial"] = std::move(per_trial);
        if (!as_json && found > 0)
            std::cout << "simulated mean over " << found << "/" << trials
                      << " trials: " << sum / found << '\n';
    }
    emit(json{{"version", kVersion}, {"command", "walks"}, {"config", config},
              {"result", result}},
         as_json);
    return 0;
}

int cmd_walks_welded(uint32_t height, uint32_t trials, uint64_t max_queries, uint64_t seed,
                     bool as_json) {
    json config{{"height", height}, {"trials", trials}, {"max_queries", max_queries},
                {"seed", seed}};
    echo_config(config, as_json);
    auto [topo, spec] = build_welded_tree(height, seed);
    std::vector<double> queries;
    uint32_t found = 0;
    for (uint32_t t = 0; t < trials; ++t) {
        WalkOutcome out = welded_tree_classical_walk(topo, spec, mix_seed({seed, t}),
                                                     max_queries);
        if (out.found) ++found;
        if (!as_json && trials <= 20)
            std::cout << "trial " << t << ": queries=" << out.steps_or_queries
                      << (out.found ? "" : " (cap reached)") << '\n';
        queries.push_back(double(out.steps_or_queries));
    }
    std::sort(queries.begin(), queries.end());
    const double median = trials == 0 ? 0
                          : trials % 2 ? queries[trials / 2]
                                       : 0.5 * (queries[trials / 2 - 1] + queries[trials / 2]);
    double mean = 0;
    for (double q : queries) mean += q;
    if (trials > 0) mean /= trials;
    if (!as_json)
        std::cout << "height " << height << ": found " << found << "/" << trials
                  << " median_queries=" << median << " mean_queries=" << mean << '\n';
    emit(json{{"version", kVersion},
              {"command", "walks"},
              {"config", config},
              {"result", json{{"found", found},
                              {"trials", trials},
                              {"median_queries", median},
                              {"mean_queries", mean}}}},
         as_json);
    return 0;
}

// ------------------------------------------------------------------- oracle

int cmd_oracle(const std::string& topology, uint32_t clique_size, uint32_t path_length,
               const std::string& grid, uint32_t agents_a, uint32_t agents_b,
               const std::string& tau_text, uint64_t state_cap, bool as_json) {
    const Threshold tau = Threshold::parse(tau_text);
    std::optional<Topology> topo;
    if (topology == "lollipop")
        topo.emplace(build_lollipop(clique_size, path_length));
    else if (topology == "clique")
        topo.emplace(build_clique(clique_size));
    else if (topology == "path")
        topo.emplace(build_path(path_length));
    else if (topology == "grid") {
        auto [r, c] = parse_grid(grid);
        topo.emplace(build_grid(r, c));
    } else
        throw UsageError("oracle supports lollipop, clique, path, grid");

    json config{{"topology", topology}, {"tau", tau.str()},
                {"agents_a", agents_a}, {"agents_b", agents_b},
                {"state_cap", state_cap}};
    echo_config(config, as_json);

    SchellingParams params;
    params.count_a = agents_a;
    params.count_b = agents_b;
    params.tau = tau;
    OracleLimits limits;
    limits.state_cap = state_cap;
    OracleResult r = exact_expected_moves(*topo, params, limits);

    json result{{"states", r.num_states},
                {"absorbing", r.num_absorbing},
                {"divergent", r.num_divergent}};
    if (r.unsatisfiable) {
        result["outcome"] = "unsatisfiable";
        if (!as_json) std::cout << "unsatisfiable\n";
    } else if (!r.all_finite) {
        result["outcome"] = "divergent";
        if (!as_json)
            std::cout << "divergent: " << r.num_divergent << " of " << r.num_states
                      << " start states never reach satisfaction\n";
    } else {
        result["outcome"] = "finite";
        result["expected_moves"] = r.expected_uniform;
        if (r.expected_uniform_exact) {
            result["expected_moves_exact"] = r.expected_uniform_exact->str();
            if (!as_json)
                std::cout << "expected moves: " << r.expected_uniform_exact->str() << " = "
                          << r.expected_uniform << '\n';
        } else if (!as_json) {
            std::cout << "expected moves: " << r.expected_uniform << '\n';
        }
    }
    emit(json{{"version", kVersion}, {"command", "oracle"}, {"config", config},
              {"result", result}},
         as_json);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Schelling segregation dynamics on lollipop networks: engines, oracle, "
                 "QUBO encoder, walk baselines, benchmark pipeline"};
    app.set_version_flag("--version", kVersion);
    app.set_config("--config", "", "Read defaults from an INI/TOML file (flags win)");
    app.require_subcommand(1);
    bool as_json = false;
    app.add_flag("--json", as_json, "Emit a JSON envelope on stdout");

    // simulate
    SimulateArgs sim;
    auto* simulate = app.add_subcommand("simulate", "Run one engine on one instance");
    simulate->add_option("--topology", sim.topology, "lollipop|clique|path|grid")
        ->required();
    simulate->add_option("--engine", sim.engine, "traditional|count-first")->required();
    simulate->add_option("--clique-size", sim.clique_size);
    simulate->add_option("--path-length", sim.path_length);
    simulate->add_option("--rows", sim.rows);
    simulate->add_option("--cols", sim.cols);
    simulate->add_option("--grid", sim.grid, "RxC shorthand");
    simulate->add_flag("--eight-connected", sim.eight_connected,
                       "grid uses the 8-neighborhood instead of 4");
    simulate->add_option("--agents-a", sim.agents_a)->required();
    simulate->add_option("--agents-b", sim.agents_b);
    simulate->add_option("--tau", sim.tau, "threshold as P/Q literal");
    simulate->add_option("--seed", sim.seed);
    simulate->add_option("--max-steps", sim.max_steps);
    simulate->add_option("--trials", sim.trials);
    simulate->add_flag("--skip-clique-internal", sim.skip_clique_internal,
                       "Clique-internal relocations never happen or count");
    simulate->add_flag("--exact-bridge", sim.exact_bridge,
                       "Evaluate bridge-adjacent vertices with true neighborhoods");
    simulate->add_flag("--geometric-jump", sim.geometric_jump,
                       "Batch clique-internal runs with one geometric draw");
    simulate->add_flag("--self-inclusive-clique-test", sim.self_inclusive_clique_test,
                       "Clique test on raw tallies, without the self-exclusion adjustment");
    simulate->add_option("--trace", sim.trace_file, "Write a move trace CSV (first trial)");

    // bench
    BenchArgs bench;
    auto* bench_cmd = app.add_subcommand("bench", "Run the scaling experiment grid");
    bench_cmd->add_option("--sizes", bench.sizes, "comma-separated vertex counts")
        ->required();
    bench_cmd->add_option("--trials", bench.trials);
    bench_cmd->add_option("--density", bench.density);
    bench_cmd->add_option("--split", bench.split);
    bench_cmd->add_option("--clique-frac", bench.clique_frac);
    bench_cmd->add_option("--tau", bench.tau);
    bench_cmd->add_option("--engines", bench.engines);
    bench_cmd->add_option("--master-seed", bench.master_seed);
    bench_cmd->add_option("--max-steps", bench.max_steps, "0 = auto (scales with size)");
    bench_cmd->add_option("--out", bench.out_file);
    bench_cmd->add_option("--plot-prefix", bench.plot_prefix,
                          "write PREFIX_<engine>.dat plot data");
    bench_cmd->add_option("--jobs", bench.jobs, "parallel trial workers");

    // fit
    std::string fit_input = "results.csv", fit_out = "fit.json";
    auto* fit_cmd = app.add_subcommand("fit", "Fit regression models to bench results");
    fit_cmd->add_option("--input", fit_input)->required();
    fit_cmd->add_option("--out", fit_out);

    // qubo
    std::string qubo_grid;
    uint32_t qubo_a = 0, qubo_b = 0;
    std::string qubo_out;
    auto* qubo_cmd = app.add_subcommand("qubo", "Encode a grid instance as a QUBO");
    qubo_cmd->add_option("--grid", qubo_grid, "RxC")->required();
    qubo_cmd->add_option("--agents-a", qubo_a)->required();
    qubo_cmd->add_option("--agents-b", qubo_b)->required();
    qubo_cmd->add_option("--out", qubo_out, "write the QUBO JSON here");

    // walks
    auto* walks = app.add_subcommand("walks", "Random-walk contrast cases");
    walks->require_subcommand(1);
    uint32_t hc_n = 4, hc_trials = 0;
    bool hc_exact = false;
    uint64_t hc_seed = 1, hc_max_steps = 1ull << 40;
    auto* hypercube = walks->add_subcommand("hypercube", "Hitting time 0^n -> 1^n");
    hypercube->add_option("--n", hc_n)->required();
    hypercube->add_option("--trials", hc_trials);
    hypercube->add_flag("--exact", hc_exact, "exact expected value (tridiagonal solve)");
    hypercube->add_option("--seed", hc_seed);
    hypercube->add_option("--max-steps", hc_max_steps);
    uint32_t wt_height = 4, wt_trials = 200;
    uint64_t wt_max_queries = 100'000'000, wt_seed = 1;
    auto* welded = walks->add_subcommand("welded-tree", "Classical query-model baseline");
    welded->add_option("--height", wt_height)->required();
    welded->add_option("--trials", wt_trials);
    welded->add_option("--max-queries", wt_max_queries);
    welded->add_option("--seed", wt_seed);

    // oracle
    std::string or_topology;
    uint32_t or_clique = 0, or_path = 0, or_a = 0, or_b = 0;
    std::string or_grid, or_tau = "1/2";
    uint64_t or_cap = 1'000'000;
    auto* oracle_cmd =
        app.add_subcommand("oracle", "Exact expected moves via the Markov chain");
    oracle_cmd->add_option("--topology", or_topology, "lollipop|clique|path|grid")
        ->required();
    oracle_cmd->add_option("--clique-size", or_clique);
    oracle_cmd->add_option("--path-length", or_path);
    oracle_cmd->add_option("--grid", or_grid, "RxC");
    oracle_cmd->add_option("--agents-a", or_a)->required();
    oracle_cmd->add_option("--agents-b", or_b);
    oracle_cmd->add_option("--tau", or_tau);
    oracle_cmd->add_option("--state-cap", or_cap);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (simulate->parsed()) return cmd_simulate(sim, as_json);
        if (bench_cmd->parsed()) return cmd_bench(bench, as_json);
        if (fit_cmd->parsed()) return cmd_fit(fit_input, fit_out, as_json);
        if (qubo_cmd->parsed()) return cmd_qubo(qubo_grid, qubo_a, qubo_b, qubo_out, as_json);
        if (walks->parsed()) {
            if (hypercube->parsed())
                return cmd_walks_hypercube(hc_n, hc_trials, hc_exact, hc_seed, hc_max_steps,
                                           as_json);
            return cmd_walks_welded(wt_height, wt_trials, wt_max_queries, wt_seed, as_json);
        }
        if (oracle_cmd->parsed())
            return cmd_oracle(or_topology, or_clique, or_path, or_grid, or_a, or_b, or_tau,
                              or_cap, as_json);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const ResourceLimitError& e) {
        std::cerr << "resource limit: " << e.what() << '\n';
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
