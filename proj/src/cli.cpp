#include "evcharge/cli.hpp"

#include <CLI11.hpp>
#include <openssl/evp.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "evcharge/baseline.hpp"
#include "evcharge/nominal.hpp"
#include "evcharge/robust.hpp"
#include "evcharge/scenario_io.hpp"
#include "evcharge/synthetic.hpp"
#include "evcharge/version.hpp"

namespace evcharge::cli {

namespace fs = std::filesystem;

namespace {

struct InputFailure : Error {
    using Error::Error;
};

struct OutputFailure : Error {
    using Error::Error;
};

const std::vector<std::string> kDefaultFilters = {"first=100", "first=365", "N>0", "N>=10", "N>=30"};

std::string default_out_dir() {
    if (const char* env = std::getenv("EVCHARGE_OUT_DIR"); env && *env) return env;
    return "evcharge-out";
}

void add_model_options(CLI::App& app, Command& cmd) {
    app.add_option("--horizon", cmd.ingest.horizon_steps, "Time steps per day (T)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--step-hours", cmd.ingest.step_hours, "Hours per time step")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--capacity", cmd.ingest.capacity, "Station capacity per step, kW")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--socket-limit", cmd.ingest.socket_limit, "Per-socket power limit, kW")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--waste", cmd.ingest.waste, "Proportional energy waste factor")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
}

void add_ingest_options(CLI::App& app, std::string& unit, std::string& policy) {
    app.add_option("--price-unit", unit, "Unit of the price column")
        ->check(CLI::IsMember({"per-kwh", "per-mwh"}))
        ->capture_default_str();
    app.add_option("--midnight", policy, "Sessions that leave after the horizon: clamp or drop")
        ->check(CLI::IsMember({"clamp", "drop"}))
        ->capture_default_str();
}

void add_batch_options(CLI::App& app, Command& cmd, std::vector<std::string>& methods,
                       std::vector<std::string>& filters) {
    app.add_option("--methods", methods, "Extra optimizers: robust-price, robust-load")
        ->delimiter(',')
        ->check(CLI::IsMember({"robust-price", "robust-load"}));
    app.add_option("--filter", filters, "Summary filters such as N>=10 or first=100&N>0");
    app.add_option("--workers", cmd.workers, "Parallel scenario workers")->check(CLI::PositiveNumber);
    app.add_option("--fig2-day", cmd.fig2_day, "Scenario id plotted in fig2_day.csv (default: first comparable)");
}

void add_robust_options(CLI::App& app, Command& cmd) {
    app.add_option("--radius", cmd.radius, "Price uncertainty radius r")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    app.add_option("--load-scale", cmd.load_scale, "Worst-case load as a multiple of the nominal load")
        ->check(CLI::Range(1.0, 1e9))
        ->capture_default_str();
}

void add_synthetic_option(CLI::App& app, std::vector<std::uint64_t>& synthetic) {
    app.add_option("--synthetic", synthetic, "Random test instances instead of input files: N T SEED")
        ->expected(3);
}

std::string sha256_hex(const std::string& bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (!EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr))
        throw Error("SHA-256 digest failed");
    std::string hex;
    char buf[3];
    for (unsigned int k = 0; k < len; ++k) {
        std::snprintf(buf, sizeof buf, "%02x", digest[k]);
        hex += buf;
    }
    return hex;
}

std::ifstream open_input(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputFailure("cannot open " + path.string());
    return in;
}

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw OutputFailure("cannot create " + dir.string() + ": " + ec.message());
}

template <class F>
auto with_input(const fs::path& path, F&& parse) {
    try {
        return parse();
    } catch (const MalformedRow& e) {
        throw InputFailure(path.string() + ":" + std::to_string(e.line()) + ": " + e.reason());
    } catch (const InputFailure&) {
        throw;
    } catch (const Error& e) {
        throw InputFailure(path.string() + ": " + e.what());
    }
}

nlohmann::json config_json(const Command& cmd) {
    nlohmann::json methods = nlohmann::json::array();
    for (auto m : cmd.extra_methods) methods.push_back(std::string(to_string(m)));
    nlohmann::json filters = nlohmann::json::array();
    for (const auto& f : cmd.filters) filters.push_back(f.label());
    nlohmann::json cfg = {
        {"horizon_steps", cmd.ingest.horizon_steps},
        {"step_hours", cmd.ingest.step_hours},
        {"capacity_kw", cmd.ingest.capacity},
        {"socket_limit_kw", cmd.ingest.socket_limit},
        {"waste", cmd.ingest.waste},
        {"price_unit", std::string(to_string(cmd.ingest.price_unit))},
        {"midnight_policy", std::string(to_string(cmd.ingest.midnight_policy))},
        {"method", std::string(to_string(cmd.method))},
        {"radius", cmd.radius},
        {"load_scale", cmd.load_scale},
        {"extra_methods", methods},
        {"filters", filters},
        {"workers", cmd.workers},
    };
    if (cmd.synthetic)
        cfg["synthetic"] = {{"num_vehicles", cmd.synthetic->num_vehicles},
                            {"horizon_steps", cmd.synthetic->horizon_steps},
                            {"seed", cmd.synthetic->seed},
                            {"days", cmd.days}};
    return cfg;
}

nlohmann::json tolerances_json() {
    const LpOptions lp;
    const CutOptions cuts;
    return {{"feasibility_kw", kFeasibilityTol},
            {"lp_relative_gap", lp.gap_tol},
            {"cut_relative_gap", cuts.rel_tol},
            {"max_rounds", cuts.max_rounds},
            {"cost_relative", kCostRelTol}};
}

void write_json(const nlohmann::json& doc, const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw OutputFailure("cannot write " + path.string());
    out << doc.dump(2) << '\n';
    if (!out) throw OutputFailure("failed writing " + path.string());
}

void write_manifest(const Command& cmd, const std::vector<fs::path>& inputs,
                    const std::vector<std::string>& outputs) {
    nlohmann::json in = nlohmann::json::array();
    for (const auto& p : inputs) in.push_back({{"path", p.string()}, {"sha256", file_sha256(p)}});
    write_json({{"tool", "evcharge"},
                {"version", kVersion},
                {"arguments", cmd.arguments},
                {"config", config_json(cmd)},
                {"tolerances", tolerances_json()},
                {"inputs", in},
                {"outputs", outputs}},
               cmd.out_dir / "manifest.json");
}

std::vector<Scenario> synthetic_batch(const Command& cmd) {
    SyntheticOptions o;
    o.num_vehicles = cmd.synthetic->num_vehicles;
    o.horizon_steps = cmd.synthetic->horizon_steps;
    o.step_hours = cmd.ingest.step_hours;
    o.capacity = cmd.ingest.capacity;
    o.socket_limit = cmd.ingest.socket_limit;
    o.waste = cmd.ingest.waste;
    std::vector<Scenario> out;
    const std::size_t count = std::max<std::size_t>(cmd.days, 1);
    for (std::size_t k = 0; k < count; ++k) out.push_back(synthetic_scenario(o, cmd.synthetic->seed + k));
    return out;
}

struct Ingested {
    BuildResult built;
    std::vector<fs::path> inputs;
};

Ingested ingest_inputs(const Command& cmd, std::ostream& err) {
    Ingested result;
    if (cmd.synthetic) {
        // Simulate on a generated session log, written next to the reports.
        CorpusOptions o;
        o.days = std::max<std::size_t>(cmd.days, 1);
        o.max_sessions_per_day = std::max<std::size_t>(cmd.synthetic->num_vehicles, 1);
        const auto corpus = synthetic_corpus(o, cmd.synthetic->seed);
        const auto dir = cmd.out_dir / "inputs";
        ensure_dir(dir);
        std::ofstream s(dir / "sessions.csv", std::ios::binary), p(dir / "prices.csv", std::ios::binary);
        write_sessions_csv(corpus.sessions, s);
        write_prices_csv(corpus.prices, PriceUnit::PerMwh, p);
        if (!s || !p) throw OutputFailure("cannot write synthetic inputs under " + dir.string());
        IngestConfig cfg = cmd.ingest;
        cfg.horizon_steps = cmd.synthetic->horizon_steps;
        cfg.price_unit = PriceUnit::PerMwh;
        cfg.validate();
        result.built = build_scenarios(corpus.sessions, corpus.prices, cfg);
    } else {
        auto sin = open_input(cmd.sessions);
        const auto sessions = with_input(cmd.sessions, [&] { return parse_sessions(sin); });
        auto pin = open_input(cmd.prices);
        const auto prices = with_input(cmd.prices, [&] { return parse_prices(pin, cmd.ingest.price_unit); });
        result.built = with_input(cmd.sessions, [&] { return build_scenarios(sessions, prices, cmd.ingest); });
        result.inputs = {cmd.sessions, cmd.prices};
    }
    for (const auto& day : result.built.missing_price_days) err << "warning: skipped " << day << " (missing prices)\n";
    if (result.built.dropped_sessions)
        err << "warning: dropped " << result.built.dropped_sessions << " session(s) outside the horizon\n";
    return result;
}

nlohmann::json ingest_report_json(const BuildResult& built) {
    nlohmann::json ids = nlohmann::json::array();
    for (const auto& sc : built.scenarios) ids.push_back(sc.scenario_id);
    return {{"scenarios", ids},
            {"scenario_count", built.scenarios.size()},
            {"missing_price_days", built.missing_price_days},
            {"dropped_sessions", built.dropped_sessions}};
}

void print_feasibility(const Scenario& sc, const FeasibilityReport& report, std::ostream& err) {
    err << "scenario " << sc.scenario_id << " is infeasible\n"
        << "  deliverable (max flow): " << report.max_flow << " kW-steps of " << report.total_load << " required\n";
    for (std::size_t i = 0; i < report.per_vehicle_slack.size(); ++i) {
        if (report.per_vehicle_slack[i] >= -kFeasibilityTol) continue;
        const auto& id = sc.vehicle_ids.empty() ? "v" + std::to_string(i + 1) : sc.vehicle_ids[i];
        err << "  vehicle " << id << ": load exceeds window capacity by " << -report.per_vehicle_slack[i] << '\n';
    }
}

void write_schedule_csv(const Schedule& schedule, const Scenario& sc, const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw OutputFailure("cannot write " + path.string());
    out << "step";
    for (std::size_t i = 0; i < sc.num_vehicles(); ++i)
        out << ',' << (sc.vehicle_ids.empty() ? "v" + std::to_string(i + 1) : sc.vehicle_ids[i]);
    out << '\n';
    char buf[64];
    for (std::size_t t = 0; t < sc.horizon_steps; ++t) {
        out << t + 1;
        for (std::size_t i = 0; i < sc.num_vehicles(); ++i) {
            std::snprintf(buf, sizeof buf, "%.6f", schedule.allocation(t, i));
            out << ',' << buf;
        }
        out << '\n';
    }
    if (!out) throw OutputFailure("failed writing " + path.string());
}

int run_ingest(const Command& cmd, std::ostream& out, std::ostream& err) {
    ensure_dir(cmd.out_dir / "scenarios");
    const auto ingested = ingest_inputs(cmd, err);
    std::vector<std::string> outputs = {"ingest_report.json"};
    for (const auto& sc : ingested.built.scenarios) {
        const auto name = "scenarios/" + sc.scenario_id + ".json";
        try {
            write_scenario_file(sc, cmd.out_dir / name);
        } catch (const Error& e) {
            throw OutputFailure(e.what());
        }
        outputs.push_back(name);
    }
    write_json(ingest_report_json(ingested.built), cmd.out_dir / "ingest_report.json");
    write_manifest(cmd, ingested.inputs, outputs);
    out << "wrote " << ingested.built.scenarios.size() << " scenario(s) to " << (cmd.out_dir / "scenarios").string()
        << '\n';
    return kOk;
}

int run_solve(const Command& cmd, std::ostream& out, std::ostream& err) {
    Scenario sc;
    std::vector<fs::path> inputs;
    if (cmd.synthetic) {
        sc = synthetic_batch(cmd).front();
    } else {
        const auto& path = cmd.scenarios.front();
        sc = with_input(path, [&] { return read_scenario_file(path); });
        inputs.push_back(path);
    }
    ensure_dir(cmd.out_dir);

    nlohmann::json result = {{"scenario_id", sc.scenario_id}, {"method", std::string(to_string(cmd.method))}};
    Schedule schedule;
    try {
        switch (cmd.method) {
            case Method::Nominal: {
                auto r = optimize_nominal(sc);
                schedule = std::move(r.schedule);
                result["objective"] = r.objective;
                result["relative_gap"] = r.relative_gap;
                break;
            }
            case Method::RobustPrice:
            case Method::RobustLoad: {
                const PriceBall ball{sc.prices, cmd.radius};
                RobustResult r;
                if (cmd.method == Method::RobustPrice) {
                    r = optimize_robust_price(sc, ball);
                } else {
                    LoadInterval interval{sc.load, sc.load};
                    for (auto& v : interval.upper) v *= cmd.load_scale;
                    r = optimize_robust_both(sc, ball, interval);
                }
                schedule = std::move(r.schedule);
                result["objective"] = r.objective;
                result["lower_bound"] = r.lower_bound;
                result["relative_gap"] = r.relative_gap;
                result["cuts"] = r.cuts;
                result["converged"] = r.cut_status == CutStatus::Converged;
                if (r.cut_status == CutStatus::CutLimitExceeded)
                    err << "warning: cut limit reached, relative gap " << r.relative_gap << '\n';
                break;
            }
            case Method::Fcfs: {
                auto r = fcfs_with_report(sc);
                schedule = std::move(r.schedule);
                result["shortfall"] = r.shortfall;
                break;
            }
        }
    } catch (const InfeasibleScenario& e) {
        print_feasibility(sc, e.report(), err);
        return kInfeasible;
    }

    const auto cost = evaluate_cost(schedule, sc);
    result["total_cost"] = cost.total_cost;
    result["per_step_cost"] = cost.per_step_cost;
    result["total_energy_delivered_kwh"] = cost.total_energy_delivered;
    result["total_energy_wasted_kwh"] = cost.total_energy_wasted;
    nlohmann::json violations = nlohmann::json::array();
    for (const auto& v : validate_schedule(schedule, sc).violations)
        violations.push_back({{"kind", std::string(to_string(v.kind))}, {"magnitude", v.magnitude}});
    result["violations"] = violations;

    write_schedule_csv(schedule, sc, cmd.out_dir / "schedule.csv");
    write_json(result, cmd.out_dir / "result.json");
    write_manifest(cmd, inputs, {"schedule.csv", "result.json"});
    char buf[128];
    std::snprintf(buf, sizeof buf, "%.6f", cost.total_cost);
    out << sc.scenario_id << ' ' << to_string(cmd.method) << " cost " << buf << '\n';
    return kOk;
}

int report_batch(const Command& cmd, const std::vector<Scenario>& scenarios, std::vector<fs::path> inputs,
                 std::vector<std::string> outputs, std::ostream& out) {
    CompareOptions opts;
    opts.extra_methods = cmd.extra_methods;
    opts.radius = cmd.radius;
    opts.load_scale = cmd.load_scale;
    opts.workers = cmd.workers;
    const auto rows = run_comparison(scenarios, opts);
    const auto table = aggregate(rows, cmd.filters);

    // fig2 day: requested id, else the first comparable scenario.
    std::vector<Schedule> day;
    double step_hours = cmd.ingest.step_hours;
    for (std::size_t k = 0; k < rows.size(); ++k) {
        const bool wanted = cmd.fig2_day.empty() ? rows[k].comparable() : rows[k].scenario_id == cmd.fig2_day;
        if (!wanted) continue;
        day.push_back(fcfs_schedule(scenarios[k]));
        if (rows[k].optimized_cost) day.push_back(optimize_nominal(scenarios[k]).schedule);
        step_hours = scenarios[k].step_hours;
        break;
    }

    nlohmann::json metadata = {{"tool", "evcharge"},
                               {"version", kVersion},
                               {"config", config_json(cmd)},
                               {"tolerances", tolerances_json()},
                               {"scenario_count", rows.size()}};
    try {
        write_comparison_csv(rows, cmd.out_dir / "comparison.csv");
        write_summary_csv(table, cmd.out_dir / "summary.csv");
        write_summary_json(table, metadata, cmd.out_dir / "summary.json");
        emit_plot_data(rows, day, step_hours, cmd.out_dir);
    } catch (const Error& e) {
        throw OutputFailure(e.what());
    }
    for (const char* name : {"comparison.csv", "summary.csv", "summary.json", "fig2_day.csv", "fig3_scatter.csv",
                             "fig4_cumulative.csv"})
        outputs.push_back(name);
    write_manifest(cmd, inputs, outputs);

    std::size_t infeasible = 0, shortfall = 0, failed = 0;
    for (const auto& r : rows) {
        infeasible += r.infeasible;
        shortfall += r.fcfs_shortfall;
        failed += !r.error.empty();
    }
    out << rows.size() << " scenario(s): " << infeasible << " infeasible, " << shortfall << " with FCFS shortfall, "
        << failed << " failed\n";
    for (const auto& s : table.rows) {
        char buf[256];
        std::snprintf(buf, sizeof buf, "%-16s %5zu  trivial %12.2f  optimized %12.2f  mean saving %6.2f%%",
                      s.filter.c_str(), s.scenario_count, s.trivial_cost, s.optimized_cost,
                      s.mean_of_daily_pct.value_or(0.0));
        out << buf << '\n';
    }
    return kOk;
}

int run_compare(const Command& cmd, std::ostream& out, std::ostream&) {
    ensure_dir(cmd.out_dir);
    std::vector<Scenario> scenarios;
    std::vector<fs::path> inputs;
    if (cmd.synthetic) {
        scenarios = synthetic_batch(cmd);
    } else {
        std::vector<fs::path> files = cmd.scenarios;
        if (!cmd.scenario_dir.empty()) {
            std::error_code ec;
            std::vector<fs::path> found;
            for (const auto& entry : fs::directory_iterator(cmd.scenario_dir, ec))
                if (entry.is_regular_file() && entry.path().extension() == ".json") found.push_back(entry.path());
            if (ec) throw InputFailure("cannot read " + cmd.scenario_dir.string() + ": " + ec.message());
            std::sort(found.begin(), found.end());
            files.insert(files.end(), found.begin(), found.end());
        }
        for (const auto& f : files) scenarios.push_back(with_input(f, [&] { return read_scenario_file(f); }));
        inputs = files;
    }
    return report_batch(cmd, scenarios, inputs, {}, out);
}

int run_simulate(const Command& cmd, std::ostream& out, std::ostream& err) {
    ensure_dir(cmd.out_dir);
    const auto ingested = ingest_inputs(cmd, err);
    write_json(ingest_report_json(ingested.built), cmd.out_dir / "ingest_report.json");
    std::vector<std::string> outputs = {"ingest_report.json"};
    if (cmd.synthetic) {
        outputs.push_back("inputs/sessions.csv");
        outputs.push_back("inputs/prices.csv");
    }
    return report_batch(cmd, ingested.built.scenarios, ingested.inputs, outputs, out);
}

}  // namespace

std::string file_sha256(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputFailure("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return sha256_hex(buf.str());
}

ParseResult parse_args(const std::vector<std::string>& args) {
    Command cmd;
    cmd.arguments = args;
    std::string out_dir = default_out_dir();
    std::string unit = "per-mwh", policy = "clamp", method = "nominal";
    std::vector<std::string> methods, filters;
    std::vector<std::uint64_t> synthetic;
    std::string scenario;

    CLI::App app{"EV charging station scheduling: optimal vs first-come-first-served", "evcharge"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kVersion));

    auto* ingest = app.add_subcommand("ingest", "Build per-day scenario files from session and price logs");
    ingest->add_option("--sessions", cmd.sessions, "Sessions CSV")->required();
    ingest->add_option("--prices", cmd.prices, "Hourly prices CSV")->required();
    ingest->add_option("--out", out_dir, "Output directory (default: $EVCHARGE_OUT_DIR or ./evcharge-out)");
    add_model_options(*ingest, cmd);
    add_ingest_options(*ingest, unit, policy);

    auto* solve = app.add_subcommand("solve", "Schedule one scenario");
    auto* scenario_opt = solve->add_option("--scenario", scenario, "Scenario JSON file");
    auto* solve_synth = solve->add_option("--synthetic", synthetic, "Random instance: N T SEED")->expected(3);
    scenario_opt->excludes(solve_synth);
    solve->add_option("--method", method, "nominal, robust-price, robust-load or fcfs")
        ->check(CLI::IsMember({"nominal", "robust-price", "robust-load", "fcfs"}))
        ->capture_default_str();
    solve->add_option("--out", out_dir, "Output directory");
    add_robust_options(*solve, cmd);
    add_model_options(*solve, cmd);

    auto* compare = app.add_subcommand("compare", "Compare FCFS and the optimizer on scenario files");
    compare->add_option("--scenario", cmd.scenarios, "Scenario JSON file (repeatable)");
    compare->add_option("--scenario-dir", cmd.scenario_dir, "Directory of scenario JSON files");
    add_synthetic_option(*compare, synthetic);
    compare->add_option("--days", cmd.days, "Number of synthetic scenarios")->check(CLI::PositiveNumber);
    compare->add_option("--out", out_dir, "Output directory");
    add_batch_options(*compare, cmd, methods, filters);
    add_robust_options(*compare, cmd);
    add_model_options(*compare, cmd);

    auto* simulate = app.add_subcommand("simulate", "Ingest logs and compare methods over every day");
    simulate->add_option("--sessions", cmd.sessions, "Sessions CSV");
    simulate->add_option("--prices", cmd.prices, "Hourly prices CSV");
    add_synthetic_option(*simulate, synthetic);
    simulate->add_option("--days", cmd.days, "Days of synthetic session logs")->check(CLI::PositiveNumber);
    simulate->add_option("--out", out_dir, "Output directory");
    add_batch_options(*simulate, cmd, methods, filters);
    add_robust_options(*simulate, cmd);
    add_model_options(*simulate, cmd);
    add_ingest_options(*simulate, unit, policy);

    std::vector<std::string> argv_store = {"evcharge"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : argv_store) argv.push_back(a.c_str());

    ParseResult result;
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        result.message = app.help();
        return result;
    } catch (const CLI::CallForAllHelp&) {
        result.message = app.help("", CLI::AppFormatMode::All);
        return result;
    } catch (const CLI::CallForVersion&) {
        result.message = std::string(kVersion) + "\n";
        return result;
    } catch (const CLI::ParseError& e) {
        result.exit_code = kUsage;
        result.message = e.what();
        return result;
    }

    auto usage = [&](std::string msg) {
        result.exit_code = kUsage;
        result.message = std::move(msg);
        return result;
    };

    if (!synthetic.empty()) {
        if (synthetic[1] == 0 || synthetic[1] > 24 * 60) return usage("--synthetic: T must be positive");
        cmd.synthetic = SyntheticSpec{static_cast<std::size_t>(synthetic[0]), static_cast<std::size_t>(synthetic[1]),
                                      synthetic[2]};
    }
    cmd.out_dir = out_dir;
    cmd.ingest.price_unit = *price_unit_from_string(unit);
    cmd.ingest.midnight_policy = *midnight_policy_from_string(policy);
    cmd.method = *method_from_string(method);
    for (const auto& m : methods) cmd.extra_methods.push_back(*method_from_string(m));
    for (const auto& f : filters.empty() ? kDefaultFilters : filters) {
        const auto parsed = parse_filter(f);
        if (!parsed) return usage("--filter: cannot parse '" + f + "'");
        cmd.filters.push_back(*parsed);
    }

    if (ingest->parsed()) {
        cmd.subcommand = Subcommand::Ingest;
    } else if (solve->parsed()) {
        cmd.subcommand = Subcommand::Solve;
        if (scenario.empty() && !cmd.synthetic) return usage("solve: --scenario or --synthetic is required");
        if (!scenario.empty()) cmd.scenarios = {scenario};
    } else if (compare->parsed()) {
        cmd.subcommand = Subcommand::Compare;
        if (cmd.scenarios.empty() && cmd.scenario_dir.empty() && !cmd.synthetic)
            return usage("compare: --scenario, --scenario-dir or --synthetic is required");
    } else {
        cmd.subcommand = Subcommand::Simulate;
        if (!cmd.synthetic && cmd.sessions.empty()) return usage("simulate: --sessions is required");
        if (!cmd.synthetic && cmd.prices.empty()) return usage("simulate: --prices is required");
    }
    if (cmd.synthetic && cmd.subcommand == Subcommand::Simulate && cmd.synthetic->horizon_steps > 24)
        return usage("simulate --synthetic: T must not exceed 24");
    try {
        cmd.ingest.validate();
    } catch (const Error& e) {
        return usage(e.what());
    }
    result.command = std::move(cmd);
    return result;
}

int run(const Command& cmd, std::ostream& out, std::ostream& err) {
    try {
        switch (cmd.subcommand) {
            case Subcommand::Ingest: return run_ingest(cmd, out, err);
            case Subcommand::Solve: return run_solve(cmd, out, err);
            case Subcommand::Compare: return run_compare(cmd, out, err);
            case Subcommand::Simulate: return run_simulate(cmd, out, err);
        }
    } catch (const InputFailure& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    } catch (const OutputFailure& e) {
        err << "error: " << e.what() << '\n';
        return kOutputError;
    } catch (const NumericalFailure& e) {
        err << "solver failure: " << e.what() << '\n';
        return kSolverFailure;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    }
    return kUsage;
}

int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    auto parsed = parse_args(args);
    if (!parsed.command) {
        (parsed.exit_code == kOk ? out : err) << parsed.message << (parsed.exit_code == kOk ? "" : "\n");
        return parsed.exit_code;
    }
    return run(*parsed.command, out, err);
}

}  // namespace evcharge::cli
