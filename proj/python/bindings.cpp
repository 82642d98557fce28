#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <fstream>
#include <sstream>

#include "evcharge/baseline.hpp"
#include "evcharge/cli.hpp"
#include "evcharge/ingest.hpp"
#include "evcharge/nominal.hpp"
#include "evcharge/robust.hpp"
#include "evcharge/scenario_io.hpp"
#include "evcharge/sim.hpp"
#include "evcharge/synthetic.hpp"
#include "evcharge/version.hpp"

namespace py = pybind11;
using namespace evcharge;

namespace {

std::vector<std::vector<double>> to_rows(const Allocation& a) {
    std::vector<std::vector<double>> rows(a.rows());
    for (std::size_t t = 0; t < a.rows(); ++t) rows[t].assign(a.row(t).begin(), a.row(t).end());
    return rows;
}

std::vector<std::vector<int>> occupancy_rows(const Scenario& s) {
    std::vector<std::vector<int>> rows(s.occupancy.rows());
    for (std::size_t t = 0; t < s.occupancy.rows(); ++t)
        rows[t].assign(s.occupancy.row(t).begin(), s.occupancy.row(t).end());
    return rows;
}

Scenario scenario_from_rows(std::string id, const std::vector<std::vector<int>>& occupancy,
                            std::vector<double> load, std::vector<double> capacity,
                            std::vector<double> socket_limit, std::vector<double> waste,
                            std::vector<double> prices, double step_hours) {
    Scenario s;
    s.scenario_id = std::move(id);
    s.horizon_steps = occupancy.size();
    s.step_hours = step_hours;
    const std::size_t n = load.size();
    s.occupancy = Occupancy(occupancy.size(), n);
    for (std::size_t t = 0; t < occupancy.size(); ++t) {
        if (occupancy[t].size() != n) throw ShapeMismatch("occupancy row length differs from the vehicle count");
        for (std::size_t i = 0; i < n; ++i) s.occupancy(t, i) = occupancy[t][i] ? 1 : 0;
    }
    s.load = std::move(load);
    s.capacity = std::move(capacity);
    s.socket_limit = std::move(socket_limit);
    s.waste = std::move(waste);
    s.prices = std::move(prices);
    check_scenario(s);
    return s;
}

Schedule schedule_from_rows(const std::vector<std::vector<double>>& rows, Method method, std::string id) {
    Schedule s;
    s.method = method;
    s.scenario_id = std::move(id);
    const std::size_t n = rows.empty() ? 0 : rows.front().size();
    s.allocation = Allocation(rows.size(), n);
    for (std::size_t t = 0; t < rows.size(); ++t) {
        if (rows[t].size() != n) throw ShapeMismatch("allocation rows differ in length");
        for (std::size_t i = 0; i < n; ++i) s.allocation(t, i) = rows[t][i];
    }
    return s;
}

BuildResult ingest_files(const std::filesystem::path& sessions, const std::filesystem::path& prices,
                         const IngestConfig& cfg) {
    std::ifstream s(sessions, std::ios::binary);
    if (!s) throw Error("cannot open " + sessions.string());
    std::ifstream p(prices, std::ios::binary);
    if (!p) throw Error("cannot open " + prices.string());
    cfg.validate();
    return build_scenarios(parse_sessions(s), parse_prices(p, cfg.price_unit), cfg);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "EV charging schedule optimization";
    m.attr("__version__") = kVersion;

    auto base = py::register_exception<Error>(m, "EvchargeError");
    py::register_exception<InfeasibleScenario>(m, "InfeasibleScenario", base.ptr());

    py::enum_<Method>(m, "Method")
        .value("NOMINAL", Method::Nominal)
        .value("ROBUST_PRICE", Method::RobustPrice)
        .value("ROBUST_LOAD", Method::RobustLoad)
        .value("FCFS", Method::Fcfs);

    py::enum_<PriceUnit>(m, "PriceUnit").value("PER_KWH", PriceUnit::PerKwh).value("PER_MWH", PriceUnit::PerMwh);
    py::enum_<MidnightPolicy>(m, "MidnightPolicy")
        .value("CLAMP", MidnightPolicy::Clamp)
        .value("DROP", MidnightPolicy::Drop);

    py::class_<Scenario>(m, "Scenario")
        .def(py::init(&scenario_from_rows), py::arg("scenario_id"), py::arg("occupancy"), py::arg("load"),
             py::arg("capacity"), py::arg("socket_limit"), py::arg("waste"), py::arg("prices"),
             py::arg("step_hours") = 1.0)
        .def_readonly("scenario_id", &Scenario::scenario_id)
        .def_readonly("horizon_steps", &Scenario::horizon_steps)
        .def_readonly("step_hours", &Scenario::step_hours)
        .def_readonly("load", &Scenario::load)
        .def_readonly("capacity", &Scenario::capacity)
        .def_readonly("socket_limit", &Scenario::socket_limit)
        .def_readonly("waste", &Scenario::waste)
        .def_readonly("prices", &Scenario::prices)
        .def_readonly("vehicle_ids", &Scenario::vehicle_ids)
        .def_property_readonly("num_vehicles", &Scenario::num_vehicles)
        .def_property_readonly("occupancy", &occupancy_rows)
        .def("to_json", [](const Scenario& s) { return scenario_to_json(s).dump(); })
        .def_static("from_json", [](const std::string& text) {
            return scenario_from_json(nlohmann::json::parse(text));
        });

    py::class_<Schedule>(m, "Schedule")
        .def(py::init(&schedule_from_rows), py::arg("allocation"), py::arg("method") = Method::Nominal,
             py::arg("scenario_id") = "")
        .def_property_readonly("allocation", [](const Schedule& s) { return to_rows(s.allocation); })
        .def_readonly("method", &Schedule::method)
        .def_readonly("scenario_id", &Schedule::scenario_id);

    py::class_<CostBreakdown>(m, "CostBreakdown")
        .def_readonly("per_step_cost", &CostBreakdown::per_step_cost)
        .def_readonly("total_cost", &CostBreakdown::total_cost)
        .def_readonly("total_energy_delivered", &CostBreakdown::total_energy_delivered)
        .def_readonly("total_energy_wasted", &CostBreakdown::total_energy_wasted);

    py::class_<FeasibilityReport>(m, "FeasibilityReport")
        .def_readonly("feasible", &FeasibilityReport::feasible)
        .def_readonly("per_vehicle_slack", &FeasibilityReport::per_vehicle_slack)
        .def_readonly("max_flow", &FeasibilityReport::max_flow)
        .def_readonly("total_load", &FeasibilityReport::total_load);

    py::class_<OptimizationResult>(m, "OptimizationResult")
        .def_readonly("schedule", &OptimizationResult::schedule)
        .def_readonly("cost", &OptimizationResult::cost)
        .def_readonly("objective", &OptimizationResult::objective)
        .def_readonly("relative_gap", &OptimizationResult::relative_gap);

    py::class_<RobustResult>(m, "RobustResult")
        .def_readonly("schedule", &RobustResult::schedule)
        .def_readonly("step_energy", &RobustResult::step_energy)
        .def_readonly("objective", &RobustResult::objective)
        .def_readonly("lower_bound", &RobustResult::lower_bound)
        .def_readonly("relative_gap", &RobustResult::relative_gap)
        .def_property_readonly("converged",
                               [](const RobustResult& r) { return r.cut_status == CutStatus::Converged; })
        .def_readonly("cuts", &RobustResult::cuts);

    py::class_<FcfsResult>(m, "FcfsResult")
        .def_readonly("schedule", &FcfsResult::schedule)
        .def_readonly("shortfall", &FcfsResult::shortfall)
        .def("total_shortfall", &FcfsResult::total_shortfall);

    m.def("check_feasibility", &check_feasibility, py::arg("scenario"));
    m.def("optimize_nominal", [](const Scenario& s) { return optimize_nominal(s); }, py::arg("scenario"));
    m.def(
        "optimize_robust_price",
        [](const Scenario& s, double radius, std::optional<std::vector<double>> center) {
            return optimize_robust_price(s, PriceBall{center ? *center : s.prices, radius});
        },
        py::arg("scenario"), py::arg("radius"), py::arg("center") = py::none());
    m.def(
        "optimize_robust_load",
        [](const Scenario& s, std::vector<double> upper, double radius) {
            return optimize_robust_both(s, PriceBall{s.prices, radius}, LoadInterval{s.load, std::move(upper)});
        },
        py::arg("scenario"), py::arg("upper_load"), py::arg("radius") = 0.0);
    m.def("fcfs", &fcfs_with_report, py::arg("scenario"));
    m.def("evaluate_cost", &evaluate_cost, py::arg("schedule"), py::arg("scenario"));
    m.def(
        "violations",
        [](const Schedule& sch, const Scenario& s, double tol) {
            std::vector<std::tuple<std::string, std::optional<std::size_t>, std::optional<std::size_t>, double>> out;
            for (const auto& v : validate_schedule(sch, s, tol).violations)
                out.emplace_back(std::string(to_string(v.kind)), v.step, v.vehicle, v.magnitude);
            return out;
        },
        py::arg("schedule"), py::arg("scenario"), py::arg("tol") = kFeasibilityTol);

    py::class_<IngestConfig>(m, "IngestConfig")
        .def(py::init<>())
        .def_readwrite("horizon_steps", &IngestConfig::horizon_steps)
        .def_readwrite("step_hours", &IngestConfig::step_hours)
        .def_readwrite("capacity", &IngestConfig::capacity)
        .def_readwrite("socket_limit", &IngestConfig::socket_limit)
        .def_readwrite("waste", &IngestConfig::waste)
        .def_readwrite("price_unit", &IngestConfig::price_unit)
        .def_readwrite("midnight_policy", &IngestConfig::midnight_policy);

    py::class_<BuildResult>(m, "BuildResult")
        .def_readonly("scenarios", &BuildResult::scenarios)
        .def_readonly("missing_price_days", &BuildResult::missing_price_days)
        .def_readonly("dropped_sessions", &BuildResult::dropped_sessions);

    m.def("ingest", &ingest_files, py::arg("sessions"), py::arg("prices"), py::arg("config") = IngestConfig{});

    m.def(
        "synthetic_scenario",
        [](std::size_t n, std::size_t horizon, std::uint64_t seed) {
            SyntheticOptions o;
            o.num_vehicles = n;
            o.horizon_steps = horizon;
            return synthetic_scenario(o, seed);
        },
        py::arg("num_vehicles"), py::arg("horizon_steps") = 24, py::arg("seed") = 0);

    py::class_<ComparisonRow>(m, "ComparisonRow")
        .def_readonly("scenario_id", &ComparisonRow::scenario_id)
        .def_readonly("num_vehicles", &ComparisonRow::num_vehicles)
        .def_readonly("trivial_cost", &ComparisonRow::trivial_cost)
        .def_readonly("optimized_cost", &ComparisonRow::optimized_cost)
        .def_readonly("saving_pct", &ComparisonRow::saving_pct)
        .def_readonly("infeasible", &ComparisonRow::infeasible)
        .def_readonly("fcfs_shortfall", &ComparisonRow::fcfs_shortfall)
        .def_readonly("error", &ComparisonRow::error)
        .def_property_readonly("comparable", &ComparisonRow::comparable)
        .def_property_readonly("money_saved", &ComparisonRow::money_saved);

    py::class_<SummaryRow>(m, "SummaryRow")
        .def_readonly("filter", &SummaryRow::filter)
        .def_readonly("scenario_count", &SummaryRow::scenario_count)
        .def_readonly("excluded_count", &SummaryRow::excluded_count)
        .def_readonly("trivial_cost", &SummaryRow::trivial_cost)
        .def_readonly("optimized_cost", &SummaryRow::optimized_cost)
        .def_readonly("mean_of_daily_pct", &SummaryRow::mean_of_daily_pct)
        .def_readonly("pct_of_summed_costs", &SummaryRow::pct_of_summed_costs);

    m.def(
        "compare",
        [](const std::vector<Scenario>& scenarios, std::size_t workers) {
            CompareOptions o;
            o.workers = workers;
            py::gil_scoped_release release;
            return run_comparison(scenarios, o);
        },
        py::arg("scenarios"), py::arg("workers") = 1);
    m.def(
        "summarize",
        [](const std::vector<ComparisonRow>& rows, const std::vector<std::string>& filters) {
            std::vector<SummaryFilter> parsed;
            for (const auto& f : filters) {
                auto p = parse_filter(f);
                if (!p) throw InvalidArgument("bad filter: " + f);
                parsed.push_back(*p);
            }
            return aggregate(rows, parsed).rows;
        },
        py::arg("rows"), py::arg("filters"));

    m.def(
        "main",
        [](const std::vector<std::string>& args) {
            std::ostringstream out, err;
            const int code = cli::main_entry(args, out, err);
            py::print(out.str(), py::arg("end") = "");
            if (!err.str().empty())
                py::print(err.str(), py::arg("end") = "", py::arg("file") = py::module_::import("sys").attr("stderr"));
            return code;
        },
        py::arg("args"));
}
