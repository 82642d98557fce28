#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "evcharge/cutting_plane.hpp"
#include "evcharge/model.hpp"

namespace evcharge {

struct CompareOptions {
    /// Optimizers run besides FCFS and the nominal model (RobustPrice, RobustLoad).
    std::vector<Method> extra_methods;
    double radius = 0.0;       // price-ball radius for the robust methods
    double load_scale = 1.0;   // robust-load upper bound = load_scale * L
    std::size_t workers = 1;
    CutOptions cuts;
};

struct MethodOutcome {
    Method method;
    std::optional<double> objective;
    std::string status;  // "ok", "cut-limit", "infeasible" or an error message
};

/// One scenario of a batch comparison.
struct ComparisonRow {
    std::string scenario_id;
    std::size_t num_vehicles = 0;
    std::optional<double> trivial_cost;    // FCFS
    std::optional<double> optimized_cost;  // nominal optimum
    std::optional<double> saving_pct;      // only when trivial_cost > 0
    bool infeasible = false;
    bool fcfs_shortfall = false;
    double fcfs_unmet_kwh = 0.0;
    std::string error;
    std::vector<MethodOutcome> extras;

    /// Feasible, FCFS fully served, both costs present.
    bool comparable() const;
    std::optional<double> money_saved() const;
};

/// Runs FCFS, the nominal optimizer and any extra methods on every scenario.
/// Rows come back in scenario order for any worker count; per-scenario
/// failures are recorded in the row.
std::vector<ComparisonRow> run_comparison(std::span<const Scenario> scenarios, const CompareOptions& opts);

/// Restricts a summary to scenarios with at least `min_vehicles` vehicles,
/// optionally among the first `first_scenarios` rows only.
struct SummaryFilter {
    std::size_t min_vehicles = 1;
    std::optional<std::size_t> first_scenarios;

    std::string label() const;
};

/// Accepts "N>0", "N>=k", "first=K", or "first=K&N>=k".
std::optional<SummaryFilter> parse_filter(std::string_view text);

struct SummaryRow {
    std::string filter;
    std::size_t scenario_count = 0;   // comparable scenarios included
    std::size_t excluded_count = 0;   // matched the filter but were not comparable
    double trivial_cost = 0.0;
    double optimized_cost = 0.0;
    std::optional<double> mean_of_daily_pct;
    std::optional<double> pct_of_summed_costs;
};

struct SummaryTable {
    std::vector<SummaryRow> rows;
};

SummaryTable aggregate(std::span<const ComparisonRow> rows, std::span<const SummaryFilter> filters);

/// Spearman rank correlation with average ranks for ties; nullopt when either
/// side has zero variance or fewer than two points.
std::optional<double> spearman(std::span<const double> x, std::span<const double> y);

// Report files. Numbers are written with fixed six decimals so that identical
// runs produce identical bytes.

void write_comparison_csv(std::span<const ComparisonRow> rows, const std::filesystem::path& path);
void write_summary_csv(const SummaryTable& table, const std::filesystem::path& path);
/// summary.json: {"metadata": metadata, "summary": [...]}.
void write_summary_json(const SummaryTable& table, const nlohmann::json& metadata,
                        const std::filesystem::path& path);

/// Writes fig2_day.csv (per-step total power of each schedule for one day),
/// fig3_scatter.csv (vehicles vs money saved per comparable day) and
/// fig4_cumulative.csv (running cost totals over comparable days) into `dir`.
void emit_plot_data(std::span<const ComparisonRow> rows, std::span<const Schedule> day_schedules,
                    double step_hours, const std::filesystem::path& dir);

}  // namespace evcharge
