#include "evcharge/sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <thread>

#include "csv.hpp"
#include "evcharge/baseline.hpp"
#include "evcharge/nominal.hpp"
#include "evcharge/robust.hpp"

namespace evcharge {

namespace {

std::string fixed6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    std::string s = buf;
    if (s == "-0.000000") s = "0.000000";
    return s;
}

std::string fixed6(const std::optional<double>& v) { return v ? fixed6(*v) : std::string{}; }

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c == '\n' ? ' ' : c;
    }
    return out + "\"";
}

std::ofstream open_report(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    return out;
}

void finish_report(std::ofstream& out, const std::filesystem::path& path) {
    out.flush();
    if (!out) throw Error("failed writing " + path.string());
}

ComparisonRow compare_one(const Scenario& sc, const CompareOptions& opts) {
    ComparisonRow row;
    row.scenario_id = sc.scenario_id;
    row.num_vehicles = sc.num_vehicles();
    try {
        const auto fcfs = fcfs_with_report(sc);
        row.trivial_cost = evaluate_cost(fcfs.schedule, sc).total_cost;
        row.fcfs_unmet_kwh = fcfs.total_shortfall() * sc.step_hours;
        row.fcfs_shortfall = fcfs.total_shortfall() > 0.0;
    } catch (const std::exception& e) {
        row.error = e.what();
        return row;
    }

    try {
        row.optimized_cost = optimize_nominal(sc).cost.total_cost;
    } catch (const InfeasibleScenario&) {
        row.infeasible = true;
    } catch (const std::exception& e) {
        row.error = e.what();
    }
    if (row.trivial_cost && row.optimized_cost && *row.trivial_cost > 0.0)
        row.saving_pct = 100.0 * (*row.trivial_cost - *row.optimized_cost) / *row.trivial_cost;

    for (const auto method : opts.extra_methods) {
        MethodOutcome outcome{method, std::nullopt, "ok"};
        try {
            RobustResult r;
            const PriceBall ball{sc.prices, opts.radius};
            if (method == Method::RobustPrice) {
                r = optimize_robust_price(sc, ball, opts.cuts);
            } else if (method == Method::RobustLoad) {
                LoadInterval interval{sc.load, sc.load};
                for (auto& v : interval.upper) v *= opts.load_scale;
                r = optimize_robust_both(sc, ball, interval, opts.cuts);
            } else {
                continue;
            }
            outcome.objective = r.objective;
            if (r.cut_status == CutStatus::CutLimitExceeded) outcome.status = "cut-limit";
        } catch (const InfeasibleScenario&) {
            outcome.status = "infeasible";
        } catch (const std::exception& e) {
            outcome.status = e.what();
        }
        row.extras.push_back(std::move(outcome));
    }
    return row;
}

}  // namespace

bool ComparisonRow::comparable() const {
    return !infeasible && !fcfs_shortfall && error.empty() && trivial_cost && optimized_cost;
}

std::optional<double> ComparisonRow::money_saved() const {
    if (!trivial_cost || !optimized_cost) return std::nullopt;
    return *trivial_cost - *optimized_cost;
}

std::vector<ComparisonRow> run_comparison(std::span<const Scenario> scenarios, const CompareOptions& opts) {
    for (const auto m : opts.extra_methods)
        if (m != Method::RobustPrice && m != Method::RobustLoad)
            throw InvalidArgument("extra methods must be robust-price or robust-load");
    if (!(opts.load_scale >= 1.0)) throw InvalidArgument("load_scale must be at least 1");

    std::vector<ComparisonRow> rows(scenarios.size());
    const std::size_t workers = std::clamp<std::size_t>(opts.workers, 1, std::max<std::size_t>(1, scenarios.size()));
    if (workers == 1) {
        for (std::size_t k = 0; k < scenarios.size(); ++k) rows[k] = compare_one(scenarios[k], opts);
        return rows;
    }
    std::atomic<std::size_t> next{0};
    {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (auto k = next++; k < scenarios.size(); k = next++) rows[k] = compare_one(scenarios[k], opts);
            });
    }
    return rows;
}

std::string SummaryFilter::label() const {
    std::string n = min_vehicles <= 1 ? "N>0" : "N>=" + std::to_string(min_vehicles);
    if (first_scenarios) return "first=" + std::to_string(*first_scenarios) + "&" + n;
    return n;
}

std::optional<SummaryFilter> parse_filter(std::string_view text) {
    SummaryFilter f;
    bool any = false;
    while (!text.empty()) {
        const auto amp = text.find('&');
        const auto token = csv::trim(text.substr(0, amp));
        text = amp == std::string_view::npos ? std::string_view{} : text.substr(amp + 1);
        if (token == "N>0") {
            f.min_vehicles = 1;
        } else if (token.rfind("N>=", 0) == 0) {
            const auto k = csv::to_long(token.substr(3));
            if (!k || *k < 0) return std::nullopt;
            f.min_vehicles = static_cast<std::size_t>(*k);
        } else if (token.rfind("first=", 0) == 0) {
            const auto k = csv::to_long(token.substr(6));
            if (!k || *k <= 0) return std::nullopt;
            f.first_scenarios = static_cast<std::size_t>(*k);
        } else {
            return std::nullopt;
        }
        any = true;
    }
    if (!any) return std::nullopt;
    return f;
}

SummaryTable aggregate(std::span<const ComparisonRow> rows, std::span<const SummaryFilter> filters) {
    SummaryTable table;
    for (const auto& f : filters) {
        SummaryRow s;
        s.filter = f.label();
        const std::size_t limit = f.first_scenarios ? std::min(*f.first_scenarios, rows.size()) : rows.size();
        double pct_sum = 0.0;
        std::size_t pct_count = 0;
        for (std::size_t k = 0; k < limit; ++k) {
            const auto& r = rows[k];
            if (r.num_vehicles < f.min_vehicles) continue;
            if (!r.comparable()) {
                ++s.excluded_count;
                continue;
            }
            ++s.scenario_count;
            s.trivial_cost += *r.trivial_cost;
            s.optimized_cost += *r.optimized_cost;
            if (r.saving_pct) {
                pct_sum += *r.saving_pct;
                ++pct_count;
            }
        }
        if (pct_count) s.mean_of_daily_pct = pct_sum / static_cast<double>(pct_count);
        if (s.trivial_cost > 0.0)
            s.pct_of_summed_costs = 100.0 * (s.trivial_cost - s.optimized_cost) / s.trivial_cost;
        table.rows.push_back(std::move(s));
    }
    return table;
}

std::optional<double> spearman(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw ShapeMismatch("spearman inputs differ in length");
    const auto n = x.size();
    if (n < 2) return std::nullopt;
    auto ranks = [n](std::span<const double> v) {
        std::vector<std::size_t> idx(n);
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
        std::vector<double> r(n);
        for (std::size_t i = 0; i < n;) {
            std::size_t j = i;
            while (j + 1 < n && v[idx[j + 1]] == v[idx[i]]) ++j;
            const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
            for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg;
            i = j + 1;
        }
        return r;
    };
    const auto rx = ranks(x), ry = ranks(y);
    const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / static_cast<double>(n);
    const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxy += (rx[i] - mx) * (ry[i] - my);
        sxx += (rx[i] - mx) * (rx[i] - mx);
        syy += (ry[i] - my) * (ry[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) return std::nullopt;
    return sxy / std::sqrt(sxx * syy);
}

void write_comparison_csv(std::span<const ComparisonRow> rows, const std::filesystem::path& path) {
    auto out = open_report(path);
    out << "scenario_id,num_vehicles,trivial_cost,optimized_cost,saving_pct,money_saved,"
           "infeasible,fcfs_shortfall,fcfs_unmet_kwh,comparable,error";
    std::vector<Method> extras;
    if (!rows.empty())
        for (const auto& e : rows.front().extras) extras.push_back(e.method);
    for (const auto m : extras) {
        std::string name(to_string(m));
        std::replace(name.begin(), name.end(), '-', '_');
        out << ',' << name << "_objective," << name << "_status";
    }
    out << '\n';
    for (const auto& r : rows) {
        out << csv_field(r.scenario_id) << ',' << r.num_vehicles << ',' << fixed6(r.trivial_cost) << ','
            << fixed6(r.optimized_cost) << ',' << fixed6(r.saving_pct) << ',' << fixed6(r.money_saved()) << ','
            << (r.infeasible ? 1 : 0) << ',' << (r.fcfs_shortfall ? 1 : 0) << ',' << fixed6(r.fcfs_unmet_kwh)
            << ',' << (r.comparable() ? 1 : 0) << ',' << csv_field(r.error);
        for (std::size_t k = 0; k < extras.size(); ++k) {
            if (k < r.extras.size()) out << ',' << fixed6(r.extras[k].objective) << ',' << csv_field(r.extras[k].status);
            else out << ",,";
        }
        out << '\n';
    }
    finish_report(out, path);
}

void write_summary_csv(const SummaryTable& table, const std::filesystem::path& path) {
    auto out = open_report(path);
    out << "filter,scenario_count,excluded_count,trivial_cost,optimized_cost,mean_of_daily_pct,pct_of_summed_costs\n";
    for (const auto& s : table.rows)
        out << csv_field(s.filter) << ',' << s.scenario_count << ',' << s.excluded_count << ','
            << fixed6(s.trivial_cost) << ',' << fixed6(s.optimized_cost) << ',' << fixed6(s.mean_of_daily_pct)
            << ',' << fixed6(s.pct_of_summed_costs) << '\n';
    finish_report(out, path);
}

void write_summary_json(const SummaryTable& table, const nlohmann::json& metadata,
                        const std::filesystem::path& path) {
    nlohmann::json rows = nlohmann::json::array();
    auto opt = [](const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); };
    for (const auto& s : table.rows)
        rows.push_back({{"filter", s.filter},
                        {"scenario_count", s.scenario_count},
                        {"excluded_count", s.excluded_count},
                        {"trivial_cost", s.trivial_cost},
                        {"optimized_cost", s.optimized_cost},
                        {"mean_of_daily_pct", opt(s.mean_of_daily_pct)},
                        {"pct_of_summed_costs", opt(s.pct_of_summed_costs)}});
    auto out = open_report(path);
    out << nlohmann::json{{"metadata", metadata}, {"summary", rows}}.dump(2) << '\n';
    finish_report(out, path);
}

void emit_plot_data(std::span<const ComparisonRow> rows, std::span<const Schedule> day_schedules,
                    double step_hours, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error("cannot create " + dir.string() + ": " + ec.message());

    {
        const auto path = dir / "fig2_day.csv";
        auto out = open_report(path);
        out << "hour";
        if (day_schedules.empty()) {
            out << ",fcfs_kW,nominal_kW\n";
        } else {
            for (const auto& s : day_schedules) out << ',' << to_string(s.method) << "_kW";
            out << '\n';
            const auto T = day_schedules.front().allocation.rows();
            for (const auto& s : day_schedules)
                if (s.allocation.rows() != T) throw ShapeMismatch("fig2 schedules must share a horizon");
            for (std::size_t t = 0; t < T; ++t) {
                char hour[32];
                std::snprintf(hour, sizeof hour, "%g", static_cast<double>(t) * step_hours);
                out << hour;
                for (const auto& s : day_schedules) {
                    double total = 0.0;
                    for (double v : s.allocation.row(t)) total += v;
                    out << ',' << fixed6(total);
                }
                out << '\n';
            }
        }
        finish_report(out, path);
    }
    {
        const auto path = dir / "fig3_scatter.csv";
        auto out = open_report(path);
        out << "scenario_id,num_vehicles,money_saved\n";
        for (const auto& r : rows)
            if (r.comparable())
                out << csv_field(r.scenario_id) << ',' << r.num_vehicles << ',' << fixed6(r.money_saved()) << '\n';
        finish_report(out, path);
    }
    {
        const auto path = dir / "fig4_cumulative.csv";
        auto out = open_report(path);
        out << "index,scenario_id,trivial_cost,optimized_cost,cumulative_trivial,cumulative_optimized\n";
        double cum_trivial = 0.0, cum_optimized = 0.0;
        std::size_t index = 0;
        for (const auto& r : rows) {
            if (!r.comparable()) continue;
            cum_trivial += *r.trivial_cost;
            cum_optimized += *r.optimized_cost;
            out << ++index << ',' << csv_field(r.scenario_id) << ',' << fixed6(r.trivial_cost) << ','
                << fixed6(r.optimized_cost) << ',' << fixed6(cum_trivial) << ',' << fixed6(cum_optimized) << '\n';
        }
        finish_report(out, path);
    }
}

}  // namespace evcharge
