#pragma once

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <vector>

#include "evcharge/ingest.hpp"
#include "evcharge/model.hpp"

namespace evcharge {

// Random instances for tests and demos. Not part of the scheduling method.

struct SyntheticOptions {
    std::size_t num_vehicles = 10;
    std::size_t horizon_steps = 24;
    double step_hours = 1.0;
    double capacity = 300.0;
    double socket_limit = 7.0;
    double waste = 0.01;
    double min_price = 0.02;
    double max_price = 0.20;
    bool flat_price = false;
    /// Fraction of the window capacity a vehicle's load may reach.
    double max_fill = 0.9;
    /// Halve the loads until check_feasibility passes.
    bool ensure_feasible = true;
};

/// Uniform window start and length, load uniform in [0, max_fill * window capacity].
Scenario synthetic_scenario(const SyntheticOptions& opts, std::uint64_t seed);

struct CorpusOptions {
    std::size_t days = 120;
    Date first_day = Date{std::chrono::year{2018} / 4 / 25};
    std::size_t max_sessions_per_day = 60;
};

struct SyntheticCorpus {
    std::vector<SessionRecord> sessions;
    PriceSeries prices;  // per kWh
};

/// Daily session logs with daytime arrivals and a two-peak hourly price curve.
SyntheticCorpus synthetic_corpus(const CorpusOptions& opts, std::uint64_t seed);

void write_sessions_csv(const std::vector<SessionRecord>& sessions, std::ostream& out);
/// Prices are written per MWh when `unit` is PerMwh.
void write_prices_csv(const PriceSeries& prices, PriceUnit unit, std::ostream& out);

}  // namespace evcharge
