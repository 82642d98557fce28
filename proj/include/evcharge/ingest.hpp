#pragma once

#include <chrono>
#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "evcharge/model.hpp"

namespace evcharge {

using Date = std::chrono::sys_days;
using Timestamp = std::chrono::sys_seconds;

/// "YYYY-MM-DD"
std::string format_date(Date date);
std::optional<Date> parse_date(std::string_view text);

/// ISO-8601 local time "YYYY-MM-DDTHH:MM[:SS[.fff]]", optionally followed by
/// "Z" or a "+HH:MM" offset. A space may replace the 'T'. Offsets are accepted
/// and ignored: the wall-clock time as written is what gets scheduled.
std::optional<Timestamp> parse_timestamp(std::string_view text);

struct SessionRecord {
    std::string session_id;
    Timestamp arrival;
    Timestamp departure;
    double energy_kwh = 0.0;
};

enum class PriceUnit { PerKwh, PerMwh };
enum class MidnightPolicy { Clamp, Drop };

std::string_view to_string(PriceUnit unit);
std::string_view to_string(MidnightPolicy policy);
std::optional<PriceUnit> price_unit_from_string(std::string_view text);
std::optional<MidnightPolicy> midnight_policy_from_string(std::string_view text);

/// Hourly prices in currency per kWh.
class PriceSeries {
public:
    /// Returns false when (date, hour) already has a price.
    bool insert(Date date, int hour, double price);
    std::optional<double> find(Date date, int hour) const;

    std::size_t size() const noexcept { return prices_.size(); }
    const std::map<std::pair<Date, int>, double>& entries() const noexcept { return prices_; }

private:
    std::map<std::pair<Date, int>, double> prices_;
};

struct IngestConfig {
    std::size_t horizon_steps = 24;
    double step_hours = 1.0;
    double capacity = 300.0;      // kW
    double socket_limit = 7.0;    // kW
    double waste = 0.01;
    PriceUnit price_unit = PriceUnit::PerMwh;
    MidnightPolicy midnight_policy = MidnightPolicy::Clamp;

    /// Throws InvalidArgument unless every numeric field is positive and the
    /// horizon fits in one day.
    void validate() const;
};

/// Header `session_id,arrival,departure,energy_kwh` (column order free, extra
/// columns ignored). Rows are returned in file order.
std::vector<SessionRecord> parse_sessions(std::istream& in);

/// Header `date,hour,price`; prices are converted to currency per kWh.
PriceSeries parse_prices(std::istream& in, PriceUnit unit);

struct BuildResult {
    std::vector<Scenario> scenarios;       // ordered by date
    std::vector<std::string> missing_price_days;
    std::size_t dropped_sessions = 0;      // crossed the horizon under Drop, or arrived after it
};

/// Groups sessions by arrival date and builds one scenario per day.
///
/// Step t (1-based) covers [(t-1)*step, t*step) hours after midnight. Vehicle
/// windows run from floor(arrival / step) + 1 to ceil(departure / step); under
/// Clamp the end is capped at the horizon, under Drop such sessions are
/// excluded. Vehicles are ordered by arrival, then session id. Days missing
/// any hourly price are skipped and listed.
BuildResult build_scenarios(const std::vector<SessionRecord>& sessions, const PriceSeries& prices,
                            const IngestConfig& cfg);

}  // namespace evcharge
