#include "evcharge/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "csv.hpp"

namespace evcharge {

namespace chr = std::chrono;

namespace {

std::optional<int> digits(std::string_view s, std::size_t pos, std::size_t count) {
    if (pos + count > s.size()) return std::nullopt;
    int v = 0;
    for (std::size_t k = pos; k < pos + count; ++k) {
        if (s[k] < '0' || s[k] > '9') return std::nullopt;
        v = v * 10 + (s[k] - '0');
    }
    return v;
}

}  // namespace

std::string format_date(Date date) {
    const chr::year_month_day ymd{date};
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    return buf;
}

std::optional<Date> parse_date(std::string_view s) {
    s = csv::trim(s);
    if (s.size() != 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
    const auto y = digits(s, 0, 4), m = digits(s, 5, 2), d = digits(s, 8, 2);
    if (!y || !m || !d) return std::nullopt;
    const chr::year_month_day ymd{chr::year{*y}, chr::month{static_cast<unsigned>(*m)},
                                  chr::day{static_cast<unsigned>(*d)}};
    if (!ymd.ok()) return std::nullopt;
    return Date{ymd};
}

std::optional<Timestamp> parse_timestamp(std::string_view s) {
    s = csv::trim(s);
    if (s.size() < 16) return std::nullopt;
    const auto date = parse_date(s.substr(0, 10));
    if (!date || (s[10] != 'T' && s[10] != ' ') || s[13] != ':') return std::nullopt;
    const auto hh = digits(s, 11, 2), mm = digits(s, 14, 2);
    if (!hh || !mm || *hh > 23 || *mm > 59) return std::nullopt;
    int ss = 0;
    std::size_t pos = 16;
    if (pos < s.size() && s[pos] == ':') {
        const auto sec = digits(s, pos + 1, 2);
        if (!sec || *sec > 59) return std::nullopt;
        ss = *sec;
        pos += 3;
        if (pos < s.size() && s[pos] == '.') {
            ++pos;
            const auto start = pos;
            while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') ++pos;
            if (pos == start) return std::nullopt;
        }
    }
    if (pos < s.size()) {
        const auto zone = s.substr(pos);
        const bool utc = zone == "Z";
        const bool offset = (zone[0] == '+' || zone[0] == '-') &&
                            ((zone.size() == 6 && zone[3] == ':' && digits(zone, 1, 2) && digits(zone, 4, 2)) ||
                             (zone.size() == 5 && digits(zone, 1, 4)));
        if (!utc && !offset) return std::nullopt;
    }
    return Timestamp{*date} + chr::hours{*hh} + chr::minutes{*mm} + chr::seconds{ss};
}

std::string_view to_string(PriceUnit unit) { return unit == PriceUnit::PerKwh ? "per-kwh" : "per-mwh"; }

std::string_view to_string(MidnightPolicy policy) {
    return policy == MidnightPolicy::Clamp ? "clamp" : "drop";
}

std::optional<PriceUnit> price_unit_from_string(std::string_view text) {
    if (text == "per-kwh") return PriceUnit::PerKwh;
    if (text == "per-mwh") return PriceUnit::PerMwh;
    return std::nullopt;
}

std::optional<MidnightPolicy> midnight_policy_from_string(std::string_view text) {
    if (text == "clamp") return MidnightPolicy::Clamp;
    if (text == "drop") return MidnightPolicy::Drop;
    return std::nullopt;
}

bool PriceSeries::insert(Date date, int hour, double price) {
    return prices_.emplace(std::make_pair(date, hour), price).second;
}

std::optional<double> PriceSeries::find(Date date, int hour) const {
    const auto it = prices_.find({date, hour});
    if (it == prices_.end()) return std::nullopt;
    return it->second;
}

void IngestConfig::validate() const {
    if (horizon_steps == 0) throw InvalidArgument("horizon_steps must be positive");
    for (double v : {step_hours, capacity, socket_limit})
        if (!(v > 0.0) || !std::isfinite(v)) throw InvalidArgument("ingest parameters must be positive");
    if (!(waste >= 0.0) || !std::isfinite(waste)) throw InvalidArgument("waste must be nonnegative");
    if (static_cast<double>(horizon_steps) * step_hours > 24.0 + 1e-9)
        throw InvalidArgument("horizon_steps * step_hours must not exceed 24 hours");
}

std::vector<SessionRecord> parse_sessions(std::istream& in) {
    csv::Reader reader(in);
    std::vector<std::string> row;
    if (!reader.next(row)) throw MissingColumn("session_id");
    const auto header = row;
    std::size_t col[4];
    const char* names[4] = {"session_id", "arrival", "departure", "energy_kwh"};
    for (int k = 0; k < 4; ++k) {
        const auto c = csv::find_column(header, names[k]);
        if (!c) throw MissingColumn(names[k]);
        col[k] = *c;
    }

    std::vector<SessionRecord> out;
    while (reader.next(row)) {
        const auto line = reader.line();
        if (row.size() < header.size())
            throw MalformedRow(line, "expected " + std::to_string(header.size()) + " fields, got " +
                                         std::to_string(row.size()));
        SessionRecord rec;
        rec.session_id = row[col[0]];
        if (rec.session_id.empty()) throw MalformedRow(line, "empty session_id");
        const auto arrival = parse_timestamp(row[col[1]]);
        if (!arrival) throw MalformedRow(line, "bad arrival timestamp '" + row[col[1]] + "'");
        const auto departure = parse_timestamp(row[col[2]]);
        if (!departure) throw MalformedRow(line, "bad departure timestamp '" + row[col[2]] + "'");
        const auto energy = csv::to_double(row[col[3]]);
        if (!energy || !std::isfinite(*energy)) throw MalformedRow(line, "bad energy_kwh '" + row[col[3]] + "'");
        if (*departure <= *arrival) throw MalformedRow(line, "departure is not after arrival");
        if (*energy < 0.0) throw MalformedRow(line, "negative energy_kwh");
        rec.arrival = *arrival;
        rec.departure = *departure;
        rec.energy_kwh = *energy;
        out.push_back(std::move(rec));
    }
    return out;
}

PriceSeries parse_prices(std::istream& in, PriceUnit unit) {
    csv::Reader reader(in);
    std::vector<std::string> row;
    if (!reader.next(row)) throw MissingColumn("date");
    const auto header = row;
    std::size_t col[3];
    const char* names[3] = {"date", "hour", "price"};
    for (int k = 0; k < 3; ++k) {
        const auto c = csv::find_column(header, names[k]);
        if (!c) throw MissingColumn(names[k]);
        col[k] = *c;
    }
    const double scale = unit == PriceUnit::PerMwh ? 1.0 / 1000.0 : 1.0;

    PriceSeries out;
    while (reader.next(row)) {
        const auto line = reader.line();
        if (row.size() < header.size())
            throw MalformedRow(line, "expected " + std::to_string(header.size()) + " fields, got " +
                                         std::to_string(row.size()));
        const auto date = parse_date(row[col[0]]);
        if (!date) throw MalformedRow(line, "bad date '" + row[col[0]] + "'");
        const auto hour = csv::to_long(row[col[1]]);
        if (!hour || *hour < 0 || *hour > 23) throw MalformedRow(line, "hour must be an integer in [0, 23]");
        const auto price = csv::to_double(row[col[2]]);
        if (!price || !std::isfinite(*price)) throw MalformedRow(line, "bad price '" + row[col[2]] + "'");
        if (!out.insert(*date, static_cast<int>(*hour), *price * scale))
            throw DuplicateEntry(line, format_date(*date), static_cast<int>(*hour));
    }
    return out;
}

BuildResult build_scenarios(const std::vector<SessionRecord>& sessions, const PriceSeries& prices,
                            const IngestConfig& cfg) {
    cfg.validate();
    const auto T = cfg.horizon_steps;
    const double step_seconds = cfg.step_hours * 3600.0;
    const double horizon_seconds = static_cast<double>(T) * step_seconds;

    struct Placed {
        const SessionRecord* record;
        Window window;
    };
    std::map<Date, std::vector<Placed>> by_day;
    BuildResult out;

    for (const auto& s : sessions) {
        const auto day = chr::floor<chr::days>(s.arrival);
        const double arr = static_cast<double>((s.arrival - Timestamp{day}).count());
        const double dep = static_cast<double>((s.departure - Timestamp{day}).count());
        const auto first = static_cast<std::size_t>(std::floor(arr / step_seconds));
        if (first >= T || (cfg.midnight_policy == MidnightPolicy::Drop && dep > horizon_seconds)) {
            ++out.dropped_sessions;
            continue;
        }
        const auto end = static_cast<std::size_t>(std::ceil(dep / step_seconds));
        const std::size_t last = std::min(std::max(end, first + 1), T) - 1;
        by_day[day].push_back({&s, Window{first, last}});
    }

    for (auto& [day, group] : by_day) {
        std::vector<double> step_prices(T);
        bool complete = true;
        for (std::size_t t = 0; t < T && complete; ++t) {
            const int hour = static_cast<int>(std::floor(static_cast<double>(t) * cfg.step_hours + 1e-9));
            const auto p = prices.find(day, hour);
            if (p) step_prices[t] = *p;
            else complete = false;
        }
        if (!complete) {
            out.missing_price_days.push_back(format_date(day));
            continue;
        }

        std::sort(group.begin(), group.end(), [](const Placed& a, const Placed& b) {
            if (a.record->arrival != b.record->arrival) return a.record->arrival < b.record->arrival;
            return a.record->session_id < b.record->session_id;
        });
        std::vector<std::optional<Window>> windows;
        std::vector<double> load;
        std::vector<std::string> ids;
        for (const auto& p : group) {
            windows.emplace_back(p.window);
            load.push_back(p.record->energy_kwh / cfg.step_hours);
            ids.push_back(p.record->session_id);
        }
        auto sc = make_scenario(format_date(day), std::move(step_prices), std::move(windows), std::move(load),
                                cfg.capacity, cfg.socket_limit, cfg.waste, cfg.step_hours);
        sc.vehicle_ids = std::move(ids);
        out.scenarios.push_back(std::move(sc));
    }
    return out;
}

}  // namespace evcharge
