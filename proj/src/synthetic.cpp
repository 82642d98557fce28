#include "evcharge/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include "evcharge/nominal.hpp"

namespace evcharge {

namespace chr = std::chrono;

Scenario synthetic_scenario(const SyntheticOptions& o, std::uint64_t seed) {
    if (o.horizon_steps == 0) throw InvalidArgument("horizon_steps must be positive");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto pick = [&](std::size_t lo, std::size_t hi) {
        return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
    };

    const auto T = o.horizon_steps;
    std::vector<double> prices(T);
    const double flat = o.min_price + (o.max_price - o.min_price) * unit(rng);
    for (auto& p : prices) p = o.flat_price ? flat : o.min_price + (o.max_price - o.min_price) * unit(rng);

    std::vector<std::optional<Window>> windows;
    std::vector<double> load;
    for (std::size_t i = 0; i < o.num_vehicles; ++i) {
        const auto length = pick(1, T);
        const auto first = pick(0, T - length);
        windows.emplace_back(Window{first, first + length - 1});
        load.push_back(o.max_fill * static_cast<double>(length) * o.socket_limit * unit(rng));
    }
    auto sc = make_scenario("synthetic-" + std::to_string(seed), std::move(prices), std::move(windows),
                            std::move(load), o.capacity, o.socket_limit, o.waste, o.step_hours);
    if (o.ensure_feasible) {
        for (int k = 0; k < 60 && !check_feasibility(sc).feasible; ++k)
            for (auto& l : sc.load) l *= 0.5;
    }
    return sc;
}

SyntheticCorpus synthetic_corpus(const CorpusOptions& o, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> noise(0.0, 1.0);
    SyntheticCorpus corpus;

    for (std::size_t d = 0; d < o.days; ++d) {
        const Date day = o.first_day + chr::days{static_cast<int>(d)};
        const double level = 40.0 + 30.0 * unit(rng);  // EUR/MWh
        for (int h = 0; h < 24; ++h) {
            const double morning = std::exp(-0.5 * std::pow((h - 8.5) / 1.8, 2));
            const double evening = std::exp(-0.5 * std::pow((h - 19.0) / 2.2, 2));
            const double night = h < 6 ? -0.25 : 0.0;
            const double mwh = level * (1.0 + 0.6 * morning + 0.8 * evening + night) + 4.0 * noise(rng);
            corpus.prices.insert(day, h, mwh / 1000.0);
        }

        const auto n = std::uniform_int_distribution<std::size_t>(1, std::max<std::size_t>(1, o.max_sessions_per_day))(rng);
        for (std::size_t k = 0; k < n; ++k) {
            const double arrive_h = std::clamp(8.0 + 2.5 * noise(rng), 0.0, 20.0);
            const double stay_h = std::clamp(2.0 + 8.0 * unit(rng), 1.0, 23.9 - arrive_h);
            const double energy = std::min(0.8 * 7.0 * std::floor(stay_h), 3.0 + 27.0 * unit(rng));
            const auto arrival = chr::sys_seconds{day} + chr::seconds{static_cast<long>(arrive_h * 3600.0)};
            const auto departure = arrival + chr::seconds{static_cast<long>(stay_h * 3600.0)};
            char id[48];
            std::snprintf(id, sizeof id, "%s-%03zu", format_date(day).c_str(), k);
            corpus.sessions.push_back({id, arrival, departure, std::round(energy * 1000.0) / 1000.0});
        }
    }
    return corpus;
}

namespace {

std::string format_timestamp(Timestamp ts) {
    const auto day = chr::floor<chr::days>(ts);
    const chr::hh_mm_ss hms{ts - day};
    char buf[32];
    std::snprintf(buf, sizeof buf, "%sT%02ld:%02ld:%02ld", format_date(day).c_str(),
                  static_cast<long>(hms.hours().count()), static_cast<long>(hms.minutes().count()),
                  static_cast<long>(hms.seconds().count()));
    return buf;
}

}  // namespace

void write_sessions_csv(const std::vector<SessionRecord>& sessions, std::ostream& out) {
    out << "session_id,arrival,departure,energy_kwh\n";
    char energy[32];
    for (const auto& s : sessions) {
        std::snprintf(energy, sizeof energy, "%.3f", s.energy_kwh);
        out << s.session_id << ',' << format_timestamp(s.arrival) << ',' << format_timestamp(s.departure) << ','
            << energy << '\n';
    }
}

void write_prices_csv(const PriceSeries& prices, PriceUnit unit, std::ostream& out) {
    out << "date,hour,price\n";
    const double scale = unit == PriceUnit::PerMwh ? 1000.0 : 1.0;
    char price[32];
    for (const auto& [key, value] : prices.entries()) {
        std::snprintf(price, sizeof price, "%.6f", value * scale);
        out << format_date(key.first) << ',' << key.second << ',' << price << '\n';
    }
}

}  // namespace evcharge
