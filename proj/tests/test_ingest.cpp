#include <doctest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "evcharge/ingest.hpp"
#include "evcharge/synthetic.hpp"

using namespace evcharge;
namespace chr = std::chrono;

namespace {

std::vector<SessionRecord> sessions_from(const std::string& text) {
    std::istringstream in(text);
    return parse_sessions(in);
}

PriceSeries prices_from(const std::string& text, PriceUnit unit = PriceUnit::PerMwh) {
    std::istringstream in(text);
    return parse_prices(in, unit);
}

PriceSeries flat_day(Date day, double price = 0.05) {
    PriceSeries p;
    for (int h = 0; h < 24; ++h) p.insert(day, h, price);
    return p;
}

Timestamp at(Date day, int h, int m) { return Timestamp{day} + chr::hours{h} + chr::minutes{m}; }

const Date kDay = Date{chr::year{2018} / 4 / 25};

}  // namespace

TEST_CASE("timestamps") {
    CHECK(parse_timestamp("2018-04-25T08:15:00") == at(kDay, 8, 15));
    CHECK(parse_timestamp("2018-04-25 08:15") == at(kDay, 8, 15));
    CHECK(parse_timestamp("2018-04-25T08:15:00Z") == at(kDay, 8, 15));
    CHECK(parse_timestamp("2018-04-25T08:15:00-07:00") == at(kDay, 8, 15));
    CHECK(parse_timestamp("2018-04-25T08:15:00.250") == at(kDay, 8, 15));
    CHECK_FALSE(parse_timestamp("2018-02-30T08:15:00").has_value());
    CHECK_FALSE(parse_timestamp("yesterday").has_value());
    CHECK(format_date(kDay) == "2018-04-25");
    CHECK(parse_date("2018-04-25") == kDay);
}

TEST_CASE("parse_sessions") {
    SUBCASE("one row") {
        const auto s = sessions_from("session_id,arrival,departure,energy_kwh\n"
                                     "s1,2018-04-25T08:15:00,2018-04-25T11:40:00,12.5\n");
        REQUIRE(s.size() == 1);
        CHECK(s[0].session_id == "s1");
        CHECK(s[0].arrival == at(kDay, 8, 15));
        CHECK(s[0].departure == at(kDay, 11, 40));
        CHECK(s[0].energy_kwh == 12.5);
    }
    SUBCASE("header only") {
        CHECK(sessions_from("session_id,arrival,departure,energy_kwh\n").empty());
    }
    SUBCASE("columns in any order, extra columns ignored") {
        const auto s = sessions_from("energy_kwh,site,session_id,departure,arrival\n"
                                     "3,caltech,x,2018-04-25T10:00,2018-04-25T09:00\n");
        REQUIRE(s.size() == 1);
        CHECK(s[0].session_id == "x");
        CHECK(s[0].energy_kwh == 3.0);
    }
    SUBCASE("departure before arrival") {
        try {
            sessions_from("session_id,arrival,departure,energy_kwh\n"
                          "s1,2018-04-25T08:15:00,2018-04-25T08:15:00,1\n"
                          "s2,2018-04-25T11:00:00,2018-04-25T08:00:00,1\n");
            FAIL("expected MalformedRow");
        } catch (const MalformedRow& e) {
            CHECK(e.line() == 2);
        }
    }
    SUBCASE("negative energy") {
        CHECK_THROWS_AS(sessions_from("session_id,arrival,departure,energy_kwh\n"
                                      "s1,2018-04-25T08:00,2018-04-25T09:00,-1\n"),
                        MalformedRow);
    }
    SUBCASE("missing column") {
        try {
            sessions_from("session_id,arrival,energy_kwh\n");
            FAIL("expected MissingColumn");
        } catch (const MissingColumn& e) {
            CHECK(e.name() == "departure");
        }
    }
    SUBCASE("quoted fields and blank lines") {
        const auto s = sessions_from("session_id,arrival,departure,energy_kwh\r\n\r\n"
                                     "\"a,b\",2018-04-25T08:00,2018-04-25T09:00,1\r\n");
        REQUIRE(s.size() == 1);
        CHECK(s[0].session_id == "a,b");
    }
}

TEST_CASE("parse_prices") {
    SUBCASE("per MWh is divided by 1000") {
        const auto p = prices_from("date,hour,price\n2018-04-25,0,52.0\n");
        CHECK(p.find(kDay, 0) == doctest::Approx(0.052));
    }
    SUBCASE("per kWh passes through") {
        const auto p = prices_from("date,hour,price\n2018-04-25,0,0.2\n", PriceUnit::PerKwh);
        CHECK(p.find(kDay, 0) == doctest::Approx(0.2));
    }
    SUBCASE("negative prices") {
        const auto p = prices_from("date,hour,price\n2018-04-25,3,-5.0\n");
        CHECK(p.find(kDay, 3) == doctest::Approx(-0.005));
    }
    SUBCASE("duplicates") {
        try {
            prices_from("date,hour,price\n2018-04-25,3,1\n2018-04-25,3,2\n");
            FAIL("expected DuplicateEntry");
        } catch (const DuplicateEntry& e) {
            CHECK(e.date() == "2018-04-25");
            CHECK(e.hour() == 3);
        }
    }
    SUBCASE("hour out of range") {
        CHECK_THROWS_AS(prices_from("date,hour,price\n2018-04-25,24,1\n"), MalformedRow);
    }
}

TEST_CASE("windows follow the floor/ceil rule") {
    const std::vector<SessionRecord> s{{"s1", at(kDay, 8, 15), at(kDay, 11, 40), 12.5}};
    const auto out = build_scenarios(s, flat_day(kDay), IngestConfig{});
    REQUIRE(out.scenarios.size() == 1);
    const auto& sc = out.scenarios[0];
    CHECK(sc.scenario_id == "2018-04-25");
    // 1-based steps 9..12 are 0-based 8..11.
    for (std::size_t t = 0; t < 24; ++t) CHECK(sc.occupancy(t, 0) == (t >= 8 && t <= 11 ? 1 : 0));
    CHECK(sc.load[0] == 12.5);
    CHECK(sc.capacity[0] == 300.0);
    CHECK(sc.socket_limit[0] == 7.0);
    CHECK(sc.waste[0] == 0.01);
    CHECK(sc.vehicle_ids == std::vector<std::string>{"s1"});
}

TEST_CASE("sessions past midnight") {
    const std::vector<SessionRecord> s{
        {"late", at(kDay, 23, 30), at(kDay + chr::days{1}, 1, 10), 2.0}};
    auto prices = flat_day(kDay);
    IngestConfig cfg;
    SUBCASE("clamp") {
        const auto out = build_scenarios(s, prices, cfg);
        REQUIRE(out.scenarios.size() == 1);
        CHECK(out.scenarios[0].window(0) == Window{23, 23});
        CHECK(out.dropped_sessions == 0);
    }
    SUBCASE("drop") {
        cfg.midnight_policy = MidnightPolicy::Drop;
        const auto out = build_scenarios(s, prices, cfg);
        CHECK(out.scenarios.empty());
        CHECK(out.dropped_sessions == 1);
    }
}

TEST_CASE("grouping by arrival date") {
    const Date next = kDay + chr::days{1};
    const std::vector<SessionRecord> s{{"a", at(kDay, 9, 0), at(kDay, 10, 0), 1.0},
                                       {"b", at(next, 9, 0), at(next, 10, 0), 1.0}};
    auto prices = flat_day(kDay);
    for (int h = 0; h < 24; ++h) prices.insert(next, h, 0.1);
    const auto out = build_scenarios(s, prices, IngestConfig{});
    REQUIRE(out.scenarios.size() == 2);
    CHECK(out.scenarios[0].num_vehicles() == 1);
    CHECK(out.scenarios[1].num_vehicles() == 1);
    CHECK(out.scenarios[1].prices[0] == 0.1);
}

TEST_CASE("days with missing prices are skipped and listed") {
    const std::vector<SessionRecord> s{{"a", at(kDay, 9, 0), at(kDay, 10, 0), 1.0}};
    PriceSeries p;
    for (int h = 0; h < 23; ++h) p.insert(kDay, h, 0.1);
    const auto out = build_scenarios(s, p, IngestConfig{});
    CHECK(out.scenarios.empty());
    CHECK(out.missing_price_days == std::vector<std::string>{"2018-04-25"});
    CHECK(build_scenarios({}, p, IngestConfig{}).scenarios.empty());
}

TEST_CASE("sub-hour steps") {
    IngestConfig cfg;
    cfg.horizon_steps = 96;
    cfg.step_hours = 0.25;
    const std::vector<SessionRecord> s{{"q", at(kDay, 8, 20), at(kDay, 9, 5), 3.0}};
    auto prices = flat_day(kDay);
    const auto sc = build_scenarios(s, prices, cfg).scenarios.at(0);
    CHECK(sc.window(0) == Window{33, 36});
    CHECK(sc.load[0] == doctest::Approx(12.0));
    cfg.horizon_steps = 100;
    CHECK_THROWS_AS(build_scenarios(s, prices, cfg), InvalidArgument);
}

TEST_CASE("ingested scenarios conserve energy and ignore row order") {
    CorpusOptions opts;
    opts.days = 20;
    auto corpus = synthetic_corpus(opts, 5);
    IngestConfig cfg;
    const auto a = build_scenarios(corpus.sessions, corpus.prices, cfg);

    std::mt19937_64 rng(1);
    auto shuffled = corpus.sessions;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    const auto b = build_scenarios(shuffled, corpus.prices, cfg);

    REQUIRE(a.scenarios.size() == b.scenarios.size());
    for (std::size_t k = 0; k < a.scenarios.size(); ++k) {
        const auto& sc = a.scenarios[k];
        CHECK_NOTHROW(check_scenario(sc));
        CHECK(sc.occupancy == b.scenarios[k].occupancy);
        CHECK(sc.load == b.scenarios[k].load);
        CHECK(sc.vehicle_ids == b.scenarios[k].vehicle_ids);
        double ingested = 0.0, modeled = 0.0;
        for (const auto& s : corpus.sessions)
            if (format_date(chr::floor<chr::days>(s.arrival)) == sc.scenario_id) ingested += s.energy_kwh;
        for (double l : sc.load) modeled += l * sc.step_hours;
        CHECK(modeled == doctest::Approx(ingested).epsilon(1e-9));
    }
}

TEST_CASE("corpus files round-trip through the parsers") {
    CorpusOptions opts;
    opts.days = 3;
    const auto corpus = synthetic_corpus(opts, 9);
    std::stringstream sessions, prices;
    write_sessions_csv(corpus.sessions, sessions);
    write_prices_csv(corpus.prices, PriceUnit::PerMwh, prices);
    const auto s = parse_sessions(sessions);
    const auto p = parse_prices(prices, PriceUnit::PerMwh);
    REQUIRE(s.size() == corpus.sessions.size());
    for (std::size_t k = 0; k < s.size(); ++k) {
        CHECK(s[k].session_id == corpus.sessions[k].session_id);
        CHECK(s[k].arrival == corpus.sessions[k].arrival);
        CHECK(s[k].energy_kwh == doctest::Approx(corpus.sessions[k].energy_kwh));
    }
    CHECK(p.size() == corpus.prices.size());
}

TEST_CASE("config validation") {
    IngestConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.waste = 0.0;
    CHECK_NOTHROW(cfg.validate());
    cfg.waste = -0.1;
    CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
    cfg.waste = 0.01;
    cfg.capacity = 0.0;
    CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
    CHECK(price_unit_from_string("per-kwh") == PriceUnit::PerKwh);
    CHECK(midnight_policy_from_string("drop") == MidnightPolicy::Drop);
    CHECK_FALSE(midnight_policy_from_string("wrap").has_value());
}
