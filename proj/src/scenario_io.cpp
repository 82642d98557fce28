#include "evcharge/scenario_io.hpp"

#include <fstream>

namespace evcharge {

namespace {

constexpr const char* kFormat = "evcharge-scenario/1";

std::vector<double> number_array(const nlohmann::json& doc, const char* key) {
    const auto it = doc.find(key);
    if (it == doc.end() || !it->is_array()) throw InvalidArgument(std::string("scenario: '") + key + "' must be an array");
    std::vector<double> out;
    out.reserve(it->size());
    for (const auto& v : *it) {
        if (!v.is_number()) throw InvalidArgument(std::string("scenario: '") + key + "' must hold numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

}  // namespace

nlohmann::json scenario_to_json(const Scenario& sc) {
    nlohmann::json occupancy = nlohmann::json::array();
    for (std::size_t t = 0; t < sc.horizon_steps; ++t) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t i = 0; i < sc.num_vehicles(); ++i) row.push_back(static_cast<int>(sc.occupancy(t, i)));
        occupancy.push_back(std::move(row));
    }
    nlohmann::json doc = {
        {"format", kFormat},
        {"scenario_id", sc.scenario_id},
        {"horizon_steps", sc.horizon_steps},
        {"step_hours", sc.step_hours},
        {"load", sc.load},
        {"capacity", sc.capacity},
        {"socket_limit", sc.socket_limit},
        {"waste", sc.waste},
        {"prices", sc.prices},
        {"occupancy", std::move(occupancy)},
    };
    if (!sc.vehicle_ids.empty()) doc["vehicle_ids"] = sc.vehicle_ids;
    return doc;
}

Scenario scenario_from_json(const nlohmann::json& doc) {
    if (!doc.is_object()) throw InvalidArgument("scenario document must be a JSON object");
    if (doc.value("format", std::string{}) != kFormat)
        throw InvalidArgument(std::string("scenario: 'format' must be \"") + kFormat + "\"");
    Scenario sc;
    try {
        sc.scenario_id = doc.at("scenario_id").get<std::string>();
        sc.horizon_steps = doc.at("horizon_steps").get<std::size_t>();
        sc.step_hours = doc.at("step_hours").get<double>();
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument(std::string("scenario: ") + e.what());
    }
    sc.load = number_array(doc, "load");
    sc.capacity = number_array(doc, "capacity");
    sc.socket_limit = number_array(doc, "socket_limit");
    sc.waste = number_array(doc, "waste");
    sc.prices = number_array(doc, "prices");

    const auto& occ = doc.at("occupancy");
    if (!occ.is_array() || occ.size() != sc.horizon_steps)
        throw ShapeMismatch("scenario: 'occupancy' must have horizon_steps rows");
    sc.occupancy = Occupancy(sc.horizon_steps, sc.load.size(), 0);
    for (std::size_t t = 0; t < sc.horizon_steps; ++t) {
        if (!occ[t].is_array() || occ[t].size() != sc.load.size())
            throw ShapeMismatch("scenario: every occupancy row must have one entry per vehicle");
        for (std::size_t i = 0; i < sc.load.size(); ++i) {
            const auto& a = occ[t][i];
            if (!a.is_number_integer() || (a.get<int>() != 0 && a.get<int>() != 1))
                throw InvalidArgument("scenario: occupancy entries must be 0 or 1");
            sc.occupancy(t, i) = static_cast<std::uint8_t>(a.get<int>());
        }
    }
    if (doc.contains("vehicle_ids")) sc.vehicle_ids = doc.at("vehicle_ids").get<std::vector<std::string>>();
    check_scenario(sc);
    return sc;
}

Scenario read_scenario_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::parse_error& e) {
        throw InvalidArgument(path.string() + ": " + e.what());
    }
    return scenario_from_json(doc);
}

void write_scenario_file(const Scenario& sc, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    out << scenario_to_json(sc).dump(1) << '\n';
    if (!out) throw Error("failed writing " + path.string());
}

}  // namespace evcharge
