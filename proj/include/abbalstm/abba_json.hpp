#pragma once

// JSON checkpoint of a SymbolicRepresentation:
//
//   {
//     "symbols": "abac...",
//     "start_value": 0.0,
//     "scaling": 0.0,
//     "assignments": [0, 1, 0, 2, ...],
//     "centers": [[mean_len, mean_inc], ...],   (optional third entry: inc tail)
//     "patches": [[0.0, ...], ...]
//   }

#include "abbalstm/abba.hpp"

#include <json.hpp>

#include <fstream>
#include <stdexcept>
#include <string>

namespace abbalstm {

inline nlohmann::json to_json(const SymbolicRepresentation& rep) {
    nlohmann::json j;
    j["symbols"] = rep.symbols;
    j["start_value"] = rep.start_value;
    j["scaling"] = rep.model.scaling;
    j["assignments"] = rep.model.assignments;
    auto centers = nlohmann::json::array();
    for (const auto& c : rep.model.centers) {
        if (c.inc_tail == 0.0) centers.push_back({c.len, c.inc});
        else centers.push_back({c.len, c.inc, c.inc_tail});
    }
    j["centers"] = std::move(centers);
    j["patches"] = rep.patches.patches;
    return j;
}

inline SymbolicRepresentation symbolic_from_json(const nlohmann::json& j) {
    SymbolicRepresentation rep;
    rep.symbols = j.at("symbols").get<std::string>();
    rep.start_value = j.at("start_value").get<double>();
    rep.model.scaling = j.value("scaling", 0.0);
    rep.model.assignments = j.value("assignments", std::vector<std::size_t>{});
    for (const auto& c : j.at("centers")) {
        if (!c.is_array() || c.size() < 2 || c.size() > 3) throw std::invalid_argument("center must be [len, inc]");
        rep.model.centers.push_back({c[0].get<double>(), c[1].get<double>(), c.size() == 3 ? c[2].get<double>() : 0.0});
    }
    rep.patches.patches = j.value("patches", std::vector<std::vector<double>>{});
    for (char s : rep.symbols) {
        if (symbol_index(s) >= rep.model.centers.size()) throw std::invalid_argument("symbol not in alphabet");
    }
    return rep;
}

inline void save_symbolic(const SymbolicRepresentation& rep, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << to_json(rep).dump(2) << '\n';
}

inline SymbolicRepresentation load_symbolic(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    return symbolic_from_json(nlohmann::json::parse(in));
}

} // namespace abbalstm
