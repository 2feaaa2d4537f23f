#pragma once

// Parameter checkpoint: a JSON document listing every tensor by name with its
// shape and column-major float64 data.
//
//   {"input_dim": 1, "units": [50, 50], "head": "linear", "outputs": 1,
//    "tensors": [{"name": "lstm0.W_x", "shape": [200, 1], "data": [...]}, ...]}

#include "abbalstm/neural/params.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <stdexcept>
#include <string>

namespace abbalstm::neural {

inline nlohmann::json to_json(const LstmStackParams& p) {
    const auto shape = shape_of(p);
    nlohmann::json j;
    j["input_dim"] = shape.input_dim;
    j["units"] = shape.units;
    j["head"] = shape.head_kind == HeadKind::softmax ? "softmax" : "linear";
    j["outputs"] = shape.outputs;
    auto list = nlohmann::json::array();
    for (const auto& t : tensors(p)) {
        list.push_back({{"name", t.name},
                        {"shape", {t.rows, t.cols}},
                        {"data", std::vector<double>(t.data.begin(), t.data.end())}});
    }
    j["tensors"] = std::move(list);
    return j;
}

inline LstmStackParams params_from_json(const nlohmann::json& j) {
    StackShape shape;
    shape.input_dim = j.at("input_dim").get<std::size_t>();
    shape.units = j.at("units").get<std::vector<std::size_t>>();
    const auto head = j.at("head").get<std::string>();
    if (head != "linear" && head != "softmax") throw std::invalid_argument("unknown head kind '" + head + "'");
    shape.head_kind = head == "softmax" ? HeadKind::softmax : HeadKind::linear;
    shape.outputs = j.at("outputs").get<std::size_t>();
    auto p = zeros(shape);
    auto views = tensors(p);
    const auto& list = j.at("tensors");
    if (list.size() != views.size()) throw std::invalid_argument("checkpoint tensor count does not match shape");
    for (std::size_t k = 0; k < views.size(); ++k) {
        const auto& t = list[k];
        if (t.at("name").get<std::string>() != views[k].name) {
            throw std::invalid_argument("checkpoint tensor " + std::to_string(k) + " should be " + views[k].name);
        }
        const auto data = t.at("data").get<std::vector<double>>();
        if (data.size() != views[k].data.size()) throw std::invalid_argument("tensor " + views[k].name + " has wrong size");
        std::copy(data.begin(), data.end(), views[k].data.begin());
    }
    return p;
}

inline void save_params(const LstmStackParams& p, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << to_json(p).dump() << '\n';
}

inline LstmStackParams load_params(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    return params_from_json(nlohmann::json::parse(in));
}

} // namespace abbalstm::neural
