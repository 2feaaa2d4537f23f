#pragma once

#include "abbalstm/neural/params.hpp"

#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace abbalstm::neural {

struct AdamConfig {
    double learning_rate = 0.001;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

struct AdamState {
    LstmStackParams m;
    LstmStackParams v;
    std::size_t step = 0;

    explicit AdamState(const LstmStackParams& like) : m(zeros_like(like)), v(zeros_like(like)) {}
};

/// One bias-corrected Adam update of every parameter.
inline void adam_step(LstmStackParams& params, const LstmStackParams& grads, AdamState& state,
                      const AdamConfig& cfg = {}) {
    auto p = tensors(params);
    const auto g = tensors(grads);
    auto m = tensors(state.m);
    auto v = tensors(state.v);
    if (p.size() != g.size() || p.size() != m.size()) throw std::invalid_argument("adam: shape mismatch");

    ++state.step;
    const double t = static_cast<double>(state.step);
    const double c1 = 1.0 - std::pow(cfg.beta1, t);
    const double c2 = 1.0 - std::pow(cfg.beta2, t);
    for (std::size_t k = 0; k < p.size(); ++k) {
        if (p[k].data.size() != g[k].data.size()) throw std::invalid_argument("adam: shape mismatch");
        auto* w = p[k].data.data();
        const auto* gr = g[k].data.data();
        auto* mk = m[k].data.data();
        auto* vk = v[k].data.data();
        for (std::size_t q = 0; q < p[k].data.size(); ++q) {
            mk[q] = cfg.beta1 * mk[q] + (1.0 - cfg.beta1) * gr[q];
            vk[q] = cfg.beta2 * vk[q] + (1.0 - cfg.beta2) * gr[q] * gr[q];
            w[q] -= cfg.learning_rate * (mk[q] / c1) / (std::sqrt(vk[q] / c2) + cfg.epsilon);
        }
    }
}

} // namespace abbalstm::neural
