#pragma once

#include "abbalstm/neural/cell.hpp"
#include "abbalstm/neural/params.hpp"

#include <cstddef>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

namespace abbalstm::neural {

/// Hidden and cell states of every layer.
struct StackState {
    std::vector<LayerState> layers;

    static StackState zero(const LstmStackParams& p) {
        StackState s;
        for (const auto& l : p.layers) s.layers.push_back(LayerState::zero(l.units()));
        return s;
    }
};

/// Head output: the linear prediction, or class probabilities for a softmax head.
[[nodiscard]] inline Vector apply_head(const LstmStackParams& p, const Vector& top_h) {
    Vector out = p.head.w * top_h + p.head.b;
    if (p.head_kind == HeadKind::softmax) return softmax(out);
    return out;
}

inline void check_states(const LstmStackParams& p, const StackState& s) {
    if (s.layers.size() != p.layers.size()) throw std::invalid_argument("state count does not match layer count");
    for (std::size_t j = 0; j < p.layers.size(); ++j) {
        const auto n = p.layers[j].units();
        if (s.layers[j].h.size() != n || s.layers[j].c.size() != n) {
            throw std::invalid_argument("state dimension does not match layer " + std::to_string(j));
        }
    }
}

/// One time step through all layers; layer j's new hidden state is layer
/// j+1's input at the same step. Returns the head output on the top state.
inline Vector stack_forward(const LstmStackParams& p, StackState& states, const Vector& x) {
    check_states(p, states);
    if (x.size() != p.layers.front().input_dim()) throw std::invalid_argument("input dimension mismatch");
    const Vector* in = &x;
    for (std::size_t j = 0; j < p.layers.size(); ++j) {
        states.layers[j] = cell_forward(p.layers[j], states.layers[j], *in);
        in = &states.layers[j].h;
    }
    return apply_head(p, *in);
}

/// Activations recorded by window_forward for backpropagation.
struct WindowCache {
    struct Step {
        Vector x;      // layer input (after dropout from the layer below)
        Vector h_prev;
        Vector c_prev;
        Vector gates;  // [f; i; o; u]
        Vector c;
        Vector tanh_c;
    };
    std::size_t length = 0;
    std::vector<std::vector<Step>> steps; // [t][layer]
    std::vector<Vector> masks;            // per layer, applied to its output h
    Vector head_input;
    Vector head_raw;                      // pre-activation head output
    Vector output;                        // head output (probabilities for softmax)
};

struct WindowResult {
    StackState final_states;
    Vector output;
};

/// Runs the stack over `inputs` starting from `init`, reusing `cache`.
///
/// With dropout_rate > 0 one inverted-dropout mask per layer is drawn from
/// `rng` for the whole window and applied to that layer's output as seen by
/// the layer above (or the head); recurrent connections are never dropped.
template <class Rng>
WindowResult window_forward(const LstmStackParams& p, const StackState& init, std::span<const Vector> inputs,
                            double dropout_rate, Rng& rng, WindowCache& cache) {
    if (inputs.empty()) throw std::invalid_argument("window must contain at least one input");
    if (dropout_rate < 0.0 || dropout_rate >= 1.0) throw std::invalid_argument("dropout rate must be in [0, 1)");
    check_states(p, init);
    const std::size_t L = p.layers.size();
    const std::size_t len = inputs.size();

    cache.length = len;
    if (cache.steps.size() < len) cache.steps.resize(len);
    cache.masks.resize(L);
    for (std::size_t j = 0; j < L; ++j) {
        const auto n = p.layers[j].units();
        if (dropout_rate > 0.0) {
            std::bernoulli_distribution keep(1.0 - dropout_rate);
            const double scale = 1.0 / (1.0 - dropout_rate);
            cache.masks[j].resize(n);
            for (Eigen::Index q = 0; q < n; ++q) cache.masks[j][q] = keep(rng) ? scale : 0.0;
        } else {
            cache.masks[j].setOnes(n);
        }
    }

    WindowResult res{init, {}};
    for (std::size_t t = 0; t < len; ++t) {
        auto& row = cache.steps[t];
        row.resize(L);
        if (inputs[t].size() != p.layers.front().input_dim()) throw std::invalid_argument("input dimension mismatch");
        for (std::size_t j = 0; j < L; ++j) {
            const auto& layer = p.layers[j];
            const auto n = layer.units();
            auto& st = row[j];
            auto& state = res.final_states.layers[j];
            if (j == 0) {
                st.x = inputs[t];
            } else {
                st.x = res.final_states.layers[j - 1].h.cwiseProduct(cache.masks[j - 1]);
            }
            st.h_prev = state.h;
            st.c_prev = state.c;
            st.gates.resize(4 * n);
            gate_activations(layer, st.x, st.h_prev, st.gates);
            st.c = st.gates.segment(0, n).cwiseProduct(st.c_prev) +
                   st.gates.segment(n, n).cwiseProduct(st.gates.segment(3 * n, n));
            st.tanh_c = st.c.array().tanh().matrix();
            state.c = st.c;
            state.h = st.gates.segment(2 * n, n).cwiseProduct(st.tanh_c);
        }
    }
    cache.head_input = res.final_states.layers.back().h.cwiseProduct(cache.masks.back());
    cache.head_raw = p.head.w * cache.head_input + p.head.b;
    cache.output = p.head_kind == HeadKind::softmax ? softmax(cache.head_raw) : cache.head_raw;
    res.output = cache.output;
    return res;
}

/// Inference-only window evaluation (no dropout).
inline WindowResult window_forward(const LstmStackParams& p, const StackState& init, std::span<const Vector> inputs) {
    WindowCache cache;
    std::mt19937_64 unused(0);
    return window_forward(p, init, inputs, 0.0, unused, cache);
}

/// Scratch buffers for backward_window, reusable across calls.
struct BackwardWorkspace {
    std::vector<Vector> dh_next;
    std::vector<Vector> dc_next;
    std::vector<Vector> dh_above; // gradient arriving at layer j's output from layer j+1 at the current step
    Vector dz;
    Vector dc;
    Vector dx;
};

/// Truncated BPTT over one window. `grad_head_raw` is dLoss/d(head
/// pre-activation). Gradients are added into `grads`, which must have the
/// shape of `p`. Gradients with respect to the window's initial states are
/// dropped.
inline void backward_window(const LstmStackParams& p, const WindowCache& cache, const Vector& grad_head_raw,
                            LstmStackParams& grads, BackwardWorkspace& ws) {
    const std::size_t L = p.layers.size();
    grads.head.w.noalias() += grad_head_raw * cache.head_input.transpose();
    grads.head.b += grad_head_raw;

    ws.dh_next.resize(L);
    ws.dc_next.resize(L);
    ws.dh_above.resize(L);
    for (std::size_t j = 0; j < L; ++j) {
        const auto n = p.layers[j].units();
        ws.dh_next[j].setZero(n);
        ws.dc_next[j].setZero(n);
        ws.dh_above[j].setZero(n);
    }
    ws.dh_above[L - 1].noalias() = (p.head.w.transpose() * grad_head_raw).cwiseProduct(cache.masks.back());

    for (std::size_t t = cache.length; t-- > 0;) {
        for (std::size_t jj = L; jj-- > 0;) {
            const auto& layer = p.layers[jj];
            auto& g = grads.layers[jj];
            const auto& st = cache.steps[t][jj];
            const auto n = layer.units();
            const auto f = st.gates.segment(0, n).array();
            const auto i = st.gates.segment(n, n).array();
            const auto o = st.gates.segment(2 * n, n).array();
            const auto u = st.gates.segment(3 * n, n).array();

            const auto dh = (ws.dh_above[jj] + ws.dh_next[jj]).array();
            ws.dc = (ws.dc_next[jj].array() + dh * o * (1.0 - st.tanh_c.array().square())).matrix();
            ws.dz.resize(4 * n);
            ws.dz.segment(0, n) = (ws.dc.array() * st.c_prev.array() * f * (1.0 - f)).matrix();
            ws.dz.segment(n, n) = (ws.dc.array() * u * i * (1.0 - i)).matrix();
            ws.dz.segment(2 * n, n) = (dh * st.tanh_c.array() * o * (1.0 - o)).matrix();
            ws.dz.segment(3 * n, n) = (ws.dc.array() * i * (1.0 - u.square())).matrix();

            g.wx.noalias() += ws.dz * st.x.transpose();
            g.wh.noalias() += ws.dz * st.h_prev.transpose();
            g.bx += ws.dz;
            g.bh += ws.dz;

            ws.dh_next[jj].noalias() = layer.wh.transpose() * ws.dz;
            ws.dc_next[jj] = ws.dc.cwiseProduct(st.gates.segment(0, n));
            if (jj > 0) {
                ws.dx.noalias() = layer.wx.transpose() * ws.dz;
                ws.dh_above[jj - 1] = ws.dx.cwiseProduct(cache.masks[jj - 1]);
            }
        }
        // only the last step feeds the head
        ws.dh_above[L - 1].setZero();
    }
}

inline LstmStackParams backward_window(const LstmStackParams& p, const WindowCache& cache,
                                       const Vector& grad_head_raw) {
    auto grads = zeros_like(p);
    BackwardWorkspace ws;
    backward_window(p, cache, grad_head_raw, grads, ws);
    return grads;
}

} // namespace abbalstm::neural
