#pragma once

#include "abbalstm/neural/params.hpp"

#include <cmath>
#include <stdexcept>

namespace abbalstm::neural {

struct LayerState {
    Vector h;
    Vector c;

    static LayerState zero(Eigen::Index n) { return {Vector::Zero(n), Vector::Zero(n)}; }
};

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

template <class Derived>
void sigmoid_inplace(Eigen::MatrixBase<Derived>&& v) {
    v = v.unaryExpr([](double x) { return sigmoid(x); });
}

template <class Derived>
void tanh_inplace(Eigen::MatrixBase<Derived>&& v) {
    v = v.array().tanh().matrix();
}

/// Gate activations [f; i; o; u] for one step. Writes into `gates` (size 4n).
inline void gate_activations(const LstmLayerParams& p, const Vector& x, const Vector& h, Vector& gates) {
    const auto n = p.units();
    gates.noalias() = p.wx * x;
    gates.noalias() += p.wh * h;
    gates += p.bx;
    gates += p.bh;
    sigmoid_inplace(gates.head(3 * n));
    tanh_inplace(gates.tail(n));
}

/// One step of a layer of LSTM cells:
///   f, i, o = sigmoid(W_*x x + W_*h h + b_* + r_*),  u = tanh(W_x x + W_h h + b + r)
///   c' = f * c + i * u,  h' = o * tanh(c')
[[nodiscard]] inline LayerState cell_forward(const LstmLayerParams& p, const LayerState& state, const Vector& x) {
    const auto n = p.units();
    if (x.size() != p.input_dim() || state.h.size() != n || state.c.size() != n) {
        throw std::invalid_argument("cell_forward: dimension mismatch");
    }
    Vector gates(4 * n);
    gate_activations(p, x, state.h, gates);
    LayerState next;
    next.c = gates.segment(0, n).cwiseProduct(state.c) + gates.segment(n, n).cwiseProduct(gates.segment(3 * n, n));
    next.h = gates.segment(2 * n, n).cwiseProduct(next.c.array().tanh().matrix());
    return next;
}

/// Numerically stable softmax.
[[nodiscard]] inline Vector softmax(const Vector& logits) {
    const double top = logits.maxCoeff();
    Vector e = (logits.array() - top).exp().matrix();
    return e / e.sum();
}

} // namespace abbalstm::neural
