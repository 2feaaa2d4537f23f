#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

namespace abbalstm::neural {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Row-block order of the stacked gate matrices.
enum class Gate : int { forget = 0, input = 1, output = 2, update = 3 };

/// Weights of one layer of n LSTM cells reading d-dimensional input.
///
/// The four gate matrices are stacked row-wise, so `wx` is 4n x d and `wh` is
/// 4n x n; block g (see Gate) holds W_gx / W_gh. Each gate has separate input
/// and recurrent biases (`bx`, `bh`), as cuDNN-style implementations do.
struct LstmLayerParams {
    Matrix wx;
    Matrix wh;
    Vector bx;
    Vector bh;

    LstmLayerParams() = default;
    LstmLayerParams(std::size_t input_dim, std::size_t units)
        : wx(Matrix::Zero(4 * units, input_dim)), wh(Matrix::Zero(4 * units, units)),
          bx(Vector::Zero(4 * units)), bh(Vector::Zero(4 * units)) {}

    [[nodiscard]] Eigen::Index units() const noexcept { return wh.cols(); }
    [[nodiscard]] Eigen::Index input_dim() const noexcept { return wx.cols(); }

    [[nodiscard]] auto input_weights(Gate g) { return wx.middleRows(static_cast<int>(g) * units(), units()); }
    [[nodiscard]] auto input_weights(Gate g) const { return wx.middleRows(static_cast<int>(g) * units(), units()); }
    [[nodiscard]] auto recurrent_weights(Gate g) { return wh.middleRows(static_cast<int>(g) * units(), units()); }
    [[nodiscard]] auto recurrent_weights(Gate g) const {
        return wh.middleRows(static_cast<int>(g) * units(), units());
    }
    [[nodiscard]] auto input_bias(Gate g) { return bx.segment(static_cast<int>(g) * units(), units()); }
    [[nodiscard]] auto recurrent_bias(Gate g) { return bh.segment(static_cast<int>(g) * units(), units()); }

    void validate() const {
        const auto n = units();
        if (n <= 0 || wx.rows() != 4 * n || wh.rows() != 4 * n || bx.size() != 4 * n || bh.size() != 4 * n) {
            throw std::invalid_argument("inconsistent LSTM layer dimensions");
        }
    }
};

struct DenseParams {
    Matrix w; // out x in
    Vector b; // out

    DenseParams() = default;
    DenseParams(std::size_t in, std::size_t out) : w(Matrix::Zero(out, in)), b(Vector::Zero(out)) {}
};

enum class HeadKind {
    linear,  // identity activation; one real output per forecast step
    softmax, // probabilities over the alphabet
};

/// Stacked LSTM layers plus an output head.
struct LstmStackParams {
    std::vector<LstmLayerParams> layers;
    DenseParams head;
    HeadKind head_kind = HeadKind::linear;

    [[nodiscard]] std::size_t input_dim() const { return static_cast<std::size_t>(layers.front().input_dim()); }
    [[nodiscard]] std::size_t output_dim() const { return static_cast<std::size_t>(head.b.size()); }

    void validate() const {
        if (layers.empty()) throw std::invalid_argument("network needs at least one LSTM layer");
        for (std::size_t j = 0; j < layers.size(); ++j) {
            layers[j].validate();
            if (j > 0 && layers[j].input_dim() != layers[j - 1].units()) {
                throw std::invalid_argument("layer " + std::to_string(j) + " input does not match previous layer");
            }
        }
        if (head.w.cols() != layers.back().units() || head.w.rows() != head.b.size() || head.b.size() == 0) {
            throw std::invalid_argument("head dimensions do not match top layer");
        }
    }
};

/// Shape of a network: input dimension, cells per layer, head.
struct StackShape {
    std::size_t input_dim = 1;
    std::vector<std::size_t> units{50, 50};
    HeadKind head_kind = HeadKind::linear;
    std::size_t outputs = 1;
};

[[nodiscard]] inline LstmStackParams zeros(const StackShape& shape) {
    if (shape.input_dim == 0 || shape.units.empty() || shape.outputs == 0) {
        throw std::invalid_argument("network dimensions must be positive");
    }
    LstmStackParams p;
    std::size_t in = shape.input_dim;
    for (std::size_t n : shape.units) {
        if (n == 0) throw std::invalid_argument("network dimensions must be positive");
        p.layers.emplace_back(in, n);
        in = n;
    }
    p.head = DenseParams(in, shape.outputs);
    p.head_kind = shape.head_kind;
    return p;
}

[[nodiscard]] inline StackShape shape_of(const LstmStackParams& p) {
    StackShape s;
    s.input_dim = p.input_dim();
    s.units.clear();
    for (const auto& l : p.layers) s.units.push_back(static_cast<std::size_t>(l.units()));
    s.head_kind = p.head_kind;
    s.outputs = p.output_dim();
    return s;
}

[[nodiscard]] inline LstmStackParams zeros_like(const LstmStackParams& p) { return zeros(shape_of(p)); }

/// A named, contiguous view of one parameter array.
template <class T>
struct TensorView {
    std::string name;
    Eigen::Index rows;
    Eigen::Index cols;
    std::span<T> data;
};

template <class Params>
auto tensors(Params& p) {
    using T = std::conditional_t<std::is_const_v<Params>, const double, double>;
    std::vector<TensorView<T>> out;
    auto add = [&](std::string name, auto& m) {
        out.push_back({std::move(name), m.rows(), m.cols(), std::span<T>(m.data(), static_cast<std::size_t>(m.size()))});
    };
    for (std::size_t j = 0; j < p.layers.size(); ++j) {
        const std::string prefix = "lstm" + std::to_string(j) + ".";
        add(prefix + "W_x", p.layers[j].wx);
        add(prefix + "W_h", p.layers[j].wh);
        add(prefix + "b_x", p.layers[j].bx);
        add(prefix + "b_h", p.layers[j].bh);
    }
    add("head.W", p.head.w);
    add("head.b", p.head.b);
    return out;
}

/// Total number of scalar parameters, counting both bias vectors per gate.
[[nodiscard]] inline std::size_t parameter_count(const LstmStackParams& p) {
    std::size_t total = 0;
    for (const auto& t : tensors(p)) total += t.data.size();
    return total;
}

/// Closed form of parameter_count for a shape.
[[nodiscard]] inline std::size_t parameter_count(const StackShape& s) {
    std::size_t total = 0;
    std::size_t in = s.input_dim;
    for (std::size_t n : s.units) {
        total += 4 * ((in + n) * n + 2 * n);
        in = n;
    }
    return total + in * s.outputs + s.outputs;
}

} // namespace abbalstm::neural
