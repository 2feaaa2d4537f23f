#pragma once

#include "abbalstm/neural/params.hpp"

#include <cmath>
#include <cstdint>
#include <random>

namespace abbalstm::neural {

/// Glorot/Xavier uniform bound sqrt(6 / (fan_in + fan_out)).
[[nodiscard]] inline double xavier_bound(std::size_t fan_in, std::size_t fan_out) {
    return std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
}

template <class Rng>
void xavier_uniform(Matrix& m, std::size_t fan_in, std::size_t fan_out, Rng& rng) {
    const double a = xavier_bound(fan_in, fan_out);
    std::uniform_real_distribution<double> dist(-a, a);
    for (Eigen::Index q = 0; q < m.size(); ++q) m.data()[q] = dist(rng);
}

/// Random orthogonal n x n matrix: Q of a Gaussian matrix's QR factorisation,
/// sign-corrected so the distribution is uniform.
template <class Rng>
Matrix random_orthogonal(Eigen::Index n, Rng& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Matrix a(n, n);
    for (Eigen::Index q = 0; q < a.size(); ++q) a.data()[q] = gauss(rng);
    Eigen::HouseholderQR<Matrix> qr(a);
    Matrix q = qr.householderQ();
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index c = 0; c < n; ++c) {
        if (r(c, c) < 0.0) q.col(c) *= -1.0;
    }
    return q;
}

/// Keras-style initialisation: orthogonal recurrent matrices (one per gate),
/// Xavier-uniform input and head weights, zero biases. The stacked input
/// kernel uses fan_in = d and fan_out = 4n.
[[nodiscard]] inline LstmStackParams init_params(const StackShape& shape, std::uint64_t seed) {
    auto p = zeros(shape);
    std::mt19937_64 rng(seed);
    for (auto& layer : p.layers) {
        const auto n = static_cast<std::size_t>(layer.units());
        const auto d = static_cast<std::size_t>(layer.input_dim());
        xavier_uniform(layer.wx, d, 4 * n, rng);
        for (int g = 0; g < 4; ++g) {
            layer.recurrent_weights(static_cast<Gate>(g)) = random_orthogonal(layer.units(), rng);
        }
    }
    xavier_uniform(p.head.w, static_cast<std::size_t>(p.head.w.cols()), static_cast<std::size_t>(p.head.w.rows()), rng);
    return p;
}

} // namespace abbalstm::neural
