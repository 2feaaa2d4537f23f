#pragma once

#include "abbalstm/neural/params.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace abbalstm::neural {

inline constexpr double kProbabilityFloor = 1e-12;

[[nodiscard]] inline double loss_mse(double pred, double target) { return (pred - target) * (pred - target); }

/// -log(probs[target]) with probabilities clamped at kProbabilityFloor.
[[nodiscard]] inline double loss_xent(const Vector& probs, std::size_t target) {
    if (target >= static_cast<std::size_t>(probs.size())) throw std::out_of_range("target class out of range");
    return -std::log(std::max(probs[static_cast<Eigen::Index>(target)], kProbabilityFloor));
}

struct LossAndGrad {
    double loss = 0.0;
    Vector grad; // with respect to the head pre-activation
};

/// Mean squared error over the outputs of a linear head.
[[nodiscard]] inline LossAndGrad mse_with_grad(const Vector& pred, const Vector& target) {
    if (pred.size() != target.size()) throw std::invalid_argument("prediction/target size mismatch");
    const Vector diff = pred - target;
    const double m = static_cast<double>(pred.size());
    return {diff.squaredNorm() / m, 2.0 * diff / m};
}

/// Cross entropy of a softmax head; the gradient w.r.t. the logits is p - onehot.
[[nodiscard]] inline LossAndGrad xent_with_grad(const Vector& probs, std::size_t target) {
    LossAndGrad r{loss_xent(probs, target), probs};
    r.grad[static_cast<Eigen::Index>(target)] -= 1.0;
    return r;
}

} // namespace abbalstm::neural
