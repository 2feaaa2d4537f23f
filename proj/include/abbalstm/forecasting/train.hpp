#pragma once

#include "abbalstm/forecasting/windows.hpp"
#include "abbalstm/neural.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

namespace abbalstm::forecasting {

enum class TrainMode { stateful, stateless };

struct TrainConfig {
    std::size_t lag = 5;
    std::size_t cells = 50;
    std::size_t layers = 2;
    std::size_t patience = 50;
    TrainMode mode = TrainMode::stateful;
    double dropout = 0.0;
    std::uint64_t seed = 0;
    std::size_t max_epochs = 10000;
    double learning_rate = 0.001;

    void validate() const {
        if (lag == 0 || cells == 0 || layers == 0 || patience == 0 || max_epochs == 0) {
            throw std::invalid_argument("lag, cells, layers, patience and max_epochs must be positive");
        }
        if (dropout < 0.0 || dropout >= 1.0) throw std::invalid_argument("dropout must be in [0, 1)");
    }
};

struct TrainResult {
    neural::LstmStackParams params; // weights from the best epoch
    std::vector<double> loss_history;
    std::size_t best_epoch = 0;     // 1-based
};

/// Network shape used throughout: `layers` layers of `cells` cells.
[[nodiscard]] inline neural::StackShape network_shape(const TrainConfig& cfg, std::size_t input_dim,
                                                      neural::HeadKind head, std::size_t outputs) {
    return {input_dim, std::vector<std::size_t>(cfg.layers, cfg.cells), head, outputs};
}

/// Separate stream for shuffling and dropout so that initial weights depend on
/// the seed alone.
[[nodiscard]] inline std::mt19937_64 training_rng(std::uint64_t seed) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), 0x7261u};
    return std::mt19937_64(seq);
}

namespace detail {

inline std::size_t target_class(const Vector& target) {
    Eigen::Index idx = 0;
    target.maxCoeff(&idx);
    return static_cast<std::size_t>(idx);
}

} // namespace detail

/// Trains with batch size 1 and Adam, one update per pair.
///
/// Stateless: each epoch visits the pairs in a freshly shuffled order, every
/// window starting from zero states. Stateful: each epoch visits the groups of
/// group_stateful() in shuffled order; states are zeroed at the start of a
/// group and each window's final states seed the next window of the group.
/// Training stops once the epoch loss has not decreased for `patience`
/// epochs (or at max_epochs) and the best epoch's weights are returned.
[[nodiscard]] inline TrainResult train(const std::vector<TrainingPair>& pairs, const neural::StackShape& shape,
                                       const TrainConfig& cfg,
                                       std::optional<neural::LstmStackParams> initial = std::nullopt) {
    cfg.validate();
    if (pairs.empty()) throw std::invalid_argument("insufficient data: no training pairs");
    for (const auto& p : pairs) {
        if (p.input.size() != cfg.lag) throw std::invalid_argument("training pair length does not match lag");
    }

    auto params = initial ? std::move(*initial) : neural::init_params(shape, cfg.seed);
    params.validate();
    if (static_cast<Eigen::Index>(params.input_dim()) != pairs.front().input.front().size() ||
        static_cast<Eigen::Index>(params.output_dim()) != pairs.front().target.size()) {
        throw std::invalid_argument("network shape does not match training data");
    }

    const bool softmax = params.head_kind == neural::HeadKind::softmax;
    auto rng = training_rng(cfg.seed);
    neural::AdamState adam(params);
    const neural::AdamConfig adam_cfg{cfg.learning_rate};
    auto grads = neural::zeros_like(params);
    neural::WindowCache cache;
    neural::BackwardWorkspace ws;
    const auto zero_state = neural::StackState::zero(params);

    auto fit_pair = [&](const TrainingPair& pair, const neural::StackState& init) {
        auto res = neural::window_forward(params, init, std::span<const Vector>(pair.input), cfg.dropout, rng, cache);
        const auto lg = softmax ? neural::xent_with_grad(res.output, detail::target_class(pair.target))
                                : neural::mse_with_grad(res.output, pair.target);
        for (auto& t : neural::tensors(grads)) std::fill(t.data.begin(), t.data.end(), 0.0);
        neural::backward_window(params, cache, lg.grad, grads, ws);
        neural::adam_step(params, grads, adam, adam_cfg);
        return std::pair{lg.loss, std::move(res.final_states)};
    };

    std::vector<std::size_t> order(pairs.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    auto groups = group_stateful(pairs, cfg.lag).groups;

    TrainResult result;
    result.params = params;
    double best = std::numeric_limits<double>::infinity();
    std::size_t since_best = 0;
    for (std::size_t epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
        double total = 0.0;
        if (cfg.mode == TrainMode::stateless) {
            std::shuffle(order.begin(), order.end(), rng);
            for (std::size_t idx : order) total += fit_pair(pairs[idx], zero_state).first;
        } else {
            std::shuffle(groups.begin(), groups.end(), rng);
            for (const auto& group : groups) {
                auto state = zero_state;
                for (std::size_t idx : group) {
                    auto [loss, next] = fit_pair(pairs[idx], state);
                    total += loss;
                    state = std::move(next);
                }
            }
        }
        const double loss = total / static_cast<double>(pairs.size());
        result.loss_history.push_back(loss);
        if (loss < best) {
            best = loss;
            since_best = 0;
            result.best_epoch = epoch;
            result.params = params;
        } else if (++since_best >= cfg.patience) {
            break;
        }
    }
    return result;
}

} // namespace abbalstm::forecasting
