#pragma once

#include "abbalstm/forecasting/train.hpp"
#include "abbalstm/forecasting/windows.hpp"
#include "abbalstm/neural.hpp"

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace abbalstm::forecasting {

enum class ForecastMode { iterated, direct, multi };

/// A trained network together with how it was trained.
struct TrainedModel {
    neural::LstmStackParams params;
    std::size_t lag = 1;
    TrainMode mode = TrainMode::stateful;
};

namespace detail {

inline void check_history(const TrainedModel& model, const Sequence& history) {
    if (history.size() < model.lag) throw std::invalid_argument("history shorter than the lag");
}

// Network output for the window ending at the last history element, plus the
// states after it. Stateful models first replay the history preceding that
// window; stateless models start the window from zero states.
inline neural::WindowResult evaluate_last_window(const TrainedModel& model, const Sequence& history) {
    auto states = neural::StackState::zero(model.params);
    const std::size_t start = history.size() - model.lag;
    if (model.mode == TrainMode::stateful) {
        for (std::size_t i = 0; i < start; ++i) neural::stack_forward(model.params, states, history[i]);
    }
    return neural::window_forward(model.params, states,
                                  std::span<const Vector>(history).subspan(start, model.lag));
}

} // namespace detail

/// Maps a network output to the next input element (identity for raw values,
/// one-hot argmax for symbols).
using Feedback = std::function<Vector(const Vector&)>;

[[nodiscard]] inline Vector identity_feedback(const Vector& out) { return out; }

[[nodiscard]] inline Vector argmax_feedback(const Vector& probs) {
    Eigen::Index idx = 0;
    probs.maxCoeff(&idx);
    return one_hot(static_cast<std::size_t>(idx), static_cast<std::size_t>(probs.size()));
}

/// Iterated one-step forecasting: each prediction is appended to the window
/// for the next one. Stateful models keep their states running forward from
/// the replayed history; stateless models restart each window from zero.
/// `until` (optional) stops early once it returns true for the elements so far.
[[nodiscard]] inline Sequence iterated_forecast(const TrainedModel& model, const Sequence& history, std::size_t steps,
                                                const Feedback& feedback = identity_feedback,
                                                const std::function<bool(const Sequence&)>& until = {}) {
    if (steps < 1) throw std::invalid_argument("forecast length must be at least 1");
    detail::check_history(model, history);
    Sequence out;
    out.reserve(steps);
    auto first = detail::evaluate_last_window(model, history);
    out.push_back(feedback(first.output));
    if (model.mode == TrainMode::stateful) {
        auto states = std::move(first.final_states);
        while (out.size() < steps && !(until && until(out))) {
            out.push_back(feedback(neural::stack_forward(model.params, states, out.back())));
        }
    } else {
        Sequence window(history.end() - static_cast<std::ptrdiff_t>(model.lag), history.end());
        while (out.size() < steps && !(until && until(out))) {
            window.erase(window.begin());
            window.push_back(out.back());
            const auto res = neural::window_forward(model.params, neural::StackState::zero(model.params),
                                                    std::span<const Vector>(window));
            out.push_back(feedback(res.output));
        }
    }
    return out;
}

/// Many-to-many forecast from a model whose head emits all k values at once.
[[nodiscard]] inline std::vector<double> direct_forecast(const TrainedModel& model, const Sequence& history,
                                                         std::size_t k) {
    if (model.params.output_dim() != k) throw std::invalid_argument("direct forecast length does not match model head");
    detail::check_history(model, history);
    const auto res = detail::evaluate_last_window(model, history);
    return {res.output.data(), res.output.data() + res.output.size()};
}

/// Model j predicts the value j steps ahead.
[[nodiscard]] inline std::vector<double> multi_forecast(std::span<const TrainedModel> models, const Sequence& history) {
    if (models.empty()) throw std::invalid_argument("multi forecast needs at least one model");
    std::vector<double> out;
    for (const auto& m : models) {
        if (m.params.output_dim() != 1) throw std::invalid_argument("multi forecast models must be one-step models");
        detail::check_history(m, history);
        out.push_back(detail::evaluate_last_window(m, history).output[0]);
    }
    return out;
}

} // namespace abbalstm::forecasting
