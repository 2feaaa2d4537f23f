#pragma once

#include "abbalstm/abba.hpp"
#include "abbalstm/forecasting/forecast.hpp"
#include "abbalstm/forecasting/train.hpp"
#include "abbalstm/forecasting/windows.hpp"
#include "abbalstm/series.hpp"

#include <chrono>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace abbalstm::forecasting {

struct StageSeconds {
    double build = 0.0;
    double train = 0.0;
    double forecast = 0.0;

    [[nodiscard]] double total() const { return build + train + forecast; }
};

struct ForecastResult {
    std::vector<double> values;
    ForecastMode mode = ForecastMode::iterated;
    std::string symbols; // symbolic runs only
};

struct PipelineRun {
    ForecastResult forecast;
    std::vector<TrainResult> training; // one per trained network
    StageSeconds seconds;
    NormalizationParams normalization;
    std::optional<SymbolicRepresentation> representation;
};

namespace detail {

class Stopwatch {
public:
    double lap() {
        const auto now = std::chrono::steady_clock::now();
        const double s = std::chrono::duration<double>(now - last_).count();
        last_ = now;
        return s;
    }

private:
    std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

} // namespace detail

/// z-normalise, train on raw values (linear head, MSE), forecast k values and
/// map them back to the original scale.
[[nodiscard]] inline PipelineRun raw_pipeline(const TimeSeries& series, const TrainConfig& cfg, std::size_t k,
                                              ForecastMode mode = ForecastMode::iterated) {
    if (k < 1) throw std::invalid_argument("forecast length must be at least 1");
    detail::Stopwatch clock;
    PipelineRun run;
    const auto [normed, norm] = znormalize(series);
    run.normalization = norm;
    const auto seq = scalar_sequence(normed.view());
    run.forecast.mode = mode;

    std::vector<double> values;
    if (mode == ForecastMode::iterated) {
        const auto pairs = build_windows(seq, cfg.lag);
        run.seconds.build = clock.lap();
        run.training.push_back(train(pairs, network_shape(cfg, 1, neural::HeadKind::linear, 1), cfg));
        run.seconds.train = clock.lap();
        const TrainedModel model{run.training.back().params, cfg.lag, cfg.mode};
        for (const auto& v : iterated_forecast(model, seq, k)) values.push_back(v[0]);
    } else if (mode == ForecastMode::direct) {
        const auto pairs = build_windows(seq, cfg.lag, {k, 0});
        run.seconds.build = clock.lap();
        run.training.push_back(train(pairs, network_shape(cfg, 1, neural::HeadKind::linear, k), cfg));
        run.seconds.train = clock.lap();
        values = direct_forecast({run.training.back().params, cfg.lag, cfg.mode}, seq, k);
    } else {
        std::vector<std::vector<TrainingPair>> sets;
        for (std::size_t j = 0; j < k; ++j) sets.push_back(build_windows(seq, cfg.lag, {1, j}));
        run.seconds.build = clock.lap();
        std::vector<TrainedModel> models;
        for (const auto& pairs : sets) {
            run.training.push_back(train(pairs, network_shape(cfg, 1, neural::HeadKind::linear, 1), cfg));
            models.push_back({run.training.back().params, cfg.lag, cfg.mode});
        }
        run.seconds.train = clock.lap();
        values = multi_forecast(models, seq);
    }
    run.forecast.values = denormalize(values, norm);
    run.seconds.forecast = clock.lap();
    return run;
}

/// One-hot encoding of a symbol string over an alphabet of `alphabet` letters.
[[nodiscard]] inline Sequence encode_symbols(std::string_view symbols, std::size_t alphabet) {
    Sequence seq;
    seq.reserve(symbols.size());
    for (char s : symbols) seq.push_back(one_hot(symbol_index(s), alphabet));
    return seq;
}

[[nodiscard]] inline std::string decode_symbols(const Sequence& seq) {
    std::string out;
    for (const auto& v : seq) {
        Eigen::Index idx = 0;
        v.maxCoeff(&idx);
        out.push_back(symbol_for(static_cast<std::size_t>(idx)));
    }
    return out;
}

/// Forecasts the symbols following `history` until their patches cover at
/// least skip + k steps, stitches the patches from `start_value` and returns
/// the k values that follow the first `skip` steps.
[[nodiscard]] inline ForecastResult forecast_symbolic(const TrainedModel& model, std::string_view history,
                                                      const PatchDictionary& patches, double start_value,
                                                      std::size_t skip, std::size_t k) {
    if (k < 1) throw std::invalid_argument("forecast length must be at least 1");
    const std::size_t alphabet = patches.patches.size();
    const std::size_t needed = skip + k;
    auto covered = [&](const Sequence& out) {
        std::size_t steps = 0;
        for (char s : decode_symbols(out)) steps += patches.patches[symbol_index(s)].size() - 1;
        return steps >= needed;
    };
    const auto symbols =
        decode_symbols(iterated_forecast(model, encode_symbols(history, alphabet), needed, argmax_feedback, covered));
    const auto stitched = patched_reconstruct(symbols, start_value, patches);
    ForecastResult r;
    r.mode = ForecastMode::iterated;
    r.symbols = symbols;
    const auto first = stitched.begin() + 1 + static_cast<std::ptrdiff_t>(skip);
    r.values.assign(first, first + static_cast<std::ptrdiff_t>(k));
    return r;
}

/// z-normalise, convert to symbols, train on one-hot symbols (softmax head,
/// cross entropy), forecast symbols, rebuild values from patches, truncate to
/// k and map back to the original scale.
///
/// The last piece of the chain ends where the series happens to stop, so it
/// is usually cut short. Forecasting therefore resumes from the last complete
/// breakpoint: the final symbol is re-predicted and the steps up to the end of
/// the series are dropped from the stitched patches.
[[nodiscard]] inline PipelineRun abba_pipeline(const TimeSeries& series, const AbbaParams& abba,
                                               const TrainConfig& cfg, std::size_t k) {
    if (k < 1) throw std::invalid_argument("forecast length must be at least 1");
    detail::Stopwatch clock;
    PipelineRun run;
    const auto [normed, norm] = znormalize(series);
    run.normalization = norm;
    const auto chain = compress(normed, abba.tol, abba.max_len);
    auto rep = digitize(chain, abba.tol, abba.max_k, abba.scaling, abba.seed);
    rep.patches = build_patches(chain, normed, rep.model);
    if (rep.symbols.size() < cfg.lag + 1) throw std::invalid_argument("series too short after compression");
    const std::size_t alphabet = rep.alphabet_size();
    const auto pairs = build_windows(encode_symbols(rep.symbols, alphabet), cfg.lag);
    run.seconds.build = clock.lap();

    run.training.push_back(train(pairs, network_shape(cfg, alphabet, neural::HeadKind::softmax, alphabet), cfg));
    run.seconds.train = clock.lap();

    const TrainedModel model{run.training.back().params, cfg.lag, cfg.mode};
    const auto tail = static_cast<std::size_t>(chain.pieces.back().len);
    const std::string_view history(rep.symbols.data(), rep.symbols.size() - 1);
    run.forecast = forecast_symbolic(model, history, rep.patches, normed[normed.size() - 1 - tail], tail, k);
    run.forecast.values = denormalize(run.forecast.values, norm);
    run.seconds.forecast = clock.lap();
    run.representation = std::move(rep);
    return run;
}

} // namespace abbalstm::forecasting
