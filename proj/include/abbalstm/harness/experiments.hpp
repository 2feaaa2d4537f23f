#pragma once

#include "abbalstm/forecasting.hpp"
#include "abbalstm/harness/config.hpp"
#include "abbalstm/harness/data_io.hpp"
#include "abbalstm/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

namespace abbalstm::harness {

/// One (series, model, mode, seed) run.
struct RunRecord {
    std::string experiment;
    std::string series;
    std::string model; // "raw" or "abba"
    std::string mode;  // training mode
    std::string forecast_mode = "iterated";
    std::uint64_t seed = 0;
    double param = std::numeric_limits<double>::quiet_NaN(); // sine frequency
    std::size_t k = 0;
    metrics::SimilarityReport report{};
    bool has_truth = false;
    forecasting::StageSeconds seconds;
    std::vector<double> history; // training series, original scale
    std::vector<double> forecast;
    std::vector<double> truth;
    std::vector<double> loss_history;
    std::size_t epochs = 0;
    std::size_t best_epoch = 0;
    std::size_t symbols = 0;  // ABBA string length
    std::size_t alphabet = 0; // ABBA alphabet size
    double score = std::numeric_limits<double>::quiet_NaN(); // experiment-specific, see results header
    std::string error;
};

using Progress = std::function<void(const RunRecord&)>;

/// t_i = sin(2 pi i n / N) for i = first .. first + count - 1.
[[nodiscard]] inline std::vector<double> sine_values(std::size_t n, std::size_t N, std::size_t first, std::size_t count) {
    std::vector<double> v(count);
    for (std::size_t j = 0; j < count; ++j) {
        v[j] = std::sin(2.0 * std::numbers::pi * static_cast<double>((first + j) * n) / static_cast<double>(N));
    }
    return v;
}

/// Ramp from 0 to 0.5 over N samples, continued for `extra` more samples.
[[nodiscard]] inline std::vector<double> ramp_values(std::size_t N, std::size_t extra) {
    std::vector<double> v(N + extra);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = 0.5 * static_cast<double>(i) / static_cast<double>(N - 1);
    return v;
}

struct Band {
    double lo;
    double hi;
};

inline constexpr Band kLowBand{340.0, 370.0};
inline constexpr Band kHighBand{2450.0, 2550.0};

/// Stand-in for the HouseTwenty subsequence: alternating plateaus, uniform
/// noise inside the low band for 40-120 samples, then inside the high band for
/// 15-40 samples.
[[nodiscard]] inline std::vector<double> two_level_series(std::size_t length, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> low_len(40, 120), high_len(15, 40);
    std::vector<double> v;
    bool high = false;
    while (v.size() < length) {
        const Band b = high ? kHighBand : kLowBand;
        std::uniform_real_distribution<double> level(b.lo, b.hi);
        const std::size_t len = high ? high_len(rng) : low_len(rng);
        for (std::size_t j = 0; j < len && v.size() < length; ++j) v.push_back(level(rng));
        high = !high;
    }
    return v;
}

/// Fraction of values inside either band after widening each to
/// [0.9 lo, 1.1 hi].
[[nodiscard]] inline double band_fraction(std::span<const double> values) {
    if (values.empty()) return 0.0;
    std::size_t in = 0;
    for (double x : values) {
        for (const Band& b : {kLowBand, kHighBand}) {
            if (x >= 0.9 * b.lo && x <= 1.1 * b.hi) {
                ++in;
                break;
            }
        }
    }
    return static_cast<double>(in) / static_cast<double>(values.size());
}

/// Trains one model on `train` and forecasts cfg.k values, scored against
/// `truth` when it is non-empty. Failures are stored in RunRecord::error.
[[nodiscard]] inline RunRecord run_one(const ExperimentConfig& cfg, std::string series_name,
                                       const std::vector<double>& train, const std::vector<double>& truth,
                                       ModelKind model, forecasting::TrainMode mode, std::uint64_t seed) {
    RunRecord r;
    r.experiment = to_string(cfg.kind);
    r.series = std::move(series_name);
    r.model = model == ModelKind::raw ? "raw" : "abba";
    r.mode = to_string(mode);
    r.seed = seed;
    r.k = cfg.k;
    r.history = train;
    r.truth = truth;
    try {
        forecasting::PipelineRun run;
        if (model == ModelKind::raw) {
            r.forecast_mode = to_string(cfg.raw_forecast);
            run = forecasting::raw_pipeline(TimeSeries(train), cfg.train_config(cfg.raw_lag, mode, seed), cfg.k,
                                            cfg.raw_forecast);
        } else {
            run = forecasting::abba_pipeline(TimeSeries(train), cfg.abba_params(),
                                             cfg.train_config(cfg.abba_lag, mode, seed), cfg.k);
            r.symbols = run.representation->symbols.size();
            r.alphabet = run.representation->alphabet_size();
        }
        r.forecast = run.forecast.values;
        r.seconds = run.seconds;
        r.loss_history = run.training.front().loss_history;
        r.epochs = r.loss_history.size();
        r.best_epoch = run.training.front().best_epoch;
        if (!truth.empty()) {
            r.report = metrics::report(r.forecast, truth);
            r.has_truth = true;
        }
    } catch (const std::exception& e) {
        r.error = e.what();
    }
    return r;
}

namespace detail {

inline std::vector<ModelKind> models_of(const ExperimentConfig& cfg) {
    std::vector<ModelKind> m;
    if (cfg.runs_raw()) m.push_back(ModelKind::raw);
    if (cfg.runs_abba()) m.push_back(ModelKind::abba);
    return m;
}

inline void emit(std::vector<RunRecord>& out, RunRecord r, const Progress& progress) {
    if (progress) progress(r);
    out.push_back(std::move(r));
}

} // namespace detail

/// Sine waves of frequency n sampled at N points; DTW against the true continuation.
inline std::vector<RunRecord> sine_sweep(const ExperimentConfig& cfg, const Progress& progress = {}) {
    cfg.validate();
    std::vector<RunRecord> out;
    for (std::size_t n : thin(cfg.frequencies, cfg.scale)) {
        const auto train = sine_values(n, cfg.length, 1, cfg.length);
        const auto truth = sine_values(n, cfg.length, cfg.length + 1, cfg.k);
        for (std::uint64_t seed : thin(cfg.seeds, cfg.scale)) {
            for (ModelKind model : detail::models_of(cfg)) {
                for (auto mode : cfg.modes) {
                    auto r = run_one(cfg, "sine_n" + std::to_string(n), train, truth, model, mode, seed);
                    r.param = static_cast<double>(n);
                    detail::emit(out, std::move(r), progress);
                }
            }
        }
    }
    return out;
}

/// Linear ramp in [0, 0.5]; score is the last forecast value (the true
/// continuation ends at about 1.0).
inline std::vector<RunRecord> trend_experiment(const ExperimentConfig& cfg, const Progress& progress = {}) {
    cfg.validate();
    const auto all = ramp_values(cfg.length, cfg.k);
    const std::vector<double> train(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(cfg.length));
    const std::vector<double> truth(all.begin() + static_cast<std::ptrdiff_t>(cfg.length), all.end());
    std::vector<RunRecord> out;
    for (std::uint64_t seed : thin(cfg.seeds, cfg.scale)) {
        for (ModelKind model : detail::models_of(cfg)) {
            for (auto mode : cfg.modes) {
                auto r = run_one(cfg, "ramp", train, truth, model, mode, seed);
                if (r.error.empty()) r.score = r.forecast.back();
                detail::emit(out, std::move(r), progress);
            }
        }
    }
    return out;
}

/// Loads a single series: the first row of a UCR file (.tsv/.txt) or a CSV column.
[[nodiscard]] inline LabeledSeries load_series(const std::string& path) {
    const auto ext = std::filesystem::path(path).extension().string();
    if (ext == ".tsv" || ext == ".txt") return load_ucr(path).front();
    return {std::filesystem::path(path).stem().string(), load_csv(path)};
}

/// Two-level series (the bundled surrogate unless cfg.data names a file);
/// score is the fraction of forecast values inside the widened bands.
inline std::vector<RunRecord> shape_experiment(const ExperimentConfig& cfg, const Progress& progress = {}) {
    cfg.validate();
    std::vector<double> all;
    std::string name = "two_level";
    if (cfg.data.empty()) {
        all = two_level_series(cfg.length + cfg.k, 20);
    } else {
        auto s = load_series(cfg.data);
        name = std::filesystem::path(cfg.data).stem().string();
        all = s.series.values();
        if (all.size() <= cfg.k) throw std::invalid_argument(cfg.data + ": series shorter than the forecast length");
    }
    const auto split = all.end() - static_cast<std::ptrdiff_t>(cfg.k);
    const std::vector<double> train(all.begin(), split), truth(split, all.end());
    std::vector<RunRecord> out;
    for (std::uint64_t seed : thin(cfg.seeds, cfg.scale)) {
        for (ModelKind model : detail::models_of(cfg)) {
            for (auto mode : cfg.modes) {
                auto r = run_one(cfg, name, train, truth, model, mode, seed);
                if (r.error.empty()) r.score = band_fraction(r.forecast);
                detail::emit(out, std::move(r), progress);
            }
        }
    }
    return out;
}

/// UCR files under `root` (recursively), test splits skipped, sorted by path.
[[nodiscard]] inline std::vector<std::filesystem::path> ucr_files(const std::string& root) {
    namespace fs = std::filesystem;
    if (!fs::exists(root)) throw std::runtime_error("no such file or directory: " + root);
    std::vector<fs::path> files;
    if (fs::is_regular_file(root)) return {fs::path(root)};
    for (const auto& e : fs::recursive_directory_iterator(root)) {
        if (!e.is_regular_file()) continue;
        const auto name = e.path().filename().string();
        const auto ext = e.path().extension().string();
        if ((ext == ".tsv" || ext == ".txt") && name.find("_TEST") == std::string::npos) files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    return files;
}

struct BenchCandidate {
    std::string name;
    std::vector<double> train; // z-normalised
    std::vector<double> truth;
    bool admitted = false;
    std::string reason;
};

/// The first series of a file, z-normalised and split into training part and
/// the last k values. Admitted when the training part has at least 100 values
/// and its ABBA string at least 20 symbols (and both exceed the lags).
[[nodiscard]] inline BenchCandidate bench_candidate(const ExperimentConfig& cfg, const std::string& name,
                                                    const TimeSeries& series) {
    BenchCandidate c;
    c.name = name;
    const auto normed = znormalize(series).first;
    if (normed.size() <= cfg.k) {
        c.reason = "shorter than the forecast length";
        return c;
    }
    const auto split = normed.values().end() - static_cast<std::ptrdiff_t>(cfg.k);
    c.train.assign(normed.values().begin(), split);
    c.truth.assign(split, normed.values().end());
    const std::size_t min_train = std::max<std::size_t>(100, cfg.raw_lag + 1);
    if (c.train.size() < min_train) {
        c.reason = "training length " + std::to_string(c.train.size()) + " < " + std::to_string(min_train);
        return c;
    }
    const auto p = cfg.abba_params();
    const auto train_normed = znormalize(TimeSeries(c.train)).first;
    const auto m = compress(train_normed, p.tol, p.max_len).pieces.size();
    const std::size_t min_symbols = std::max<std::size_t>(20, cfg.abba_lag + 1);
    if (m < min_symbols) {
        c.reason = "string length " + std::to_string(m) + " < " + std::to_string(min_symbols);
        return c;
    }
    c.admitted = true;
    return c;
}

/// First series of every UCR file, both models, cfg.k-step forecasts.
inline std::vector<RunRecord> batch_benchmark(const ExperimentConfig& cfg, const Progress& progress = {},
                                              std::vector<BenchCandidate>* screened = nullptr) {
    cfg.validate();
    if (cfg.data.empty()) throw std::invalid_argument("bench needs --data pointing at UCR files");
    std::vector<BenchCandidate> admitted;
    for (const auto& file : ucr_files(cfg.data)) {
        auto c = bench_candidate(cfg, file.stem().string(), load_ucr(file.string()).front().series);
        if (screened) screened->push_back(c);
        if (c.admitted) admitted.push_back(std::move(c));
    }
    admitted = thin(admitted, cfg.scale);
    if (cfg.max_series > 0 && admitted.size() > cfg.max_series) admitted.resize(cfg.max_series);
    std::vector<RunRecord> out;
    for (const auto& c : admitted) {
        for (std::uint64_t seed : cfg.seeds) {
            for (ModelKind model : detail::models_of(cfg)) {
                for (auto mode : cfg.modes) detail::emit(out, run_one(cfg, c.name, c.train, c.truth, model, mode, seed), progress);
            }
        }
    }
    return out;
}

/// Ad-hoc forecast of the series in cfg.data, past its end (no scoring).
inline std::vector<RunRecord> forecast_file(const ExperimentConfig& cfg, const Progress& progress = {}) {
    cfg.validate();
    if (cfg.data.empty()) throw std::invalid_argument("forecast needs --data pointing at a series");
    const auto s = load_series(cfg.data);
    const auto name = std::filesystem::path(cfg.data).stem().string();
    std::vector<RunRecord> out;
    for (std::uint64_t seed : cfg.seeds) {
        for (ModelKind model : detail::models_of(cfg)) {
            for (auto mode : cfg.modes) detail::emit(out, run_one(cfg, name, s.series.values(), {}, model, mode, seed), progress);
        }
    }
    return out;
}

inline std::vector<RunRecord> run_experiment(const ExperimentConfig& cfg, const Progress& progress = {}) {
    switch (cfg.kind) {
    case ExperimentKind::sine: return sine_sweep(cfg, progress);
    case ExperimentKind::trend: return trend_experiment(cfg, progress);
    case ExperimentKind::shape: return shape_experiment(cfg, progress);
    case ExperimentKind::bench: return batch_benchmark(cfg, progress);
    case ExperimentKind::forecast: return forecast_file(cfg, progress);
    }
    return {};
}

} // namespace abbalstm::harness
