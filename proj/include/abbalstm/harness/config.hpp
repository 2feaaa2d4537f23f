#pragma once

// Experiment configuration. Every field is a command-line option; the same
// names work as keys in a TOML/INI config file passed with --config, e.g.
//
//   model = "abba"
//   seed = [0, 1, 2]
//   frequencies = [5, 20, 40]
//   patience = 50
//
// Flags given on the command line override the file.

#include "abbalstm/abba.hpp"
#include "abbalstm/forecasting.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace abbalstm::harness {

enum class ExperimentKind { sine, trend, shape, bench, forecast };
enum class ModelKind { raw, abba, both };

[[nodiscard]] inline std::string to_string(ExperimentKind k) {
    switch (k) {
    case ExperimentKind::sine: return "sine";
    case ExperimentKind::trend: return "trend";
    case ExperimentKind::shape: return "shape";
    case ExperimentKind::bench: return "bench";
    case ExperimentKind::forecast: return "forecast";
    }
    return "?";
}

[[nodiscard]] inline std::string to_string(forecasting::TrainMode m) {
    return m == forecasting::TrainMode::stateful ? "stateful" : "stateless";
}

[[nodiscard]] inline std::string to_string(forecasting::ForecastMode m) {
    switch (m) {
    case forecasting::ForecastMode::iterated: return "iterated";
    case forecasting::ForecastMode::direct: return "direct";
    case forecasting::ForecastMode::multi: return "multi";
    }
    return "?";
}

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::forecast;
    ModelKind model = ModelKind::both;
    std::vector<forecasting::TrainMode> modes{forecasting::TrainMode::stateful};
    forecasting::ForecastMode raw_forecast = forecasting::ForecastMode::iterated;

    std::size_t raw_lag = 10;
    std::size_t abba_lag = 10;
    std::size_t cells = 50;
    std::size_t layers = 2;
    std::size_t patience = 50;
    std::size_t max_epochs = 10000;
    double dropout = 0.0;
    double learning_rate = 0.001;

    double tol = 0.1;
    std::size_t max_k = 10;
    double scaling = 0.0;
    std::size_t max_len = 0; // 0: unbounded

    std::size_t k = 50;
    std::vector<std::uint64_t> seeds{0};
    std::string data;                    // UCR directory/file or CSV, depending on the experiment
    std::vector<std::size_t> frequencies; // sine only
    std::size_t length = 0;              // synthetic series length
    std::size_t max_series = 0;          // bench only; 0: all
    double scale = 1.0;

    [[nodiscard]] forecasting::TrainConfig train_config(std::size_t lag, forecasting::TrainMode mode,
                                                        std::uint64_t seed) const {
        forecasting::TrainConfig t;
        t.lag = lag;
        t.cells = cells;
        t.layers = layers;
        t.patience = patience;
        t.mode = mode;
        t.dropout = dropout;
        t.seed = seed;
        t.max_epochs = max_epochs;
        t.learning_rate = learning_rate;
        return t;
    }

    [[nodiscard]] AbbaParams abba_params() const {
        AbbaParams p;
        p.tol = tol;
        p.max_k = max_k;
        p.scaling = scaling;
        p.max_len = max_len == 0 ? std::numeric_limits<std::size_t>::max() : max_len;
        return p;
    }

    [[nodiscard]] bool runs_raw() const { return model != ModelKind::abba; }
    [[nodiscard]] bool runs_abba() const { return model != ModelKind::raw; }

    void validate() const {
        if (seeds.empty()) throw std::invalid_argument("at least one seed is required");
        if (k < 1) throw std::invalid_argument("forecast length k must be at least 1");
        if (modes.empty()) throw std::invalid_argument("at least one training mode is required");
        if (!(scale > 0.0 && scale <= 1.0)) throw std::invalid_argument("scale must be in (0, 1]");
        train_config(raw_lag, modes.front(), 0).validate();
        train_config(abba_lag, modes.front(), 0).validate();
        if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
        if (max_k < 1 || max_k > kMaxAlphabet) throw std::invalid_argument("max_k must be in [1, 26]");
    }
};

namespace detail {

inline std::vector<std::uint64_t> iota_seeds(std::uint64_t n) {
    std::vector<std::uint64_t> s(n);
    std::iota(s.begin(), s.end(), std::uint64_t{0});
    return s;
}

} // namespace detail

/// Settings of each experiment as described for the original study.
[[nodiscard]] inline ExperimentConfig defaults(ExperimentKind kind) {
    using forecasting::TrainMode;
    ExperimentConfig c;
    c.kind = kind;
    switch (kind) {
    case ExperimentKind::sine:
        c.raw_lag = 50;
        c.abba_lag = 5;
        c.patience = 50;
        c.k = 200;
        c.modes = {TrainMode::stateful, TrainMode::stateless};
        c.seeds = detail::iota_seeds(5);
        c.frequencies.resize(100);
        std::iota(c.frequencies.begin(), c.frequencies.end(), std::size_t{1});
        c.length = 1000;
        break;
    case ExperimentKind::trend:
        c.raw_lag = 20;
        c.abba_lag = 20;
        c.patience = 10;
        c.k = 200;
        c.seeds = detail::iota_seeds(10);
        c.length = 200;
        c.max_len = 5; // a noise-free ramp is otherwise a single piece
        break;
    case ExperimentKind::shape:
        c.raw_lag = 50;
        c.abba_lag = 5;
        c.patience = 10;
        c.k = 200;
        c.length = 1000;
        break;
    case ExperimentKind::bench:
        c.raw_lag = 10;
        c.abba_lag = 10;
        c.patience = 100;
        c.dropout = 0.5;
        c.tol = 0.05;
        c.k = 50;
        break;
    case ExperimentKind::forecast:
        break;
    }
    return c;
}

/// Keeps ceil(scale * n) of the n items, spread evenly, first and last included.
template <class T>
[[nodiscard]] std::vector<T> thin(const std::vector<T>& items, double scale) {
    if (items.empty() || scale >= 1.0) return items;
    const auto keep = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(scale * static_cast<double>(items.size()))));
    if (keep == 1) return {items.front()};
    std::vector<T> out;
    for (std::size_t j = 0; j < keep; ++j) {
        const double pos = static_cast<double>(j) * static_cast<double>(items.size() - 1) / static_cast<double>(keep - 1);
        out.push_back(items[static_cast<std::size_t>(std::lround(pos))]);
    }
    return out;
}

/// Binds every config field to an option of `app` (values already in `cfg`
/// act as defaults) and makes --config read a TOML/INI file.
inline void add_options(CLI::App& app, ExperimentConfig& cfg) {
    using forecasting::ForecastMode;
    using forecasting::TrainMode;
    static const std::map<std::string, ModelKind> models{
        {"raw", ModelKind::raw}, {"abba", ModelKind::abba}, {"both", ModelKind::both}};
    static const std::map<std::string, ForecastMode> fmodes{
        {"iterated", ForecastMode::iterated}, {"direct", ForecastMode::direct}, {"multi", ForecastMode::multi}};

    app.set_config("--config", "", "TOML/INI file with option values");
    app.add_option("--model", cfg.model, "raw, abba or both")->transform(CLI::CheckedTransformer(models, CLI::ignore_case));
    app.add_option_function<std::string>(
           "--mode",
           [&cfg](const std::string& m) {
               if (m == "stateful") cfg.modes = {TrainMode::stateful};
               else if (m == "stateless") cfg.modes = {TrainMode::stateless};
               else cfg.modes = {TrainMode::stateful, TrainMode::stateless};
           },
           "stateful, stateless or both")
        ->check(CLI::IsMember({"stateful", "stateless", "both"}));
    app.add_option("--forecast-mode", cfg.raw_forecast, "raw model: iterated, direct or multi")
        ->transform(CLI::CheckedTransformer(fmodes, CLI::ignore_case));
    app.add_option("--seed", cfg.seeds, "one or more seeds")->expected(1, -1);
    app.add_option("--raw-lag", cfg.raw_lag);
    app.add_option("--abba-lag", cfg.abba_lag);
    app.add_option("--cells", cfg.cells);
    app.add_option("--layers", cfg.layers);
    app.add_option("--patience", cfg.patience);
    app.add_option("--max-epochs", cfg.max_epochs);
    app.add_option("--dropout", cfg.dropout);
    app.add_option("--learning-rate", cfg.learning_rate);
    app.add_option("--tol", cfg.tol);
    app.add_option("--max-k", cfg.max_k);
    app.add_option("--scaling", cfg.scaling);
    app.add_option("--max-len", cfg.max_len, "longest allowed piece (0: unbounded)");
    app.add_option("--k", cfg.k, "forecast length");
    app.add_option("--data", cfg.data, "input file or directory");
    app.add_option("--frequencies", cfg.frequencies)->expected(1, -1);
    app.add_option("--length", cfg.length, "synthetic series length");
    app.add_option("--max-series", cfg.max_series, "bench: at most this many series (0: all)");
    app.add_option("--scale", cfg.scale, "shrink grids (frequencies, seeds, series) to this fraction");
}

} // namespace abbalstm::harness
