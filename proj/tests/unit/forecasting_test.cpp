#include "abbalstm/forecasting.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace abbalstm;
using namespace abbalstm::forecasting;
using neural::HeadKind;

namespace {

Sequence counting(std::size_t n) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = static_cast<double>(i + 1);
    return scalar_sequence(v);
}

neural::LstmStackParams random_params(const neural::StackShape& shape, std::uint64_t seed) {
    auto p = neural::zeros(shape);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-0.6, 0.6);
    for (auto& t : neural::tensors(p))
        for (auto& x : t.data) x = u(rng);
    return p;
}

TrainConfig small_config() {
    TrainConfig cfg;
    cfg.lag = 2;
    cfg.cells = 4;
    cfg.layers = 1;
    cfg.patience = 20;
    cfg.max_epochs = 200;
    cfg.seed = 1;
    return cfg;
}

} // namespace

TEST(BuildWindows, EightValuesLagThree) {
    const auto pairs = build_windows(counting(8), 3);
    ASSERT_EQ(pairs.size(), 5u);
    for (std::size_t i = 0; i < 5; ++i) {
        EXPECT_EQ(pairs[i].origin, i);
        ASSERT_EQ(pairs[i].input.size(), 3u);
        for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(pairs[i].input[j][0], static_cast<double>(i + j + 1));
        EXPECT_EQ(pairs[i].target[0], static_cast<double>(i + 4));
    }
}

TEST(BuildWindows, Boundaries) {
    EXPECT_EQ(build_windows(counting(4), 3).size(), 1u);
    try {
        (void)build_windows(counting(3), 3);
        FAIL();
    } catch (const std::invalid_argument& e) {
        EXPECT_STREQ(e.what(), "lag too large for series");
    }
    EXPECT_THROW((void)build_windows(counting(3), 0), std::invalid_argument);
}

TEST(BuildWindows, HorizonAndOffsetTargets) {
    const auto direct = build_windows(counting(8), 3, {2, 0});
    ASSERT_EQ(direct.size(), 4u);
    EXPECT_EQ(direct[0].target.size(), 2);
    EXPECT_EQ(direct[0].target[0], 4.0);
    EXPECT_EQ(direct[0].target[1], 5.0);
    const auto shifted = build_windows(counting(8), 3, {1, 2});
    ASSERT_EQ(shifted.size(), 3u);
    EXPECT_EQ(shifted[0].target[0], 6.0);
    EXPECT_EQ(shifted.back().target[0], 8.0);
}

TEST(BuildWindows, PairsTileTheSequence) {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g;
    for (std::size_t lag = 1; lag < 7; ++lag) {
        std::vector<double> v(20 + lag);
        for (auto& x : v) x = g(rng);
        const auto pairs = build_windows(scalar_sequence(v), lag);
        ASSERT_EQ(pairs.size(), v.size() - lag);
        // first input followed by every target rebuilds the source
        std::vector<double> rebuilt;
        for (const auto& x : pairs.front().input) rebuilt.push_back(x[0]);
        for (const auto& p : pairs) rebuilt.push_back(p.target[0]);
        EXPECT_EQ(rebuilt, v);
        for (std::size_t i = 0; i + 1 < pairs.size(); ++i) {
            EXPECT_EQ(pairs[i].target[0], pairs[i + 1].input.back()[0]);
        }
    }
}

TEST(GroupStateful, EightValuesLagThree) {
    const auto pairs = build_windows(counting(8), 3);
    const auto g = group_stateful(pairs, 3).groups;
    ASSERT_EQ(g.size(), 3u);
    EXPECT_EQ(g[0], (std::vector<std::size_t>{0, 3}));
    EXPECT_EQ(g[1], (std::vector<std::size_t>{1, 4}));
    EXPECT_EQ(g[2], (std::vector<std::size_t>{2}));
    // [t1..t4], [t4..t7]: the second window starts where the first ended
    EXPECT_EQ(pairs[g[0][1]].input.front()[0], 4.0);
    EXPECT_EQ(pairs[g[0][1]].target[0], 7.0);
}

TEST(GroupStateful, LagOneIsOneOrderedGroup) {
    const auto pairs = build_windows(counting(6), 1);
    const auto g = group_stateful(pairs, 1).groups;
    ASSERT_EQ(g.size(), 1u);
    EXPECT_EQ(g[0], (std::vector<std::size_t>{0, 1, 2, 3, 4}));
}

TEST(GroupStateful, PartitionProperties) {
    for (std::size_t n = 2; n < 40; ++n) {
        for (std::size_t lag = 1; lag < n; ++lag) {
            const auto pairs = build_windows(counting(n), lag);
            const auto groups = group_stateful(pairs, lag).groups;
            std::vector<int> seen(pairs.size(), 0);
            std::size_t smallest = pairs.size(), largest = 0;
            for (const auto& g : groups) {
                smallest = std::min(smallest, g.size());
                largest = std::max(largest, g.size());
                for (std::size_t j = 0; j < g.size(); ++j) {
                    ++seen[g[j]];
                    if (j > 0) {
                        EXPECT_EQ(pairs[g[j]].origin, pairs[g[j - 1]].origin + lag);
                    }
                }
            }
            EXPECT_EQ(std::count(seen.begin(), seen.end(), 1), static_cast<std::ptrdiff_t>(pairs.size()));
            EXPECT_LE(largest - smallest, 1u);
        }
    }
}

TEST(Train, PatienceOneWithoutImprovementKeepsFirstEpoch) {
    auto cfg = small_config();
    cfg.lag = 1;
    cfg.patience = 1;
    cfg.learning_rate = 0.0; // loss is flat
    const auto pairs = build_windows(counting(6), 1);
    const auto shape = network_shape(cfg, 1, HeadKind::linear, 1);
    const auto r = train(pairs, shape, cfg);
    EXPECT_EQ(r.best_epoch, 1u);
    EXPECT_EQ(r.loss_history.size(), 2u);
    EXPECT_EQ(r.loss_history[0], r.loss_history[1]);
    EXPECT_EQ(r.params.layers[0].wx, neural::init_params(shape, cfg.seed).layers[0].wx);
}

TEST(Train, RestoresBestEpochWeights) {
    auto cfg = small_config();
    cfg.patience = 3;
    cfg.max_epochs = 40;
    cfg.learning_rate = 0.05; // large steps make the loss bounce
    std::vector<double> v;
    for (int i = 0; i < 30; ++i) v.push_back(std::sin(0.7 * i));
    const auto pairs = build_windows(scalar_sequence(v), cfg.lag);
    const auto r = train(pairs, network_shape(cfg, 1, HeadKind::linear, 1), cfg);
    const auto best = std::min_element(r.loss_history.begin(), r.loss_history.end());
    EXPECT_EQ(r.best_epoch, static_cast<std::size_t>(best - r.loss_history.begin()) + 1);
    if (r.loss_history.size() < cfg.max_epochs) {
        EXPECT_EQ(r.loss_history.size(), r.best_epoch + cfg.patience);
    }
}

TEST(Train, LearnsConstantSeries) {
    const auto cfg = small_config();
    const auto pairs = build_windows(scalar_sequence(std::vector<double>(30, 0.7)), cfg.lag);
    const auto r = train(pairs, network_shape(cfg, 1, HeadKind::linear, 1), cfg);
    EXPECT_LE(r.loss_history.size(), 200u);
    EXPECT_LT(*std::min_element(r.loss_history.begin(), r.loss_history.end()), 1e-4);
}

TEST(Train, DeterministicPerSeedInBothModes) {
    std::vector<double> v;
    for (int i = 0; i < 25; ++i) v.push_back(std::cos(0.5 * i));
    for (auto mode : {TrainMode::stateful, TrainMode::stateless}) {
        auto cfg = small_config();
        cfg.mode = mode;
        cfg.max_epochs = 15;
        cfg.dropout = 0.3;
        const auto pairs = build_windows(scalar_sequence(v), cfg.lag);
        const auto shape = network_shape(cfg, 1, HeadKind::linear, 1);
        const auto a = train(pairs, shape, cfg), b = train(pairs, shape, cfg);
        EXPECT_EQ(a.loss_history, b.loss_history);
        EXPECT_EQ(a.params.head.w, b.params.head.w);
        cfg.seed = 2;
        EXPECT_NE(train(pairs, shape, cfg).loss_history, a.loss_history);
    }
}

TEST(Train, Errors) {
    auto cfg = small_config();
    const auto shape = network_shape(cfg, 1, HeadKind::linear, 1);
    EXPECT_THROW((void)train({}, shape, cfg), std::invalid_argument);
    const auto pairs = build_windows(counting(6), 3);
    EXPECT_THROW((void)train(pairs, shape, cfg), std::invalid_argument); // lag mismatch
    cfg.lag = 3;
    cfg.dropout = 1.0;
    EXPECT_THROW((void)train(pairs, shape, cfg), std::invalid_argument);
}

TEST(IteratedForecast, OneStepIsTheLastWindow) {
    const auto p = random_params({1, {3, 2}, HeadKind::linear, 1}, 5);
    const auto hist = scalar_sequence(std::vector<double>{0.1, -0.4, 0.3, 0.9, -0.2, 0.5});
    const TrainedModel stateless{p, 3, TrainMode::stateless};
    const auto win = neural::window_forward(p, neural::StackState::zero(p), std::span<const neural::Vector>(hist).last(3));
    EXPECT_EQ(iterated_forecast(stateless, hist, 1)[0][0], win.output[0]);
}

TEST(IteratedForecast, StatefulMatchesSteppingThroughEverything) {
    const auto p = random_params({1, {3, 2}, HeadKind::linear, 1}, 6);
    const auto hist = scalar_sequence(std::vector<double>{0.1, -0.4, 0.3, 0.9, -0.2, 0.5, 0.0});
    const TrainedModel model{p, 3, TrainMode::stateful};
    const auto got = iterated_forecast(model, hist, 5);
    auto s = neural::StackState::zero(p);
    neural::Vector out;
    for (const auto& x : hist) out = neural::stack_forward(p, s, x);
    for (std::size_t j = 0; j < 5; ++j) {
        EXPECT_NEAR(got[j][0], out[0], 1e-14);
        out = neural::stack_forward(p, s, out);
    }
}

TEST(IteratedForecast, StatelessSlidesTheWindow) {
    const auto p = random_params({1, {3}, HeadKind::linear, 1}, 7);
    const auto hist = scalar_sequence(std::vector<double>{0.2, 0.4, -0.1, 0.8});
    const TrainedModel model{p, 2, TrainMode::stateless};
    const auto got = iterated_forecast(model, hist, 4);
    std::vector<neural::Vector> window{hist[2], hist[3]};
    for (std::size_t j = 0; j < 4; ++j) {
        const auto r = neural::window_forward(p, neural::StackState::zero(p), window);
        EXPECT_EQ(got[j][0], r.output[0]);
        window = {window[1], r.output};
    }
}

TEST(IteratedForecast, ConstantModelContinuesItsConstant) {
    auto p = neural::zeros({1, {2}, HeadKind::linear, 1});
    p.head.b << 1.25;
    const auto hist = scalar_sequence(std::vector<double>{3, 1, 4, 1, 5});
    for (auto mode : {TrainMode::stateful, TrainMode::stateless}) {
        for (const auto& v : iterated_forecast({p, 2, mode}, hist, 6)) EXPECT_EQ(v[0], 1.25);
    }
}

TEST(IteratedForecast, Errors) {
    const auto p = random_params({1, {2}, HeadKind::linear, 1}, 1);
    const auto hist = scalar_sequence(std::vector<double>{1, 2});
    EXPECT_THROW((void)iterated_forecast({p, 3, TrainMode::stateful}, hist, 2), std::invalid_argument);
    EXPECT_THROW((void)iterated_forecast({p, 2, TrainMode::stateful}, hist, 0), std::invalid_argument);
}

TEST(DirectForecast, AgreesWithIteratedForOneStep) {
    const auto p = random_params({1, {3, 3}, HeadKind::linear, 1}, 8);
    const auto hist = scalar_sequence(std::vector<double>{0.3, 0.1, -0.7, 0.2});
    for (auto mode : {TrainMode::stateful, TrainMode::stateless}) {
        const TrainedModel m{p, 3, mode};
        EXPECT_EQ(direct_forecast(m, hist, 1)[0], iterated_forecast(m, hist, 1)[0][0]);
    }
}

TEST(DirectForecast, HeadSizeIsK) {
    const auto p = random_params({1, {3}, HeadKind::linear, 4}, 9);
    const auto hist = scalar_sequence(std::vector<double>{0.3, 0.1, -0.7});
    EXPECT_EQ(direct_forecast({p, 2, TrainMode::stateless}, hist, 4).size(), 4u);
    EXPECT_THROW((void)direct_forecast({p, 2, TrainMode::stateless}, hist, 3), std::invalid_argument);
}

TEST(MultiForecast, IdenticalModelsGiveIdenticalValues) {
    const auto p = random_params({1, {3}, HeadKind::linear, 1}, 10);
    const auto hist = scalar_sequence(std::vector<double>{0.3, 0.1, -0.7});
    const std::vector<TrainedModel> models(3, TrainedModel{p, 2, TrainMode::stateful});
    const auto out = multi_forecast(models, hist);
    ASSERT_EQ(out.size(), 3u);
    EXPECT_EQ(out[0], out[1]);
    EXPECT_EQ(out[1], out[2]);
    EXPECT_EQ(out[0], direct_forecast(models[0], hist, 1)[0]);
    const std::vector<TrainedModel> wide{{random_params({1, {3}, HeadKind::linear, 2}, 1), 2, TrainMode::stateful}};
    EXPECT_THROW((void)multi_forecast(wide, hist), std::invalid_argument);
    EXPECT_THROW((void)multi_forecast(std::span<const TrainedModel>{}, hist), std::invalid_argument);
}

TEST(Symbols, EncodeDecode) {
    const auto seq = encode_symbols("abca", 3);
    ASSERT_EQ(seq.size(), 4u);
    EXPECT_EQ(seq[2], one_hot(2, 3));
    EXPECT_EQ(decode_symbols(seq), "abca");
    EXPECT_THROW((void)encode_symbols("abd", 3), std::out_of_range);
}

TEST(ForecastSymbolic, ToyModelComposesWithPatches) {
    // a model that always prefers 'b', whatever the input
    auto p = neural::zeros({2, {2}, HeadKind::softmax, 2});
    p.head.b << 0.0, 1.0;
    const PatchDictionary dict{{{0.0, 1.0}, {0.0, -0.5, 2.0}}};
    const auto r = forecast_symbolic({p, 2, TrainMode::stateful}, "abab", dict, 10.0, 1, 4);
    EXPECT_EQ(r.symbols, "bbb"); // 3 patches x 2 steps >= skip + k = 5
    const auto stitched = patched_reconstruct("bbb", 10.0, dict);
    ASSERT_EQ(r.values.size(), 4u);
    for (std::size_t j = 0; j < 4; ++j) EXPECT_EQ(r.values[j], stitched[j + 2]);
    EXPECT_EQ(r.values, (std::vector<double>{12.0, 11.5, 14.0, 13.5}));
}

TEST(RawPipeline, ConstantSeries) {
    auto cfg = small_config();
    const auto run = raw_pipeline(TimeSeries(std::vector<double>(40, 3.5)), cfg, 10);
    ASSERT_EQ(run.forecast.values.size(), 10u);
    for (double v : run.forecast.values) EXPECT_NEAR(v, 3.5, 0.05);
}

TEST(RawPipeline, EveryModeReturnsKValues) {
    auto cfg = small_config();
    cfg.max_epochs = 5;
    std::vector<double> v;
    for (int i = 0; i < 40; ++i) v.push_back(std::sin(0.3 * i) + 0.1 * i);
    for (auto mode : {ForecastMode::iterated, ForecastMode::direct, ForecastMode::multi}) {
        const auto run = raw_pipeline(TimeSeries(v), cfg, 3, mode);
        EXPECT_EQ(run.forecast.values.size(), 3u);
        EXPECT_EQ(run.forecast.mode, mode);
        EXPECT_EQ(run.training.size(), mode == ForecastMode::multi ? 3u : 1u);
    }
}

TEST(AbbaPipeline, ZigzagContinuesTheAlternation) {
    std::vector<double> v;
    for (int period = 0; period < 25; ++period) {
        for (int i = 0; i < 6; ++i) v.push_back(i / 6.0);
        for (int i = 0; i < 6; ++i) v.push_back(1.0 - i / 6.0);
    }
    v.push_back(0.0);
    auto cfg = small_config();
    cfg.cells = 8;
    cfg.patience = 30;
    const auto run = abba_pipeline(TimeSeries(v), AbbaParams{0.1, 10, 0.0}, cfg, 30);
    ASSERT_TRUE(run.representation);
    EXPECT_EQ(run.representation->alphabet_size(), 2u);
    const auto& s = run.forecast.symbols;
    ASSERT_GE(s.size(), 4u);
    for (std::size_t j = 1; j < s.size(); ++j) EXPECT_NE(s[j], s[j - 1]) << s;
    EXPECT_EQ(run.forecast.values.size(), 30u);
    // continuation of the zigzag: next values rise from the last trough
    for (std::size_t j = 0; j < 30; ++j) {
        const double expect = (j % 12) < 6 ? (j % 12 + 1) / 6.0 : 1.0 - (j % 12 - 5) / 6.0;
        EXPECT_NEAR(run.forecast.values[j], expect, 0.05) << j;
    }
}

TEST(AbbaPipeline, ShortStringIsAnError) {
    std::vector<double> ramp(50);
    for (std::size_t i = 0; i < ramp.size(); ++i) ramp[i] = 0.1 * static_cast<double>(i);
    try {
        (void)abba_pipeline(TimeSeries(ramp), AbbaParams{}, small_config(), 5);
        FAIL();
    } catch (const std::invalid_argument& e) {
        EXPECT_STREQ(e.what(), "series too short after compression");
    }
}

TEST(AbbaPipeline, SeedDeterminism) {
    std::vector<double> v;
    for (int i = 0; i < 300; ++i) v.push_back(std::sin(0.1 * i) + 0.3 * std::sin(0.37 * i));
    auto cfg = small_config();
    cfg.max_epochs = 10;
    const auto a = abba_pipeline(TimeSeries(v), AbbaParams{}, cfg, 25);
    const auto b = abba_pipeline(TimeSeries(v), AbbaParams{}, cfg, 25);
    EXPECT_EQ(a.forecast.values, b.forecast.values);
    EXPECT_EQ(a.forecast.symbols, b.forecast.symbols);
    EXPECT_EQ(a.forecast.values.size(), 25u);
}
