#include "abbalstm/series.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

using abbalstm::TimeSeries;

TEST(TimeSeries, RejectsEmptyAndNonFinite) {
    EXPECT_THROW(TimeSeries(std::vector<double>{}), std::invalid_argument);
    EXPECT_THROW(TimeSeries({1.0, std::numeric_limits<double>::quiet_NaN()}), std::invalid_argument);
    EXPECT_THROW(TimeSeries({std::numeric_limits<double>::infinity()}), std::invalid_argument);
}

TEST(ZNormalize, PopulationConvention) {
    const auto [z, p] = abbalstm::znormalize(TimeSeries{1.0, 2.0, 3.0});
    EXPECT_DOUBLE_EQ(p.mean, 2.0);
    EXPECT_NEAR(p.std, std::sqrt(2.0 / 3.0), 1e-15);
    EXPECT_NEAR(z[0], -1.224744871391589, 1e-12);
    EXPECT_NEAR(z[1], 0.0, 1e-15);
    EXPECT_NEAR(z[2], 1.224744871391589, 1e-12);
}

TEST(ZNormalize, ConstantSeriesMapsToZeros) {
    const auto [z, p] = abbalstm::znormalize(TimeSeries{5.0, 5.0, 5.0});
    EXPECT_EQ(z, (TimeSeries{0.0, 0.0, 0.0}));
    EXPECT_EQ(p.std, 1.0);
    EXPECT_EQ(abbalstm::denormalize(z, p), (TimeSeries{5.0, 5.0, 5.0}));
}

TEST(ZNormalize, RoundTripProperty) {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> gauss(3.0, 10.0);
    std::uniform_int_distribution<int> len(1, 200);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> v(static_cast<std::size_t>(len(rng)));
        for (auto& x : v) x = gauss(rng);
        if (trial == 0) v = {0.3, 1.7, -2.2};
        const auto [z, p] = abbalstm::znormalize(TimeSeries(v));
        const auto back = abbalstm::denormalize(z, p);
        for (std::size_t i = 0; i < v.size(); ++i) {
            EXPECT_LE(std::abs(back[i] - v[i]), 1e-12 * std::max(1.0, std::abs(v[i])));
        }
        if (v.size() > 1) {
            double mean = 0.0, ss = 0.0;
            for (double x : z) mean += x;
            mean /= static_cast<double>(z.size());
            for (double x : z) ss += (x - mean) * (x - mean);
            EXPECT_NEAR(mean, 0.0, 1e-12);
            EXPECT_NEAR(ss / static_cast<double>(z.size()), 1.0, 1e-12);
        }
    }
}

TEST(Difference, Definition) {
    EXPECT_EQ(abbalstm::difference(TimeSeries{1.0, 3.0, 6.0}), (TimeSeries{2.0, 3.0}));
    EXPECT_EQ(abbalstm::difference(TimeSeries{4.0, 4.0, 4.0, 4.0}), (TimeSeries{0.0, 0.0, 0.0}));
}

TEST(Difference, TooShort) {
    try {
        (void)abbalstm::difference(TimeSeries{1.0});
        FAIL();
    } catch (const std::invalid_argument& e) {
        EXPECT_STREQ(e.what(), "series too short to difference");
    }
}

TEST(Difference, PrefixSumInverts) {
    const TimeSeries s{1.0, -2.0, 5.5, 5.5, 0.25};
    const auto d = abbalstm::difference(s);
    EXPECT_EQ(d.size(), s.size() - 1);
    EXPECT_EQ(abbalstm::undifference(d, s.front()), s);
}

TEST(ResampleLinear, Examples) {
    EXPECT_EQ(abbalstm::resample_linear(TimeSeries{0.0, 2.0}, 3), (TimeSeries{0.0, 1.0, 2.0}));
    EXPECT_EQ(abbalstm::resample_linear(TimeSeries{0.0, 1.0, 4.0}, 5), (TimeSeries{0.0, 0.5, 1.0, 2.5, 4.0}));
    const TimeSeries seg{3.0, -1.0, 2.0, 8.0};
    EXPECT_EQ(abbalstm::resample_linear(seg, 4), seg);
}

TEST(ResampleLinear, Errors) {
    EXPECT_THROW((void)abbalstm::resample_linear(TimeSeries{0.0, 1.0}, 1), std::invalid_argument);
    EXPECT_THROW((void)abbalstm::resample_linear(TimeSeries{0.0}, 3), std::invalid_argument);
}

TEST(ResampleLinear, EndpointsAndMonotonicityPreserved) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> step(0.0, 2.0);
    std::uniform_int_distribution<std::size_t> len(2, 40);
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<double> v{step(rng)};
        const std::size_t n = len(rng);
        while (v.size() < n) v.push_back(v.back() + step(rng));
        const auto out = abbalstm::resample_linear(TimeSeries(v), len(rng));
        EXPECT_EQ(out.front(), v.front());
        EXPECT_EQ(out.back(), v.back());
        for (std::size_t i = 1; i < out.size(); ++i) EXPECT_LE(out[i - 1], out[i]);
    }
}
