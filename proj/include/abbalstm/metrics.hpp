#pragma once

#include "abbalstm/series.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

namespace abbalstm::metrics {

[[nodiscard]] inline double euclidean(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw std::invalid_argument("euclidean: length mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

/// Unconstrained dynamic time warping with squared local cost; returns the
/// square root of the cheapest accumulated cost.
[[nodiscard]] inline double dtw(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("dtw: empty input");
    const std::size_t m = b.size();
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> prev(m + 1, inf), cur(m + 1, inf);
    prev[0] = 0.0;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        cur[0] = inf;
        for (std::size_t j = 1; j <= m; ++j) {
            const double d = (a[i - 1] - b[j - 1]) * (a[i - 1] - b[j - 1]);
            cur[j] = d + std::min({prev[j - 1], prev[j], cur[j - 1]});
        }
        std::swap(prev, cur);
    }
    return std::sqrt(prev[m]);
}

/// Symmetric MAPE on the 0..200 scale; terms with |F| + |A| = 0 contribute 0.
[[nodiscard]] inline double smape(std::span<const double> forecast, std::span<const double> actual) {
    if (forecast.size() != actual.size()) throw std::invalid_argument("smape: length mismatch");
    if (forecast.empty()) throw std::invalid_argument("smape: empty input");
    double s = 0.0;
    for (std::size_t i = 0; i < forecast.size(); ++i) {
        const double den = std::abs(forecast[i]) + std::abs(actual[i]);
        if (den > 0.0) s += std::abs(forecast[i] - actual[i]) / den;
    }
    return 200.0 / static_cast<double>(forecast.size()) * s;
}

struct SimilarityReport {
    double euclidean = 0.0;
    double dtw = 0.0;
    double euclidean_diff = 0.0;
    double dtw_diff = 0.0;
    double smape = 0.0;
};

/// All five measures; the *_diff ones compare first differences.
[[nodiscard]] inline SimilarityReport report(std::span<const double> forecast, std::span<const double> actual) {
    if (forecast.size() != actual.size()) throw std::invalid_argument("report: length mismatch");
    if (forecast.size() < 2) throw std::invalid_argument("report needs at least 2 values");
    const auto df = difference(TimeSeries(std::vector<double>(forecast.begin(), forecast.end())));
    const auto da = difference(TimeSeries(std::vector<double>(actual.begin(), actual.end())));
    return {euclidean(forecast, actual), dtw(forecast, actual), euclidean(df.view(), da.view()),
            dtw(df.view(), da.view()), smape(forecast, actual)};
}

} // namespace abbalstm::metrics
