#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace abbalstm {

/// Ordered, finite, real-valued samples. Never empty.
class TimeSeries {
public:
    TimeSeries() = delete;

    explicit TimeSeries(std::vector<double> values) : values_(std::move(values)) {
        if (values_.empty()) {
            throw std::invalid_argument("time series must contain at least one sample");
        }
        for (std::size_t i = 0; i < values_.size(); ++i) {
            if (!std::isfinite(values_[i])) {
                throw std::invalid_argument("time series sample " + std::to_string(i) + " is not finite");
            }
        }
    }

    TimeSeries(std::initializer_list<double> values) : TimeSeries(std::vector<double>(values)) {}

    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
    [[nodiscard]] const std::vector<double>& values() const noexcept { return values_; }
    [[nodiscard]] std::span<const double> view() const noexcept { return values_; }
    [[nodiscard]] double operator[](std::size_t i) const { return values_[i]; }
    [[nodiscard]] double front() const { return values_.front(); }
    [[nodiscard]] double back() const { return values_.back(); }

    [[nodiscard]] auto begin() const noexcept { return values_.begin(); }
    [[nodiscard]] auto end() const noexcept { return values_.end(); }

    friend bool operator==(const TimeSeries&, const TimeSeries&) = default;

private:
    std::vector<double> values_;
};

struct NormalizationParams {
    double mean = 0.0;
    double std = 1.0;
};

/// Population (1/N) z-normalisation. A constant series maps to zeros and
/// records std = 1 so that denormalize stays exact.
[[nodiscard]] inline std::pair<TimeSeries, NormalizationParams> znormalize(const TimeSeries& series) {
    const auto& v = series.values();
    const double n = static_cast<double>(v.size());
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
    double ss = 0.0;
    for (double x : v) {
        ss += (x - mean) * (x - mean);
    }
    double sd = std::sqrt(ss / n);
    if (!(sd > 0.0)) {
        sd = 1.0;
    }
    std::vector<double> out(v.size());
    std::transform(v.begin(), v.end(), out.begin(), [&](double x) { return (x - mean) / sd; });
    return {TimeSeries(std::move(out)), NormalizationParams{mean, sd}};
}

[[nodiscard]] inline std::vector<double> denormalize(std::span<const double> values, const NormalizationParams& p) {
    std::vector<double> out(values.size());
    std::transform(values.begin(), values.end(), out.begin(), [&](double x) { return x * p.std + p.mean; });
    return out;
}

[[nodiscard]] inline TimeSeries denormalize(const TimeSeries& series, const NormalizationParams& p) {
    return TimeSeries(denormalize(series.view(), p));
}

/// First differences t[i+1] - t[i].
[[nodiscard]] inline TimeSeries difference(const TimeSeries& series) {
    if (series.size() < 2) {
        throw std::invalid_argument("series too short to difference");
    }
    std::vector<double> out(series.size() - 1);
    for (std::size_t i = 0; i + 1 < series.size(); ++i) {
        out[i] = series[i + 1] - series[i];
    }
    return TimeSeries(std::move(out));
}

/// Inverse of difference() given the first sample.
[[nodiscard]] inline TimeSeries undifference(const TimeSeries& diffs, double first) {
    std::vector<double> out;
    out.reserve(diffs.size() + 1);
    out.push_back(first);
    for (double d : diffs) {
        out.push_back(out.back() + d);
    }
    return TimeSeries(std::move(out));
}

/// Piecewise-linear resampling of `segment` onto `target_len` points spread
/// uniformly over its index range. Endpoints are reproduced exactly.
[[nodiscard]] inline std::vector<double> resample_linear(std::span<const double> segment, std::size_t target_len) {
    if (segment.size() < 2) {
        throw std::invalid_argument("resample_linear needs a segment of at least 2 samples");
    }
    if (target_len < 2) {
        throw std::invalid_argument("resample_linear target length must be at least 2");
    }
    std::vector<double> out(target_len);
    const std::size_t last = segment.size() - 1;
    const double step = static_cast<double>(last) / static_cast<double>(target_len - 1);
    out.front() = segment.front();
    out.back() = segment.back();
    for (std::size_t j = 1; j + 1 < target_len; ++j) {
        const double pos = step * static_cast<double>(j);
        const auto lo = std::min(static_cast<std::size_t>(pos), last - 1);
        const double frac = pos - static_cast<double>(lo);
        out[j] = segment[lo] + frac * (segment[lo + 1] - segment[lo]);
    }
    return out;
}

[[nodiscard]] inline TimeSeries resample_linear(const TimeSeries& segment, std::size_t target_len) {
    return TimeSeries(resample_linear(segment.view(), target_len));
}

} // namespace abbalstm
