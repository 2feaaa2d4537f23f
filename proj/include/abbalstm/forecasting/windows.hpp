#pragma once

#include "abbalstm/neural/params.hpp"

#include <algorithm>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace abbalstm::forecasting {

using neural::Vector;

/// A sequence of feature vectors: 1-dimensional for raw values, one-hot for symbols.
using Sequence = std::vector<Vector>;

[[nodiscard]] inline Sequence scalar_sequence(std::span<const double> values) {
    Sequence s;
    s.reserve(values.size());
    for (double v : values) s.push_back(Vector::Constant(1, v));
    return s;
}

[[nodiscard]] inline Vector one_hot(std::size_t index, std::size_t size) {
    if (index >= size) throw std::out_of_range("one-hot index outside alphabet");
    Vector v = Vector::Zero(static_cast<Eigen::Index>(size));
    v[static_cast<Eigen::Index>(index)] = 1.0;
    return v;
}

/// Input window of `lag` consecutive elements and its target.
struct TrainingPair {
    std::size_t origin = 0; // 0-based index of the first input element
    Sequence input;
    Vector target;
};

/// Which future elements a pair's target holds: `horizon` consecutive
/// elements starting `offset` steps after the element following the input.
struct WindowTargets {
    std::size_t horizon = 1;
    std::size_t offset = 0;
};

/// Overlapping sliding windows. For the default targets, a sequence of length
/// N yields N - lag pairs and pair i is [s_i .. s_{i+lag-1} | s_{i+lag}].
[[nodiscard]] inline std::vector<TrainingPair> build_windows(const Sequence& seq, std::size_t lag,
                                                            WindowTargets targets = {}) {
    if (lag == 0) throw std::invalid_argument("lag must be positive");
    if (targets.horizon == 0) throw std::invalid_argument("horizon must be positive");
    const std::size_t span = lag + targets.offset + targets.horizon;
    if (seq.size() < span) throw std::invalid_argument("lag too large for series");
    const std::size_t count = seq.size() - span + 1;
    const auto dim = seq.front().size();

    std::vector<TrainingPair> pairs(count);
    for (std::size_t i = 0; i < count; ++i) {
        auto& p = pairs[i];
        p.origin = i;
        p.input.assign(seq.begin() + static_cast<std::ptrdiff_t>(i),
                       seq.begin() + static_cast<std::ptrdiff_t>(i + lag));
        p.target.resize(dim * static_cast<Eigen::Index>(targets.horizon));
        for (std::size_t h = 0; h < targets.horizon; ++h) {
            p.target.segment(static_cast<Eigen::Index>(h) * dim, dim) = seq[i + lag + targets.offset + h];
        }
    }
    return pairs;
}

/// Partition of training pairs into `lag` chronological chains: group g holds
/// the pairs whose origin is congruent to g modulo lag, in increasing order, so
/// each pair's input starts where the previous pair's input ended.
struct StatefulGroups {
    std::vector<std::vector<std::size_t>> groups; // indices into the pair list
};

[[nodiscard]] inline StatefulGroups group_stateful(const std::vector<TrainingPair>& pairs, std::size_t lag) {
    if (lag == 0) throw std::invalid_argument("lag must be positive");
    StatefulGroups out;
    out.groups.resize(std::min(lag, pairs.size()));
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        out.groups[pairs[i].origin % lag].push_back(i);
    }
    return out;
}

} // namespace abbalstm::forecasting
