#pragma once

// Adaptive piecewise-linear symbolic representation of a time series:
//
//   series --compress--> polygonal chain of (len, inc) pieces
//          --digitize--> symbol string + cluster centers
//
// and back, either through cluster centers (inverse_digitize, quantize,
// inverse_compress) or through per-symbol mean shapes ("patches") that are
// stitched together in string order.

#include "abbalstm/kmeans.hpp"
#include "abbalstm/series.hpp"

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace abbalstm {

/// One linear piece: `len` index steps, value change `inc`. `len` is an
/// integer after compression and quantization; it may be fractional right
/// after inverse digitization. `inc_tail` holds the rounding error of `inc`
/// (inc + inc_tail is the exact difference of the two end values), which
/// lets inverse_compress hit every breakpoint bit-exactly.
struct Piece {
    double len = 1.0;
    double inc = 0.0;
    double inc_tail = 0.0;

    friend bool operator==(const Piece&, const Piece&) = default;
};

struct PolygonalChain {
    double start_value = 0.0;
    std::vector<Piece> pieces;

    [[nodiscard]] double total_length() const {
        double s = 0.0;
        for (const auto& p : pieces) s += p.len;
        return s;
    }

    [[nodiscard]] bool has_integer_lengths() const {
        for (const auto& p : pieces) {
            if (p.len < 1.0 || p.len != std::round(p.len)) return false;
        }
        return true;
    }

    friend bool operator==(const PolygonalChain&, const PolygonalChain&) = default;
};

struct ClusterCenter {
    double len = 0.0;
    double inc = 0.0;
    double inc_tail = 0.0; // mean of the members' tails (see Piece)
};

/// Piece-to-cluster assignment. Cluster indices are ordered by first
/// appearance in the piece sequence, so cluster c is written as symbol 'a'+c.
struct ClusterModel {
    std::vector<std::size_t> assignments;
    std::vector<ClusterCenter> centers;
    double scaling = 0.0;

    [[nodiscard]] std::size_t size() const noexcept { return centers.size(); }
};

/// patches[c] is the mean shape of cluster c, starting at 0.
struct PatchDictionary {
    std::vector<std::vector<double>> patches;

    [[nodiscard]] bool empty() const noexcept { return patches.empty(); }
};

struct SymbolicRepresentation {
    std::string symbols;
    double start_value = 0.0;
    ClusterModel model;
    PatchDictionary patches;

    [[nodiscard]] std::size_t alphabet_size() const noexcept { return model.size(); }
};

enum class Reconstruction { polygonal, patched };

struct AbbaParams {
    double tol = 0.1;
    std::size_t max_k = 10;
    double scaling = 0.0;
    // Upper bound on piece length (in index steps); unbounded by default.
    std::size_t max_len = std::numeric_limits<std::size_t>::max();
    std::uint64_t seed = 0;
};

inline constexpr std::size_t kMaxAlphabet = 26;

[[nodiscard]] inline char symbol_for(std::size_t cluster) {
    if (cluster >= kMaxAlphabet) throw std::out_of_range("alphabet exhausted");
    return static_cast<char>('a' + cluster);
}

[[nodiscard]] inline std::size_t symbol_index(char symbol) {
    if (symbol < 'a' || symbol > 'z') throw std::invalid_argument("symbol not in alphabet");
    return static_cast<std::size_t>(symbol - 'a');
}

// ---------------------------------------------------------------------------
// compression

/// Sum of squared deviations of values[from..to] from the chord joining the
/// two end values.
[[nodiscard]] inline double chord_error(std::span<const double> values, std::size_t from, std::size_t to) {
    const double len = static_cast<double>(to - from);
    const double slope = (values[to] - values[from]) / len;
    double err = 0.0;
    for (std::size_t i = from + 1; i < to; ++i) {
        const double d = values[i] - (values[from] + slope * static_cast<double>(i - from));
        err += d * d;
    }
    return err;
}

namespace detail {

// Knuth's error-free transformation: a + b == sum + err exactly.
struct TwoSum {
    double sum;
    double err;
};

inline TwoSum two_sum(double a, double b) {
    const double s = a + b;
    const double bb = s - a;
    return {s, (a - (s - bb)) + (b - bb)};
}

// base + (inc + tail), correctly rounded whenever the exact result is a double.
inline double add_split(double base, double inc, double tail) {
    const auto [s, e] = two_sum(base, inc);
    return s + (e + tail);
}

} // namespace detail

/// Greedy left-to-right piecewise-linear compression. A piece spanning `len`
/// steps is accepted while its chord error stays within (len - 1) * tol^2 and
/// len <= max_len.
[[nodiscard]] inline PolygonalChain compress(const TimeSeries& series, double tol,
                                             std::size_t max_len = std::numeric_limits<std::size_t>::max()) {
    if (series.size() < 2) throw std::invalid_argument("compress needs at least 2 samples");
    if (!(tol > 0.0) || !std::isfinite(tol)) throw std::invalid_argument("compress tolerance must be positive");
    if (max_len < 1) throw std::invalid_argument("max_len must be at least 1");

    const auto values = series.view();
    const std::size_t last = values.size() - 1;
    const double tol2 = tol * tol;

    PolygonalChain chain;
    chain.start_value = values.front();
    std::size_t start = 0;
    while (start < last) {
        std::size_t end = start + 1;
        while (end < last && end + 1 - start <= max_len) {
            const std::size_t cand = end + 1;
            const double allowed = static_cast<double>(cand - start - 1) * tol2;
            if (chord_error(values, start, cand) > allowed) break;
            end = cand;
        }
        const auto [inc, err] = detail::two_sum(values[end], -values[start]);
        chain.pieces.push_back({static_cast<double>(end - start), inc, err});
        start = end;
    }
    return chain;
}

/// Polygonal reconstruction; each piece contributes `len` equally spaced steps.
[[nodiscard]] inline TimeSeries inverse_compress(const PolygonalChain& chain) {
    if (!chain.has_integer_lengths()) {
        throw std::invalid_argument("inverse_compress requires integer piece lengths; quantize first");
    }
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(chain.total_length()) + 1);
    out.push_back(chain.start_value);
    for (const auto& p : chain.pieces) {
        const double base = out.back();
        const auto steps = static_cast<std::size_t>(p.len);
        for (std::size_t s = 1; s < steps; ++s) {
            out.push_back(base + p.inc * static_cast<double>(s) / p.len);
        }
        out.push_back(detail::add_split(base, p.inc, p.inc_tail));
    }
    return TimeSeries(std::move(out));
}

// ---------------------------------------------------------------------------
// digitization

namespace detail {

inline double population_std(std::span<const double> v) {
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / static_cast<double>(v.size()));
}

// Mean written as first + mean offset so that identical members give their
// common value bit-exactly.
inline double stable_mean(std::span<const double> v) {
    double off = 0.0;
    for (double x : v) off += x - v.front();
    return v.front() + off / static_cast<double>(v.size());
}

} // namespace detail

/// Upper bound on the per-cluster variance (in standardized piece
/// coordinates) for `m` pieces covering a series of `n` samples.
[[nodiscard]] inline double cluster_variance_bound(std::size_t n, std::size_t m, double tol) {
    constexpr double spread = 0.2;
    const auto N = static_cast<double>(n);
    const auto M = static_cast<double>(m);
    return 6.0 * (N - M) / (N * M) * tol * tol / (spread * spread);
}

/// Clusters the pieces on (scaling * len / std(len), inc / std(inc)) with
/// k-means, increasing k from 1 until every cluster's variance is within
/// cluster_variance_bound() or k reaches max_k. The result has no patches.
[[nodiscard]] inline SymbolicRepresentation digitize(const PolygonalChain& chain, double tol, std::size_t max_k,
                                                     double scaling, std::uint64_t seed = 0) {
    if (chain.pieces.empty()) throw std::invalid_argument("digitize needs at least one piece");
    if (max_k < 1) throw std::invalid_argument("max_k must be at least 1");
    if (max_k > kMaxAlphabet) throw std::invalid_argument("alphabet exhausted");
    if (tol < 0.0 || scaling < 0.0) throw std::invalid_argument("tol and scaling must be nonnegative");

    const std::size_t m = chain.pieces.size();
    std::vector<double> lens(m), incs(m);
    for (std::size_t j = 0; j < m; ++j) {
        lens[j] = chain.pieces[j].len;
        incs[j] = chain.pieces[j].inc;
    }
    double len_std = detail::population_std(lens);
    double inc_std = detail::population_std(incs);
    if (!(len_std > 0.0)) len_std = 1.0;
    if (!(inc_std > 0.0)) inc_std = 1.0;

    std::vector<Point<2>> pts(m);
    for (std::size_t j = 0; j < m; ++j) {
        pts[j] = {scaling * lens[j] / len_std, incs[j] / inc_std};
    }
    std::size_t distinct = 0;
    for (std::size_t j = 0; j < m; ++j) {
        bool seen = false;
        for (std::size_t q = 0; q < j && !seen; ++q) seen = (pts[q] == pts[j]);
        if (!seen) ++distinct;
    }

    const double bound = cluster_variance_bound(static_cast<std::size_t>(chain.total_length()) + 1, m, tol);
    std::mt19937_64 rng(seed);
    const std::size_t k_cap = std::min(max_k, distinct);
    KMeansResult<2> best;
    for (std::size_t k = 1; k <= k_cap; ++k) {
        best = kmeans<2>(pts, k, rng);
        std::vector<double> sum_sq(k, 0.0);
        std::vector<std::size_t> count(k, 0);
        for (std::size_t j = 0; j < m; ++j) {
            sum_sq[best.labels[j]] += detail::sq_dist(pts[j], best.centers[best.labels[j]]);
            ++count[best.labels[j]];
        }
        double worst = 0.0;
        for (std::size_t c = 0; c < k; ++c) {
            if (count[c] > 0) worst = std::max(worst, sum_sq[c] / static_cast<double>(count[c]));
        }
        if (worst <= bound) break;
    }

    // relabel clusters by first appearance, dropping any that ended up empty
    std::vector<std::size_t> relabel(best.centers.size(), std::numeric_limits<std::size_t>::max());
    std::size_t next = 0;
    SymbolicRepresentation rep;
    rep.start_value = chain.start_value;
    rep.model.scaling = scaling;
    rep.model.assignments.resize(m);
    for (std::size_t j = 0; j < m; ++j) {
        auto& lab = relabel[best.labels[j]];
        if (lab == std::numeric_limits<std::size_t>::max()) lab = next++;
        rep.model.assignments[j] = lab;
        rep.symbols.push_back(symbol_for(lab));
    }
    rep.model.centers.resize(next);
    for (std::size_t c = 0; c < next; ++c) {
        std::vector<double> ml, mi, mt;
        for (std::size_t j = 0; j < m; ++j) {
            if (rep.model.assignments[j] == c) {
                ml.push_back(lens[j]);
                mi.push_back(incs[j]);
                mt.push_back(chain.pieces[j].inc_tail);
            }
        }
        rep.model.centers[c] = {detail::stable_mean(ml), detail::stable_mean(mi), detail::stable_mean(mt)};
    }
    return rep;
}

/// Replaces every symbol by its cluster center (lengths may be fractional).
[[nodiscard]] inline PolygonalChain inverse_digitize(const SymbolicRepresentation& rep) {
    PolygonalChain chain;
    chain.start_value = rep.start_value;
    chain.pieces.reserve(rep.symbols.size());
    for (char s : rep.symbols) {
        const std::size_t c = symbol_index(s);
        if (c >= rep.model.centers.size()) throw std::invalid_argument("symbol not in alphabet");
        const auto& center = rep.model.centers[c];
        chain.pieces.push_back({center.len, center.inc, center.inc_tail});
    }
    return chain;
}

/// Error-carrying rounding of piece lengths: the cumulative length after
/// piece j becomes round(cumulative real length), with every piece at least 1.
[[nodiscard]] inline PolygonalChain quantize(const PolygonalChain& chain) {
    PolygonalChain out;
    out.start_value = chain.start_value;
    out.pieces.reserve(chain.pieces.size());
    double cumulative = 0.0;
    double placed = 0.0;
    for (const auto& p : chain.pieces) {
        cumulative += p.len;
        double len = std::round(cumulative) - placed;
        if (len < 1.0) len = 1.0;
        placed += len;
        out.pieces.push_back({len, p.inc, p.inc_tail});
    }
    return out;
}

// ---------------------------------------------------------------------------
// patches

/// Mean shape per cluster: every member's raw segment is shifted to start at 0,
/// resampled to round(mean member length) + 1 points and averaged point-wise.
[[nodiscard]] inline PatchDictionary build_patches(const PolygonalChain& chain, const TimeSeries& source,
                                                   const ClusterModel& model) {
    if (!chain.has_integer_lengths()) throw std::invalid_argument("build_patches needs the compressed chain");
    if (model.assignments.size() != chain.pieces.size()) {
        throw std::invalid_argument("cluster model does not assign every piece");
    }
    if (static_cast<std::size_t>(chain.total_length()) + 1 != source.size()) {
        throw std::invalid_argument("chain does not cover the source series");
    }

    const std::size_t k = model.centers.size();
    std::vector<std::vector<std::span<const double>>> members(k);
    std::vector<std::vector<double>> member_lens(k);
    std::size_t at = 0;
    for (std::size_t j = 0; j < chain.pieces.size(); ++j) {
        const auto len = static_cast<std::size_t>(chain.pieces[j].len);
        const std::size_t c = model.assignments[j];
        if (c >= k) throw std::invalid_argument("assignment refers to an unknown cluster");
        members[c].push_back(source.view().subspan(at, len + 1));
        member_lens[c].push_back(chain.pieces[j].len);
        at += len;
    }

    PatchDictionary dict;
    dict.patches.resize(k);
    for (std::size_t c = 0; c < k; ++c) {
        if (members[c].empty()) throw std::invalid_argument("cluster without members");
        double mean_len = 0.0;
        for (double l : member_lens[c]) mean_len += l;
        mean_len /= static_cast<double>(member_lens[c].size());
        const auto len = static_cast<std::size_t>(std::max(1.0, std::round(mean_len)));

        std::vector<double> acc(len + 1, 0.0);
        std::vector<double> shifted;
        for (const auto seg : members[c]) {
            shifted.assign(seg.begin(), seg.end());
            const double first = shifted.front();
            for (double& v : shifted) v -= first;
            const auto resampled = resample_linear(std::span<const double>(shifted), len + 1);
            for (std::size_t i = 0; i <= len; ++i) acc[i] += resampled[i];
        }
        for (double& v : acc) v /= static_cast<double>(members[c].size());
        dict.patches[c] = std::move(acc);
    }
    return dict;
}

/// Stitches patches in symbol order, each shifted to start at the running value.
[[nodiscard]] inline TimeSeries patched_reconstruct(std::string_view symbols, double start_value,
                                                    const PatchDictionary& dict) {
    std::vector<double> out{start_value};
    for (char s : symbols) {
        const std::size_t c = symbol_index(s);
        if (c >= dict.patches.size() || dict.patches[c].empty()) {
            throw std::invalid_argument(std::string("no patch for symbol '") + s + "'");
        }
        const auto& patch = dict.patches[c];
        const double base = out.back();
        for (std::size_t i = 1; i < patch.size(); ++i) out.push_back(base + patch[i]);
    }
    return TimeSeries(std::move(out));
}

[[nodiscard]] inline TimeSeries patched_reconstruct(const SymbolicRepresentation& rep) {
    return patched_reconstruct(rep.symbols, rep.start_value, rep.patches);
}

// ---------------------------------------------------------------------------
// full transform

[[nodiscard]] inline SymbolicRepresentation transform(const TimeSeries& series, const AbbaParams& params = {}) {
    const auto chain = compress(series, params.tol, params.max_len);
    auto rep = digitize(chain, params.tol, params.max_k, params.scaling, params.seed);
    rep.patches = build_patches(chain, series, rep.model);
    return rep;
}

[[nodiscard]] inline TimeSeries inverse_transform(const SymbolicRepresentation& rep,
                                                  Reconstruction mode = Reconstruction::patched) {
    if (mode == Reconstruction::patched) return patched_reconstruct(rep);
    return inverse_compress(quantize(inverse_digitize(rep)));
}

} // namespace abbalstm
