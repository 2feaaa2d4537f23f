#pragma once

#include <array>
#include <cstddef>
#include <limits>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

namespace abbalstm {

template <std::size_t D>
using Point = std::array<double, D>;

template <std::size_t D>
struct KMeansResult {
    std::vector<std::size_t> labels;
    std::vector<Point<D>> centers;
    double inertia = 0.0;
};

namespace detail {

template <std::size_t D>
double sq_dist(const Point<D>& a, const Point<D>& b) {
    double s = 0.0;
    for (std::size_t d = 0; d < D; ++d) {
        s += (a[d] - b[d]) * (a[d] - b[d]);
    }
    return s;
}

// D^2 seeding: first center uniform, each next one with probability
// proportional to the squared distance to the nearest chosen center.
template <std::size_t D, class Rng>
std::vector<Point<D>> kmeanspp_seed(std::span<const Point<D>> pts, std::size_t k, Rng& rng) {
    std::vector<Point<D>> centers;
    centers.reserve(k);
    std::uniform_int_distribution<std::size_t> pick(0, pts.size() - 1);
    centers.push_back(pts[pick(rng)]);
    std::vector<double> nearest(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        nearest[i] = sq_dist(pts[i], centers.front());
    }
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    while (centers.size() < k) {
        double total = 0.0;
        for (double d : nearest) total += d;
        std::size_t chosen = 0;
        if (total > 0.0) {
            double r = unit(rng) * total;
            chosen = pts.size() - 1;
            for (std::size_t i = 0; i < pts.size(); ++i) {
                r -= nearest[i];
                if (r < 0.0 && nearest[i] > 0.0) {
                    chosen = i;
                    break;
                }
            }
            // guard against landing on an existing center through rounding
            while (nearest[chosen] == 0.0 && chosen > 0) --chosen;
        } else {
            chosen = pick(rng);
        }
        centers.push_back(pts[chosen]);
        for (std::size_t i = 0; i < pts.size(); ++i) {
            nearest[i] = std::min(nearest[i], sq_dist(pts[i], centers.back()));
        }
    }
    return centers;
}

template <std::size_t D>
KMeansResult<D> lloyd(std::span<const Point<D>> pts, std::vector<Point<D>> centers, std::size_t max_iter) {
    const std::size_t k = centers.size();
    KMeansResult<D> res;
    res.labels.assign(pts.size(), 0);
    for (std::size_t it = 0; it < max_iter; ++it) {
        bool changed = (it == 0);
        for (std::size_t i = 0; i < pts.size(); ++i) {
            std::size_t best = 0;
            double best_d = std::numeric_limits<double>::infinity();
            for (std::size_t c = 0; c < k; ++c) {
                const double d = sq_dist(pts[i], centers[c]);
                if (d < best_d) {
                    best_d = d;
                    best = c;
                }
            }
            if (res.labels[i] != best) {
                res.labels[i] = best;
                changed = true;
            }
        }
        if (!changed) break;
        std::vector<Point<D>> sums(k, Point<D>{});
        std::vector<std::size_t> counts(k, 0);
        for (std::size_t i = 0; i < pts.size(); ++i) {
            for (std::size_t d = 0; d < D; ++d) sums[res.labels[i]][d] += pts[i][d];
            ++counts[res.labels[i]];
        }
        for (std::size_t c = 0; c < k; ++c) {
            if (counts[c] == 0) continue; // empty cluster keeps its old center
            for (std::size_t d = 0; d < D; ++d) centers[c][d] = sums[c][d] / static_cast<double>(counts[c]);
        }
    }
    res.centers = std::move(centers);
    res.inertia = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        res.inertia += sq_dist(pts[i], res.centers[res.labels[i]]);
    }
    return res;
}

} // namespace detail

/// Lloyd's k-means with k-means++ seeding; keeps the lowest-inertia result
/// out of `restarts` seedings drawn from `rng`.
template <std::size_t D, class Rng>
KMeansResult<D> kmeans(std::span<const Point<D>> pts, std::size_t k, Rng& rng, std::size_t restarts = 10,
                       std::size_t max_iter = 300) {
    if (pts.empty()) throw std::invalid_argument("kmeans on empty point set");
    if (k == 0 || k > pts.size()) throw std::invalid_argument("kmeans: k must lie in [1, number of points]");
    KMeansResult<D> best;
    best.inertia = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < std::max<std::size_t>(restarts, 1); ++r) {
        auto res = detail::lloyd<D>(pts, detail::kmeanspp_seed<D>(pts, k, rng), max_iter);
        if (res.inertia < best.inertia) best = std::move(res);
    }
    return best;
}

} // namespace abbalstm
