#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "sightkit/errors.hpp"

namespace sightkit {

// Result of 1-D clustering. Centroids are relabeled ascending, so cluster 0
// is always the leftmost group.
struct ClusterModel {
    std::vector<double> centroids;
    std::vector<int> assignment;          // point index -> cluster index
    double inertia = 0.0;
    std::vector<double> inertia_history;  // one entry per Lloyd iteration
    int iterations = 0;
};

inline double population_mean(const std::vector<double>& values) {
    return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

inline double population_stddev(const std::vector<double>& values) {
    double mu = population_mean(values);
    double sq = 0.0;
    for (double v : values) sq += (v - mu) * (v - mu);
    return std::sqrt(sq / static_cast<double>(values.size()));
}

// (v - mean) / population stddev; a constant series maps to all zeros.
inline std::vector<double> zscores(const std::vector<double>& values) {
    if (values.empty()) throw ValidationError("zscores: input must be non-empty");
    double mu = population_mean(values);
    double sigma = population_stddev(values);
    std::vector<double> out(values.size(), 0.0);
    if (sigma == 0.0) return out;
    for (std::size_t i = 0; i < values.size(); ++i) out[i] = (values[i] - mu) / sigma;
    return out;
}

namespace detail {

inline double inertia_of(const std::vector<double>& points, const std::vector<double>& centroids,
                         const std::vector<int>& assignment) {
    double total = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        double d = points[i] - centroids[assignment[i]];
        total += d * d;
    }
    return total;
}

inline int nearest_centroid(double point, const std::vector<double>& centroids) {
    int best = 0;
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < centroids.size(); ++c) {
        double d = std::abs(point - centroids[c]);
        if (d < best_dist) {  // strict: ties stay with the lower index
            best_dist = d;
            best = static_cast<int>(c);
        }
    }
    return best;
}

// Relabel clusters so centroids are ascending; equal centroids keep their
// relative order.
inline void relabel_ascending(ClusterModel& model) {
    const std::size_t k = model.centroids.size();
    std::vector<int> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return model.centroids[a] < model.centroids[b]; });
    std::vector<int> new_index(k);
    std::vector<double> sorted(k);
    for (std::size_t rank = 0; rank < k; ++rank) {
        new_index[order[rank]] = static_cast<int>(rank);
        sorted[rank] = model.centroids[order[rank]];
    }
    model.centroids = std::move(sorted);
    for (int& a : model.assignment) a = new_index[a];
}

}  // namespace detail

// Deterministic 1-D Lloyd iterations. Initialization seeds the k centroids at
// evenly spaced quantiles of the sorted points, ties on assignment go to the
// lower cluster index, and an emptied cluster is re-seeded with the point
// farthest from its current centroid.
inline ClusterModel kmeans_1d(const std::vector<double>& points, int k, int max_iter = 100,
                              double tol = 1e-9) {
    const int n = static_cast<int>(points.size());
    if (k < 1) throw ValidationError("kmeans_1d: k must be positive");
    if (k > n) {
        throw ValidationError("kmeans_1d: k = " + std::to_string(k) + " exceeds point count " +
                              std::to_string(n));
    }
    if (max_iter < 1) throw ValidationError("kmeans_1d: max_iter must be >= 1");
    if (tol < 0) throw ValidationError("kmeans_1d: tol must be >= 0");

    std::vector<double> sorted(points);
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> centroids(k);
    for (int i = 0; i < k; ++i) centroids[i] = sorted[((2 * i + 1) * n) / (2 * k)];

    ClusterModel model;
    model.assignment.assign(n, 0);
    std::vector<int> previous(n, -1);

    for (int iter = 0; iter < max_iter; ++iter) {
        for (int i = 0; i < n; ++i) model.assignment[i] = detail::nearest_centroid(points[i], centroids);

        // Re-seed empty clusters from the farthest point of a multi-member cluster.
        std::vector<int> sizes(k, 0);
        for (int a : model.assignment) ++sizes[a];
        for (int c = 0; c < k; ++c) {
            if (sizes[c] > 0) continue;
            int farthest = -1;
            double far_dist = -1.0;
            for (int i = 0; i < n; ++i) {
                if (sizes[model.assignment[i]] < 2) continue;
                double d = std::abs(points[i] - centroids[model.assignment[i]]);
                if (d > far_dist) {
                    far_dist = d;
                    farthest = i;
                }
            }
            if (farthest < 0) break;  // all clusters singletons; nothing to steal
            --sizes[model.assignment[farthest]];
            model.assignment[farthest] = c;
            ++sizes[c];
            centroids[c] = points[farthest];
        }

        double movement = 0.0;
        for (int c = 0; c < k; ++c) {
            double sum = 0.0;
            int count = 0;
            for (int i = 0; i < n; ++i) {
                if (model.assignment[i] == c) {
                    sum += points[i];
                    ++count;
                }
            }
            if (count > 0) {
                double mean = sum / count;
                movement = std::max(movement, std::abs(mean - centroids[c]));
                centroids[c] = mean;
            }
        }

        model.inertia_history.push_back(detail::inertia_of(points, centroids, model.assignment));
        model.iterations = iter + 1;

        if (model.assignment == previous || movement <= tol) break;
        previous = model.assignment;
    }

    // Final pass pins the documented invariant: each point sits with its
    // nearest centroid under the converged positions.
    for (int i = 0; i < n; ++i) model.assignment[i] = detail::nearest_centroid(points[i], centroids);
    model.centroids = std::move(centroids);
    model.inertia = detail::inertia_of(points, model.centroids, model.assignment);
    detail::relabel_ascending(model);
    return model;
}

// Exact minimum-inertia clustering by enumerating every contiguous k-way
// split of the sorted points. Optimal 1-D clusters are contiguous in sorted
// order, so this search is exhaustive. Test oracle; guarded to small n.
inline ClusterModel brute_force_clusters(const std::vector<double>& points, int k) {
    const int n = static_cast<int>(points.size());
    if (n > 15) throw ValidationError("brute_force_clusters: limited to 15 points, got " +
                                      std::to_string(n));
    if (k < 1) throw ValidationError("brute_force_clusters: k must be positive");
    if (k > n) {
        throw ValidationError("brute_force_clusters: k = " + std::to_string(k) +
                              " exceeds point count " + std::to_string(n));
    }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return points[a] < points[b]; });

    // cuts[j] = first sorted position of group j+1
    std::vector<int> cuts(k - 1);
    std::vector<int> best_cuts;
    double best_inertia = std::numeric_limits<double>::infinity();

    auto evaluate = [&]() {
        double total = 0.0;
        int begin = 0;
        for (int g = 0; g < k; ++g) {
            int end = (g == k - 1) ? n : cuts[g];
            double sum = 0.0;
            for (int p = begin; p < end; ++p) sum += points[order[p]];
            double mean = sum / (end - begin);
            for (int p = begin; p < end; ++p) {
                double d = points[order[p]] - mean;
                total += d * d;
            }
            begin = end;
        }
        if (total < best_inertia) {
            best_inertia = total;
            best_cuts = cuts;
        }
    };

    auto enumerate = [&](auto&& self, int pos, int low) -> void {
        if (pos == k - 1) {
            evaluate();
            return;
        }
        for (int cut = low; cut <= n - (k - 1 - pos); ++cut) {
            cuts[pos] = cut;
            self(self, pos + 1, cut + 1);
        }
    };
    if (k == 1) {
        evaluate();
    } else {
        enumerate(enumerate, 0, 1);
    }

    ClusterModel model;
    model.assignment.assign(n, 0);
    model.centroids.assign(k, 0.0);
    int begin = 0;
    for (int g = 0; g < k; ++g) {
        int end = (g == k - 1) ? n : best_cuts[g];
        double sum = 0.0;
        for (int p = begin; p < end; ++p) {
            model.assignment[order[p]] = g;
            sum += points[order[p]];
        }
        model.centroids[g] = sum / (end - begin);
        begin = end;
    }
    model.inertia = best_inertia;
    model.iterations = 0;
    return model;
}

}  // namespace sightkit
