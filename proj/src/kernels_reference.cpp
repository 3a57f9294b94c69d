// Single-threaded reference versions of the kernels in kernels_omp.cpp.

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "pm/kernels.hpp"

namespace pm::reference {

void nearest_center(PointView points, PointView centers, std::span<int> assignment, std::span<double> sqdist) {
    for (std::size_t i = 0; i < points.size(); ++i) {
        int best = -1;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < centers.size(); ++c) {
            double d = squared_distance(points.row(i), centers.row(c));
            if (best < 0 || d < best_d) {
                best = static_cast<int>(c);
                best_d = d;
            }
        }
        assignment[i] = best;
        sqdist[i] = best_d;
    }
}

void update_min_sqdist(PointView points, std::size_t center, std::span<double> min_sqdist) {
    for (std::size_t i = 0; i < points.size(); ++i)
        min_sqdist[i] = std::min(min_sqdist[i], squared_distance(points.row(i), points.row(center)));
}

void gaussian_log_densities(PointView points, PointView means, PointView variances,
                            std::span<const double> log_weights, std::span<double> out) {
    const std::size_t k = means.size();
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (std::size_t c = 0; c < k; ++c) {
            if (log_weights[c] == -std::numeric_limits<double>::infinity()) {
                out[i * k + c] = log_weights[c];
                continue;
            }
            double log_norm = 0.0;
            double quad = 0.0;
            for (std::size_t j = 0; j < points.dim; ++j) {
                const double var = variances.row(c)[j];
                const double d = points.row(i)[j] - means.row(c)[j];
                log_norm += std::log(2.0 * std::numbers::pi * var);
                quad += d * d / var;
            }
            out[i * k + c] = log_weights[c] - 0.5 * log_norm - 0.5 * quad;
        }
    }
}

void silhouette_values(PointView points, std::span<const int> assignment, std::size_t k, std::span<double> out) {
    const std::size_t n = points.size();
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> sum(k, 0.0);
        std::vector<std::size_t> count(k, 0);
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            sum[assignment[j]] += std::sqrt(squared_distance(points.row(i), points.row(j)));
            ++count[assignment[j]];
        }
        const auto own = static_cast<std::size_t>(assignment[i]);
        if (count[own] == 0) {
            out[i] = 0.0;
            continue;
        }
        const double a = sum[own] / static_cast<double>(count[own]);
        double b = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < k; ++c)
            if (c != own && count[c] > 0) b = std::min(b, sum[c] / static_cast<double>(count[c]));
        const double m = std::max(a, b);
        out[i] = m > 0.0 && std::isfinite(b) ? (b - a) / m : 0.0;
    }
}

}  // namespace pm::reference
