#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "pm/kernels.hpp"

namespace pm {

double squared_distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        const double d = a[j] - b[j];
        s += d * d;
    }
    return s;
}

namespace kernels {

void nearest_center(PointView points, PointView centers, std::span<int> assignment, std::span<double> sqdist) {
    const auto n = static_cast<std::ptrdiff_t>(points.size());
    const std::size_t k = centers.size();
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const auto x = points.row(static_cast<std::size_t>(i));
        int best = 0;
        double best_d = squared_distance(x, centers.row(0));
        for (std::size_t c = 1; c < k; ++c) {
            const double d = squared_distance(x, centers.row(c));
            if (d < best_d) {
                best_d = d;
                best = static_cast<int>(c);
            }
        }
        assignment[i] = best;
        sqdist[i] = best_d;
    }
}

void update_min_sqdist(PointView points, std::size_t center, std::span<double> min_sqdist) {
    const auto n = static_cast<std::ptrdiff_t>(points.size());
    const auto c = points.row(center);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const double d = squared_distance(points.row(static_cast<std::size_t>(i)), c);
        if (d < min_sqdist[i]) min_sqdist[i] = d;
    }
}

void gaussian_log_densities(PointView points, PointView means, PointView variances,
                            std::span<const double> log_weights, std::span<double> out) {
    const auto n = static_cast<std::ptrdiff_t>(points.size());
    const std::size_t k = means.size();
    const std::size_t dim = points.dim;

    // Per-component normalizer: log w_c - 0.5 * sum_j log(2 pi var_cj)
    std::vector<double> base(k);
    for (std::size_t c = 0; c < k; ++c) {
        double s = 0.0;
        for (std::size_t j = 0; j < dim; ++j) s += std::log(2.0 * std::numbers::pi * variances.row(c)[j]);
        base[c] = log_weights[c] - 0.5 * s;
    }

#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const auto x = points.row(static_cast<std::size_t>(i));
        for (std::size_t c = 0; c < k; ++c) {
            double& o = out[static_cast<std::size_t>(i) * k + c];
            if (std::isinf(base[c]) && base[c] < 0) {
                o = -std::numeric_limits<double>::infinity();
                continue;
            }
            const auto mu = means.row(c);
            const auto var = variances.row(c);
            double q = 0.0;
            for (std::size_t j = 0; j < dim; ++j) {
                const double d = x[j] - mu[j];
                q += d * d / var[j];
            }
            o = base[c] - 0.5 * q;
        }
    }
}

void silhouette_values(PointView points, std::span<const int> assignment, std::size_t k, std::span<double> out) {
    const std::size_t n = points.size();
    std::vector<std::size_t> sizes(k, 0);
    for (std::size_t i = 0; i < n; ++i) ++sizes[assignment[i]];

    const auto sn = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel
    {
        std::vector<double> sums(k);
#pragma omp for schedule(dynamic, 16)
        for (std::ptrdiff_t si = 0; si < sn; ++si) {
            const auto i = static_cast<std::size_t>(si);
            const int own = assignment[i];
            if (sizes[own] < 2) {
                out[i] = 0.0;
                continue;
            }
            std::fill(sums.begin(), sums.end(), 0.0);
            const auto x = points.row(i);
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i) continue;
                sums[assignment[j]] += std::sqrt(squared_distance(x, points.row(j)));
            }
            const double a = sums[own] / static_cast<double>(sizes[own] - 1);
            double b = std::numeric_limits<double>::infinity();
            for (std::size_t c = 0; c < k; ++c) {
                if (static_cast<int>(c) == own || sizes[c] == 0) continue;
                b = std::min(b, sums[c] / static_cast<double>(sizes[c]));
            }
            const double m = std::max(a, b);
            out[i] = m > 0.0 && std::isfinite(b) ? (b - a) / m : 0.0;
        }
    }
}

}  // namespace kernels
}  // namespace pm
