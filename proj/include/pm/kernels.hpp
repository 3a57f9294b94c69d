#pragma once

// Data-parallel inner loops of the clustering and evaluation code.
//
// Each kernel exists twice: an OpenMP version in `pm::kernels` used by the library and a
// straightforward loop in `pm::reference` kept for testing and benchmarking. Both write one
// result per point and leave reductions to the caller, so their outputs are bit-identical
// regardless of thread count.

#include <cstdint>
#include <span>

namespace pm {

// Row-major n x dim view of a point set.
struct PointView {
    std::span<const double> coords;
    std::size_t dim = 0;

    std::size_t size() const { return dim == 0 ? 0 : coords.size() / dim; }
    std::span<const double> row(std::size_t i) const { return coords.subspan(i * dim, dim); }
};

double squared_distance(std::span<const double> a, std::span<const double> b);

namespace kernels {

// For each point, the nearest of the k centers (ties to the lowest id) and its squared distance.
void nearest_center(PointView points, PointView centers, std::span<int> assignment, std::span<double> sqdist);

// min_sqdist[i] = min(min_sqdist[i], |x_i - x_center|^2)
void update_min_sqdist(PointView points, std::size_t center, std::span<double> min_sqdist);

// out[i*k + c] = log weight_c + log N(x_i | mean_c, diag(variance_c)). Components with zero
// weight get -inf.
void gaussian_log_densities(PointView points, PointView means, PointView variances,
                            std::span<const double> log_weights, std::span<double> out);

// Per-point silhouette values. Points of singleton clusters get 0, as does everything when
// k = 1. Every cluster id in [0, k) must be used at least once.
void silhouette_values(PointView points, std::span<const int> assignment, std::size_t k, std::span<double> out);

}  // namespace kernels

namespace reference {

void nearest_center(PointView points, PointView centers, std::span<int> assignment, std::span<double> sqdist);
void update_min_sqdist(PointView points, std::size_t center, std::span<double> min_sqdist);
void gaussian_log_densities(PointView points, PointView means, PointView variances,
                            std::span<const double> log_weights, std::span<double> out);
void silhouette_values(PointView points, std::span<const int> assignment, std::size_t k, std::span<double> out);

}  // namespace reference

}  // namespace pm
