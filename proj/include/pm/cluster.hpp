#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pm/kernels.hpp"
#include "pm/trace.hpp"

namespace pm {

struct PointLabel {
    std::string lemma;
    std::size_t patch_index = 0;
    bool operator==(const PointLabel&) const = default;
};

// Labelled points of a fixed dimension, stored row-major.
class Dataset {
public:
    explicit Dataset(std::size_t dim = kTraceLength) : dim_(dim) {}

    static Dataset from_traces(const std::vector<TraceVector>& traces);
    // Unlabelled rows (labels become "p<i>"); used by tests and small harnesses.
    static Dataset from_rows(const std::vector<std::vector<double>>& rows);

    void add(PointLabel label, std::span<const double> coords);

    std::size_t size() const { return labels_.size(); }
    std::size_t dim() const { return dim_; }
    bool empty() const { return labels_.empty(); }
    std::span<const double> point(std::size_t i) const { return view().row(i); }
    const PointLabel& label(std::size_t i) const { return labels_[i]; }
    PointView view() const { return {coords_, dim_}; }

private:
    std::size_t dim_;
    std::vector<double> coords_;
    std::vector<PointLabel> labels_;
};

enum class ClusterAlgo { KMeans, FarthestFirst, Gaussian };

std::string_view to_string(ClusterAlgo algo);
ClusterAlgo parse_cluster_algo(std::string_view name);  // "kmeans" | "ff" | "gmm"

struct GaussianComponent {
    std::vector<double> mean;
    std::vector<double> variance;
    double weight = 0.0;
};

struct ClusterModel {
    ClusterAlgo algo = ClusterAlgo::KMeans;
    std::size_t k = 0;
    std::size_t dim = 0;
    std::vector<int> assignment;                  // per point, in [0, k)
    std::vector<std::vector<double>> centers;     // k-means / farthest-first
    std::vector<GaussianComponent> components;    // Gaussian mixture
    std::uint64_t seed = 0;
    std::vector<double> loglik_trace;             // Gaussian mixture, one entry per E-step
    std::vector<double> cost_trace;               // k-means, cost after each assignment step
};

struct KMeansOptions {
    std::uint64_t seed = 0;
    int max_iters = 100;
    double tol = 1e-6;
    int n_init = 40;  // k-means++ restarts; the lowest-cost run is kept
};

struct GaussianOptions {
    std::uint64_t seed = 0;
    int max_iters = 100;
    double tol = 1e-6;
    double variance_floor = 1e-6;
};

// k = max(2, ceil(n / (10 - g))), clamped to n. Throws BadGranularity unless n >= 2 and
// g in 1..5.
std::size_t granularity_to_k(std::size_t n, int granularity);

// Within-cluster sum of squared distances to the given centers.
double kmeans_cost(const Dataset& data, std::span<const int> assignment,
                   const std::vector<std::vector<double>>& centers);

ClusterModel kmeans(const Dataset& data, std::size_t k, const KMeansOptions& options = {});
ClusterModel farthest_first(const Dataset& data, std::size_t k);
ClusterModel gaussian_em(const Dataset& data, std::size_t k, const GaussianOptions& options = {});

// Reassigns points to the nearest stored center, or the most responsible component.
std::vector<int> predict(const ClusterModel& model, const Dataset& data);

struct ProofFamily {
    std::vector<std::string> members;  // sorted, at least two
    double proximity = 0.0;            // 1 - mean pairwise distance / sqrt(dim)
    std::size_t cluster = 0;
};

// Per-cluster proximity over all point pairs, in [0,1].
double cluster_proximity(const Dataset& data, std::span<const int> assignment, int cluster);

std::vector<ProofFamily> build_families(const Dataset& data, const ClusterModel& model, double proximity_threshold);

// Co-members of `lemma` across its families with the best shared proximity, sorted by
// proximity descending then name.
std::vector<std::pair<std::string, double>> similar_proofs(std::string_view lemma,
                                                           const std::vector<ProofFamily>& families);

}  // namespace pm
