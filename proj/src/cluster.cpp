#include "pm/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <set>

#include "pm/error.hpp"

namespace pm {

//------------------------------------------------------------------------------------------------
// Dataset

Dataset Dataset::from_traces(const std::vector<TraceVector>& traces) {
    Dataset d(kTraceLength);
    for (const TraceVector& t : traces) d.add({t.lemma, t.patch_index}, t.values);
    return d;
}

Dataset Dataset::from_rows(const std::vector<std::vector<double>>& rows) {
    Dataset d(rows.empty() ? 0 : rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i) d.add({"p" + std::to_string(i), 0}, rows[i]);
    return d;
}

void Dataset::add(PointLabel label, std::span<const double> coords) {
    if (coords.size() != dim_)
        throw Error(ErrorKind::DimensionMismatch,
                    "point has " + std::to_string(coords.size()) + " coordinates, dataset " + std::to_string(dim_));
    coords_.insert(coords_.end(), coords.begin(), coords.end());
    labels_.push_back(std::move(label));
}

std::string_view to_string(ClusterAlgo algo) {
    switch (algo) {
        case ClusterAlgo::KMeans: return "kmeans";
        case ClusterAlgo::FarthestFirst: return "ff";
        case ClusterAlgo::Gaussian: return "gmm";
    }
    return "?";
}

ClusterAlgo parse_cluster_algo(std::string_view name) {
    if (name == "kmeans") return ClusterAlgo::KMeans;
    if (name == "ff") return ClusterAlgo::FarthestFirst;
    if (name == "gmm") return ClusterAlgo::Gaussian;
    throw Error(ErrorKind::BadArgument, "unknown clustering algorithm '" + std::string(name) + "'");
}

std::size_t granularity_to_k(std::size_t n, int granularity) {
    if (granularity < 1 || granularity > 5)
        throw Error(ErrorKind::BadGranularity, "granularity must be 1..5, got " + std::to_string(granularity));
    if (n < 2) throw Error(ErrorKind::BadGranularity, "need at least 2 points, got " + std::to_string(n));
    const auto denom = static_cast<std::size_t>(10 - granularity);
    std::size_t k = std::max<std::size_t>(2, (n + denom - 1) / denom);
    return std::min(k, n);
}

namespace {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    // 53-bit uniform in [0,1), independent of the standard library's distributions.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    std::size_t index(std::size_t n) { return static_cast<std::size_t>(engine_() % n); }

private:
    std::mt19937_64 engine_;
};

void check_k(const Dataset& data, std::size_t k) {
    if (data.empty()) throw Error(ErrorKind::EmptyDataset, "cannot cluster an empty dataset");
    if (k < 1 || k > data.size())
        throw Error(ErrorKind::BadK, "k=" + std::to_string(k) + " outside 1.." + std::to_string(data.size()));
}

std::vector<double> copy_rows(const Dataset& data, const std::vector<std::size_t>& idx) {
    std::vector<double> out;
    out.reserve(idx.size() * data.dim());
    for (std::size_t i : idx) {
        auto p = data.point(i);
        out.insert(out.end(), p.begin(), p.end());
    }
    return out;
}

std::vector<std::vector<double>> unflatten(const std::vector<double>& flat, std::size_t dim) {
    std::vector<std::vector<double>> out;
    for (std::size_t i = 0; dim > 0 && i < flat.size(); i += dim)
        out.emplace_back(flat.begin() + static_cast<std::ptrdiff_t>(i),
                         flat.begin() + static_cast<std::ptrdiff_t>(i + dim));
    return out;
}

// D^2-weighted seeding. Falls back to the smallest unused index once every remaining point
// coincides with a chosen center.
std::vector<std::size_t> kmeanspp_seeds(const Dataset& data, std::size_t k, Rng& rng) {
    const std::size_t n = data.size();
    std::vector<std::size_t> seeds{rng.index(n)};
    std::vector<double> mind(n, std::numeric_limits<double>::infinity());
    kernels::update_min_sqdist(data.view(), seeds.back(), mind);
    while (seeds.size() < k) {
        double total = 0.0;
        for (double d : mind) total += d;
        std::size_t pick = n;
        if (total > 0.0) {
            const double u = rng.uniform01() * total;
            double acc = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                if (mind[i] <= 0.0) continue;
                acc += mind[i];
                pick = i;
                if (acc > u) break;
            }
        } else {
            for (std::size_t i = 0; i < n && pick == n; ++i)
                if (std::find(seeds.begin(), seeds.end(), i) == seeds.end()) pick = i;
        }
        seeds.push_back(pick);
        kernels::update_min_sqdist(data.view(), pick, mind);
    }
    return seeds;
}

// Moves the point farthest from its center (among clusters with at least two points) into
// each empty cluster.
void repair_empty(const Dataset& data, std::vector<int>& assignment, std::vector<double>& sqdist,
                  std::vector<double>& centers, std::size_t k) {
    std::vector<std::size_t> counts(k, 0);
    for (int a : assignment) ++counts[a];
    const std::size_t dim = data.dim();
    for (std::size_t c = 0; c < k; ++c) {
        if (counts[c] > 0) continue;
        std::size_t far = assignment.size();
        for (std::size_t i = 0; i < assignment.size(); ++i) {
            if (counts[assignment[i]] < 2) continue;
            if (far == assignment.size() || sqdist[i] > sqdist[far]) far = i;
        }
        if (far == assignment.size()) break;  // unreachable when k <= n
        --counts[assignment[far]];
        assignment[far] = static_cast<int>(c);
        counts[c] = 1;
        sqdist[far] = 0.0;
        auto p = data.point(far);
        std::copy(p.begin(), p.end(), centers.begin() + static_cast<std::ptrdiff_t>(c * dim));
    }
}

std::vector<double> cluster_means(const Dataset& data, const std::vector<int>& assignment, std::size_t k,
                                  const std::vector<double>& previous) {
    const std::size_t dim = data.dim();
    std::vector<double> sums(k * dim, 0.0);
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < assignment.size(); ++i) {
        auto p = data.point(i);
        const auto c = static_cast<std::size_t>(assignment[i]);
        ++counts[c];
        for (std::size_t j = 0; j < dim; ++j) sums[c * dim + j] += p[j];
    }
    for (std::size_t c = 0; c < k; ++c) {
        for (std::size_t j = 0; j < dim; ++j) {
            sums[c * dim + j] = counts[c] ? sums[c * dim + j] / static_cast<double>(counts[c]) : previous[c * dim + j];
        }
    }
    return sums;
}

double sum(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
}

struct LloydRun {
    std::vector<int> assignment;
    std::vector<double> centers;
    std::vector<double> cost_trace;
};

LloydRun lloyd(const Dataset& data, std::size_t k, std::vector<double> centers, const KMeansOptions& opt) {
    const std::size_t n = data.size();
    const std::size_t dim = data.dim();
    LloydRun run;
    std::vector<int> assignment(n);
    std::vector<double> sqdist(n);

    auto assign = [&](std::vector<int>& a) {
        kernels::nearest_center(data.view(), {centers, dim}, a, sqdist);
        repair_empty(data, a, sqdist, centers, k);
        run.cost_trace.push_back(sum(sqdist));
    };

    assign(assignment);
    for (int it = 0; it < opt.max_iters; ++it) {
        std::vector<double> next = cluster_means(data, assignment, k, centers);
        double shift = 0.0;
        for (std::size_t c = 0; c < k; ++c)
            shift = std::max(shift, std::sqrt(squared_distance(std::span(next).subspan(c * dim, dim),
                                                               std::span(centers).subspan(c * dim, dim))));
        centers = std::move(next);
        std::vector<int> updated(n);
        assign(updated);
        const bool changed = updated != assignment;
        assignment = std::move(updated);
        if (!changed || shift < opt.tol) break;
    }
    // Report the centers that belong to the final assignment.
    centers = cluster_means(data, assignment, k, centers);
    double final_cost = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        final_cost += squared_distance(data.point(i), std::span(centers).subspan(assignment[i] * dim, dim));
    if (final_cost < run.cost_trace.back()) run.cost_trace.push_back(final_cost);

    run.assignment = std::move(assignment);
    run.centers = std::move(centers);
    return run;
}

}  // namespace

double kmeans_cost(const Dataset& data, std::span<const int> assignment,
                   const std::vector<std::vector<double>>& centers) {
    double cost = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) cost += squared_distance(data.point(i), centers[assignment[i]]);
    return cost;
}

ClusterModel kmeans(const Dataset& data, std::size_t k, const KMeansOptions& options) {
    check_k(data, k);
    if (options.n_init < 1) throw Error(ErrorKind::BadArgument, "n_init must be at least 1");
    Rng rng(options.seed);
    std::optional<LloydRun> best;
    double best_cost = std::numeric_limits<double>::infinity();
    for (int r = 0; r < options.n_init; ++r) {
        LloydRun run = lloyd(data, k, copy_rows(data, kmeanspp_seeds(data, k, rng)), options);
        const double cost = run.cost_trace.back();
        if (!best || cost < best_cost) {
            best_cost = cost;
            best = std::move(run);
        }
    }
    ClusterModel m;
    m.algo = ClusterAlgo::KMeans;
    m.k = k;
    m.dim = data.dim();
    m.seed = options.seed;
    m.assignment = std::move(best->assignment);
    m.centers = unflatten(best->centers, data.dim());
    m.cost_trace = std::move(best->cost_trace);
    return m;
}

ClusterModel farthest_first(const Dataset& data, std::size_t k) {
    check_k(data, k);
    const std::size_t n = data.size();
    const std::size_t dim = data.dim();

    std::vector<double> mean(dim, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < dim; ++j) mean[j] += data.point(i)[j];
    for (double& x : mean) x /= static_cast<double>(n);

    std::size_t first = 0;
    double first_d = squared_distance(data.point(0), mean);
    for (std::size_t i = 1; i < n; ++i) {
        const double d = squared_distance(data.point(i), mean);
        if (d < first_d) {
            first_d = d;
            first = i;
        }
    }

    std::vector<std::size_t> chosen{first};
    std::vector<bool> is_center(n, false);
    is_center[first] = true;
    std::vector<double> mind(n, std::numeric_limits<double>::infinity());
    kernels::update_min_sqdist(data.view(), first, mind);
    while (chosen.size() < k) {
        std::size_t pick = n;
        for (std::size_t i = 0; i < n; ++i) {
            if (is_center[i]) continue;
            if (pick == n || mind[i] > mind[pick]) pick = i;
        }
        chosen.push_back(pick);
        is_center[pick] = true;
        kernels::update_min_sqdist(data.view(), pick, mind);
    }

    ClusterModel m;
    m.algo = ClusterAlgo::FarthestFirst;
    m.k = k;
    m.dim = dim;
    std::vector<double> centers = copy_rows(data, chosen);
    m.assignment.resize(n);
    std::vector<double> sqdist(n);
    kernels::nearest_center(data.view(), {centers, dim}, m.assignment, sqdist);
    m.centers = unflatten(centers, dim);
    return m;
}

//------------------------------------------------------------------------------------------------
// Gaussian mixture

namespace {

struct Mixture {
    std::vector<double> means;      // k x dim
    std::vector<double> variances;  // k x dim
    std::vector<double> weights;    // k
};

// Fills `resp` (n x k) with responsibilities and returns the data log-likelihood.
double expectation(const Dataset& data, const Mixture& mix, std::size_t k, std::vector<double>& logdens,
                   std::vector<double>& resp) {
    const std::size_t n = data.size();
    const std::size_t dim = data.dim();
    std::vector<double> log_w(k);
    for (std::size_t c = 0; c < k; ++c)
        log_w[c] = mix.weights[c] > 0.0 ? std::log(mix.weights[c]) : -std::numeric_limits<double>::infinity();
    kernels::gaussian_log_densities(data.view(), {mix.means, dim}, {mix.variances, dim}, log_w, logdens);

    double loglik = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double* row = &logdens[i * k];
        const double top = *std::max_element(row, row + k);
        double s = 0.0;
        for (std::size_t c = 0; c < k; ++c) s += std::exp(row[c] - top);
        const double lse = top + std::log(s);
        for (std::size_t c = 0; c < k; ++c) resp[i * k + c] = std::exp(row[c] - lse);
        loglik += lse;
    }
    return loglik;
}

void maximization(const Dataset& data, Mixture& mix, std::size_t k, const std::vector<double>& resp,
                  double variance_floor) {
    const std::size_t n = data.size();
    const std::size_t dim = data.dim();
    for (std::size_t c = 0; c < k; ++c) {
        double nk = 0.0;
        for (std::size_t i = 0; i < n; ++i) nk += resp[i * k + c];
        mix.weights[c] = nk / static_cast<double>(n);
        // A component with no responsibility keeps its parameters; its weight is 0.
        if (!(nk > 0.0)) continue;
        for (std::size_t j = 0; j < dim; ++j) {
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i) s += resp[i * k + c] * data.point(i)[j];
            const double mu = s / nk;
            double v = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double d = data.point(i)[j] - mu;
                v += resp[i * k + c] * d * d;
            }
            mix.means[c * dim + j] = mu;
            mix.variances[c * dim + j] = std::max(v / nk, variance_floor);
        }
    }
}

std::vector<int> argmax_rows(const std::vector<double>& m, std::size_t n, std::size_t k) {
    std::vector<int> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double* row = &m[i * k];
        out[i] = static_cast<int>(std::max_element(row, row + k) - row);
    }
    return out;
}

}  // namespace

ClusterModel gaussian_em(const Dataset& data, std::size_t k, const GaussianOptions& options) {
    check_k(data, k);
    const std::size_t n = data.size();
    const std::size_t dim = data.dim();
    if (k > 1) {
        bool identical = true;
        for (std::size_t i = 1; i < n && identical; ++i) identical = squared_distance(data.point(i), data.point(0)) == 0.0;
        if (identical) throw Error(ErrorKind::DegenerateData, "all points are identical");
    }

    Rng rng(options.seed);
    Mixture mix;
    mix.means = copy_rows(data, kmeanspp_seeds(data, k, rng));
    std::vector<double> global_var(dim, 0.0);
    for (std::size_t j = 0; j < dim; ++j) {
        double mu = 0.0;
        for (std::size_t i = 0; i < n; ++i) mu += data.point(i)[j];
        mu /= static_cast<double>(n);
        double v = 0.0;
        for (std::size_t i = 0; i < n; ++i) v += (data.point(i)[j] - mu) * (data.point(i)[j] - mu);
        global_var[j] = std::max(v / static_cast<double>(n), options.variance_floor);
    }
    mix.variances.reserve(k * dim);
    for (std::size_t c = 0; c < k; ++c) mix.variances.insert(mix.variances.end(), global_var.begin(), global_var.end());
    mix.weights.assign(k, 1.0 / static_cast<double>(k));

    ClusterModel m;
    m.algo = ClusterAlgo::Gaussian;
    m.k = k;
    m.dim = dim;
    m.seed = options.seed;

    std::vector<double> logdens(n * k), resp(n * k);
    m.loglik_trace.push_back(expectation(data, mix, k, logdens, resp));
    for (int it = 0; it < options.max_iters; ++it) {
        maximization(data, mix, k, resp, options.variance_floor);
        m.loglik_trace.push_back(expectation(data, mix, k, logdens, resp));
        const std::size_t t = m.loglik_trace.size();
        if (std::abs(m.loglik_trace[t - 1] - m.loglik_trace[t - 2]) < options.tol) break;
    }

    m.assignment = argmax_rows(logdens, n, k);
    for (std::size_t c = 0; c < k; ++c) {
        GaussianComponent g;
        g.mean.assign(mix.means.begin() + static_cast<std::ptrdiff_t>(c * dim),
                      mix.means.begin() + static_cast<std::ptrdiff_t>((c + 1) * dim));
        g.variance.assign(mix.variances.begin() + static_cast<std::ptrdiff_t>(c * dim),
                          mix.variances.begin() + static_cast<std::ptrdiff_t>((c + 1) * dim));
        g.weight = mix.weights[c];
        m.components.push_back(std::move(g));
    }
    return m;
}

std::vector<int> predict(const ClusterModel& model, const Dataset& data) {
    if (data.dim() != model.dim) throw Error(ErrorKind::DimensionMismatch, "dataset and model dimensions differ");
    const std::size_t n = data.size();
    const std::size_t k = model.k;
    std::vector<int> out(n);
    if (model.algo == ClusterAlgo::Gaussian) {
        std::vector<double> means, vars, log_w;
        for (const GaussianComponent& g : model.components) {
            means.insert(means.end(), g.mean.begin(), g.mean.end());
            vars.insert(vars.end(), g.variance.begin(), g.variance.end());
            log_w.push_back(g.weight > 0.0 ? std::log(g.weight) : -std::numeric_limits<double>::infinity());
        }
        std::vector<double> logdens(n * k);
        kernels::gaussian_log_densities(data.view(), {means, model.dim}, {vars, model.dim}, log_w, logdens);
        return argmax_rows(logdens, n, k);
    }
    std::vector<double> centers;
    for (const auto& c : model.centers) centers.insert(centers.end(), c.begin(), c.end());
    std::vector<double> sqdist(n);
    kernels::nearest_center(data.view(), {centers, model.dim}, out, sqdist);
    return out;
}

//------------------------------------------------------------------------------------------------
// Families

double cluster_proximity(const Dataset& data, std::span<const int> assignment, int cluster) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < assignment.size(); ++i)
        if (assignment[i] == cluster) idx.push_back(i);
    if (idx.size() < 2 || data.dim() == 0) return 1.0;
    double total = 0.0;
    std::size_t pairs = 0;
    for (std::size_t a = 0; a < idx.size(); ++a)
        for (std::size_t b = a + 1; b < idx.size(); ++b, ++pairs)
            total += std::sqrt(squared_distance(data.point(idx[a]), data.point(idx[b])));
    const double mean = total / static_cast<double>(pairs);
    return std::clamp(1.0 - mean / std::sqrt(static_cast<double>(data.dim())), 0.0, 1.0);
}

std::vector<ProofFamily> build_families(const Dataset& data, const ClusterModel& model, double proximity_threshold) {
    if (model.assignment.size() != data.size())
        throw Error(ErrorKind::BadModel, "model assignment does not cover the dataset");
    std::vector<std::set<std::string>> members(model.k);
    for (std::size_t i = 0; i < data.size(); ++i) members[model.assignment[i]].insert(data.label(i).lemma);

    std::vector<ProofFamily> out;
    for (std::size_t c = 0; c < model.k; ++c) {
        if (members[c].size() < 2) continue;
        const double prox = cluster_proximity(data, model.assignment, static_cast<int>(c));
        if (prox < proximity_threshold) continue;
        out.push_back({{members[c].begin(), members[c].end()}, prox, c});
    }
    std::stable_sort(out.begin(), out.end(), [](const ProofFamily& a, const ProofFamily& b) {
        if (a.proximity != b.proximity) return a.proximity > b.proximity;
        return a.cluster < b.cluster;
    });
    return out;
}

std::vector<std::pair<std::string, double>> similar_proofs(std::string_view lemma,
                                                           const std::vector<ProofFamily>& families) {
    std::map<std::string, double> best;
    for (const ProofFamily& f : families) {
        if (std::find(f.members.begin(), f.members.end(), lemma) == f.members.end()) continue;
        for (const std::string& m : f.members) {
            if (m == lemma) continue;
            auto [it, inserted] = best.emplace(m, f.proximity);
            if (!inserted) it->second = std::max(it->second, f.proximity);
        }
    }
    std::vector<std::pair<std::string, double>> out(best.begin(), best.end());
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    return out;
}

}  // namespace pm
