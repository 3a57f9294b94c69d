#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "pm/cluster.hpp"
#include "support.hpp"

using namespace pm;
using pm::test::error_kind;

namespace {

using Rows = std::vector<std::vector<double>>;

// Partition as a set of index sets, so labels do not matter.
std::set<std::set<std::size_t>> partition(const std::vector<int>& assignment) {
    std::map<int, std::set<std::size_t>> groups;
    for (std::size_t i = 0; i < assignment.size(); ++i) groups[assignment[i]].insert(i);
    std::set<std::set<std::size_t>> out;
    for (auto& [_, g] : groups) out.insert(g);
    return out;
}

Rows random_rows(std::mt19937_64& rng, std::size_t n, std::size_t dim) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Rows r(n, std::vector<double>(dim));
    for (auto& row : r)
        for (double& x : row) x = u(rng);
    return r;
}

}  // namespace

TEST_CASE("granularity_to_k") {
    CHECK(granularity_to_k(100, 3) == 15);
    CHECK(granularity_to_k(5, 1) == 2);
    CHECK(granularity_to_k(20, 5) == 4);
    CHECK(granularity_to_k(2, 5) == 2);
    CHECK(error_kind([] { granularity_to_k(10, 0); }) == ErrorKind::BadGranularity);
    CHECK(error_kind([] { granularity_to_k(10, 6); }) == ErrorKind::BadGranularity);
    CHECK(error_kind([] { granularity_to_k(1, 3); }) == ErrorKind::BadGranularity);
    for (int g = 1; g < 5; ++g) CHECK(granularity_to_k(500, g) <= granularity_to_k(500, g + 1));
}

TEST_CASE("Dataset") {
    Dataset d = Dataset::from_rows({{1, 2}, {3, 4}});
    CHECK(d.size() == 2);
    CHECK(d.dim() == 2);
    CHECK(d.label(1).lemma == "p1");
    CHECK(d.point(1)[0] == 3);
    CHECK(error_kind([&] { d.add({"x", 0}, std::vector<double>{1.0}); }) == ErrorKind::DimensionMismatch);
}

TEST_CASE("kmeans: four points in two pairs") {
    Dataset d = Dataset::from_rows({{0, 0}, {0, 1}, {10, 10}, {10, 11}});
    ClusterModel m = kmeans(d, 2, {.seed = 1});
    CHECK(partition(m.assignment) == std::set<std::set<std::size_t>>{{0, 1}, {2, 3}});
    CHECK(kmeans_cost(d, m.assignment, m.centers) == doctest::Approx(test::brute_force_kmeans_cost({{0, 0}, {0, 1}, {10, 10}, {10, 11}}, 2)));
}

TEST_CASE("kmeans: k = 1 and k = n") {
    Dataset d = Dataset::from_rows({{1, 0}, {2, 4}, {6, 2}});
    ClusterModel one = kmeans(d, 1);
    REQUIRE(one.centers.size() == 1);
    CHECK(one.centers[0][0] == doctest::Approx(3.0));
    CHECK(one.centers[0][1] == doctest::Approx(2.0));
    ClusterModel all = kmeans(d, 3);
    CHECK(partition(all.assignment).size() == 3);
    CHECK(kmeans_cost(d, all.assignment, all.centers) == 0.0);
    CHECK(error_kind([&] { kmeans(d, 0); }) == ErrorKind::BadK);
    CHECK(error_kind([&] { kmeans(d, 4); }) == ErrorKind::BadK);
    CHECK(error_kind([] { kmeans(Dataset(2), 1); }) == ErrorKind::EmptyDataset);
}

TEST_CASE("kmeans: cost never increases across iterations") {
    std::mt19937_64 rng(10);
    for (int t = 0; t < 30; ++t) {
        Dataset d = Dataset::from_rows(random_rows(rng, 40, 3));
        ClusterModel m = kmeans(d, 1 + rng() % 6, {.seed = rng(), .n_init = 1});
        for (std::size_t i = 1; i < m.cost_trace.size(); ++i) CHECK(m.cost_trace[i] <= m.cost_trace[i - 1] + 1e-12);
        CHECK(kmeans_cost(d, m.assignment, m.centers) == doctest::Approx(m.cost_trace.back()));
    }
}

TEST_CASE("kmeans: matches the brute-force optimum on small sets") {
    std::mt19937_64 rng(11);
    int optimal = 0, runs = 0;
    for (int t = 0; t < 40; ++t) {
        Rows rows = random_rows(rng, 3 + rng() % 6, 2);
        const std::size_t k = 1 + rng() % 3;
        const double best = test::brute_force_kmeans_cost(rows, k);
        Dataset d = Dataset::from_rows(rows);
        ClusterModel m = kmeans(d, k, {.seed = static_cast<std::uint64_t>(t)});
        ++runs;
        if (std::abs(kmeans_cost(d, m.assignment, m.centers) - best) <= 1e-9) ++optimal;
    }
    CHECK(optimal >= runs * 95 / 100);
}

TEST_CASE("kmeans: empty clusters are repaired") {
    // Duplicated points force k-means++ to fall back; every id must still be used.
    Dataset d = Dataset::from_rows({{0}, {0}, {0}, {5}});
    ClusterModel m = kmeans(d, 3, {.seed = 4});
    std::set<int> used(m.assignment.begin(), m.assignment.end());
    CHECK(used.size() == 3);
}

TEST_CASE("kmeans: deterministic for a seed") {
    std::mt19937_64 rng(12);
    Dataset d = Dataset::from_rows(random_rows(rng, 50, 4));
    ClusterModel a = kmeans(d, 4, {.seed = 77});
    ClusterModel b = kmeans(d, 4, {.seed = 77});
    CHECK(a.assignment == b.assignment);
    CHECK(a.centers == b.centers);
    CHECK(a.cost_trace == b.cost_trace);
}

TEST_CASE("farthest_first: 1-d hand example") {
    Dataset d = Dataset::from_rows({{0}, {1}, {10}});
    ClusterModel m = farthest_first(d, 2);
    CHECK(m.centers == Rows{{1}, {10}});
    CHECK(m.assignment == std::vector<int>{0, 0, 1});
    ClusterModel one = farthest_first(d, 1);
    CHECK(one.centers == Rows{{1}});
}

TEST_CASE("farthest_first: duplicates stay together") {
    Dataset d = Dataset::from_rows({{3, 3}, {0, 0}, {3, 3}, {9, 1}, {0, 0}});
    ClusterModel m = farthest_first(d, 2);
    CHECK(m.assignment[0] == m.assignment[2]);
    CHECK(m.assignment[1] == m.assignment[4]);
}

TEST_CASE("farthest_first: permutation stable on generic points") {
    std::mt19937_64 rng(13);
    for (int t = 0; t < 30; ++t) {
        Rows rows = random_rows(rng, 12, 3);
        std::vector<std::size_t> perm(rows.size());
        for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
        std::shuffle(perm.begin(), perm.end(), rng);
        Rows shuffled;
        for (std::size_t i : perm) shuffled.push_back(rows[i]);
        const std::size_t k = 1 + rng() % 4;
        auto a = farthest_first(Dataset::from_rows(rows), k).assignment;
        auto b = farthest_first(Dataset::from_rows(shuffled), k).assignment;
        std::vector<int> b_back(rows.size());
        for (std::size_t i = 0; i < perm.size(); ++i) b_back[perm[i]] = b[i];
        CHECK(partition(a) == partition(b_back));
    }
}

TEST_CASE("gaussian_em: k = 1 is the closed-form fit") {
    Rows rows{{1, 5}, {2, 5}, {6, 5}, {3, 5}};
    ClusterModel m = gaussian_em(Dataset::from_rows(rows), 1);
    REQUIRE(m.components.size() == 1);
    CHECK(m.components[0].weight == 1.0);
    CHECK(m.components[0].mean[0] == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(m.components[0].variance[0] == doctest::Approx(3.5).epsilon(1e-12));
    CHECK(m.components[0].variance[1] == 1e-6);
}

TEST_CASE("gaussian_em: log-likelihood is non-decreasing and invariants hold") {
    std::mt19937_64 rng(14);
    for (int t = 0; t < 20; ++t) {
        Dataset d = Dataset::from_rows(random_rows(rng, 30, 3));
        ClusterModel m = gaussian_em(d, 1 + rng() % 4, {.seed = rng()});
        for (std::size_t i = 1; i < m.loglik_trace.size(); ++i)
            CHECK(m.loglik_trace[i] >= m.loglik_trace[i - 1] - 1e-9);
        double w = 0.0;
        for (const auto& g : m.components) {
            w += g.weight;
            for (double v : g.variance) CHECK(v >= 1e-6);
        }
        CHECK(w == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(predict(m, d) == m.assignment);
    }
}

TEST_CASE("gaussian_em: separated blobs agree with kmeans") {
    Rows rows{{0, 0}, {0.1, 0}, {0, 0.1}, {5, 5}, {5.1, 5}, {5, 5.1}};
    Dataset d = Dataset::from_rows(rows);
    auto g = partition(gaussian_em(d, 2, {.seed = 3}).assignment);
    auto k = partition(kmeans(d, 2, {.seed = 3}).assignment);
    CHECK(g == k);
    CHECK(g == std::set<std::set<std::size_t>>{{0, 1, 2}, {3, 4, 5}});
}

TEST_CASE("gaussian_em: degenerate data") {
    Dataset d = Dataset::from_rows({{1, 1}, {1, 1}, {1, 1}});
    CHECK(error_kind([&] { gaussian_em(d, 2); }) == ErrorKind::DegenerateData);
    CHECK(gaussian_em(d, 1).components.size() == 1);
    CHECK(error_kind([&] { gaussian_em(d, 4); }) == ErrorKind::BadK);
}

TEST_CASE("predict reproduces the fitted assignment") {
    std::mt19937_64 rng(15);
    Dataset d = Dataset::from_rows(random_rows(rng, 25, 2));
    for (const ClusterModel& m : {kmeans(d, 3, {.seed = 1}), farthest_first(d, 3)}) CHECK(predict(m, d) == m.assignment);
    CHECK(error_kind([&] { predict(kmeans(d, 2), Dataset::from_rows({{1, 2, 3}})); }) == ErrorKind::DimensionMismatch);
}

TEST_CASE("families: identical points give proximity 1") {
    Dataset d(3);
    d.add({"a", 0}, std::vector<double>{0.2, 0.2, 0.2});
    d.add({"b", 0}, std::vector<double>{0.2, 0.2, 0.2});
    d.add({"c", 0}, std::vector<double>{0.9, 0.9, 0.9});
    d.add({"c", 1}, std::vector<double>{0.8, 0.9, 0.9});
    ClusterModel m;
    m.k = 2;
    m.dim = 3;
    m.assignment = {0, 0, 1, 1};
    auto fam = build_families(d, m, 0.0);
    REQUIRE(fam.size() == 1);  // cluster 1 holds only lemma c
    CHECK(fam[0].members == std::vector<std::string>{"a", "b"});
    CHECK(fam[0].proximity == 1.0);
    CHECK(build_families(d, m, 1.0).size() == 1);
    CHECK(build_families(d, m, 1.0 + 1e-9).empty());
}

TEST_CASE("families: threshold filters and order") {
    Dataset d(1);
    const std::vector<std::pair<std::string, double>> pts{{"a", 0.0}, {"b", 0.5}, {"c", 0.0}, {"d", 0.1}};
    for (const auto& [n, x] : pts) d.add({n, 0}, std::vector<double>{x});
    ClusterModel m;
    m.k = 2;
    m.dim = 1;
    m.assignment = {0, 0, 1, 1};
    auto all = build_families(d, m, 0.0);
    REQUIRE(all.size() == 2);
    CHECK(all[0].members == std::vector<std::string>{"c", "d"});
    CHECK(all[0].proximity == doctest::Approx(0.9));
    CHECK(all[1].proximity == doctest::Approx(0.5));
    CHECK(build_families(d, m, 0.6).size() == 1);
    for (const auto& f : all) {
        CHECK(f.proximity >= 0.0);
        CHECK(f.proximity <= 1.0);
        CHECK(f.members.size() >= 2);
    }
}

TEST_CASE("similar_proofs") {
    std::vector<ProofFamily> fams{{{"a", "b", "c"}, 0.9, 0}};
    CHECK(similar_proofs("a", fams) == std::vector<std::pair<std::string, double>>{{"b", 0.9}, {"c", 0.9}});
    CHECK(similar_proofs("z", fams).empty());
    std::vector<ProofFamily> two{{{"a", "b"}, 0.7, 0}, {{"a", "b", "d"}, 0.9, 1}, {{"a", "e"}, 0.8, 2}};
    CHECK(similar_proofs("a", two) ==
          std::vector<std::pair<std::string, double>>{{"b", 0.9}, {"d", 0.9}, {"e", 0.8}});
}

TEST_CASE("parse_cluster_algo") {
    CHECK(parse_cluster_algo("kmeans") == ClusterAlgo::KMeans);
    CHECK(parse_cluster_algo("ff") == ClusterAlgo::FarthestFirst);
    CHECK(parse_cluster_algo("gmm") == ClusterAlgo::Gaussian);
    CHECK(error_kind([] { parse_cluster_algo("dbscan"); }) == ErrorKind::BadArgument);
}
