// Acceptance gate: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>

#include <fmt/format.h>

#include "oracles.hpp"
#include "pm/atp_learn.hpp"
#include "pm/cluster.hpp"
#include "pm/eval.hpp"
#include "pm/model_io.hpp"
#include "pm/synth.hpp"
#include "pm/trace.hpp"

using namespace pm;
using test::Dense;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

Outcome nb_oracle() {
    std::mt19937_64 rng(1);
    double worst = 0.0;
    for (int t = 0; t < 200; ++t) {
        const std::size_t d = 1 + rng() % 8;
        const std::size_t n = 1 + rng() % 6;
        std::vector<Dense> pos, neg;
        for (std::size_t i = 0; i < n; ++i) (rng() % 2 ? pos : neg).push_back(test::random_dense(rng, d));
        const double alpha = 0.5 + static_cast<double>(rng() % 4) * 0.5;
        NaiveBayesClassifier nb = train_nb(test::make_set(pos, neg), d, alpha);
        for (std::size_t mask = 0; mask < (1u << d); ++mask) {
            Dense x(d);
            for (std::size_t i = 0; i < d; ++i) x[i] = (mask >> i) & 1;
            const double diff = std::abs(rank_nb(nb, test::to_sparse(x)).value() -
                                         test::dense_nb_posterior(pos, neg, x, alpha));
            worst = std::max(worst, diff);
        }
    }
    return {worst <= 1e-12, fmt::format("200 sets, every query vector; max |diff| = {:.3g}", worst)};
}

Outcome nb_anchor() {
    NaiveBayesClassifier nb = train_nb(test::make_set({{1, 0}}, {{0, 1}}), 2, 1.0);
    const double a = rank_nb(nb, test::to_sparse({1, 0})).value();
    const double b = rank_nb(nb, test::to_sparse({0, 1})).value();
    return {std::abs(a - 0.8) <= 1e-12 && std::abs(b - 0.2) <= 1e-12, fmt::format("ranks {:.15f} / {:.15f}", a, b)};
}

Corpus planted() { return ingest_sources(gen_synthetic_corpus(6, 6, 42)); }

Outcome planted_recall() {
    const auto start = std::chrono::steady_clock::now();
    Corpus c = planted();
    EvalReport r = eval_premise_selection(c, LearnAlgo::NaiveBayes, {}, 10);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const double baseline = 10.0 / static_cast<double>(c.size() - 1);
    return {r.recall_at_k >= 3 * baseline && secs < 60.0,
            fmt::format("recall@10 = {:.4f} vs 3 x {:.4f} = {:.4f}; MAP {:.4f}; {} goals; {:.2f}s", r.recall_at_k,
                        baseline, 3 * baseline, r.mean_average_precision, r.n_goals(), secs)};
}

Outcome trace_shape() {
    std::mt19937_64 rng(4);
    const char* tactics[] = {"intro", "apply", "rewrite", "simpl"};
    std::size_t bad = 0, vectors = 0;
    for (int t = 0; t < 1000; ++t) {
        const std::size_t n = rng() % 41;
        std::string prf = "proof g\n";
        for (std::size_t i = 0; i < n; ++i)
            prf += fmt::format(" {}{} [goal:p subgoals:{}].\n", tactics[rng() % 4], rng() % 2 ? " h" : "", rng() % 3);
        prf += "qed.\n";
        Corpus c = ingest_sources({{"t.fof", "lemma h : p(a).\nlemma g : p(b).\n"}, {"t.prf", prf}});
        auto v = patch_vectors("g", *c.find("g")->proof, c);
        const std::size_t expected = std::max<std::size_t>(1, (n + 4) / 5);
        if (v.size() != expected) ++bad;
        for (const auto& tv : v) {
            ++vectors;
            if (tv.values.size() != 30) ++bad;
        }
    }
    return {bad == 0, fmt::format("1000 proofs, {} vectors, {} violations", vectors, bad)};
}

Outcome clustering_oracles() {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::size_t worst_hits = 100, datasets = 0;
    for (std::size_t n = 1; n <= 8; ++n) {
        for (std::size_t k = 1; k <= std::min<std::size_t>(3, n); ++k) {
            for (int rep = 0; rep < 2; ++rep, ++datasets) {
                std::vector<std::vector<double>> rows(n, std::vector<double>(2));
                for (auto& r : rows)
                    for (double& x : r) x = u(rng);
                const double best = test::brute_force_kmeans_cost(rows, k);
                Dataset d = Dataset::from_rows(rows);
                std::size_t hits = 0;
                for (std::uint64_t seed = 0; seed < 100; ++seed) {
                    ClusterModel m = kmeans(d, k, {.seed = seed});
                    if (std::abs(kmeans_cost(d, m.assignment, m.centers) - best) <= 1e-9) ++hits;
                }
                worst_hits = std::min(worst_hits, hits);
            }
        }
    }
    // Blobs of diameter <= 1 with centers at least 5 diameters apart.
    std::size_t blob_misses = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        std::mt19937_64 brng(seed);
        const std::size_t k = 2 + brng() % 2;
        std::vector<std::vector<double>> rows;
        for (std::size_t c = 0; c < k; ++c)
            for (std::size_t i = 0, m = 1 + brng() % 3; i < m && rows.size() < 8; ++i)
                rows.push_back({6.0 * static_cast<double>(c) + 0.7 * u(brng), 0.7 * u(brng)});
        const double best = test::brute_force_kmeans_cost(rows, k);
        Dataset d = Dataset::from_rows(rows);
        ClusterModel m = kmeans(d, k, {.seed = seed});
        if (std::abs(kmeans_cost(d, m.assignment, m.centers) - best) > 1e-9) ++blob_misses;
    }
    ClusterModel ff = farthest_first(Dataset::from_rows({{0}, {1}, {10}}), 2);
    const bool ff_ok = ff.centers == std::vector<std::vector<double>>{{1}, {10}} && ff.assignment == std::vector<int>{0, 0, 1};
    return {worst_hits >= 95 && blob_misses == 0 && ff_ok,
            fmt::format("{} datasets x 100 seeds, worst optimal rate {}%; separated blobs missed {}; farthest-first {}",
                        datasets, worst_hits, blob_misses, ff_ok ? "matches" : "differs")};
}

Outcome em_monotone() {
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst_drop = 0.0, worst_closed = 0.0;
    for (int t = 0; t < 50; ++t) {
        const std::size_t n = 10 + rng() % 40;
        const std::size_t dim = 1 + rng() % 5;
        std::vector<std::vector<double>> rows(n, std::vector<double>(dim));
        for (auto& r : rows)
            for (double& x : r) x = u(rng);
        Dataset d = Dataset::from_rows(rows);
        ClusterModel m = gaussian_em(d, 1 + rng() % 4, {.seed = rng()});
        for (std::size_t i = 1; i < m.loglik_trace.size(); ++i)
            worst_drop = std::max(worst_drop, m.loglik_trace[i - 1] - m.loglik_trace[i]);
        ClusterModel one = gaussian_em(d, 1);
        for (std::size_t j = 0; j < dim; ++j) {
            double mu = 0.0, var = 0.0;
            for (const auto& r : rows) mu += r[j];
            mu /= static_cast<double>(n);
            for (const auto& r : rows) var += (r[j] - mu) * (r[j] - mu);
            var = std::max(var / static_cast<double>(n), 1e-6);
            worst_closed = std::max({worst_closed, std::abs(one.components[0].mean[j] - mu),
                                     std::abs(one.components[0].variance[j] - var)});
        }
    }
    return {worst_drop <= 1e-9 && worst_closed <= 1e-9,
            fmt::format("50 datasets; largest log-likelihood drop {:.3g}; k=1 max error {:.3g}", worst_drop, worst_closed)};
}

Outcome family_recovery() {
    Corpus c = planted();
    Dataset d = Dataset::from_traces(normalize_dataset(corpus_traces(c)));
    const std::size_t k = granularity_to_k(d.size(), 1);
    std::string detail;
    bool ok = true;
    const std::pair<const char*, std::function<ClusterModel()>> algos[] = {
        {"kmeans", [&] { return kmeans(d, k, {.seed = 42}); }},
        {"ff", [&] { return farthest_first(d, k); }},
        {"gmm", [&] { return gaussian_em(d, k, {.seed = 42}); }}};
    for (const auto& [name, fit] : algos) {
        auto fams = build_families(d, fit(), 0.5);
        std::size_t mixed = 0;
        std::set<std::string> plants;
        for (const auto& f : fams) {
            std::set<std::string> origin;
            for (const auto& m : f.members) origin.insert(m.substr(0, m.find('_')));
            if (origin.size() > 1) ++mixed;
            plants.insert(origin.begin(), origin.end());
        }
        // Refinement must not be vacuous: every plant shows up in some family.
        ok = ok && mixed == 0 && plants.size() == 6;
        detail += fmt::format("{}{}: {} families, {} mixed, {} plants covered", detail.empty() ? "" : "; ", name,
                              fams.size(), mixed, plants.size());
    }
    return {ok, fmt::format("k={} ({})", k, detail)};
}

std::string listing(const std::vector<Suggestion>& s) {
    std::string out;
    for (const auto& x : s) out += fmt::format("{}\t{:.17g}\n", x.lemma, x.score.value());
    return out;
}

Outcome determinism() {
    Corpus c = planted();
    FeatureSpace space = FeatureSpace::build(c, 2);
    std::vector<std::string> problems;
    for (LearnAlgo algo : {LearnAlgo::NaiveBayes, LearnAlgo::Winnow}) {
        LearnParams p;
        p.seed = 9;
        PremiseModel a = train_premise_model(c, space, algo, p);
        PremiseModel b = train_premise_model(ingest_sources(gen_synthetic_corpus(6, 6, 42)), space, algo, p);
        Provenance prov{content_hash(c), {{"algo", std::string(to_string(algo))}}, 9};
        const std::string fa = serialize_premise_model(a, prov);
        if (fa != serialize_premise_model(b, prov)) problems.push_back("model bytes differ");
        LoadedPremiseModel loaded = deserialize_premise_model(fa);
        if (serialize_premise_model(loaded.model, loaded.provenance) != fa) problems.push_back("reserialized model differs");
        for (const Lemma& l : c.lemmas()) {
            const std::string s = listing(suggest(a, l.statement, 10));
            if (s != listing(suggest(b, l.statement, 10))) problems.push_back("suggestions differ for " + l.name);
            if (s != listing(suggest(loaded.model, l.statement, 10))) problems.push_back("loaded suggestions differ");
        }
    }
    Dataset d = Dataset::from_traces(normalize_dataset(corpus_traces(c)));
    const std::size_t k = granularity_to_k(d.size(), 2);
    for (int algo = 0; algo < 3; ++algo) {
        auto fit = [&] {
            if (algo == 0) return kmeans(d, k, {.seed = 3});
            if (algo == 1) return farthest_first(d, k);
            return gaussian_em(d, k, {.seed = 3});
        };
        ClusterModel m1 = fit(), m2 = fit();
        if (m1.assignment != m2.assignment) problems.push_back("cluster assignments differ");
        ClusterFile f1{d, m1, 0.5, build_families(d, m1, 0.5)};
        ClusterFile f2{d, m2, 0.5, build_families(d, m2, 0.5)};
        const std::string t1 = serialize_cluster_file(f1, {content_hash(c), {}, 3});
        if (t1 != serialize_cluster_file(f2, {content_hash(c), {}, 3})) problems.push_back("cluster files differ");
        LoadedClusterFile back = deserialize_cluster_file(t1);
        if (predict(back.file.model, d) != predict(m1, d)) problems.push_back("loaded assignment differs");
        auto fams = build_families(back.file.data, back.file.model, 0.5);
        if (fams.size() != f1.families.size()) problems.push_back("loaded families differ");
        for (std::size_t i = 0; i < std::min(fams.size(), f1.families.size()); ++i)
            if (fams[i].members != f1.families[i].members) problems.push_back("loaded family members differ");
    }
    return {problems.empty(), problems.empty() ? "suggestions, assignments, families and files identical across runs and round trips"
                                               : fmt::format("{} problems, first: {}", problems.size(), problems.front())};
}

Outcome rank_bounds() {
    std::mt19937_64 rng(8);
    std::size_t scores = 0, violations = 0;
    for (int t = 0; t < 60; ++t) {
        std::string fof, prf;
        const int n = 3 + static_cast<int>(rng() % 12);
        for (int i = 0; i < n; ++i) {
            fof += fmt::format("lemma l{} : (p{}(c{}) & q{}(f(c{}))).\n", i, rng() % 3, rng() % 5, rng() % 2, rng() % 4);
            prf += fmt::format("proof l{}\n", i);
            for (int j = 0; j < i; ++j)
                if (rng() % 3 == 0) prf += fmt::format(" use l{} [goal:p0 subgoals:0].\n", j);
            prf += "qed.\n";
        }
        Corpus c = ingest_sources({{"r.fof", fof}, {"r.prf", prf}});
        for (LearnAlgo algo : {LearnAlgo::NaiveBayes, LearnAlgo::Winnow}) {
            PremiseModel m = train_premise_model(c, FeatureSpace::build(c, 1 + rng() % 2), algo, {});
            for (const Lemma& g : c.lemmas()) {
                auto out = suggest(m, g.statement, 1 + rng() % 20);
                for (std::size_t i = 0; i < out.size(); ++i) {
                    ++scores;
                    const double v = out[i].score.value();
                    if (!(v >= 0.0 && v <= 1.0)) ++violations;
                    if (i == 0) continue;
                    const auto& prev = out[i - 1];
                    if (prev.score.value() < v) ++violations;
                    if (prev.margin < out[i].margin) ++violations;
                    if (prev.margin == out[i].margin && !(prev.lemma < out[i].lemma)) ++violations;
                }
            }
        }
    }
    return {violations == 0, fmt::format("{} scores over 60 random corpora, {} violations", scores, violations)};
}

}  // namespace

int main() {
    const std::pair<const char*, Outcome (*)()> criteria[] = {
        {"naive Bayes matches dense oracle", nb_oracle},
        {"hand-computed 0.8 / 0.2 anchor", nb_anchor},
        {"planted-corpus premise selection", planted_recall},
        {"trace-vector shape", trace_shape},
        {"clustering oracles", clustering_oracles},
        {"EM monotonicity and k=1 closed form", em_monotone},
        {"planted family recovery", family_recovery},
        {"determinism and persistence", determinism},
        {"rank bounds and ordering", rank_bounds},
    };
    int failed = 0;
    for (std::size_t i = 0; i < std::size(criteria); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        failed += o.pass ? 0 : 1;
        std::printf("%s criterion %zu: %s -- %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    }
    std::printf("%zu/%zu criteria passed\n", std::size(criteria) - failed, std::size(criteria));
    return failed == 0 ? 0 : 1;
}
