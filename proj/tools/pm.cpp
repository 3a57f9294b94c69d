// pm: command-line front end for corpus ingestion, premise selection and proof clustering.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "pm/atp_features.hpp"
#include "pm/atp_learn.hpp"
#include "pm/cluster.hpp"
#include "pm/corpus.hpp"
#include "pm/error.hpp"
#include "pm/eval.hpp"
#include "pm/log.hpp"
#include "pm/model_io.hpp"
#include "pm/synth.hpp"
#include "pm/trace.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kUsage = 1, kData = 2, kInternal = 3 };

bool is_source(const fs::path& p) {
    const auto ext = p.extension().string();
    return ext == ".fof" || ext == ".prf";
}

// Directories expand to their .fof/.prf files in name order.
std::vector<fs::path> expand_sources(const std::vector<std::string>& args) {
    std::vector<fs::path> out;
    for (const std::string& a : args) {
        fs::path p(a);
        if (fs::is_directory(p)) {
            std::vector<fs::path> found;
            for (const auto& e : fs::directory_iterator(p))
                if (e.is_regular_file() && is_source(e.path())) found.push_back(e.path());
            std::sort(found.begin(), found.end());
            out.insert(out.end(), found.begin(), found.end());
        } else {
            out.push_back(p);
        }
    }
    return out;
}

// A corpus argument is either a saved corpus.json or source files/directories.
pm::Corpus load_corpus(const std::string& arg) {
    fs::path p(arg);
    if (p.extension() == ".json") return pm::deserialize_corpus(pm::read_file(p));
    return pm::ingest(expand_sources({arg}));
}

// Accepts either `lemma NAME : F.` or a bare formula, optionally dot-terminated.
pm::Formula load_goal(const std::string& path) {
    std::string text = pm::read_file(path);
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text.compare(first, 5, "lemma") == 0) return pm::parse_statement(text).formula;
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.pop_back();
    if (!text.empty() && text.back() == '.') text.pop_back();
    return pm::parse_formula(text);
}

json learn_params_json(const pm::LearnParams& p, pm::LearnAlgo algo, std::size_t depth) {
    json j{{"algo", pm::to_string(algo)}, {"depth", depth}, {"epochs", p.epochs}, {"seed", p.seed}};
    if (algo == pm::LearnAlgo::NaiveBayes) {
        j["alpha"] = p.alpha;
    } else {
        j["promotion"] = p.promotion;
        j["demotion"] = p.demotion;
        if (p.threshold) j["threshold"] = *p.threshold;
    }
    if (p.neg_cap) j["neg_cap"] = *p.neg_cap;
    return j;
}

void print_families(const std::vector<pm::ProofFamily>& families) {
    for (std::size_t i = 0; i < families.size(); ++i) {
        const pm::ProofFamily& f = families[i];
        std::string members;
        for (const std::string& m : f.members) members += (members.empty() ? "" : ",") + m;
        fmt::print("family {}\tcluster={}\tproximity={:.4f}\tsize={}\t{}\n", i, f.cluster, f.proximity,
                   f.members.size(), members);
    }
}

int exit_code_for(pm::ErrorKind k) {
    switch (k) {
        case pm::ErrorKind::BadArgument:
        case pm::ErrorKind::BadGranularity:
        case pm::ErrorKind::BadK:
            return kUsage;
        case pm::ErrorKind::Invariant:
            return kInternal;
        default:
            return kData;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"proof-corpus mining toolkit"};
    app.require_subcommand(1);

    // ingest
    std::vector<std::string> ingest_paths;
    std::string ingest_out = "corpus.json";
    auto* ingest = app.add_subcommand("ingest", "parse .fof/.prf files into a corpus");
    ingest->add_option("paths", ingest_paths, "files or directories")->required();
    ingest->add_option("--out", ingest_out);

    // train
    std::string corpus_arg;
    std::string algo = "nb";
    pm::LearnParams lp;
    std::optional<double> threshold;
    std::optional<std::size_t> neg_cap;
    std::size_t depth = pm::FeatureSpace::kDefaultDepth;
    std::string train_out = "model.json";
    auto* train = app.add_subcommand("train", "train one ranker per library lemma");
    train->add_option("--corpus", corpus_arg)->required();
    train->add_option("--algo", algo)->check(CLI::IsMember({"nb", "winnow"}));
    train->add_option("--alpha", lp.alpha);
    train->add_option("--promotion", lp.promotion);
    train->add_option("--demotion", lp.demotion);
    train->add_option("--threshold", threshold);
    train->add_option("--epochs", lp.epochs);
    train->add_option("--depth", depth);
    train->add_option("--neg-cap", neg_cap);
    train->add_option("--seed", lp.seed);
    train->add_option("--out", train_out);

    // suggest
    std::string model_path;
    std::string goal_path;
    std::size_t top = 10;
    auto* suggest = app.add_subcommand("suggest", "rank library lemmas for a goal");
    suggest->add_option("--model", model_path)->required();
    suggest->add_option("--goal", goal_path)->required();
    suggest->add_option("--top", top);

    // extract-traces
    std::string traces_out = "traces.csv";
    std::size_t stride = pm::kStepsPerPatch;
    bool raw = false;
    auto* extract = app.add_subcommand("extract-traces", "write normalized proof-trace vectors as CSV");
    extract->add_option("--corpus", corpus_arg)->required();
    extract->add_option("--out", traces_out);
    extract->add_option("--patch-stride", stride);
    extract->add_flag("--raw", raw, "skip normalization");

    // cluster
    std::string cluster_algo = "kmeans";
    int granularity = 3;
    double proximity = 0.0;
    std::uint64_t seed = 0;
    std::optional<std::size_t> k_override;
    int n_init = pm::KMeansOptions{}.n_init;
    std::string cluster_out = "families.json";
    auto* cluster = app.add_subcommand("cluster", "cluster proof patches into families");
    cluster->add_option("--corpus", corpus_arg)->required();
    cluster->add_option("--algo", cluster_algo)->check(CLI::IsMember({"kmeans", "ff", "gmm"}));
    cluster->add_option("--granularity", granularity);
    cluster->add_option("--proximity", proximity);
    cluster->add_option("--seed", seed);
    cluster->add_option("--k", k_override);
    cluster->add_option("--n-init", n_init, "k-means restarts");
    cluster->add_option("--patch-stride", stride);
    cluster->add_option("--out", cluster_out);

    // families / similar
    std::optional<double> refilter;
    auto* families = app.add_subcommand("families", "list the families of a cluster file");
    families->add_option("--model", model_path)->required();
    families->add_option("--proximity", refilter, "rebuild families at this threshold");
    std::string lemma;
    auto* similar = app.add_subcommand("similar", "lemmas sharing a family with LEMMA");
    similar->add_option("--model", model_path)->required();
    similar->add_option("--lemma", lemma)->required();

    // eval
    std::size_t k = 10;
    auto* eval = app.add_subcommand("eval", "leave-one-out premise-selection recall");
    eval->add_option("--corpus", corpus_arg)->required();
    eval->add_option("--algo", algo)->check(CLI::IsMember({"nb", "winnow"}));
    eval->add_option("--k", k);
    eval->add_option("--seed", lp.seed);
    eval->add_option("--depth", depth);
    bool per_goal = false;
    eval->add_flag("--per-goal", per_goal, "print one line per goal");

    // gen
    std::size_t n_families = 4;
    std::size_t per_family = 5;
    std::string gen_out = ".";
    auto* gen = app.add_subcommand("gen", "write a synthetic planted corpus");
    gen->add_option("--families", n_families);
    gen->add_option("--per-family", per_family);
    gen->add_option("--seed", seed);
    gen->add_option("--out", gen_out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kUsage;
    }

    try {
        if (*ingest) {
            pm::Corpus c = pm::ingest(expand_sources(ingest_paths));
            pm::write_file(ingest_out, pm::serialize_corpus(c));
            fmt::print("{} lemmas ({} proved), {} symbols, {} tactics\n", c.size(), c.proved_count(),
                       c.symbols().size(), c.tactics().size());
        } else if (*train) {
            pm::Corpus c = load_corpus(corpus_arg);
            lp.threshold = threshold;
            lp.neg_cap = neg_cap;
            const pm::LearnAlgo a = pm::parse_learn_algo(algo);
            pm::FeatureSpace space = pm::FeatureSpace::build(c, depth);
            pm::PremiseModel m = pm::train_premise_model(c, space, a, lp);
            pm::Provenance prov{pm::content_hash(c), learn_params_json(lp, a, depth), lp.seed};
            pm::save_model(m, prov, train_out);
            fmt::print("{} classifiers over {} features ({} skipped)\n", m.classifiers.size(), space.dims(),
                       m.skipped.size());
        } else if (*suggest) {
            pm::LoadedPremiseModel loaded = pm::load_model(model_path);
            auto ranked = pm::suggest(loaded.model, load_goal(goal_path), top);
            for (std::size_t i = 0; i < ranked.size(); ++i)
                fmt::print("{}\t{:.4f}\t{}\n", i + 1, ranked[i].score.value(), ranked[i].lemma);
        } else if (*extract) {
            pm::Corpus c = load_corpus(corpus_arg);
            auto traces = pm::corpus_traces(c, stride);
            if (!raw) traces = pm::normalize_dataset(std::move(traces));
            pm::write_file(traces_out, pm::to_csv(traces));
            fmt::print("{} patch vectors from {} proofs\n", traces.size(), c.proved_count());
        } else if (*cluster) {
            pm::Corpus c = load_corpus(corpus_arg);
            pm::Dataset data = pm::Dataset::from_traces(pm::normalize_dataset(pm::corpus_traces(c, stride)));
            const std::size_t kk = k_override ? *k_override : pm::granularity_to_k(data.size(), granularity);
            pm::ClusterModel m;
            switch (pm::parse_cluster_algo(cluster_algo)) {
                case pm::ClusterAlgo::KMeans: m = pm::kmeans(data, kk, {.seed = seed, .n_init = n_init}); break;
                case pm::ClusterAlgo::FarthestFirst: m = pm::farthest_first(data, kk); break;
                case pm::ClusterAlgo::Gaussian: m = pm::gaussian_em(data, kk, {.seed = seed}); break;
            }
            pm::ClusterFile file{data, m, proximity, pm::build_families(data, m, proximity)};
            json params{{"algo", cluster_algo}, {"k", kk}, {"n_init", n_init}, {"granularity", granularity},
                        {"proximity", proximity}, {"patch_stride", stride}};
            pm::write_file(cluster_out, pm::serialize_cluster_file(file, {pm::content_hash(c), params, seed}));
            print_families(file.families);
        } else if (*families) {
            pm::LoadedClusterFile loaded = pm::deserialize_cluster_file(pm::read_file(model_path));
            const pm::ClusterFile& f = loaded.file;
            print_families(refilter ? pm::build_families(f.data, f.model, *refilter) : f.families);
        } else if (*similar) {
            pm::LoadedClusterFile loaded = pm::deserialize_cluster_file(pm::read_file(model_path));
            for (const auto& [name, prox] : pm::similar_proofs(lemma, loaded.file.families))
                fmt::print("{:.4f}\t{}\n", prox, name);
        } else if (*eval) {
            pm::Corpus c = load_corpus(corpus_arg);
            pm::EvalReport r = pm::eval_premise_selection(c, pm::parse_learn_algo(algo), lp, k, {depth});
            if (per_goal) {
                for (const pm::GoalResult& g : r.goals)
                    fmt::print("{}\trecall={:.4f}\tap={:.4f}\thits={}/{}\n", g.goal, g.recall, g.average_precision,
                               g.hits.size(), g.true_premises.size());
            }
            fmt::print("recall@{}={:.4f} map={:.4f} goals={}\n", k, r.recall_at_k, r.mean_average_precision,
                       r.n_goals());
        } else if (*gen) {
            auto paths = pm::write_sources(pm::gen_synthetic_corpus(n_families, per_family, seed), gen_out);
            for (const auto& p : paths) fmt::print("{}\n", p.string());
        }
    } catch (const pm::Error& e) {
        pm::log().error("{}", e.what());
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        pm::log().error("internal error: {}", e.what());
        return kInternal;
    }
    return kOk;
}
