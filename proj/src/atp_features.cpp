#include "pm/atp_features.hpp"

#include <algorithm>
#include <random>

#include "pm/error.hpp"
#include "pm/hash.hpp"

namespace pm {

namespace {

std::string key_of(const Feature& f) {
    return (f.kind == Feature::Kind::Symbol ? "s:" : "t:") + f.text;
}

template <typename Fn>
void each_term_symbol(const Term& t, Fn&& fn) {
    if (t.is_var()) return;
    fn(t.name);
    for (const Term& a : t.args) each_term_symbol(a, fn);
}

template <typename Fn>
void each_symbol(const Formula& f, Fn&& fn) {
    if (f.kind == Formula::Kind::Pred) {
        fn(f.name);
        for (const Term& a : f.args) each_term_symbol(a, fn);
    }
    for (const Formula& c : f.children) each_symbol(c, fn);
}

// Pre-order over ground subterms no deeper than `max_depth`.
template <typename Fn>
void each_ground_subterm(const Term& t, std::size_t max_depth, Fn&& fn) {
    if (t.is_var()) return;
    if (t.depth() <= max_depth && t.is_ground()) fn(t);
    for (const Term& a : t.args) each_ground_subterm(a, max_depth, fn);
}

template <typename Fn>
void each_ground_term(const Formula& f, std::size_t max_depth, Fn&& fn) {
    if (max_depth == 0) return;
    if (f.kind == Formula::Kind::Pred) {
        for (const Term& a : f.args) each_ground_subterm(a, max_depth, fn);
    }
    for (const Formula& c : f.children) each_ground_term(c, max_depth, fn);
}

}  // namespace

void FeatureSpace::add(Feature f) {
    auto pos = static_cast<std::uint32_t>(entries_.size());
    if (index_.emplace(key_of(f), pos).second) entries_.push_back(std::move(f));
}

FeatureSpace FeatureSpace::build(const Corpus& corpus, std::size_t max_term_depth) {
    FeatureSpace space;
    space.max_term_depth_ = max_term_depth;
    for (const Lemma& l : corpus.lemmas())
        each_symbol(l.statement, [&](const std::string& s) { space.add(Feature::symbol(s)); });
    for (const Lemma& l : corpus.lemmas())
        each_ground_term(l.statement, max_term_depth,
                         [&](const Term& t) { space.add(Feature::ground_term(to_string(t))); });
    return space;
}

FeatureSpace FeatureSpace::from_entries(std::vector<Feature> entries, std::size_t max_term_depth) {
    FeatureSpace space;
    space.max_term_depth_ = max_term_depth;
    for (Feature& f : entries) {
        std::size_t before = space.entries_.size();
        space.add(std::move(f));
        if (space.entries_.size() == before) throw Error(ErrorKind::CorruptModel, "duplicate feature entry");
    }
    return space;
}

std::optional<std::uint32_t> FeatureSpace::position(const Feature& f) const {
    auto it = index_.find(key_of(f));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

SparseVector SparseVector::from_positions(std::size_t dims, std::vector<std::uint32_t> positions) {
    std::sort(positions.begin(), positions.end());
    positions.erase(std::unique(positions.begin(), positions.end()), positions.end());
    if (!positions.empty() && positions.back() >= dims)
        throw Error(ErrorKind::DimensionMismatch,
                    "position " + std::to_string(positions.back()) + " outside " + std::to_string(dims) + " dims");
    return SparseVector{dims, std::move(positions)};
}

bool SparseVector::contains(std::uint32_t pos) const {
    return std::binary_search(active.begin(), active.end(), pos);
}

SparseVector featurize(const Formula& statement, const FeatureSpace& space) {
    std::vector<std::uint32_t> hits;
    each_symbol(statement, [&](const std::string& s) {
        if (auto p = space.position(Feature::symbol(s))) hits.push_back(*p);
    });
    each_ground_term(statement, space.max_term_depth(), [&](const Term& t) {
        if (auto p = space.position(Feature::ground_term(to_string(t)))) hits.push_back(*p);
    });
    return SparseVector::from_positions(space.dims(), std::move(hits));
}

std::vector<TrainingSet> build_training_sets(const Corpus& corpus, const FeatureSpace& space,
                                             const TrainingSetOptions& options) {
    std::vector<const Lemma*> proved;
    for (const Lemma& l : corpus.lemmas())
        if (l.is_proved()) proved.push_back(&l);
    if (proved.size() < 2)
        throw Error(ErrorKind::InsufficientData,
                    "need at least 2 proved lemmas, corpus has " + std::to_string(proved.size()));

    std::vector<SparseVector> vectors(proved.size());
    const auto n = static_cast<std::ptrdiff_t>(proved.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) vectors[i] = featurize(proved[i]->statement, space);

    std::vector<TrainingSet> sets(proved.size());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t b = 0; b < n; ++b) {
        TrainingSet& ts = sets[b];
        ts.target = proved[b]->name;
        for (std::ptrdiff_t a = 0; a < n; ++a) {
            if (a == b) continue;
            Example ex{proved[a]->name, vectors[a]};
            if (corpus.deps_of(proved[a]->name).count(ts.target))
                ts.positives.push_back(std::move(ex));
            else
                ts.negatives.push_back(std::move(ex));
        }
        if (options.neg_cap && ts.negatives.size() > *options.neg_cap) {
            std::vector<std::size_t> order(ts.negatives.size());
            for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
            std::mt19937_64 rng(options.seed ^ fnv1a(ts.target));
            std::shuffle(order.begin(), order.end(), rng);
            order.resize(*options.neg_cap);
            std::sort(order.begin(), order.end());
            std::vector<Example> kept;
            kept.reserve(order.size());
            for (std::size_t i : order) kept.push_back(std::move(ts.negatives[i]));
            ts.negatives = std::move(kept);
        }
    }
    return sets;
}

}  // namespace pm
