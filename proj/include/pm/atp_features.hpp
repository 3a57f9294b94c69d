#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "pm/corpus.hpp"

namespace pm {

struct Feature {
    enum class Kind { Symbol, GroundTerm };

    Kind kind = Kind::Symbol;
    std::string text;  // symbol name, or the printed ground term

    static Feature symbol(std::string name) { return {Kind::Symbol, std::move(name)}; }
    static Feature ground_term(std::string text) { return {Kind::GroundTerm, std::move(text)}; }

    bool operator==(const Feature&) const = default;
};

// Corpus-wide binary feature space: every predicate/function symbol, then every ground
// subterm up to `max_term_depth`, each list in first-occurrence order.
class FeatureSpace {
public:
    static constexpr std::size_t kDefaultDepth = 2;

    FeatureSpace() = default;

    static FeatureSpace build(const Corpus& corpus, std::size_t max_term_depth = kDefaultDepth);
    // Rebuilds the index from a persisted entry list. Throws CorruptModel on duplicates.
    static FeatureSpace from_entries(std::vector<Feature> entries, std::size_t max_term_depth);

    std::size_t dims() const { return entries_.size(); }
    std::size_t max_term_depth() const { return max_term_depth_; }
    const std::vector<Feature>& entries() const { return entries_; }
    std::optional<std::uint32_t> position(const Feature& f) const;

    bool operator==(const FeatureSpace& o) const {
        return max_term_depth_ == o.max_term_depth_ && entries_ == o.entries_;
    }

private:
    void add(Feature f);

    std::vector<Feature> entries_;
    std::unordered_map<std::string, std::uint32_t> index_;
    std::size_t max_term_depth_ = kDefaultDepth;
};

// Set of active positions over a space of `dims` features.
struct SparseVector {
    std::size_t dims = 0;
    std::vector<std::uint32_t> active;  // strictly increasing, all < dims

    // Sorts and deduplicates; throws DimensionMismatch on out-of-range positions.
    static SparseVector from_positions(std::size_t dims, std::vector<std::uint32_t> positions);

    bool contains(std::uint32_t pos) const;
    bool operator==(const SparseVector&) const = default;
};

SparseVector featurize(const Formula& statement, const FeatureSpace& space);

struct Example {
    std::string lemma;
    SparseVector vector;
};

// Examples for the ranker of one library lemma.
struct TrainingSet {
    std::string target;
    std::vector<Example> positives;  // statements of lemmas whose proofs use `target`
    std::vector<Example> negatives;  // every other proved lemma

    std::size_t size() const { return positives.size() + negatives.size(); }
};

struct TrainingSetOptions {
    std::optional<std::size_t> neg_cap;  // subsample negatives above this count
    std::uint64_t seed = 0;
};

// One set per proved lemma, in corpus order. Throws InsufficientData with fewer than two
// proved lemmas.
std::vector<TrainingSet> build_training_sets(const Corpus& corpus, const FeatureSpace& space,
                                             const TrainingSetOptions& options = {});

}  // namespace pm
