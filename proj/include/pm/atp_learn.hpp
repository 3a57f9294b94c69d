#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pm/atp_features.hpp"
#include "pm/corpus.hpp"

namespace pm {

// Classifier output in [0,1]; higher means the lemma is more likely to be a premise.
class RankScore {
public:
    // Throws Invariant outside [0,1] (including NaN).
    explicit RankScore(double value);
    double value() const { return value_; }

    auto operator<=>(const RankScore&) const = default;

private:
    double value_;
};

double logistic(double x);

//------------------------------------------------------------------------------------------------
// Bernoulli naive Bayes with Laplace smoothing.
//
// Likelihoods are accumulated in log space. The absent-feature term sum_i log(1 - theta(i)) is
// precomputed per class at training time, so a query costs O(active) rather than O(dims).

class NaiveBayesClassifier {
public:
    using Counts = std::map<std::uint32_t, std::uint32_t>;

    NaiveBayesClassifier() = default;

    static NaiveBayesClassifier train(const TrainingSet& ts, std::size_t dims, double alpha);
    // Rebuilds a classifier from stored counts; validates count invariants.
    static NaiveBayesClassifier from_counts(std::size_t dims, double alpha, std::uint32_t n_pos, std::uint32_t n_neg,
                                            Counts pos_counts, Counts neg_counts);

    double theta_pos(std::uint32_t i) const;
    double theta_neg(std::uint32_t i) const;
    double prior_pos() const;

    // log P(pos | v) - log P(neg | v)
    double log_odds(const SparseVector& v) const;
    RankScore rank(const SparseVector& v) const { return RankScore(logistic(log_odds(v))); }

    std::size_t dims() const { return dims_; }
    double alpha() const { return alpha_; }
    std::uint32_t n_pos() const { return n_pos_; }
    std::uint32_t n_neg() const { return n_neg_; }
    const Counts& pos_counts() const { return pos_counts_; }
    const Counts& neg_counts() const { return neg_counts_; }

private:
    void precompute();

    std::size_t dims_ = 0;
    double alpha_ = 1.0;
    std::uint32_t n_pos_ = 0;
    std::uint32_t n_neg_ = 0;
    Counts pos_counts_;
    Counts neg_counts_;

    double log_prior_pos_ = 0.0;
    double log_prior_neg_ = 0.0;
    double absent_total_pos_ = 0.0;  // sum over all dims of log(1 - theta_pos)
    double absent_total_neg_ = 0.0;
};

NaiveBayesClassifier train_nb(const TrainingSet& ts, std::size_t dims, double alpha);
RankScore rank_nb(const NaiveBayesClassifier& c, const SparseVector& v);

//------------------------------------------------------------------------------------------------
// Multiplicative winnow over sparse binary inputs. Unseen weights are implicitly 1.

struct WinnowParams {
    double promotion = 1.5;
    double demotion = 0.5;
    double threshold = 1.0;
    int epochs = 3;

    // max(1, dims / 10)
    static double default_threshold(std::size_t dims);
};

class WinnowClassifier {
public:
    using Weights = std::map<std::uint32_t, double>;

    WinnowClassifier() = default;

    static WinnowClassifier train(const TrainingSet& ts, std::size_t dims, const WinnowParams& params);
    static WinnowClassifier from_weights(std::size_t dims, const WinnowParams& params, Weights weights);

    double weight(std::uint32_t i) const;
    double score(const SparseVector& v) const;
    // score - threshold
    double margin(const SparseVector& v) const { return score(v) - params_.threshold; }
    RankScore rank(const SparseVector& v) const { return RankScore(logistic(margin(v))); }

    std::size_t dims() const { return dims_; }
    const WinnowParams& params() const { return params_; }
    const Weights& weights() const { return weights_; }

private:
    std::size_t dims_ = 0;
    WinnowParams params_;
    Weights weights_;
};

WinnowClassifier train_winnow(const TrainingSet& ts, std::size_t dims, const WinnowParams& params);
RankScore rank_winnow(const WinnowClassifier& c, const SparseVector& v);

//------------------------------------------------------------------------------------------------
// Premise selection

enum class LearnAlgo { NaiveBayes, Winnow };

std::string_view to_string(LearnAlgo algo);
LearnAlgo parse_learn_algo(std::string_view name);  // "nb" | "winnow"

struct LearnParams {
    double alpha = 1.0;
    double promotion = 1.5;
    double demotion = 0.5;
    std::optional<double> threshold;  // default: WinnowParams::default_threshold(dims)
    int epochs = 3;
    std::optional<std::size_t> neg_cap;
    std::uint64_t seed = 0;

    WinnowParams winnow(std::size_t dims) const;
};

using Classifier = std::variant<NaiveBayesClassifier, WinnowClassifier>;

// Log-odds for NB, margin for winnow: the monotone quantity suggestions are ordered by.
double classifier_margin(const Classifier& c, const SparseVector& v);
RankScore classifier_rank(const Classifier& c, const SparseVector& v);

struct PremiseModel {
    FeatureSpace space;
    LearnAlgo algo = LearnAlgo::NaiveBayes;
    LearnParams params;
    std::map<std::string, Classifier> classifiers;
    std::vector<std::string> skipped;  // lemmas whose training set was empty
};

PremiseModel train_premise_model(const Corpus& corpus, const FeatureSpace& space, LearnAlgo algo,
                                 const LearnParams& params);

struct Suggestion {
    std::string lemma;
    RankScore score;
    double margin;
};

// Every classifier ranked, ordered by margin descending, ties by ascending lemma name.
std::vector<Suggestion> rank_all(const PremiseModel& model, const SparseVector& goal);
// Top k of rank_all after featurizing the goal. Throws EmptyModel.
std::vector<Suggestion> suggest(const PremiseModel& model, const Formula& goal, std::size_t k);

}  // namespace pm
