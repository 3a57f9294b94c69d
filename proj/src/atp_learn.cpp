#include "pm/atp_learn.hpp"

#include <algorithm>
#include <cmath>

#include "pm/error.hpp"
#include "pm/log.hpp"

namespace pm {

RankScore::RankScore(double value) : value_(value) {
    if (!(value >= 0.0 && value <= 1.0))
        throw Error(ErrorKind::Invariant, "rank score " + std::to_string(value) + " outside [0,1]");
}

double logistic(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    double e = std::exp(x);
    return e / (1.0 + e);
}

namespace {

void check_dims(std::size_t expected, const SparseVector& v) {
    if (v.dims != expected)
        throw Error(ErrorKind::DimensionMismatch,
                    "vector has " + std::to_string(v.dims) + " dims, classifier " + std::to_string(expected));
}

}  // namespace

//------------------------------------------------------------------------------------------------
// Naive Bayes

NaiveBayesClassifier NaiveBayesClassifier::train(const TrainingSet& ts, std::size_t dims, double alpha) {
    if (!(alpha > 0.0)) throw Error(ErrorKind::BadArgument, "alpha must be positive");
    if (ts.size() == 0) throw Error(ErrorKind::EmptyTrainingSet, "no examples for " + ts.target);
    NaiveBayesClassifier c;
    c.dims_ = dims;
    c.alpha_ = alpha;
    c.n_pos_ = static_cast<std::uint32_t>(ts.positives.size());
    c.n_neg_ = static_cast<std::uint32_t>(ts.negatives.size());
    for (const Example& e : ts.positives) {
        check_dims(dims, e.vector);
        for (std::uint32_t i : e.vector.active) ++c.pos_counts_[i];
    }
    for (const Example& e : ts.negatives) {
        check_dims(dims, e.vector);
        for (std::uint32_t i : e.vector.active) ++c.neg_counts_[i];
    }
    c.precompute();
    return c;
}

NaiveBayesClassifier NaiveBayesClassifier::from_counts(std::size_t dims, double alpha, std::uint32_t n_pos,
                                                       std::uint32_t n_neg, Counts pos_counts, Counts neg_counts) {
    if (!(alpha > 0.0)) throw Error(ErrorKind::CorruptModel, "alpha must be positive");
    auto valid = [dims](const Counts& counts, std::uint32_t n) {
        return std::all_of(counts.begin(), counts.end(), [&](const auto& kv) {
            return kv.first < dims && kv.second > 0 && kv.second <= n;
        });
    };
    if (!valid(pos_counts, n_pos) || !valid(neg_counts, n_neg))
        throw Error(ErrorKind::CorruptModel, "naive Bayes counts inconsistent with class sizes");
    NaiveBayesClassifier c;
    c.dims_ = dims;
    c.alpha_ = alpha;
    c.n_pos_ = n_pos;
    c.n_neg_ = n_neg;
    c.pos_counts_ = std::move(pos_counts);
    c.neg_counts_ = std::move(neg_counts);
    c.precompute();
    return c;
}

void NaiveBayesClassifier::precompute() {
    const double n = static_cast<double>(n_pos_) + static_cast<double>(n_neg_);
    log_prior_pos_ = std::log((n_pos_ + alpha_) / (n + 2.0 * alpha_));
    log_prior_neg_ = std::log((n_neg_ + alpha_) / (n + 2.0 * alpha_));

    auto absent_total = [&](const Counts& counts, std::uint32_t n_class) {
        const double denom = n_class + 2.0 * alpha_;
        const double unseen = std::log1p(-alpha_ / denom);
        double total = static_cast<double>(dims_ - counts.size()) * unseen;
        for (const auto& [i, cnt] : counts) total += std::log1p(-(cnt + alpha_) / denom);
        return total;
    };
    absent_total_pos_ = absent_total(pos_counts_, n_pos_);
    absent_total_neg_ = absent_total(neg_counts_, n_neg_);
}

double NaiveBayesClassifier::theta_pos(std::uint32_t i) const {
    auto it = pos_counts_.find(i);
    double cnt = it == pos_counts_.end() ? 0.0 : it->second;
    return (cnt + alpha_) / (n_pos_ + 2.0 * alpha_);
}

double NaiveBayesClassifier::theta_neg(std::uint32_t i) const {
    auto it = neg_counts_.find(i);
    double cnt = it == neg_counts_.end() ? 0.0 : it->second;
    return (cnt + alpha_) / (n_neg_ + 2.0 * alpha_);
}

double NaiveBayesClassifier::prior_pos() const { return std::exp(log_prior_pos_); }

double NaiveBayesClassifier::log_odds(const SparseVector& v) const {
    check_dims(dims_, v);
    double lp = log_prior_pos_ + absent_total_pos_;
    double ln = log_prior_neg_ + absent_total_neg_;
    for (std::uint32_t i : v.active) {
        const double tp = theta_pos(i);
        const double tn = theta_neg(i);
        lp += std::log(tp) - std::log1p(-tp);
        ln += std::log(tn) - std::log1p(-tn);
    }
    return lp - ln;
}

NaiveBayesClassifier train_nb(const TrainingSet& ts, std::size_t dims, double alpha) {
    return NaiveBayesClassifier::train(ts, dims, alpha);
}

RankScore rank_nb(const NaiveBayesClassifier& c, const SparseVector& v) { return c.rank(v); }

//------------------------------------------------------------------------------------------------
// Winnow

double WinnowParams::default_threshold(std::size_t dims) {
    return std::max(1.0, static_cast<double>(dims) / 10.0);
}

namespace {

void validate(const WinnowParams& p) {
    if (!(p.promotion > 1.0)) throw Error(ErrorKind::BadArgument, "promotion must exceed 1");
    if (!(p.demotion > 0.0 && p.demotion < 1.0)) throw Error(ErrorKind::BadArgument, "demotion must lie in (0,1)");
    if (!(p.threshold > 0.0)) throw Error(ErrorKind::BadArgument, "threshold must be positive");
    if (p.epochs < 1) throw Error(ErrorKind::BadArgument, "epochs must be at least 1");
}

}  // namespace

WinnowClassifier WinnowClassifier::train(const TrainingSet& ts, std::size_t dims, const WinnowParams& params) {
    validate(params);
    if (ts.size() == 0) throw Error(ErrorKind::EmptyTrainingSet, "no examples for " + ts.target);
    WinnowClassifier c;
    c.dims_ = dims;
    c.params_ = params;

    // Positives and negatives are interleaved so neither class is seen in one block.
    std::vector<std::pair<const SparseVector*, bool>> order;
    order.reserve(ts.size());
    for (std::size_t i = 0; i < std::max(ts.positives.size(), ts.negatives.size()); ++i) {
        if (i < ts.positives.size()) order.emplace_back(&ts.positives[i].vector, true);
        if (i < ts.negatives.size()) order.emplace_back(&ts.negatives[i].vector, false);
    }
    for (const auto& [v, _] : order) check_dims(dims, *v);

    for (int epoch = 0; epoch < params.epochs; ++epoch) {
        for (const auto& [v, positive] : order) {
            const double s = c.score(*v);
            // A score exactly on the threshold counts as a mistake for either class.
            if (positive && s <= params.threshold) {
                for (std::uint32_t i : v->active) c.weights_[i] = c.weight(i) * params.promotion;
            } else if (!positive && s >= params.threshold) {
                for (std::uint32_t i : v->active) c.weights_[i] = c.weight(i) * params.demotion;
            }
        }
    }
    return c;
}

WinnowClassifier WinnowClassifier::from_weights(std::size_t dims, const WinnowParams& params, Weights weights) {
    validate(params);
    for (const auto& [i, w] : weights)
        if (i >= dims || !(w > 0.0)) throw Error(ErrorKind::CorruptModel, "invalid winnow weight");
    WinnowClassifier c;
    c.dims_ = dims;
    c.params_ = params;
    c.weights_ = std::move(weights);
    return c;
}

double WinnowClassifier::weight(std::uint32_t i) const {
    auto it = weights_.find(i);
    return it == weights_.end() ? 1.0 : it->second;
}

double WinnowClassifier::score(const SparseVector& v) const {
    check_dims(dims_, v);
    double s = 0.0;
    for (std::uint32_t i : v.active) s += weight(i);
    return s;
}

WinnowClassifier train_winnow(const TrainingSet& ts, std::size_t dims, const WinnowParams& params) {
    return WinnowClassifier::train(ts, dims, params);
}

RankScore rank_winnow(const WinnowClassifier& c, const SparseVector& v) { return c.rank(v); }

//------------------------------------------------------------------------------------------------
// Premise model

std::string_view to_string(LearnAlgo algo) { return algo == LearnAlgo::NaiveBayes ? "nb" : "winnow"; }

LearnAlgo parse_learn_algo(std::string_view name) {
    if (name == "nb") return LearnAlgo::NaiveBayes;
    if (name == "winnow") return LearnAlgo::Winnow;
    throw Error(ErrorKind::BadArgument, "unknown learning algorithm '" + std::string(name) + "'");
}

WinnowParams LearnParams::winnow(std::size_t dims) const {
    return WinnowParams{promotion, demotion, threshold.value_or(WinnowParams::default_threshold(dims)), epochs};
}

double classifier_margin(const Classifier& c, const SparseVector& v) {
    return std::visit(
        [&](const auto& clf) -> double {
            if constexpr (std::is_same_v<std::decay_t<decltype(clf)>, NaiveBayesClassifier>)
                return clf.log_odds(v);
            else
                return clf.margin(v);
        },
        c);
}

RankScore classifier_rank(const Classifier& c, const SparseVector& v) {
    return std::visit([&](const auto& clf) { return clf.rank(v); }, c);
}

PremiseModel train_premise_model(const Corpus& corpus, const FeatureSpace& space, LearnAlgo algo,
                                 const LearnParams& params) {
    std::vector<TrainingSet> sets = build_training_sets(corpus, space, {params.neg_cap, params.seed});
    const std::size_t dims = space.dims();
    const WinnowParams wp = params.winnow(dims);
    if (algo == LearnAlgo::Winnow) validate(wp);
    if (algo == LearnAlgo::NaiveBayes && !(params.alpha > 0.0))
        throw Error(ErrorKind::BadArgument, "alpha must be positive");

    std::vector<std::optional<Classifier>> trained(sets.size());
    const auto n = static_cast<std::ptrdiff_t>(sets.size());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const TrainingSet& ts = sets[i];
        if (ts.size() == 0) continue;
        if (algo == LearnAlgo::NaiveBayes)
            trained[i] = NaiveBayesClassifier::train(ts, dims, params.alpha);
        else
            trained[i] = WinnowClassifier::train(ts, dims, wp);
    }

    PremiseModel model;
    model.space = space;
    model.algo = algo;
    model.params = params;
    for (std::size_t i = 0; i < sets.size(); ++i) {
        if (trained[i]) {
            model.classifiers.emplace(sets[i].target, std::move(*trained[i]));
        } else {
            log().info("no training examples for '{}'; skipped", sets[i].target);
            model.skipped.push_back(sets[i].target);
        }
    }
    return model;
}

std::vector<Suggestion> rank_all(const PremiseModel& model, const SparseVector& goal) {
    std::vector<Suggestion> out;
    out.reserve(model.classifiers.size());
    for (const auto& [name, clf] : model.classifiers) {
        double m = classifier_margin(clf, goal);
        out.push_back({name, RankScore(logistic(m)), m});
    }
    std::stable_sort(out.begin(), out.end(), [](const Suggestion& a, const Suggestion& b) {
        if (a.margin != b.margin) return a.margin > b.margin;
        return a.lemma < b.lemma;
    });
    return out;
}

std::vector<Suggestion> suggest(const PremiseModel& model, const Formula& goal, std::size_t k) {
    if (k < 1) throw Error(ErrorKind::BadArgument, "k must be at least 1");
    if (model.classifiers.empty()) throw Error(ErrorKind::EmptyModel, "model has no classifiers");
    std::vector<Suggestion> ranked = rank_all(model, featurize(goal, model.space));
    if (ranked.size() > k) ranked.erase(ranked.begin() + static_cast<std::ptrdiff_t>(k), ranked.end());
    return ranked;
}

}  // namespace pm
