#include "pm/eval.hpp"

#include <algorithm>

#include "pm/error.hpp"
#include "pm/kernels.hpp"

namespace pm {

GoalResult score_ranking(std::string goal, const std::set<std::string>& true_premises,
                         const std::vector<std::string>& ranking, std::size_t k) {
    GoalResult r;
    r.goal = std::move(goal);
    r.true_premises.assign(true_premises.begin(), true_premises.end());
    std::size_t found = 0;
    double precision_sum = 0.0;
    for (std::size_t i = 0; i < ranking.size(); ++i) {
        const bool relevant = true_premises.count(ranking[i]) > 0;
        if (i < k) {
            r.suggested.push_back(ranking[i]);
            if (relevant) r.hits.push_back(ranking[i]);
        }
        if (relevant) {
            ++found;
            precision_sum += static_cast<double>(found) / static_cast<double>(i + 1);
        }
    }
    if (!true_premises.empty()) {
        const auto n = static_cast<double>(true_premises.size());
        r.recall = static_cast<double>(r.hits.size()) / n;
        r.average_precision = precision_sum / n;
    }
    return r;
}

EvalReport aggregate(std::vector<GoalResult> goals, std::size_t k) {
    EvalReport report;
    report.k = k;
    report.goals = std::move(goals);
    if (report.goals.empty()) return report;
    double recall = 0.0, ap = 0.0;
    for (const GoalResult& g : report.goals) {
        recall += g.recall;
        ap += g.average_precision;
    }
    const auto n = static_cast<double>(report.goals.size());
    report.recall_at_k = recall / n;
    report.mean_average_precision = ap / n;
    return report;
}

EvalReport eval_premise_selection(const Corpus& corpus, LearnAlgo algo, const LearnParams& params, std::size_t k,
                                  const EvalOptions& options) {
    if (k < 1) throw Error(ErrorKind::BadArgument, "k must be at least 1");
    if (corpus.proved_count() < 3)
        throw Error(ErrorKind::InsufficientData,
                    "leave-one-out needs at least 3 proved lemmas, corpus has " +
                        std::to_string(corpus.proved_count()));

    // The feature space comes from the whole corpus; the held-out lemma only ever contributes
    // its statement as the query.
    const FeatureSpace space = FeatureSpace::build(corpus, options.max_term_depth);

    std::vector<const Lemma*> goals;
    for (const Lemma& l : corpus.lemmas())
        if (l.is_proved() && !corpus.deps_of(l.name).empty()) goals.push_back(&l);

    std::vector<GoalResult> results(goals.size());
    const auto n = static_cast<std::ptrdiff_t>(goals.size());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const Lemma& goal = *goals[i];
        const Corpus rest = corpus.without(goal.name);
        const PremiseModel model = train_premise_model(rest, space, algo, params);
        std::vector<std::string> ranking;
        for (const Suggestion& s : rank_all(model, featurize(goal.statement, space))) ranking.push_back(s.lemma);
        results[i] = score_ranking(goal.name, corpus.deps_of(goal.name), ranking, k);
    }
    return aggregate(std::move(results), k);
}

double silhouette(const Dataset& data, std::span<const int> assignment, std::size_t k) {
    if (k < 2) throw Error(ErrorKind::BadModel, "silhouette needs at least 2 clusters");
    if (assignment.size() != data.size()) throw Error(ErrorKind::BadModel, "assignment does not cover the dataset");
    std::vector<std::size_t> sizes(k, 0);
    for (int a : assignment) {
        if (a < 0 || static_cast<std::size_t>(a) >= k) throw Error(ErrorKind::BadModel, "cluster id out of range");
        ++sizes[a];
    }
    if (std::find(sizes.begin(), sizes.end(), 0) != sizes.end())
        throw Error(ErrorKind::BadModel, "silhouette needs every cluster nonempty");
    std::vector<double> values(data.size());
    kernels::silhouette_values(data.view(), assignment, k, values);
    double s = 0.0;
    for (double v : values) s += v;
    return s / static_cast<double>(values.size());
}

double silhouette(const Dataset& data, const ClusterModel& model) {
    return silhouette(data, model.assignment, model.k);
}

}  // namespace pm
