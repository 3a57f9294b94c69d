#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "pm/atp_learn.hpp"
#include "pm/cluster.hpp"
#include "pm/corpus.hpp"

namespace pm {

struct GoalResult {
    std::string goal;
    std::vector<std::string> true_premises;  // sorted
    std::vector<std::string> suggested;      // top k, in rank order
    std::vector<std::string> hits;           // suggested ∩ true_premises, in rank order
    double recall = 0.0;                     // |hits| / |true_premises|
    double average_precision = 0.0;          // over the full ranking
};

struct EvalReport {
    std::size_t k = 0;
    std::vector<GoalResult> goals;
    double recall_at_k = 0.0;
    double mean_average_precision = 0.0;

    std::size_t n_goals() const { return goals.size(); }
};

// Scores one full ranking (best first) against the true premises of a goal.
GoalResult score_ranking(std::string goal, const std::set<std::string>& true_premises,
                         const std::vector<std::string>& ranking, std::size_t k);

// Means over goals, in order.
EvalReport aggregate(std::vector<GoalResult> goals, std::size_t k);

struct EvalOptions {
    std::size_t max_term_depth = FeatureSpace::kDefaultDepth;
};

// Leave-one-out premise selection: every proved lemma with a nonempty dependency set is held
// out in turn, a model is trained on the rest, and its statement is ranked against them.
// Goals are evaluated in parallel; the report is independent of the schedule.
EvalReport eval_premise_selection(const Corpus& corpus, LearnAlgo algo, const LearnParams& params, std::size_t k,
                                  const EvalOptions& options = {});

// Mean silhouette with Euclidean distance. Throws BadModel unless k >= 2 and every cluster
// has a point.
double silhouette(const Dataset& data, const ClusterModel& model);
double silhouette(const Dataset& data, std::span<const int> assignment, std::size_t k);

}  // namespace pm
