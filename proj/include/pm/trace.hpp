#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "pm/corpus.hpp"

namespace pm {

inline constexpr std::size_t kStepsPerPatch = 5;
inline constexpr std::size_t kFieldsPerStep = 6;
inline constexpr std::size_t kTraceLength = kStepsPerPatch * kFieldsPerStep;  // 30

// Per-step proof-trace statistics. Every field is 0 for padding.
struct StepEncoding {
    std::uint32_t tactic_code = 0;
    std::uint32_t n_args = 0;
    std::uint32_t first_argtype_code = 0;
    std::uint32_t first_arghead_code = 0;
    std::uint32_t goal_top_symbol_code = 0;
    std::uint32_t n_subgoals = 0;

    std::array<std::uint32_t, kFieldsPerStep> fields() const {
        return {tactic_code, n_args, first_argtype_code, first_arghead_code, goal_top_symbol_code, n_subgoals};
    }
    bool operator==(const StepEncoding&) const = default;
};

// Throws UnknownSymbol when the tactic or goal symbol is missing from the corpus dictionaries.
// The argument head is the lemma name for references, the functor for compound terms, and 0
// for variables and numerals.
StepEncoding encode_step(const ProofStep& step, const Corpus& corpus);

struct TraceVector {
    std::string lemma;
    std::size_t patch_index = 0;
    std::array<double, kTraceLength> values{};  // step-major: 5 slots of 6 fields
};

// Windows of five consecutive steps starting every `stride` steps; the last window is
// zero-padded. Empty proofs give one all-zero vector.
std::vector<TraceVector> patch_vectors(std::string_view lemma, const ProofScript& proof, const Corpus& corpus,
                                       std::size_t stride = kStepsPerPatch);

// Patch vectors of every proved lemma in corpus order.
std::vector<TraceVector> corpus_traces(const Corpus& corpus, std::size_t stride = kStepsPerPatch);

// Divides each coordinate by its dataset maximum (all-zero coordinates stay 0).
std::vector<TraceVector> normalize_dataset(std::vector<TraceVector> vectors);

// CSV with the fixed header `lemma,patch_index,s1_tactic,...,s5_subgoals`.
std::string trace_csv_header();
std::string to_csv(const std::vector<TraceVector>& vectors);

}  // namespace pm
