#include "pm/trace.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "pm/error.hpp"

namespace pm {

StepEncoding encode_step(const ProofStep& step, const Corpus& corpus) {
    StepEncoding e;
    auto tactic = corpus.tactics().code(step.tactic);
    if (!tactic) throw Error(ErrorKind::UnknownSymbol, "tactic '" + step.tactic + "' not in corpus");
    e.tactic_code = *tactic;
    auto goal = corpus.symbols().code(step.goal_top_symbol);
    if (!goal) throw Error(ErrorKind::UnknownSymbol, "goal symbol '" + step.goal_top_symbol + "' not in corpus");
    e.goal_top_symbol_code = *goal;
    e.n_subgoals = step.n_subgoals_after;
    e.n_args = static_cast<std::uint32_t>(step.args.size());
    if (!step.args.empty()) {
        const Arg& first = step.args.front();
        e.first_argtype_code = corpus.argtypes().code(arg_type_name(first)).value_or(0);
        if (auto* ref = std::get_if<LemmaRef>(&first)) {
            e.first_arghead_code = corpus.symbols().code(ref->name).value_or(0);
        } else if (auto* t = std::get_if<Term>(&first); t && !t->is_var()) {
            e.first_arghead_code = corpus.symbols().code(t->name).value_or(0);
        }
    }
    return e;
}

std::vector<TraceVector> patch_vectors(std::string_view lemma, const ProofScript& proof, const Corpus& corpus,
                                       std::size_t stride) {
    if (stride == 0) throw Error(ErrorKind::BadArgument, "patch stride must be positive");
    std::vector<StepEncoding> encoded;
    encoded.reserve(proof.steps.size());
    for (const ProofStep& s : proof.steps) encoded.push_back(encode_step(s, corpus));

    std::vector<TraceVector> out;
    std::size_t start = 0;
    do {
        TraceVector tv;
        tv.lemma = std::string(lemma);
        tv.patch_index = out.size();
        for (std::size_t slot = 0; slot < kStepsPerPatch && start + slot < encoded.size(); ++slot) {
            auto fields = encoded[start + slot].fields();
            for (std::size_t f = 0; f < kFieldsPerStep; ++f) tv.values[slot * kFieldsPerStep + f] = fields[f];
        }
        out.push_back(std::move(tv));
        start += stride;
    } while (start < encoded.size());
    return out;
}

std::vector<TraceVector> corpus_traces(const Corpus& corpus, std::size_t stride) {
    std::vector<const Lemma*> proved;
    for (const Lemma& l : corpus.lemmas())
        if (l.is_proved()) proved.push_back(&l);
    std::vector<std::vector<TraceVector>> per_lemma(proved.size());
    const auto n = static_cast<std::ptrdiff_t>(proved.size());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < n; ++i)
        per_lemma[i] = patch_vectors(proved[i]->name, *proved[i]->proof, corpus, stride);
    std::vector<TraceVector> out;
    for (auto& v : per_lemma) std::move(v.begin(), v.end(), std::back_inserter(out));
    return out;
}

std::vector<TraceVector> normalize_dataset(std::vector<TraceVector> vectors) {
    if (vectors.empty()) throw Error(ErrorKind::EmptyDataset, "cannot normalize an empty dataset");
    std::array<double, kTraceLength> max{};
    for (const TraceVector& v : vectors)
        for (std::size_t j = 0; j < kTraceLength; ++j) max[j] = std::max(max[j], v.values[j]);
    for (TraceVector& v : vectors)
        for (std::size_t j = 0; j < kTraceLength; ++j)
            v.values[j] = max[j] > 0.0 ? v.values[j] / max[j] : 0.0;
    return vectors;
}

std::string trace_csv_header() {
    static constexpr const char* kFieldNames[kFieldsPerStep] = {"tactic", "nargs",   "argtype",
                                                                "arghead", "goal", "subgoals"};
    std::string h = "lemma,patch_index";
    for (std::size_t s = 1; s <= kStepsPerPatch; ++s)
        for (const char* f : kFieldNames) h += fmt::format(",s{}_{}", s, f);
    return h;
}

std::string to_csv(const std::vector<TraceVector>& vectors) {
    std::string out = trace_csv_header() + "\n";
    for (const TraceVector& v : vectors) {
        out += fmt::format("{},{}", v.lemma, v.patch_index);
        for (double x : v.values) out += fmt::format(",{}", x);
        out += '\n';
    }
    return out;
}

}  // namespace pm
