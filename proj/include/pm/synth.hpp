#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "pm/corpus.hpp"

namespace pm {

// Planted library for tests and demos. Family f owns lemmas f<f>_l<j>, a private symbol pool
// (predicates p<f>/1, q<f>/2, r<f>/1, functions g<f>/1, h<f>/2, constants a<f>, b<f>) and three
// private tactics. Lemma 0 of each family is a dependency of every later lemma; the rest of the
// first half of the family are shared dependencies of at least two later lemmas where the family
// is large enough. Every lemma is proved with two repetitions of the family's five-step idiom.
//
// Emits "library.fof" and "library.prf". Deterministic in `seed`. Throws BadArgument unless
// n_families >= 1 and per_family >= 2.
std::vector<SourceFile> gen_synthetic_corpus(std::size_t n_families, std::size_t per_family, std::uint64_t seed);

// Writes the generated files into `dir` (created if missing); returns their paths.
std::vector<std::filesystem::path> write_sources(const std::vector<SourceFile>& files,
                                                 const std::filesystem::path& dir);

std::string synthetic_lemma_name(std::size_t family, std::size_t index);

}  // namespace pm
