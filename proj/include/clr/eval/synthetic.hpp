#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "clr/augment/lexicon.hpp"
#include "clr/eval/sts.hpp"

namespace clr {

// Small templated grammar over synonym-paired word pools. Stands in for STS
// datasets at desk scale: paraphrase pairs restate the same content with a
// fronted time clause (gold 1), unrelated pairs draw independent content
// (gold 0).
std::vector<std::string> synthetic_corpus(std::size_t n, std::uint64_t seed,
                                          const std::vector<std::string>* exclude = nullptr);

std::vector<EvalPair> synthetic_eval_pairs(std::size_t n_paraphrase, std::size_t n_unrelated,
                                           std::uint64_t seed);

// Maps each pool word to its in-pool synonym, so substitution plans resolve
// against a corpus-built vocabulary.
SynonymLexicon synthetic_lexicon();

}  // namespace clr
