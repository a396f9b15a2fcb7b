#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "clr/eval/embed.hpp"

namespace clr {

struct EvalPair {
  std::string sentence_a, sentence_b;
  double gold = 0;
};

// TSV: sentence_a<TAB>sentence_b<TAB>gold_score, one pair per line.
std::vector<EvalPair> load_eval_pairs(const std::string& path);

struct StsResult {
  double pearson_r = 0;
  double spearman_r = 0;
  std::vector<double> predicted;  // cosine per pair, in input order
};

// Predicted score per pair is the cosine similarity of the two embeddings;
// both correlations are against the gold scores.
StsResult sts_eval(const std::vector<EvalPair>& pairs, Embedder& embedder, Pooling pooling);

// Human-readable report plus a per-pair CSV (index,gold,predicted).
void write_sts_report(std::ostream& out, const StsResult& result, Pooling pooling,
                      std::size_t n_pairs);
void write_sts_scores_csv(std::ostream& out, const std::vector<EvalPair>& pairs,
                          const StsResult& result);

}  // namespace clr
