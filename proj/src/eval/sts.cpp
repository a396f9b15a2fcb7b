#include "clr/eval/sts.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "clr/eval/correlation.hpp"
#include "clr/objectives.hpp"

namespace clr {

std::vector<EvalPair> load_eval_pairs(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read eval pairs file: " + path);
  std::vector<EvalPair> pairs;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto t1 = line.find('\t');
    const auto t2 = t1 == std::string::npos ? std::string::npos : line.find('\t', t1 + 1);
    if (t2 == std::string::npos)
      throw std::runtime_error("eval pairs line " + std::to_string(lineno) +
                               " needs two tab separators");
    EvalPair p;
    p.sentence_a = line.substr(0, t1);
    p.sentence_b = line.substr(t1 + 1, t2 - t1 - 1);
    try {
      p.gold = std::stod(line.substr(t2 + 1));
    } catch (const std::exception&) {
      throw std::runtime_error("eval pairs line " + std::to_string(lineno) + " has a bad score");
    }
    pairs.push_back(std::move(p));
  }
  return pairs;
}

StsResult sts_eval(const std::vector<EvalPair>& pairs, Embedder& embedder, Pooling pooling) {
  if (pairs.size() < 2) throw std::invalid_argument("sts_eval needs at least two pairs");
  std::vector<std::string> sentences;
  sentences.reserve(2 * pairs.size());
  for (const auto& p : pairs) {
    sentences.push_back(p.sentence_a);
    sentences.push_back(p.sentence_b);
  }
  const Mat<float> emb = embedder.embed(sentences, pooling);

  StsResult result;
  std::vector<double> gold;
  result.predicted.reserve(pairs.size());
  gold.reserve(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const RowVec<float> a = emb.row(static_cast<Eigen::Index>(2 * i));
    const RowVec<float> b = emb.row(static_cast<Eigen::Index>(2 * i + 1));
    result.predicted.push_back(static_cast<double>(cosine_sim<float>(a, b)));
    gold.push_back(pairs[i].gold);
  }
  result.pearson_r = pearson(result.predicted, gold);
  result.spearman_r = spearman(result.predicted, gold);
  return result;
}

void write_sts_report(std::ostream& out, const StsResult& result, Pooling pooling,
                      std::size_t n_pairs) {
  char buf[128];
  out << "sts evaluation\n";
  out << "pairs: " << n_pairs << "\n";
  out << "pooling: " << to_string(pooling) << "\n";
  std::snprintf(buf, sizeof buf, "pearson: %.6f\n", result.pearson_r);
  out << buf;
  std::snprintf(buf, sizeof buf, "spearman: %.6f\n", result.spearman_r);
  out << buf;
}

void write_sts_scores_csv(std::ostream& out, const std::vector<EvalPair>& pairs,
                          const StsResult& result) {
  out << "index,gold,predicted\n";
  char buf[128];
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%zu,%.9g,%.9g\n", i, pairs[i].gold, result.predicted[i]);
    out << buf;
  }
}

}  // namespace clr
