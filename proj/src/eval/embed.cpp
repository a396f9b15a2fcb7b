#include "clr/eval/embed.hpp"

#include "clr/text/tokenizer.hpp"

namespace clr {

Embedder::Embedder(CheckpointData checkpoint, Vocabulary vocab)
    : config_(checkpoint.config), params_(std::move(checkpoint.params)), vocab_(std::move(vocab)) {
  if (vocab_.size() != config_.vocab_size)
    throw std::invalid_argument("vocabulary size does not match checkpoint config");
}

Embedder Embedder::from_files(const std::string& checkpoint_path, const std::string& vocab_path) {
  return Embedder(load_checkpoint(checkpoint_path), Vocabulary::load(vocab_path));
}

TokenIds Embedder::prepare(const std::string& sentence) const {
  auto ids = vocab_.encode(tokenize(sentence));
  const auto limit = static_cast<std::size_t>(config_.max_positions) - 1;
  if (ids.size() > limit) ids.resize(limit);
  TokenIds row;
  row.reserve(ids.size() + 1);
  row.push_back(Vocabulary::kCls);
  row.insert(row.end(), ids.begin(), ids.end());
  return row;
}

Mat<float> Embedder::embed(const std::vector<std::string>& sentences, Pooling pooling) {
  auto& cache = pooling == Pooling::Cls ? cache_cls_ : cache_mean_;

  std::vector<std::string> fresh;
  for (const auto& s : sentences)
    if (!cache.count(s)) {
      cache.emplace(s, RowVec<float>());  // reserve slot so repeats are skipped
      fresh.push_back(s);
    }

  if (!fresh.empty()) {
    std::vector<TokenIds> rows;
    rows.reserve(fresh.size());
    for (const auto& s : fresh) rows.push_back(prepare(s));
    const auto packed = PackedBatch::from_rows(rows);
    const Mat<float> h = encoder_forward(params_, config_, packed);
    const Mat<float> pooled = pool(h, packed, pooling);
    for (std::size_t i = 0; i < fresh.size(); ++i)
      cache[fresh[i]] = pooled.row(static_cast<Eigen::Index>(i));
    encoded_count_ += fresh.size();
  }

  Mat<float> out(static_cast<Eigen::Index>(sentences.size()), config_.hidden);
  for (std::size_t i = 0; i < sentences.size(); ++i)
    out.row(static_cast<Eigen::Index>(i)) = cache.at(sentences[i]);
  return out;
}

}  // namespace clr
