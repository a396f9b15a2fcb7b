#include "clr/text/vocab.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

namespace clr {

const std::array<std::string_view, Vocabulary::kNumSpecials>& Vocabulary::specials() {
  static const std::array<std::string_view, kNumSpecials> kSpecials = {
      "[PAD]", "[UNK]", "[CLS]", "[MASK]", "[DEL]"};
  return kSpecials;
}

void Vocabulary::insert(std::string token) {
  const auto next = static_cast<std::int32_t>(id_to_token_.size());
  auto [it, fresh] = token_to_id_.emplace(token, next);
  if (!fresh) throw std::invalid_argument("duplicate token in vocabulary: " + token);
  id_to_token_.push_back(std::move(token));
}

Vocabulary Vocabulary::build(const std::vector<std::vector<std::string>>& corpus,
                             std::size_t min_freq, std::size_t max_size) {
  if (min_freq < 1) throw std::invalid_argument("min_freq must be >= 1");
  if (max_size <= kNumSpecials) throw std::invalid_argument("max_size must exceed special count");
  if (corpus.empty()) throw std::invalid_argument("empty corpus");

  std::unordered_map<std::string, std::size_t> counts;
  for (const auto& sentence : corpus)
    for (const auto& tok : sentence) ++counts[tok];

  std::vector<std::pair<std::string, std::size_t>> ranked;
  ranked.reserve(counts.size());
  for (auto& [tok, n] : counts)
    if (n >= min_freq) ranked.emplace_back(tok, n);
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });

  Vocabulary vocab;
  for (auto sp : specials()) vocab.insert(std::string(sp));
  for (auto& [tok, n] : ranked) {
    if (vocab.id_to_token_.size() >= max_size) break;
    (void)n;
    vocab.insert(std::move(tok));
  }
  return vocab;
}

std::int32_t Vocabulary::id(std::string_view token) const {
  const auto it = token_to_id_.find(std::string(token));
  return it == token_to_id_.end() ? kUnk : it->second;
}

bool Vocabulary::contains(std::string_view token) const {
  return token_to_id_.count(std::string(token)) != 0;
}

TokenIds Vocabulary::encode(const std::vector<std::string>& tokens) const {
  TokenIds ids;
  ids.reserve(tokens.size());
  for (const auto& tok : tokens) ids.push_back(id(tok));
  return ids;
}

std::vector<std::string> Vocabulary::decode(const TokenIds& ids) const {
  std::vector<std::string> tokens;
  tokens.reserve(ids.size());
  for (auto i : ids) tokens.push_back(token(i));
  return tokens;
}

void Vocabulary::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write vocabulary file: " + path);
  for (const auto& tok : id_to_token_) out << tok << '\n';
}

Vocabulary Vocabulary::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read vocabulary file: " + path);
  Vocabulary vocab;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    vocab.insert(line);
  }
  if (vocab.id_to_token_.size() < kNumSpecials)
    throw std::runtime_error("vocabulary file too short: " + path);
  for (std::size_t i = 0; i < kNumSpecials; ++i) {
    if (vocab.id_to_token_[i] != specials()[i])
      throw std::runtime_error("vocabulary file missing special tokens: " + path);
  }
  return vocab;
}

}  // namespace clr
