#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace clr {

using TokenIds = std::vector<std::int32_t>;

// Immutable token <-> id mapping. Ids 0-4 are always the special tokens, in
// this order: [PAD], [UNK], [CLS], [MASK], [DEL]. [DEL] is a real vocabulary
// entry with its own embedding, not an alias of [MASK]. Safe for concurrent
// reads once built.
class Vocabulary {
 public:
  static constexpr std::int32_t kPad = 0;
  static constexpr std::int32_t kUnk = 1;
  static constexpr std::int32_t kCls = 2;
  static constexpr std::int32_t kMask = 3;
  static constexpr std::int32_t kDel = 4;
  static constexpr std::size_t kNumSpecials = 5;

  static const std::array<std::string_view, kNumSpecials>& specials();

  // Most frequent tokens with count >= min_freq, total size capped at
  // max_size (specials included). Ties at equal frequency resolve to the
  // lexicographically smaller token. Throws std::invalid_argument("empty
  // corpus") when the corpus has no sentences.
  static Vocabulary build(const std::vector<std::vector<std::string>>& corpus,
                          std::size_t min_freq, std::size_t max_size);

  std::int32_t size() const { return static_cast<std::int32_t>(id_to_token_.size()); }
  std::int32_t id(std::string_view token) const;  // kUnk when absent
  bool contains(std::string_view token) const;
  const std::string& token(std::int32_t id) const { return id_to_token_.at(static_cast<std::size_t>(id)); }

  TokenIds encode(const std::vector<std::string>& tokens) const;
  std::vector<std::string> decode(const TokenIds& ids) const;

  // One token per line, line number = id. Byte-identical for identical input.
  void save(const std::string& path) const;
  static Vocabulary load(const std::string& path);

 private:
  Vocabulary() = default;
  void insert(std::string token);

  std::unordered_map<std::string, std::int32_t> token_to_id_;
  std::vector<std::string> id_to_token_;
};

}  // namespace clr
