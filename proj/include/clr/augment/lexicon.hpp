#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "clr/text/vocab.hpp"

namespace clr {

// Synonym lexicon loaded from a TSV file, one headword per line:
//   word<TAB>syn1,syn2,...
class SynonymLexicon {
 public:
  static SynonymLexicon load(const std::string& path);
  static SynonymLexicon from_entries(
      std::vector<std::pair<std::string, std::vector<std::string>>> entries);

  std::size_t size() const { return table_.size(); }
  const std::vector<std::string>* synonyms(const std::string& word) const;

  // Fraction of corpus token occurrences that have at least one synonym.
  double coverage(const std::vector<std::vector<std::string>>& corpus) const;

  void save(const std::string& path) const;

  const std::unordered_map<std::string, std::vector<std::string>>& table() const { return table_; }

 private:
  std::unordered_map<std::string, std::vector<std::string>> table_;
};

// Lexicon resolved against a vocabulary: only headwords in the vocabulary
// with at least one in-vocabulary synonym survive, so substitution plans can
// never introduce [UNK].
class CompiledLexicon {
 public:
  CompiledLexicon() = default;
  CompiledLexicon(const SynonymLexicon& lexicon, const Vocabulary& vocab);

  const std::vector<std::int32_t>* synonyms(std::int32_t token_id) const;
  bool has(std::int32_t token_id) const { return table_.count(token_id) != 0; }
  std::size_t size() const { return table_.size(); }

 private:
  std::unordered_map<std::int32_t, std::vector<std::int32_t>> table_;
};

}  // namespace clr
