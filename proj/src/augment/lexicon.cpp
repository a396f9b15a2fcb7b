#include "clr/augment/lexicon.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace clr {

SynonymLexicon SynonymLexicon::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read lexicon file: " + path);
  SynonymLexicon lex;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos)
      throw std::runtime_error("lexicon line " + std::to_string(lineno) + " has no tab separator");
    std::string word = line.substr(0, tab);
    std::vector<std::string> syns;
    std::stringstream rest(line.substr(tab + 1));
    std::string syn;
    while (std::getline(rest, syn, ',')) {
      if (!syn.empty()) syns.push_back(syn);
    }
    if (!syns.empty()) lex.table_[std::move(word)] = std::move(syns);
  }
  return lex;
}

SynonymLexicon SynonymLexicon::from_entries(
    std::vector<std::pair<std::string, std::vector<std::string>>> entries) {
  SynonymLexicon lex;
  for (auto& [word, syns] : entries)
    if (!syns.empty()) lex.table_[std::move(word)] = std::move(syns);
  return lex;
}

const std::vector<std::string>* SynonymLexicon::synonyms(const std::string& word) const {
  const auto it = table_.find(word);
  return it == table_.end() ? nullptr : &it->second;
}

double SynonymLexicon::coverage(const std::vector<std::vector<std::string>>& corpus) const {
  std::size_t total = 0, hits = 0;
  for (const auto& sentence : corpus) {
    for (const auto& tok : sentence) {
      ++total;
      if (table_.count(tok)) ++hits;
    }
  }
  return total == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(total);
}

void SynonymLexicon::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write lexicon file: " + path);
  // Sorted for deterministic files.
  std::vector<std::string> words;
  words.reserve(table_.size());
  for (const auto& [word, syns] : table_) words.push_back(word);
  std::sort(words.begin(), words.end());
  for (const auto& word : words) {
    out << word << '\t';
    const auto& syns = table_.at(word);
    for (std::size_t i = 0; i < syns.size(); ++i) {
      if (i) out << ',';
      out << syns[i];
    }
    out << '\n';
  }
}

CompiledLexicon::CompiledLexicon(const SynonymLexicon& lexicon, const Vocabulary& vocab) {
  for (const auto& [word, syns] : lexicon.table()) {
    if (!vocab.contains(word)) continue;
    std::vector<std::int32_t> ids;
    for (const auto& syn : syns)
      if (vocab.contains(syn)) ids.push_back(vocab.id(syn));
    if (ids.empty()) continue;
    std::sort(ids.begin(), ids.end());
    table_[vocab.id(word)] = std::move(ids);
  }
}

const std::vector<std::int32_t>* CompiledLexicon::synonyms(std::int32_t token_id) const {
  const auto it = table_.find(token_id);
  return it == table_.end() ? nullptr : &it->second;
}

}  // namespace clr
