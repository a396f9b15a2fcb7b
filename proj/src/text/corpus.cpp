#include "clr/text/corpus.hpp"

#include <fstream>
#include <stdexcept>

#include "clr/text/tokenizer.hpp"

namespace clr {

std::vector<std::vector<std::string>> filter_sentences(const std::vector<std::string>& lines,
                                                       const CorpusOptions& opts) {
  std::vector<std::vector<std::string>> corpus;
  corpus.reserve(lines.size());
  for (const auto& line : lines) {
    auto tokens = tokenize(line);
    if (tokens.size() < opts.min_len || tokens.size() > opts.max_len) continue;
    corpus.push_back(std::move(tokens));
  }
  return corpus;
}

std::vector<std::vector<std::string>> load_corpus(const std::string& path,
                                                  const CorpusOptions& opts) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read corpus file: " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return filter_sentences(lines, opts);
}

std::vector<TokenIds> encode_corpus(const std::vector<std::vector<std::string>>& corpus,
                                    const Vocabulary& vocab) {
  std::vector<TokenIds> encoded;
  encoded.reserve(corpus.size());
  for (const auto& sentence : corpus) encoded.push_back(vocab.encode(sentence));
  return encoded;
}

}  // namespace clr
