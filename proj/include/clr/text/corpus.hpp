#pragma once

#include <string>
#include <vector>

#include "clr/text/vocab.hpp"

namespace clr {

struct CorpusOptions {
  std::size_t min_len = 4;   // sentences shorter than this are dropped
  std::size_t max_len = 64;  // and longer than this
};

// Reads a one-sentence-per-line UTF-8 file, tokenizes each line, and drops
// sentences outside [min_len, max_len]. Text is never otherwise altered.
std::vector<std::vector<std::string>> load_corpus(const std::string& path,
                                                  const CorpusOptions& opts = {});

// In-memory variant used by tests and the synthetic generator.
std::vector<std::vector<std::string>> filter_sentences(const std::vector<std::string>& lines,
                                                       const CorpusOptions& opts = {});

std::vector<TokenIds> encode_corpus(const std::vector<std::vector<std::string>>& corpus,
                                    const Vocabulary& vocab);

}  // namespace clr
