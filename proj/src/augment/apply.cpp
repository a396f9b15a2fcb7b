#include "clr/augment/apply.hpp"

#include <algorithm>
#include <stdexcept>

namespace clr {

namespace {

void check_index(std::int32_t index, std::size_t len, const char* what) {
  if (index < 0 || static_cast<std::size_t>(index) >= len)
    throw std::invalid_argument(std::string(what) + " index out of range");
}

void check_span(const Span& s, std::size_t len) {
  if (s.begin < 0 || s.end > static_cast<std::int32_t>(len) || s.begin >= s.end)
    throw std::invalid_argument("span out of range");
}

}  // namespace

TokenIds collapse_dels(TokenIds tokens) {
  TokenIds out;
  out.reserve(tokens.size());
  for (auto id : tokens) {
    if (id == Vocabulary::kDel && !out.empty() && out.back() == Vocabulary::kDel) continue;
    out.push_back(id);
  }
  return out;
}

TokenIds apply_word_deletion(const TokenIds& tokens, const std::vector<std::int32_t>& indices) {
  TokenIds out = tokens;
  for (auto i : indices) {
    check_index(i, tokens.size(), "deletion");
    out[static_cast<std::size_t>(i)] = Vocabulary::kDel;
  }
  return collapse_dels(std::move(out));
}

TokenIds apply_span_deletion(const TokenIds& tokens, const std::vector<Span>& spans) {
  for (const auto& s : spans) check_span(s, tokens.size());
  TokenIds out;
  out.reserve(tokens.size());
  std::vector<bool> in_span(tokens.size(), false);
  std::vector<bool> span_start(tokens.size(), false);
  for (const auto& s : spans) {
    span_start[static_cast<std::size_t>(s.begin)] = true;
    for (auto i = s.begin; i < s.end; ++i) in_span[static_cast<std::size_t>(i)] = true;
  }
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (span_start[i]) out.push_back(Vocabulary::kDel);
    if (!in_span[i]) out.push_back(tokens[i]);
  }
  return collapse_dels(std::move(out));
}

TokenIds apply_reorder(const TokenIds& tokens, const std::vector<std::pair<Span, Span>>& pairs) {
  const auto len = tokens.size();
  std::vector<Span> all;
  for (const auto& [a, b] : pairs) {
    check_span(a, len);
    check_span(b, len);
    all.push_back(a);
    all.push_back(b);
  }
  for (std::size_t i = 0; i < all.size(); ++i)
    for (std::size_t j = i + 1; j < all.size(); ++j)
      if (all[i].overlaps(all[j])) throw std::invalid_argument("overlapping reorder spans");

  std::vector<bool> removed(len, false);
  for (const auto& s : all)
    for (auto i = s.begin; i < s.end; ++i) removed[static_cast<std::size_t>(i)] = true;

  // Residual offset of an original position = surviving tokens before it.
  std::vector<std::int32_t> residual_offset(len + 1, 0);
  for (std::size_t i = 0; i < len; ++i)
    residual_offset[i + 1] = residual_offset[i] + (removed[i] ? 0 : 1);

  TokenIds residual;
  residual.reserve(len);
  for (std::size_t i = 0; i < len; ++i)
    if (!removed[i]) residual.push_back(tokens[i]);

  struct Insertion {
    std::int32_t target;    // residual offset where the segment is reinserted
    std::int32_t slot;      // original begin of the slot, breaks adjacency ties
    TokenIds segment;
  };
  std::vector<Insertion> insertions;
  for (const auto& [a, b] : pairs) {
    TokenIds seg_a(tokens.begin() + a.begin, tokens.begin() + a.end);
    TokenIds seg_b(tokens.begin() + b.begin, tokens.begin() + b.end);
    insertions.push_back({residual_offset[static_cast<std::size_t>(a.begin)], a.begin, std::move(seg_b)});
    insertions.push_back({residual_offset[static_cast<std::size_t>(b.begin)], b.begin, std::move(seg_a)});
  }
  std::sort(insertions.begin(), insertions.end(), [](const Insertion& x, const Insertion& y) {
    if (x.target != y.target) return x.target < y.target;
    return x.slot < y.slot;
  });

  TokenIds out;
  out.reserve(len);
  std::size_t next = 0;
  for (std::int32_t pos = 0; pos <= static_cast<std::int32_t>(residual.size()); ++pos) {
    while (next < insertions.size() && insertions[next].target == pos) {
      out.insert(out.end(), insertions[next].segment.begin(), insertions[next].segment.end());
      ++next;
    }
    if (pos < static_cast<std::int32_t>(residual.size()))
      out.push_back(residual[static_cast<std::size_t>(pos)]);
  }
  return out;
}

TokenIds apply_substitution(const TokenIds& tokens,
                            const std::vector<std::pair<std::int32_t, std::int32_t>>& choices) {
  TokenIds out = tokens;
  for (const auto& [index, replacement] : choices) {
    check_index(index, tokens.size(), "substitution");
    out[static_cast<std::size_t>(index)] = replacement;
  }
  return out;
}

TokenIds apply_plan(const TokenIds& tokens, const AugmentationPlan& plan) {
  switch (plan.kind) {
    case AugmentationKind::WordDeletion: return apply_word_deletion(tokens, plan.delete_indices);
    case AugmentationKind::SpanDeletion: return apply_span_deletion(tokens, plan.delete_spans);
    case AugmentationKind::Reordering: return apply_reorder(tokens, plan.swap_pairs);
    case AugmentationKind::Substitution: return apply_substitution(tokens, plan.substitutions);
  }
  throw std::logic_error("unknown augmentation kind");
}

TokenIds augment(const TokenIds& tokens, AugmentationKind kind, const AugmentationParams& params,
                 std::uint64_t seed, const CompiledLexicon* lexicon) {
  Rng rng(seed);
  return apply_plan(tokens, sample_plan(kind, params, tokens, rng, lexicon));
}

AugmentationPipeline AugmentationPipeline::parse(const std::string& name) {
  AugmentationPipeline p;
  std::size_t pos = 0;
  while (pos <= name.size()) {
    const auto plus = name.find('+', pos);
    const auto part = name.substr(pos, plus == std::string::npos ? std::string::npos : plus - pos);
    if (part == "del-word") p.stages.push_back(AugmentationKind::WordDeletion);
    else if (part == "del-span") p.stages.push_back(AugmentationKind::SpanDeletion);
    else if (part == "reorder") p.stages.push_back(AugmentationKind::Reordering);
    else if (part == "subs") p.stages.push_back(AugmentationKind::Substitution);
    else throw std::invalid_argument("unknown augmentation kind: " + part);
    if (plus == std::string::npos) break;
    pos = plus + 1;
  }
  return p;
}

std::string AugmentationPipeline::name() const {
  std::string out;
  for (std::size_t i = 0; i < stages.size(); ++i) {
    if (i) out += '+';
    out += to_string(stages[i]);
  }
  return out;
}

bool AugmentationPipeline::uses_lexicon() const {
  return std::any_of(stages.begin(), stages.end(),
                     [](AugmentationKind k) { return k == AugmentationKind::Substitution; });
}

bool AugmentationPipeline::single_unstable() const {
  return stages.size() == 1 && (stages[0] == AugmentationKind::Substitution ||
                                stages[0] == AugmentationKind::Reordering);
}

TokenIds augment(const TokenIds& tokens, const AugmentationPipeline& pipeline,
                 const AugmentationParams& params, std::uint64_t seed,
                 const CompiledLexicon* lexicon) {
  TokenIds current = tokens;
  for (std::size_t stage = 0; stage < pipeline.stages.size(); ++stage) {
    Rng rng(mix_seed(seed, static_cast<std::uint64_t>(stage)));
    current = apply_plan(current, sample_plan(pipeline.stages[stage], params, current, rng, lexicon));
  }
  return collapse_dels(std::move(current));
}

}  // namespace clr
