#include "clr/augment/plan.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>

namespace clr {

const char* to_string(AugmentationKind kind) {
  switch (kind) {
    case AugmentationKind::WordDeletion: return "del-word";
    case AugmentationKind::SpanDeletion: return "del-span";
    case AugmentationKind::Reordering: return "reorder";
    case AugmentationKind::Substitution: return "subs";
  }
  return "?";
}

namespace {

std::int32_t span_length_for(std::int32_t len, double ratio) {
  const auto raw = static_cast<std::int32_t>(std::floor(ratio * static_cast<double>(len)));
  return std::max<std::int32_t>(1, raw);
}

// Rejection sampling of up to `want` disjoint spans of fixed length: draw
// uniform start positions and keep non-overlapping ones, at most
// max_attempts draws in total. Whatever was placed is kept, in placement
// order.
std::vector<Span> place_disjoint_spans(std::int32_t len, std::int32_t span_len,
                                       std::int32_t want, std::int32_t max_attempts, Rng& rng) {
  std::vector<Span> placed;
  if (span_len > len || want <= 0) return placed;
  const std::int32_t max_start = len - span_len;
  for (std::int32_t attempt = 0; attempt < max_attempts && std::ssize(placed) < want; ++attempt) {
    const auto start = static_cast<std::int32_t>(rng.below(static_cast<std::uint64_t>(max_start) + 1));
    const Span candidate{start, start + span_len};
    const bool clash = std::any_of(placed.begin(), placed.end(),
                                   [&](const Span& s) { return s.overlaps(candidate); });
    if (!clash) placed.push_back(candidate);
  }
  return placed;
}

}  // namespace

AugmentationPlan sample_plan(AugmentationKind kind, const AugmentationParams& params,
                             const TokenIds& tokens, Rng& rng, const CompiledLexicon* lexicon) {
  const auto len = static_cast<std::int32_t>(tokens.size());
  AugmentationPlan plan;
  plan.kind = kind;
  if (len < 1) return plan;

  switch (kind) {
    case AugmentationKind::WordDeletion: {
      const auto k = static_cast<std::int32_t>(
          std::floor(params.delete_ratio * static_cast<double>(len)));
      plan.delete_indices = rng.sample_distinct(k, len);
      break;
    }
    case AugmentationKind::SpanDeletion: {
      const auto span_len = span_length_for(len, params.span_ratio);
      plan.delete_spans = place_disjoint_spans(len, span_len, params.span_count,
                                               params.max_span_attempts, rng);
      std::sort(plan.delete_spans.begin(), plan.delete_spans.end(),
                [](const Span& a, const Span& b) { return a.begin < b.begin; });
      break;
    }
    case AugmentationKind::Reordering: {
      const auto span_len = span_length_for(len, params.span_ratio);
      auto spans = place_disjoint_spans(len, span_len, 2 * params.reorder_pairs,
                                        params.max_span_attempts, rng);
      // Consecutive placements form a pair; a dangling odd span is dropped.
      for (std::size_t i = 0; i + 1 < spans.size(); i += 2) {
        Span a = spans[i], b = spans[i + 1];
        if (b.begin < a.begin) std::swap(a, b);
        plan.swap_pairs.emplace_back(a, b);
      }
      std::sort(plan.swap_pairs.begin(), plan.swap_pairs.end(),
                [](const auto& a, const auto& b) { return a.first.begin < b.first.begin; });
      break;
    }
    case AugmentationKind::Substitution: {
      if (lexicon == nullptr || lexicon->size() == 0) break;
      std::vector<std::int32_t> candidates;
      for (std::int32_t i = 0; i < len; ++i)
        if (lexicon->has(tokens[static_cast<std::size_t>(i)])) candidates.push_back(i);
      const auto want = static_cast<std::int32_t>(
          std::floor(params.substitute_ratio * static_cast<double>(len)));
      const auto k = std::min<std::int32_t>(want, static_cast<std::int32_t>(candidates.size()));
      const auto chosen = rng.sample_distinct(k, static_cast<std::int32_t>(candidates.size()));
      for (auto c : chosen) {
        const auto index = candidates[static_cast<std::size_t>(c)];
        const auto& syns = *lexicon->synonyms(tokens[static_cast<std::size_t>(index)]);
        const auto pick = syns[static_cast<std::size_t>(rng.below(syns.size()))];
        plan.substitutions.emplace_back(index, pick);
      }
      break;
    }
  }
  return plan;
}

}  // namespace clr
