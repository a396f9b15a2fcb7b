#include <doctest.h>

#include "clr/batch.hpp"
#include "helpers.hpp"

using namespace clr;

namespace {

std::vector<TokenIds> sample_sentences(std::int32_t n, std::int32_t len = 12) {
  std::vector<TokenIds> out;
  for (std::int32_t i = 0; i < n; ++i) out.push_back(testing::iota_tokens(len, 5 + i));
  return out;
}

ContrastiveBatch make_batch(std::int32_t n, std::uint64_t seed = 11, std::int64_t index = 3) {
  const auto sentences = sample_sentences(n);
  std::vector<std::int64_t> src(static_cast<std::size_t>(n));
  BatchOptions opts;
  opts.vocab_size = 64;
  return build_contrastive_batch(sentences, src, AugmentationPipeline::parse("del-span"),
                                 AugmentationParams{}, seed, index, nullptr, opts);
}

}  // namespace

TEST_CASE("positive_of is the xor pairing with range checks") {
  CHECK(positive_of(0, 4) == 1);
  CHECK(positive_of(5, 4) == 4);
  for (std::int32_t i = 0; i < 8; ++i) CHECK(positive_of(positive_of(i, 4), 4) == i);
  CHECK_THROWS_AS(positive_of(8, 4), std::out_of_range);
  CHECK_THROWS_AS(positive_of(-1, 4), std::out_of_range);
}

TEST_CASE("pairing map counts 2N directed positive pairs") {
  const auto partner = interleaved_pairing(4);
  REQUIRE(partner.size() == 8);
  // Sum of m(i,j) over all ordered pairs equals 2N.
  std::int32_t pair_count = 0;
  for (std::int32_t i = 0; i < 8; ++i)
    for (std::int32_t j = 0; j < 8; ++j)
      if (j == partner[static_cast<std::size_t>(i)]) ++pair_count;
  CHECK(pair_count == 8);
}

TEST_CASE("a batch of two sentences has four views paired 0-1 and 2-3") {
  const auto batch = make_batch(2);
  CHECK(batch.views.size() == 4);
  CHECK(batch.masked.size() == 2);
  CHECK(positive_of(0, batch.n_sentences) == 1);
  CHECK(positive_of(2, batch.n_sentences) == 3);
  CHECK(positive_of(3, batch.n_sentences) == 2);
}

TEST_CASE("every view and masked row starts with CLS and pads only as a suffix") {
  const auto batch = make_batch(3);
  const auto check_rows = [](const std::vector<TokenIds>& rows,
                             const std::vector<std::int32_t>& lengths) {
    for (std::size_t r = 0; r < rows.size(); ++r) {
      CHECK(rows[r][0] == Vocabulary::kCls);
      const auto len = static_cast<std::size_t>(lengths[r]);
      for (std::size_t i = 0; i < rows[r].size(); ++i) {
        if (i < len) CHECK(rows[r][i] != Vocabulary::kPad);
        else CHECK(rows[r][i] == Vocabulary::kPad);
      }
    }
  };
  check_rows(batch.views, batch.view_lengths);
  check_rows(batch.masked, batch.masked_lengths);
}

TEST_CASE("a single-sentence batch is the boundary case") {
  const auto batch = make_batch(1);
  CHECK(batch.views.size() == 2);
  CHECK(batch.n_sentences == 1);
  CHECK(positive_of(0, 1) == 1);
}

TEST_CASE("batch construction is deterministic and seed-sensitive") {
  const auto b1 = make_batch(4, 11, 3);
  const auto b2 = make_batch(4, 11, 3);
  CHECK(b1.views == b2.views);
  CHECK(b1.masked == b2.masked);
  CHECK(b1.mlm_labels == b2.mlm_labels);

  const auto b3 = make_batch(4, 12, 3);
  CHECK(b1.views != b3.views);
  const auto b4 = make_batch(4, 11, 4);
  CHECK(b1.views != b4.views);
}

TEST_CASE("mlm labels point at masked rows shifted past CLS") {
  const auto batch = make_batch(3);
  const auto sentences = sample_sentences(3);
  for (std::int32_t s = 0; s < batch.n_sentences; ++s) {
    const auto& labels = batch.mlm_labels[static_cast<std::size_t>(s)];
    CHECK(!labels.empty());
    for (const auto& [pos, original] : labels) {
      CHECK(pos >= 1);  // never the CLS slot
      CHECK(pos < batch.masked_lengths[static_cast<std::size_t>(s)]);
      // The stored label is the pre-mask token at that position.
      CHECK(original == sentences[static_cast<std::size_t>(s)][static_cast<std::size_t>(pos - 1)]);
    }
  }
}

TEST_CASE("views of the same sentence differ across the two seeds in general") {
  // Not guaranteed per sentence, but across a batch of 8 at least one pair
  // must differ or the augmentation seeds would be broken.
  const auto batch = make_batch(8);
  bool any_differ = false;
  for (std::int32_t k = 0; k < 8; ++k)
    if (batch.views[static_cast<std::size_t>(2 * k)] !=
        batch.views[static_cast<std::size_t>(2 * k + 1)])
      any_differ = true;
  CHECK(any_differ);
}
