#include <doctest.h>

#include <set>

#include "clr/rng.hpp"

using namespace clr;

TEST_CASE("rng streams are reproducible") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("rng output is frozen across builds") {
  // SplitMix64 reference values for seed 0; these pin the cross-platform
  // reproducibility contract.
  Rng rng(0);
  CHECK(rng.next_u64() == 0xe220a8397b1dcdafULL);
  CHECK(rng.next_u64() == 0x6e789e6aa1b965f4ULL);
  CHECK(rng.next_u64() == 0x06c45d188009454fULL);
}

TEST_CASE("below stays in range and covers values") {
  Rng rng(7);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 2000; ++i) {
    const auto v = rng.below(13);
    CHECK(v < 13);
    seen.insert(v);
  }
  CHECK(seen.size() == 13);
}

TEST_CASE("unit is in [0,1)") {
  Rng rng(9);
  for (int i = 0; i < 1000; ++i) {
    const double u = rng.unit();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("sample_distinct yields k sorted distinct values") {
  Rng rng(3);
  const auto s = rng.sample_distinct(7, 10);
  CHECK(s.size() == 7);
  for (std::size_t i = 1; i < s.size(); ++i) CHECK(s[i - 1] < s[i]);
  for (auto v : s) {
    CHECK(v >= 0);
    CHECK(v < 10);
  }
  CHECK(rng.sample_distinct(20, 5).size() == 5);
}

TEST_CASE("mix_seed separates keys and streams") {
  CHECK(mix_seed(1, 2) != mix_seed(2, 1));
  CHECK(mix_seed(0, 1) != mix_seed(2, 0));
  CHECK(mix_seed(5, 1, 2) != mix_seed(5, 2, 1));
  CHECK(mix_seed(5, 1, 2) == mix_seed(5, 1, 2));
}

TEST_CASE("normal has roughly standard moments") {
  Rng rng(11);
  double sum = 0, sum_sq = 0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const double x = rng.normal();
    sum += x;
    sum_sq += x * x;
  }
  CHECK(std::abs(sum / n) < 0.03);
  CHECK(std::abs(sum_sq / n - 1.0) < 0.05);
}
