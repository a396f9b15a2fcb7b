#include <doctest.h>

#include <cmath>

#include "clr/batch.hpp"
#include "clr/objectives.hpp"
#include "helpers.hpp"

using namespace clr;
using testing::random_mat;
using testing::rel_err;

namespace {

// Independent oracle: Eq. 1 / Eq. 2 evaluated with plain scalar exp/log
// arithmetic, looping over every (i, j, k). No vectorization, no
// stabilization; kept separate from the implementation on purpose.
double oracle_cos(const Mat<double>& z, Eigen::Index a, Eigen::Index b) {
  double dot = 0, na = 0, nb = 0;
  for (Eigen::Index c = 0; c < z.cols(); ++c) {
    dot += z(a, c) * z(b, c);
    na += z(a, c) * z(a, c);
    nb += z(b, c) * z(b, c);
  }
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

double oracle_pair(const Mat<double>& z, Eigen::Index i, Eigen::Index j, double tau) {
  const double numer = std::exp(oracle_cos(z, i, j) / tau);
  double denom = 0;
  for (Eigen::Index k = 0; k < z.rows(); ++k)
    if (k != i) denom += std::exp(oracle_cos(z, i, k) / tau);
  return -std::log(numer / denom);
}

double oracle_total(const Mat<double>& z, const std::vector<std::int32_t>& partner, double tau) {
  double total = 0;
  for (Eigen::Index i = 0; i < z.rows(); ++i)
    total += oracle_pair(z, i, partner[static_cast<std::size_t>(i)], tau);
  return total;
}

Mat<double> unit_axes_batch() {
  Mat<double> z(4, 2);
  z << 1, 0, 0, 1, -1, 0, 0, -1;
  return z;
}

}  // namespace

TEST_CASE("cosine similarity on known vectors") {
  RowVec<double> e1(2), e2(2), diag(2), parallel_a(2), parallel_b(2);
  e1 << 1, 0;
  e2 << 0, 1;
  diag << 1, 1;
  parallel_a << 1, 2;
  parallel_b << 2, 4;
  CHECK(cosine_sim<double>(e1, e2) == doctest::Approx(0.0));
  CHECK(cosine_sim<double>(parallel_a, parallel_b) == doctest::Approx(1.0));
  CHECK(cosine_sim<double>(e1, diag) == doctest::Approx(1.0 / std::sqrt(2.0)));

  RowVec<double> zero = RowVec<double>::Zero(2);
  CHECK_THROWS_WITH_AS(cosine_sim<double>(e1, zero), "zero-norm embedding",
                       std::invalid_argument);
}

TEST_CASE("a coincident pair with no negatives has zero loss") {
  Mat<double> z(2, 2);
  z << 1, 0, 1, 0;
  CHECK(nt_xent_pair<double>(0, 1, z, 1.0) == doctest::Approx(0.0));
  CHECK(contrastive_loss<double>(z, {1, 0}, 1.0) == doctest::Approx(0.0));
}

TEST_CASE("orthogonal axes batch matches the closed form and the oracle") {
  const auto z = unit_axes_batch();
  const double tau = 0.5;
  // By symmetry every directed pair costs log(2 + e^{-2}).
  const double per_pair = std::log(2.0 + std::exp(-2.0));
  CHECK(nt_xent_pair<double>(0, 1, z, tau) == doctest::Approx(per_pair));
  CHECK(nt_xent_pair<double>(0, 1, z, tau) == doctest::Approx(oracle_pair(z, 0, 1, tau)));

  const std::vector<std::int32_t> partner = {1, 0, 3, 2};
  const double total = contrastive_loss<double>(z, partner, tau);
  CHECK(total == doctest::Approx(4.0 * per_pair));
  CHECK(total == doctest::Approx(oracle_total(z, partner, tau)));
}

TEST_CASE("pair losses are nonnegative") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto z = random_mat<double>(6, 5, seed);
    for (double tau : {0.1, 0.5, 1.0}) {
      CHECK(nt_xent_pair<double>(0, 3, z, tau) >= 0.0);
      CHECK(contrastive_loss<double>(z, interleaved_pairing(3), tau) >= 0.0);
    }
  }
}

TEST_CASE("vectorized loss equals the triple-loop oracle") {
  Rng meta(5);
  for (int trial = 0; trial < 60; ++trial) {
    const auto n_sent = static_cast<std::int32_t>(1 + meta.below(8));
    const auto dim = static_cast<Eigen::Index>(2 + meta.below(12));
    const auto z = random_mat<double>(2 * n_sent, dim, meta.next_u64());
    const auto partner = interleaved_pairing(n_sent);
    for (double tau : {0.1, 0.5, 1.0}) {
      const double ours = contrastive_loss<double>(z, partner, tau);
      const double ref = oracle_total(z, partner, tau);
      CHECK(std::abs(ours - ref) < 1e-6);
    }
  }
}

TEST_CASE("loss is invariant to positive per-vector rescaling") {
  const auto z = random_mat<double>(8, 6, 42);
  const auto partner = interleaved_pairing(4);
  Mat<double> scaled = z;
  Rng rng(7);
  for (Eigen::Index i = 0; i < scaled.rows(); ++i) scaled.row(i) *= 0.1 + 5.0 * rng.unit();
  CHECK(contrastive_loss<double>(scaled, partner, 0.5) ==
        doctest::Approx(contrastive_loss<double>(z, partner, 0.5)));
}

TEST_CASE("loss is invariant under a common permutation of views and pairing") {
  const auto z = random_mat<double>(8, 4, 9);
  const auto partner = interleaved_pairing(4);
  const double base = contrastive_loss<double>(z, partner, 0.5);

  std::vector<std::int32_t> perm = {5, 2, 7, 0, 3, 6, 1, 4};
  Mat<double> zp(8, 4);
  std::vector<std::int32_t> pp(8);
  for (std::int32_t i = 0; i < 8; ++i) zp.row(perm[static_cast<std::size_t>(i)]) = z.row(i);
  for (std::int32_t i = 0; i < 8; ++i)
    pp[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])] =
        perm[static_cast<std::size_t>(partner[static_cast<std::size_t>(i)])];
  CHECK(contrastive_loss<double>(zp, pp, 0.5) == doctest::Approx(base));
}

TEST_CASE("malformed pairings and zero vectors are rejected") {
  const auto z = random_mat<double>(4, 3, 1);
  CHECK_THROWS_WITH_AS(contrastive_loss<double>(z, {0, 1, 3, 2}, 0.5), "malformed pairing",
                       std::invalid_argument);
  CHECK_THROWS_AS(contrastive_loss<double>(z, {1, 0}, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(contrastive_loss<double>(z, {2, 3, 0, 1}, -0.5), std::invalid_argument);

  Mat<double> with_zero = z;
  with_zero.row(2).setZero();
  CHECK_THROWS_WITH_AS(contrastive_loss<double>(with_zero, {1, 0, 3, 2}, 0.5),
                       "zero-norm embedding", std::invalid_argument);
}

TEST_CASE("analytic gradient of the contrastive loss matches finite differences") {
  Rng meta(31);
  for (int trial = 0; trial < 8; ++trial) {
    const auto n_sent = static_cast<std::int32_t>(1 + meta.below(4));
    auto z = random_mat<double>(2 * n_sent, 5, meta.next_u64());
    const auto partner = interleaved_pairing(n_sent);
    const double tau = trial % 2 ? 0.5 : 0.2;

    Mat<double> grad;
    contrastive_loss<double>(z, partner, tau, &grad);

    Rng probe_rng(meta.next_u64());
    for (int probe = 0; probe < 12; ++probe) {
      const auto r = static_cast<Eigen::Index>(probe_rng.below(static_cast<std::uint64_t>(z.rows())));
      const auto c = static_cast<Eigen::Index>(probe_rng.below(static_cast<std::uint64_t>(z.cols())));
      const double h = 1e-6 * std::max(1.0, std::abs(z(r, c)));
      const double saved = z(r, c);
      z(r, c) = saved + h;
      const double up = contrastive_loss<double>(z, partner, tau);
      z(r, c) = saved - h;
      const double down = contrastive_loss<double>(z, partner, tau);
      z(r, c) = saved;
      const double fd = (up - down) / (2 * h);
      CHECK(rel_err(fd, grad(r, c)) < 1e-4);
    }
  }
}

TEST_CASE("mlm loss on known logits") {
  // Uniform over a two-token vocabulary costs ln 2.
  Mat<double> uniform = Mat<double>::Zero(3, 2);
  CHECK(mlm_loss<double>(uniform, {0, 1, 0}) == doctest::Approx(std::log(2.0)));

  // All mass on the true id drives the loss to zero.
  Mat<double> confident = Mat<double>::Zero(2, 4);
  confident(0, 1) = 60.0;
  confident(1, 3) = 60.0;
  CHECK(mlm_loss<double>(confident, {1, 3}) == doctest::Approx(0.0));

  CHECK_THROWS_WITH_AS(mlm_loss<double>(Mat<double>(0, 4), {}), "no masked positions",
                       std::invalid_argument);
}

TEST_CASE("mlm loss is symmetric in row order") {
  const auto logits = random_mat<double>(5, 7, 3);
  const std::vector<std::int32_t> labels = {1, 0, 6, 2, 4};
  const double base = mlm_loss<double>(logits, labels);

  Mat<double> shuffled(5, 7);
  const std::vector<std::int32_t> order = {3, 0, 4, 1, 2};
  std::vector<std::int32_t> shuffled_labels(5);
  for (std::size_t i = 0; i < 5; ++i) {
    shuffled.row(static_cast<Eigen::Index>(i)) = logits.row(order[i]);
    shuffled_labels[i] = labels[static_cast<std::size_t>(order[i])];
  }
  CHECK(mlm_loss<double>(shuffled, shuffled_labels) == doctest::Approx(base));
}

TEST_CASE("mlm gradient matches finite differences") {
  auto logits = random_mat<double>(4, 6, 17);
  const std::vector<std::int32_t> labels = {2, 0, 5, 1};
  Mat<double> grad;
  mlm_loss<double>(logits, labels, &grad);
  Rng probe_rng(23);
  for (int probe = 0; probe < 10; ++probe) {
    const auto r = static_cast<Eigen::Index>(probe_rng.below(4));
    const auto c = static_cast<Eigen::Index>(probe_rng.below(6));
    const double h = 1e-6;
    const double saved = logits(r, c);
    logits(r, c) = saved + h;
    const double up = mlm_loss<double>(logits, labels);
    logits(r, c) = saved - h;
    const double down = mlm_loss<double>(logits, labels);
    logits(r, c) = saved;
    CHECK(rel_err((up - down) / (2 * h), grad(r, c)) < 1e-5);
  }
}

TEST_CASE("total loss respects the mode") {
  CHECK(total_loss(0.5, 0.3, LossMode::MlmPlusCl) == doctest::Approx(0.8));
  CHECK(total_loss(0.5, 123.0, LossMode::MlmOnly) == doctest::Approx(0.5));
  CHECK(total_loss(0.5, 0.3, LossMode::ClOnly) == doctest::Approx(0.3));
  CHECK(total_loss(0.7, 0.0, LossMode::MlmPlusCl) ==
        doctest::Approx(total_loss(0.7, 99.0, LossMode::MlmOnly)));
}

TEST_CASE("loss mode names round-trip") {
  for (auto mode : {LossMode::MlmOnly, LossMode::ClOnly, LossMode::MlmPlusCl})
    CHECK(loss_mode_from_string(to_string(mode)) == mode);
  CHECK_THROWS_AS(loss_mode_from_string("both"), std::invalid_argument);
}
