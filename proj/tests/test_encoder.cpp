#include <doctest.h>

#include "clr/model/encoder.hpp"
#include "helpers.hpp"

using namespace clr;
using testing::rel_err;

namespace {

EncoderConfig small_config() {
  EncoderConfig cfg;
  cfg.layers = 2;
  cfg.heads = 2;
  cfg.hidden = 16;
  cfg.ffn_dim = 32;
  cfg.vocab_size = 30;
  cfg.max_positions = 12;
  cfg.dropout = 0.0;
  cfg.projection_dim = 8;
  return cfg;
}

std::vector<TokenIds> small_rows() {
  return {{2, 7, 9, 11, 5}, {2, 6, 8}, {2, 14, 13, 12, 11, 10, 9}};
}

}  // namespace

TEST_CASE("forward output covers every token row with the hidden width") {
  const auto cfg = small_config();
  const auto params = ModelParameters<double>::init(cfg, 5);
  const auto packed = PackedBatch::from_rows(small_rows());
  const auto h = encoder_forward(params, cfg, packed);
  CHECK(h.rows() == packed.total());
  CHECK(h.cols() == cfg.hidden);

  const auto padded = unpack_padded(h, packed, cfg.max_positions);
  CHECK(padded.rows() == 3 * cfg.max_positions);
  CHECK(padded.cols() == cfg.hidden);
  // Pad rows are exactly zero.
  CHECK(padded.row(small_rows()[0].size()).norm() == 0.0);
}

TEST_CASE("identical views produce identical hidden states in eval mode") {
  const auto cfg = small_config();
  const auto params = ModelParameters<double>::init(cfg, 5);
  const std::vector<TokenIds> rows = {{2, 7, 9}, {2, 7, 9}};
  const auto packed = PackedBatch::from_rows(rows);
  const auto h = encoder_forward(params, cfg, packed);
  CHECK((h.topRows(3) - h.bottomRows(3)).norm() == 0.0);
}

TEST_CASE("padding a view does not change the real rows") {
  const auto cfg = small_config();
  const auto params = ModelParameters<double>::init(cfg, 7);

  const std::vector<TokenIds> bare = {{2, 7, 9, 11, 5}};
  const std::vector<TokenIds> padded_rows = {{2, 7, 9, 11, 5, 0, 0, 0}};
  const std::vector<std::int32_t> lengths = {5};

  const auto h1 = encoder_forward(params, cfg, PackedBatch::from_rows(bare));
  const auto h2 = encoder_forward(params, cfg, PackedBatch::from_rows(padded_rows, lengths));
  CHECK((h1 - h2).cwiseAbs().maxCoeff() < 1e-5);
}

TEST_CASE("forward rejects over-length and out-of-range inputs") {
  const auto cfg = small_config();
  const auto params = ModelParameters<double>::init(cfg, 5);
  TokenIds too_long(static_cast<std::size_t>(cfg.max_positions) + 1, 5);
  too_long[0] = 2;
  CHECK_THROWS_AS(encoder_forward(params, cfg, PackedBatch::from_rows({too_long})),
                  std::invalid_argument);
  CHECK_THROWS_AS(encoder_forward(params, cfg, PackedBatch::from_rows({{2, 99}})),
                  std::invalid_argument);
}

TEST_CASE("pooling matches its definition") {
  const auto cfg = small_config();
  Mat<double> h(5, 4);
  h << 1, 2, 3, 4,
       5, 6, 7, 8,
       9, 10, 11, 12,
       2, 2, 2, 2,
       4, 4, 4, 4;
  PackedBatch pb;
  pb.ids = {2, 7, 9, 2, 7};
  pb.offsets = {0, 3, 5};

  const auto cls = pool(h, pb, Pooling::Cls);
  CHECK(cls.rows() == 2);
  CHECK(cls(0, 0) == 1.0);
  CHECK(cls(1, 3) == 2.0);

  const auto mean = pool(h, pb, Pooling::Mean);
  CHECK(mean(0, 0) == doctest::Approx(5.0));
  CHECK(mean(1, 0) == doctest::Approx(3.0));

  // All rows identical: both strategies agree.
  Mat<double> same(3, 2);
  same << 7, 1, 7, 1, 7, 1;
  PackedBatch one;
  one.ids = {2, 5, 6};
  one.offsets = {0, 3};
  CHECK((pool(same, one, Pooling::Cls) - pool(same, one, Pooling::Mean)).norm() == 0.0);
}

TEST_CASE("projection with zero weights returns its output bias") {
  const auto cfg = small_config();
  auto params = ModelParameters<double>::shaped(cfg);
  params.proj_b2 = testing::random_mat<double>(1, cfg.projection_dim, 3);
  const auto pooled = testing::random_mat<double>(4, cfg.hidden, 4);
  const auto z = project(params, pooled);
  CHECK(z.rows() == 4);
  CHECK(z.cols() == cfg.projection_dim);
  for (Eigen::Index r = 0; r < z.rows(); ++r)
    CHECK((z.row(r) - params.proj_b2.row(0)).norm() == doctest::Approx(0.0));
}

TEST_CASE("projection reduces to affine composition when the input is scaled") {
  // With gelu replaced by its linear regime (tiny inputs stay near linear),
  // doubling the input roughly doubles z - b-terms; assert the exact affine
  // identity instead through the weight matrices.
  const auto cfg = small_config();
  const auto params = ModelParameters<double>::init(cfg, 11);
  const auto pooled = testing::random_mat<double>(1, cfg.hidden, 5);
  const auto z = project(params, pooled);
  // Direct evaluation of W2^T gelu(W1^T x + b1) + b2 as an independent path.
  Mat<double> pre = pooled * params.proj_w1 + params.proj_b1;
  Mat<double> act = pre.unaryExpr([](double e) { return gelu(e); });
  Mat<double> expect = act * params.proj_w2 + params.proj_b2;
  CHECK((z - expect).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("a constant loss produces all-zero gradients") {
  const auto cfg = small_config();
  const auto params = ModelParameters<double>::init(cfg, 5);
  const auto packed = PackedBatch::from_rows(small_rows());
  ForwardCache<double> cache;
  const auto h = encoder_forward(params, cfg, packed, false, nullptr, &cache);

  auto grads = ModelParameters<double>::shaped(cfg);
  grads.set_zero();
  const Mat<double> zero_dh = Mat<double>::Zero(h.rows(), h.cols());
  encoder_backward(params, cfg, packed, cache, zero_dh, grads);
  grads.for_each_tensor([&](const std::string&, const Mat<double>& m, int) {
    CHECK(m.cwiseAbs().maxCoeff() == 0.0);
  });
}

TEST_CASE("gradient of squared norm of z with respect to b2 is 2z at zero weights") {
  const auto cfg = small_config();
  auto params = ModelParameters<double>::shaped(cfg);
  params.proj_b2 = testing::random_mat<double>(1, cfg.projection_dim, 21);

  const auto pooled = testing::random_mat<double>(1, cfg.hidden, 22);
  ProjectionCache<double> cache;
  const auto z = project(params, pooled, &cache);

  auto grads = ModelParameters<double>::shaped(cfg);
  grads.set_zero();
  project_backward(params, cache, Mat<double>(2.0 * z), grads);  // d||z||^2/dz = 2z
  CHECK((grads.proj_b2 - 2.0 * z).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("encoder gradients match finite differences through a scalar head") {
  // Loss: sum of all hidden-state entries weighted by a fixed random matrix.
  const auto cfg = small_config();
  auto params = ModelParameters<double>::init(cfg, 5);
  const auto packed = PackedBatch::from_rows(small_rows());
  const auto weights = testing::random_mat<double>(packed.total(), cfg.hidden, 88);

  const auto loss_of = [&](const ModelParameters<double>& p) {
    const auto h = encoder_forward(p, cfg, packed);
    return h.cwiseProduct(weights).sum();
  };

  ForwardCache<double> cache;
  encoder_forward(params, cfg, packed, false, nullptr, &cache);
  auto grads = ModelParameters<double>::shaped(cfg);
  grads.set_zero();
  encoder_backward(params, cfg, packed, cache, weights, grads);

  // Probe a handful of coordinates in every tensor class.
  Rng probe_rng(404);
  std::vector<Mat<double>*> tensors = tensor_list(params);
  std::vector<Mat<double>*> grad_tensors = tensor_list(grads);
  for (int probe = 0; probe < 30; ++probe) {
    const auto ti = static_cast<std::size_t>(probe_rng.below(tensors.size()));
    Mat<double>& tensor = *tensors[ti];
    const auto flat = static_cast<Eigen::Index>(
        probe_rng.below(static_cast<std::uint64_t>(tensor.size())));
    const double saved = tensor.data()[flat];
    const double h = 1e-5 * std::max(1.0, std::abs(saved));
    tensor.data()[flat] = saved + h;
    const double up = loss_of(params);
    tensor.data()[flat] = saved - h;
    const double down = loss_of(params);
    tensor.data()[flat] = saved;
    const double fd = (up - down) / (2 * h);
    const double analytic = grad_tensors[ti]->data()[flat];
    CHECK(std::abs(fd - analytic) < 1e-8 + 1e-5 * std::max(std::abs(fd), std::abs(analytic)));
  }
}

TEST_CASE("train-mode dropout is deterministic per seed and differs across seeds") {
  auto cfg = small_config();
  cfg.dropout = 0.1;
  const auto params = ModelParameters<double>::init(cfg, 5);
  const auto packed = PackedBatch::from_rows(small_rows());

  Rng r1(55), r2(55), r3(56);
  const auto h1 = encoder_forward(params, cfg, packed, true, &r1);
  const auto h2 = encoder_forward(params, cfg, packed, true, &r2);
  const auto h3 = encoder_forward(params, cfg, packed, true, &r3);
  CHECK((h1 - h2).norm() == 0.0);
  CHECK((h1 - h3).norm() > 0.0);
}
