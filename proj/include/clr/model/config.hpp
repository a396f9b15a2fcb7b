#pragma once

#include <cstdint>
#include <stdexcept>

namespace clr {

// Desk-scale defaults; the 12/12/768 configuration of large-scale
// pre-training is reachable through these fields but not the test default.
struct EncoderConfig {
  std::int32_t layers = 4;
  std::int32_t heads = 4;
  std::int32_t hidden = 128;
  std::int32_t ffn_dim = 512;
  std::int32_t vocab_size = 0;
  std::int32_t max_positions = 66;
  double dropout = 0.1;
  std::int32_t projection_dim = 128;

  std::int32_t head_dim() const { return hidden / heads; }

  void validate() const {
    if (layers < 1 || heads < 1 || hidden < 1 || ffn_dim < 1 || projection_dim < 1 ||
        max_positions < 1)
      throw std::invalid_argument("encoder dimensions must be >= 1");
    if (hidden % heads != 0) throw std::invalid_argument("hidden must be divisible by heads");
    if (vocab_size < 6) throw std::invalid_argument("vocab_size must cover the special tokens");
    if (dropout < 0.0 || dropout >= 1.0) throw std::invalid_argument("dropout must be in [0, 1)");
  }

  bool operator==(const EncoderConfig&) const = default;
};

}  // namespace clr
