#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "clr/model/params.hpp"
#include "clr/optim/adam.hpp"

namespace clr {

// Binary checkpoint layout, all integers little-endian:
//   magic "CLR1" | version u32 | metadata length u32 | metadata (UTF-8
//   key=value lines) | tensor records... | crc32 u32
// Each tensor record: name length u64, name bytes, rank u64, dims u64 each,
// payload as IEEE-754 binary32. The trailing CRC-32 covers the whole tensor
// section. Model tensors come first, then Adam moments under "adam.m." /
// "adam.v." prefixes.
inline constexpr char kCheckpointMagic[4] = {'C', 'L', 'R', '1'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

class CheckpointError : public std::runtime_error {
 public:
  enum class Code { Io, BadMagic, BadVersion, BadMetadata, Truncated, BadChecksum, ConfigMismatch };

  CheckpointError(Code code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  Code code() const { return code_; }

 private:
  Code code_;
};

struct CheckpointData {
  EncoderConfig config;
  std::int64_t step = 0;
  ModelParameters<float> params;
  AdamState<float> opt_state;
};

struct TensorInfo {
  std::string name;
  std::vector<std::uint64_t> dims;
};

struct CheckpointSummary {
  std::uint32_t version = 0;
  std::int64_t step = 0;
  EncoderConfig config;
  std::vector<TensorInfo> tensors;
};

// Atomic: writes a temporary file in the same directory, then renames.
void save_checkpoint(const std::string& path, const ModelParameters<float>& params,
                     const AdamState<float>& state, const EncoderConfig& config,
                     std::int64_t step);

// Bit-exact inverse of save_checkpoint. When `expected` is given, any
// difference from the stored config raises ConfigMismatch ("config mismatch").
CheckpointData load_checkpoint(const std::string& path, const EncoderConfig* expected = nullptr);

// Header and tensor table only; payload is CRC-verified but not retained.
CheckpointSummary inspect_checkpoint(const std::string& path);

// CRC-32 (the common reflected polynomial 0xEDB88320).
std::uint32_t crc32(const unsigned char* data, std::size_t len);

}  // namespace clr
