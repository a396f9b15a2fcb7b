#include "clr/optim/checkpoint.hpp"

#include <array>
#include <bit>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unordered_map>

namespace clr {

namespace {

using Code = CheckpointError::Code;

std::array<std::uint32_t, 256> make_crc_table() {
  std::array<std::uint32_t, 256> table{};
  for (std::uint32_t i = 0; i < 256; ++i) {
    std::uint32_t c = i;
    for (int k = 0; k < 8; ++k) c = (c & 1) ? 0xEDB88320u ^ (c >> 1) : c >> 1;
    table[i] = c;
  }
  return table;
}

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_f32(std::string& out, float v) { put_u32(out, std::bit_cast<std::uint32_t>(v)); }

class Reader {
 public:
  Reader(const std::string& bytes) : bytes_(bytes) {}

  std::size_t pos() const { return pos_; }
  std::size_t remaining() const { return bytes_.size() - pos_; }
  const unsigned char* at(std::size_t p) const {
    return reinterpret_cast<const unsigned char*>(bytes_.data()) + p;
  }

  void need(std::size_t n, const char* what) {
    if (remaining() < n)
      throw CheckpointError(Code::Truncated, std::string("checkpoint truncated in ") + what);
  }
  std::uint32_t u32(const char* what) {
    need(4, what);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i)
      v |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
    pos_ += 4;
    return v;
  }
  std::uint64_t u64(const char* what) {
    need(8, what);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i)
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
    pos_ += 8;
    return v;
  }
  float f32(const char* what) { return std::bit_cast<float>(u32(what)); }
  std::string str(std::size_t n, const char* what) {
    need(n, what);
    std::string s = bytes_.substr(pos_, n);
    pos_ += n;
    return s;
  }

 private:
  const std::string& bytes_;
  std::size_t pos_ = 0;
};

std::string format_metadata(const EncoderConfig& cfg, std::int64_t step) {
  char buf[64];
  std::string out;
  const auto kv = [&](const char* key, const std::string& value) {
    out += key;
    out += '=';
    out += value;
    out += '\n';
  };
  kv("step", std::to_string(step));
  kv("layers", std::to_string(cfg.layers));
  kv("heads", std::to_string(cfg.heads));
  kv("hidden", std::to_string(cfg.hidden));
  kv("ffn_dim", std::to_string(cfg.ffn_dim));
  kv("vocab_size", std::to_string(cfg.vocab_size));
  kv("max_positions", std::to_string(cfg.max_positions));
  std::snprintf(buf, sizeof buf, "%.17g", cfg.dropout);
  kv("dropout", buf);
  kv("projection_dim", std::to_string(cfg.projection_dim));
  return out;
}

void parse_metadata(const std::string& text, EncoderConfig& cfg, std::int64_t& step) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw CheckpointError(Code::BadMetadata, "metadata line without '=': " + line);
    const auto key = line.substr(0, eq);
    const auto value = line.substr(eq + 1);
    try {
      if (key == "step") step = std::stoll(value);
      else if (key == "layers") cfg.layers = std::stoi(value);
      else if (key == "heads") cfg.heads = std::stoi(value);
      else if (key == "hidden") cfg.hidden = std::stoi(value);
      else if (key == "ffn_dim") cfg.ffn_dim = std::stoi(value);
      else if (key == "vocab_size") cfg.vocab_size = std::stoi(value);
      else if (key == "max_positions") cfg.max_positions = std::stoi(value);
      else if (key == "dropout") cfg.dropout = std::stod(value);
      else if (key == "projection_dim") cfg.projection_dim = std::stoi(value);
      else throw CheckpointError(Code::BadMetadata, "unknown metadata key: " + key);
    } catch (const CheckpointError&) {
      throw;
    } catch (const std::exception&) {
      throw CheckpointError(Code::BadMetadata, "bad metadata value for " + key);
    }
  }
}

void append_tensor(std::string& out, const std::string& name, const Mat<float>& m, int rank) {
  put_u64(out, name.size());
  out += name;
  put_u64(out, static_cast<std::uint64_t>(rank));
  if (rank == 1) {
    put_u64(out, static_cast<std::uint64_t>(m.size()));
  } else {
    put_u64(out, static_cast<std::uint64_t>(m.rows()));
    put_u64(out, static_cast<std::uint64_t>(m.cols()));
  }
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) put_f32(out, m(r, c));
}

}  // namespace

std::uint32_t crc32(const unsigned char* data, std::size_t len) {
  static const auto table = make_crc_table();
  std::uint32_t c = 0xFFFFFFFFu;
  for (std::size_t i = 0; i < len; ++i) c = table[(c ^ data[i]) & 0xFF] ^ (c >> 8);
  return c ^ 0xFFFFFFFFu;
}

void save_checkpoint(const std::string& path, const ModelParameters<float>& params,
                     const AdamState<float>& state, const EncoderConfig& config,
                     std::int64_t step) {
  std::string out;
  out.append(kCheckpointMagic, 4);
  put_u32(out, kCheckpointVersion);
  const auto meta = format_metadata(config, step);
  put_u32(out, static_cast<std::uint32_t>(meta.size()));
  out += meta;

  std::string tensors;
  params.for_each_tensor([&](const std::string& name, const Mat<float>& m, int rank) {
    append_tensor(tensors, name, m, rank);
  });
  state.m.for_each_tensor([&](const std::string& name, const Mat<float>& m, int rank) {
    append_tensor(tensors, "adam.m." + name, m, rank);
  });
  state.v.for_each_tensor([&](const std::string& name, const Mat<float>& m, int rank) {
    append_tensor(tensors, "adam.v." + name, m, rank);
  });
  const auto checksum = crc32(reinterpret_cast<const unsigned char*>(tensors.data()), tensors.size());
  out += tensors;
  put_u32(out, checksum);

  const auto tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw CheckpointError(Code::Io, "cannot write checkpoint: " + tmp);
    f.write(out.data(), static_cast<std::streamsize>(out.size()));
    if (!f) throw CheckpointError(Code::Io, "short write: " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw CheckpointError(Code::Io, "cannot rename checkpoint into place: " + path);
}

namespace {

struct RawCheckpoint {
  std::uint32_t version = 0;
  std::int64_t step = 0;
  EncoderConfig config;
  // Tensor section bounds within `bytes` for streaming reads.
  std::string bytes;
  std::size_t tensor_begin = 0, tensor_end = 0;
};

RawCheckpoint read_and_verify(const std::string& path) {
  RawCheckpoint raw;
  {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw CheckpointError(Code::Io, "cannot read checkpoint: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    raw.bytes = ss.str();
  }
  Reader reader(raw.bytes);
  const auto magic = reader.str(4, "magic");
  if (std::memcmp(magic.data(), kCheckpointMagic, 4) != 0)
    throw CheckpointError(Code::BadMagic, "bad magic; not a checkpoint file");
  raw.version = reader.u32("version");
  if (raw.version != kCheckpointVersion)
    throw CheckpointError(Code::BadVersion,
                          "unsupported checkpoint version " + std::to_string(raw.version));
  const auto meta_len = reader.u32("metadata length");
  const auto meta = reader.str(meta_len, "metadata");
  raw.config = EncoderConfig{};
  parse_metadata(meta, raw.config, raw.step);

  if (reader.remaining() < 4)
    throw CheckpointError(Code::Truncated, "checkpoint truncated before checksum");
  raw.tensor_begin = reader.pos();
  raw.tensor_end = raw.bytes.size() - 4;
  const auto stored = [&] {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i)
      v |= static_cast<std::uint32_t>(
               static_cast<unsigned char>(raw.bytes[raw.tensor_end + static_cast<std::size_t>(i)]))
           << (8 * i);
    return v;
  }();
  const auto actual = crc32(reader.at(raw.tensor_begin), raw.tensor_end - raw.tensor_begin);
  if (stored != actual)
    throw CheckpointError(Code::BadChecksum, "checkpoint payload checksum mismatch");
  return raw;
}

// Calls f(name, dims, reader-positioned-at-payload) for every tensor record.
template <typename F>
void scan_tensors(const RawCheckpoint& raw, F&& f) {
  Reader reader(raw.bytes);
  (void)reader.str(raw.tensor_begin, "header");  // skip
  while (reader.pos() < raw.tensor_end) {
    const auto name_len = reader.u64("tensor name length");
    const auto name = reader.str(static_cast<std::size_t>(name_len), "tensor name");
    const auto rank = reader.u64("tensor rank");
    if (rank < 1 || rank > 2)
      throw CheckpointError(Code::BadMetadata, "unsupported tensor rank for " + name);
    std::vector<std::uint64_t> dims;
    std::uint64_t count = 1;
    for (std::uint64_t i = 0; i < rank; ++i) {
      dims.push_back(reader.u64("tensor dims"));
      count *= dims.back();
    }
    f(name, dims, reader, count);
  }
  if (reader.pos() != raw.tensor_end)
    throw CheckpointError(Code::Truncated, "tensor section overruns checksum");
}

}  // namespace

CheckpointData load_checkpoint(const std::string& path, const EncoderConfig* expected) {
  auto raw = read_and_verify(path);
  if (expected && !(*expected == raw.config))
    throw CheckpointError(Code::ConfigMismatch, "config mismatch");

  CheckpointData data;
  data.config = raw.config;
  data.step = raw.step;
  data.params = ModelParameters<float>::shaped(raw.config);
  data.opt_state = AdamState<float>::shaped(raw.config);
  data.opt_state.t = raw.step;

  std::unordered_map<std::string, Mat<float>*> slots;
  data.params.for_each_tensor(
      [&](const std::string& name, Mat<float>& m, int) { slots[name] = &m; });
  data.opt_state.m.for_each_tensor(
      [&](const std::string& name, Mat<float>& m, int) { slots["adam.m." + name] = &m; });
  data.opt_state.v.for_each_tensor(
      [&](const std::string& name, Mat<float>& m, int) { slots["adam.v." + name] = &m; });

  std::size_t filled = 0;
  scan_tensors(raw, [&](const std::string& name, const std::vector<std::uint64_t>& dims,
                        Reader& reader, std::uint64_t count) {
    const auto it = slots.find(name);
    if (it == slots.end())
      throw CheckpointError(Code::BadMetadata, "unexpected tensor: " + name);
    Mat<float>& m = *it->second;
    const bool shape_ok = dims.size() == 1
                              ? static_cast<std::uint64_t>(m.size()) == dims[0] && m.rows() == 1
                              : static_cast<std::uint64_t>(m.rows()) == dims[0] &&
                                    static_cast<std::uint64_t>(m.cols()) == dims[1];
    if (!shape_ok) throw CheckpointError(Code::BadMetadata, "shape mismatch for tensor " + name);
    for (std::uint64_t i = 0; i < count; ++i)
      m.data()[i] = reader.f32("tensor payload");
    ++filled;
  });
  if (filled != slots.size())
    throw CheckpointError(Code::Truncated, "checkpoint is missing tensors");
  return data;
}

CheckpointSummary inspect_checkpoint(const std::string& path) {
  auto raw = read_and_verify(path);
  CheckpointSummary summary;
  summary.version = raw.version;
  summary.step = raw.step;
  summary.config = raw.config;
  scan_tensors(raw, [&](const std::string& name, const std::vector<std::uint64_t>& dims,
                        Reader& reader, std::uint64_t count) {
    summary.tensors.push_back({name, dims});
    reader.need(static_cast<std::size_t>(count) * 4, "tensor payload");
    (void)reader.str(static_cast<std::size_t>(count) * 4, "tensor payload");
  });
  return summary;
}

}  // namespace clr
