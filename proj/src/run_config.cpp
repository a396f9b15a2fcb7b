#include "clr/run_config.hpp"

#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace clr {

namespace {

struct Field {
  const char* key;
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::int64_t parse_i64(const std::string& v) {
  std::size_t used = 0;
  const auto out = std::stoll(v, &used);
  if (used != v.size()) throw std::invalid_argument("trailing characters");
  return out;
}

double parse_f64(const std::string& v) {
  std::size_t used = 0;
  const auto out = std::stod(v, &used);
  if (used != v.size()) throw std::invalid_argument("trailing characters");
  return out;
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = [] {
    std::vector<Field> f;
    const auto str = [&](const char* key, std::string RunConfig::* member) {
      f.push_back({key, [member](RunConfig& c, const std::string& v) { c.*member = v; },
                   [member](const RunConfig& c) { return c.*member; }});
    };
    const auto i64 = [&](const char* key, std::int64_t RunConfig::* member) {
      f.push_back({key, [member](RunConfig& c, const std::string& v) { c.*member = parse_i64(v); },
                   [member](const RunConfig& c) { return std::to_string(c.*member); }});
    };
    const auto u64 = [&](const char* key, std::uint64_t RunConfig::* member) {
      f.push_back({key,
                   [member](RunConfig& c, const std::string& v) {
                     c.*member = static_cast<std::uint64_t>(std::stoull(v));
                   },
                   [member](const RunConfig& c) { return std::to_string(c.*member); }});
    };
    const auto f64 = [&](const char* key, double RunConfig::* member) {
      f.push_back({key, [member](RunConfig& c, const std::string& v) { c.*member = parse_f64(v); },
                   [member](const RunConfig& c) { return fmt_double(c.*member); }});
    };

    str("corpus", &RunConfig::corpus);
    str("vocab", &RunConfig::vocab);
    str("lexicon", &RunConfig::lexicon);
    str("run_dir", &RunConfig::run_dir);
    u64("seed", &RunConfig::seed);
    i64("min_sentence_len", &RunConfig::min_sentence_len);
    i64("max_sentence_len", &RunConfig::max_sentence_len);
    str("augmentation", &RunConfig::augmentation);
    f64("delete_ratio", &RunConfig::delete_ratio);
    i64("span_count", &RunConfig::span_count);
    f64("span_ratio", &RunConfig::span_ratio);
    i64("reorder_pairs", &RunConfig::reorder_pairs);
    f64("substitute_ratio", &RunConfig::substitute_ratio);
    i64("batch_sentences", &RunConfig::batch_sentences);
    i64("max_view_len", &RunConfig::max_view_len);
    f64("mask_ratio", &RunConfig::mask_ratio);
    i64("layers", &RunConfig::layers);
    i64("heads", &RunConfig::heads);
    i64("hidden", &RunConfig::hidden);
    i64("ffn_dim", &RunConfig::ffn_dim);
    i64("max_positions", &RunConfig::max_positions);
    i64("projection_dim", &RunConfig::projection_dim);
    f64("dropout", &RunConfig::dropout);
    f64("temperature", &RunConfig::temperature);
    str("loss_mode", &RunConfig::loss_mode);
    f64("peak_lr", &RunConfig::peak_lr);
    i64("warmup_steps", &RunConfig::warmup_steps);
    i64("total_steps", &RunConfig::total_steps);
    f64("beta1", &RunConfig::beta1);
    f64("beta2", &RunConfig::beta2);
    f64("adam_eps", &RunConfig::adam_eps);
    f64("weight_decay", &RunConfig::weight_decay);
    str("wd_style", &RunConfig::wd_style);
    f64("clip_norm", &RunConfig::clip_norm);
    i64("checkpoint_every", &RunConfig::checkpoint_every);
    i64("workers", &RunConfig::workers);
    return f;
  }();
  return table;
}

std::string strip(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

}  // namespace

void RunConfig::set(const std::string& key, const std::string& value) {
  for (const auto& f : fields()) {
    if (key == f.key) {
      try {
        f.set(*this, value);
      } catch (const std::exception&) {
        throw std::invalid_argument("bad value for config key '" + key + "': " + value);
      }
      return;
    }
  }
  throw std::invalid_argument("unknown config key: " + key);
}

RunConfig RunConfig::from_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read config file: " + path);
  RunConfig cfg;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    const auto text = strip(line);
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config line " + std::to_string(lineno) + " is not key = value");
    cfg.set(strip(text.substr(0, eq)), strip(text.substr(eq + 1)));
  }
  return cfg;
}

std::string RunConfig::echo() const {
  std::ostringstream out;
  for (const auto& f : fields()) out << f.key << " = " << f.get(*this) << "\n";
  return out.str();
}

AugmentationParams RunConfig::augmentation_params() const {
  AugmentationParams p;
  p.delete_ratio = delete_ratio;
  p.span_count = static_cast<std::int32_t>(span_count);
  p.span_ratio = span_ratio;
  p.reorder_pairs = static_cast<std::int32_t>(reorder_pairs);
  p.substitute_ratio = substitute_ratio;
  return p;
}

EncoderConfig RunConfig::encoder_config(std::int32_t vocab_size) const {
  EncoderConfig cfg;
  cfg.layers = static_cast<std::int32_t>(layers);
  cfg.heads = static_cast<std::int32_t>(heads);
  cfg.hidden = static_cast<std::int32_t>(hidden);
  cfg.ffn_dim = static_cast<std::int32_t>(ffn_dim);
  cfg.vocab_size = vocab_size;
  cfg.max_positions = static_cast<std::int32_t>(max_positions);
  cfg.dropout = dropout;
  cfg.projection_dim = static_cast<std::int32_t>(projection_dim);
  cfg.validate();
  return cfg;
}

TrainerConfig RunConfig::trainer_config(std::int32_t vocab_size) const {
  TrainerConfig cfg;
  cfg.encoder = encoder_config(vocab_size);
  cfg.loss.temperature = temperature;
  cfg.loss.mode = loss_mode_from_string(loss_mode);
  cfg.adam.beta1 = beta1;
  cfg.adam.beta2 = beta2;
  cfg.adam.eps = adam_eps;
  cfg.adam.weight_decay = weight_decay;
  cfg.adam.wd_style = wd_style_from_string(wd_style);
  cfg.schedule.peak_lr = peak_lr;
  cfg.schedule.warmup_steps = warmup_steps;
  cfg.schedule.total_steps = total_steps;
  cfg.schedule.validate();
  cfg.clip_norm = clip_norm;
  cfg.seed = seed;
  return cfg;
}

}  // namespace clr
