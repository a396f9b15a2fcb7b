#pragma once

#include <cstdint>
#include <string>

#include "clr/augment/plan.hpp"
#include "clr/model/config.hpp"
#include "clr/objectives.hpp"
#include "clr/optim/adam.hpp"
#include "clr/optim/schedule.hpp"
#include "clr/optim/trainer.hpp"

namespace clr {

// Every knob of a training run, with documented defaults. Parsed from a
// key = value config file ('#' comments allowed); unknown keys are rejected.
// Command-line flags override file values, which override the defaults.
struct RunConfig {
  // paths
  std::string corpus;
  std::string vocab;
  std::string lexicon;
  std::string run_dir = "run";

  std::uint64_t seed = 1;

  // corpus ingestion
  std::int64_t min_sentence_len = 4;
  std::int64_t max_sentence_len = 64;

  // augmentation
  std::string augmentation = "del-span";
  double delete_ratio = 0.70;
  std::int64_t span_count = 5;
  double span_ratio = 0.05;
  std::int64_t reorder_pairs = 5;
  double substitute_ratio = 0.30;

  // batching and masking
  std::int64_t batch_sentences = 64;
  std::int64_t max_view_len = 66;
  double mask_ratio = 0.15;

  // encoder
  std::int64_t layers = 4;
  std::int64_t heads = 4;
  std::int64_t hidden = 128;
  std::int64_t ffn_dim = 512;
  std::int64_t max_positions = 66;
  std::int64_t projection_dim = 128;
  double dropout = 0.1;

  // objective
  double temperature = 0.5;
  std::string loss_mode = "mlm+cl";

  // optimizer and schedule
  double peak_lr = 6e-4;
  std::int64_t warmup_steps = 200;
  std::int64_t total_steps = 2000;
  double beta1 = 0.9;
  double beta2 = 0.98;
  double adam_eps = 1e-6;
  double weight_decay = 0.01;
  std::string wd_style = "decoupled";
  double clip_norm = 1.0;

  // run control
  std::int64_t checkpoint_every = 0;  // 0: final checkpoint only
  std::int64_t workers = 0;           // batch-preparation lookahead threads

  static RunConfig from_file(const std::string& path);
  void set(const std::string& key, const std::string& value);  // throws on unknown key
  std::string echo() const;

  AugmentationParams augmentation_params() const;
  EncoderConfig encoder_config(std::int32_t vocab_size) const;
  TrainerConfig trainer_config(std::int32_t vocab_size) const;
};

}  // namespace clr
