#pragma once

#include <iosfwd>
#include <string>

#include "clr/optim/trainer.hpp"
#include "clr/run_config.hpp"

namespace clr {

struct PretrainOutcome {
  std::string run_dir;
  std::string metrics_csv;
  std::string final_checkpoint;
  TrainMetrics last;
  double probe_retrieval = 0;  // z-space retrieval accuracy on the probe batch
  double probe_margin = 0;     // positive minus negative mean cosine
};

// Full training run: ingest corpus, train total_steps steps, write
// config.echo, metrics.csv, checkpoints/step-<n>.clr and report.txt under
// run_dir. Identical (config, seed, corpus) runs produce byte-identical
// metrics. `log`, when given, receives progress lines.
PretrainOutcome run_pretrain(const RunConfig& cfg, std::ostream* log = nullptr);

}  // namespace clr
