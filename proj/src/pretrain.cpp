#include "clr/pretrain.hpp"

#include <cstdio>
#include <deque>
#include <filesystem>
#include <fstream>
#include <future>
#include <numeric>
#include <ostream>

#include "clr/eval/retrieval.hpp"
#include "clr/optim/checkpoint.hpp"
#include "clr/text/corpus.hpp"

namespace clr {

namespace {

namespace fs = std::filesystem;

std::string metrics_row(const TrainMetrics& m) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%lld,%.9g,%.9g,%.9g,%.9g,%.9g\n",
                static_cast<long long>(m.step), m.lr, m.mlm_loss, m.cl_loss, m.total_loss,
                m.grad_norm);
  return buf;
}

struct BatchSchedule {
  std::vector<TokenIds> const* corpus;
  std::int64_t n_per_batch;
  std::int64_t batches_per_epoch;
  std::uint64_t seed;

  // Sentence indices feeding the given 1-based step.
  std::vector<std::int64_t> slice_for(std::int64_t step) const {
    const std::int64_t epoch = (step - 1) / batches_per_epoch;
    const std::int64_t b = (step - 1) % batches_per_epoch;
    std::vector<std::int64_t> order(corpus->size());
    std::iota(order.begin(), order.end(), 0);
    Rng rng(mix_seed(seed, stream::kEpochOrder, static_cast<std::uint64_t>(epoch)));
    rng.shuffle(order);
    return {order.begin() + b * n_per_batch, order.begin() + (b + 1) * n_per_batch};
  }
};

}  // namespace

PretrainOutcome run_pretrain(const RunConfig& cfg, std::ostream* log) {
  const auto say = [&](const std::string& line) {
    if (log) (*log) << line << "\n";
  };

  const auto pipeline = AugmentationPipeline::parse(cfg.augmentation);
  if (pipeline.single_unstable())
    say("warning: '" + pipeline.name() +
        "' alone is prone to unstable pre-training; pair it with a deletion");

  const auto vocab = Vocabulary::load(cfg.vocab);
  CorpusOptions corpus_opts{static_cast<std::size_t>(cfg.min_sentence_len),
                            static_cast<std::size_t>(cfg.max_sentence_len)};
  const auto sentences = load_corpus(cfg.corpus, corpus_opts);
  if (sentences.empty()) throw std::runtime_error("empty corpus");
  const auto encoded = encode_corpus(sentences, vocab);

  CompiledLexicon compiled;
  double lexicon_coverage = -1;
  SynonymLexicon lexicon;
  if (!cfg.lexicon.empty()) {
    lexicon = SynonymLexicon::load(cfg.lexicon);
    compiled = CompiledLexicon(lexicon, vocab);
    lexicon_coverage = lexicon.coverage(sentences);
  } else if (pipeline.uses_lexicon()) {
    throw std::runtime_error("augmentation '" + pipeline.name() + "' needs a synonym lexicon");
  }

  const auto trainer_cfg = cfg.trainer_config(vocab.size());
  const auto aug_params = cfg.augmentation_params();
  BatchOptions batch_opts;
  batch_opts.max_len = static_cast<std::int32_t>(cfg.max_view_len);
  batch_opts.mask_ratio = cfg.mask_ratio;
  batch_opts.vocab_size = vocab.size();

  const auto m_total = static_cast<std::int64_t>(encoded.size());
  const auto n_batch = std::min<std::int64_t>(cfg.batch_sentences, m_total);
  BatchSchedule schedule{&encoded, n_batch, std::max<std::int64_t>(1, m_total / n_batch),
                         cfg.seed};

  const fs::path run_dir(cfg.run_dir);
  fs::create_directories(run_dir / "checkpoints");
  {
    std::ofstream echo(run_dir / "config.echo", std::ios::binary | std::ios::trunc);
    if (!echo) throw std::runtime_error("cannot write config echo");
    echo << cfg.echo();
  }

  const auto build_batch = [&](std::int64_t step) {
    const auto slice = schedule.slice_for(step);
    std::vector<TokenIds> batch_sentences;
    batch_sentences.reserve(slice.size());
    for (auto idx : slice) batch_sentences.push_back(encoded[static_cast<std::size_t>(idx)]);
    return build_contrastive_batch(batch_sentences, slice, pipeline, aug_params, cfg.seed, step,
                                   &compiled, batch_opts);
  };

  Trainer trainer(trainer_cfg);
  std::ofstream metrics(run_dir / "metrics.csv", std::ios::binary | std::ios::trunc);
  if (!metrics) throw std::runtime_error("cannot write metrics.csv");
  metrics << "step,lr,mlm_loss,cl_loss,total_loss,grad_norm\n";

  const auto checkpoint_path = [&](std::int64_t step) {
    return (run_dir / "checkpoints" / ("step-" + std::to_string(step) + ".clr")).string();
  };

  // Batches ahead of the training thread; identical results regardless of
  // lookahead because every batch depends only on its step index.
  std::deque<std::pair<std::int64_t, std::future<ContrastiveBatch>>> pipeline_queue;
  std::int64_t next_to_launch = 1;
  const std::int64_t lookahead = std::max<std::int64_t>(0, cfg.workers);
  const auto refill = [&] {
    while (next_to_launch <= cfg.total_steps &&
           static_cast<std::int64_t>(pipeline_queue.size()) <= lookahead) {
      const auto step = next_to_launch++;
      if (lookahead == 0) {
        std::promise<ContrastiveBatch> ready;
        ready.set_value(build_batch(step));
        pipeline_queue.emplace_back(step, ready.get_future());
      } else {
        pipeline_queue.emplace_back(step,
                                    std::async(std::launch::async, [&, step] { return build_batch(step); }));
      }
    }
  };

  TrainMetrics last{};
  for (std::int64_t step = 1; step <= cfg.total_steps; ++step) {
    refill();
    auto fut = std::move(pipeline_queue.front().second);
    pipeline_queue.pop_front();
    const auto batch = fut.get();
    last = trainer.train_step(batch);
    metrics << metrics_row(last);
    if (cfg.checkpoint_every > 0 && step % cfg.checkpoint_every == 0 && step != cfg.total_steps)
      save_checkpoint(checkpoint_path(step), trainer.params(), trainer.state(),
                      trainer_cfg.encoder, step);
    if (log && (step % 100 == 0 || step == cfg.total_steps))
      say("step " + std::to_string(step) + " total_loss " + std::to_string(last.total_loss));
  }
  metrics.flush();

  PretrainOutcome outcome;
  outcome.run_dir = run_dir.string();
  outcome.metrics_csv = (run_dir / "metrics.csv").string();
  outcome.final_checkpoint = checkpoint_path(cfg.total_steps);
  outcome.last = last;
  save_checkpoint(outcome.final_checkpoint, trainer.params(), trainer.state(),
                  trainer_cfg.encoder, cfg.total_steps);

  // Probe batch: batch index 0 is never used in training, so this is a fresh
  // pair of views per sentence.
  {
    std::vector<TokenIds> probe(encoded.begin(),
                                encoded.begin() + static_cast<std::ptrdiff_t>(n_batch));
    std::vector<std::int64_t> probe_idx(static_cast<std::size_t>(n_batch));
    std::iota(probe_idx.begin(), probe_idx.end(), 0);
    const auto batch =
        build_contrastive_batch(probe, probe_idx, pipeline, aug_params, cfg.seed, 0, &compiled,
                                batch_opts);
    const auto packed = PackedBatch::from_rows(batch.views, batch.view_lengths);
    const auto h = encoder_forward(trainer.params(), trainer_cfg.encoder, packed);
    const auto z = project(trainer.params(), pool(h, packed, Pooling::Cls));
    if (z.rows() >= 4) {
      outcome.probe_retrieval = retrieval_accuracy(z);
      outcome.probe_margin = positive_negative_margin(z);
    }
  }

  {
    std::ofstream report(run_dir / "report.txt", std::ios::binary | std::ios::trunc);
    char buf[160];
    report << "pretrain report\n";
    report << "corpus sentences: " << encoded.size() << "\n";
    report << "vocabulary size: " << vocab.size() << "\n";
    report << "augmentation: " << pipeline.name() << "\n";
    report << "loss mode: " << cfg.loss_mode << "\n";
    report << "steps: " << cfg.total_steps << "\n";
    std::snprintf(buf, sizeof buf, "final losses: mlm %.6f cl %.6f total %.6f\n", last.mlm_loss,
                  last.cl_loss, last.total_loss);
    report << buf;
    std::snprintf(buf, sizeof buf, "probe retrieval accuracy: %.6f\n", outcome.probe_retrieval);
    report << buf;
    std::snprintf(buf, sizeof buf, "probe positive-negative margin: %.6f\n", outcome.probe_margin);
    report << buf;
    if (lexicon_coverage >= 0) {
      std::snprintf(buf, sizeof buf, "lexicon coverage: %.6f\n", lexicon_coverage);
      report << buf;
    }
  }

  say("run complete: " + outcome.run_dir);
  return outcome;
}

}  // namespace clr
