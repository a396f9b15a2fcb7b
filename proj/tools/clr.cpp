// clr: contrastive sentence-representation pre-training at desk scale.
//
// Subcommands: build-vocab, augment, pretrain, embed, eval-sts,
// inspect-checkpoint. All randomness flows from --seed; identical invocations
// produce identical outputs.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "clr/augment/apply.hpp"
#include "clr/eval/sts.hpp"
#include "clr/eval/synthetic.hpp"
#include "clr/optim/checkpoint.hpp"
#include "clr/pretrain.hpp"
#include "clr/text/corpus.hpp"
#include "clr/text/tokenizer.hpp"

namespace {

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read file: " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

int cmd_build_vocab(const std::string& corpus_path, const std::string& out_path,
                    std::int64_t min_freq, std::int64_t max_size, std::int64_t min_len,
                    std::int64_t max_len) {
  clr::CorpusOptions opts{static_cast<std::size_t>(min_len), static_cast<std::size_t>(max_len)};
  const auto corpus = clr::load_corpus(corpus_path, opts);
  const auto vocab = clr::Vocabulary::build(corpus, static_cast<std::size_t>(min_freq),
                                            static_cast<std::size_t>(max_size));
  vocab.save(out_path);
  std::cout << "vocabulary of " << vocab.size() << " tokens written to " << out_path << "\n";
  return 0;
}

int cmd_augment(const std::string& kind, std::uint64_t seed, const std::string& corpus_path,
                const std::string& vocab_path, const std::string& lexicon_path,
                std::int64_t views, std::int64_t min_len, std::int64_t max_len) {
  const auto pipeline = clr::AugmentationPipeline::parse(kind);
  if (pipeline.single_unstable())
    std::cerr << "warning: '" << pipeline.name()
              << "' alone is prone to unstable pre-training; pair it with a deletion\n";

  clr::CorpusOptions opts{static_cast<std::size_t>(min_len), static_cast<std::size_t>(max_len)};
  const auto corpus = clr::load_corpus(corpus_path, opts);
  if (corpus.empty()) throw std::runtime_error("empty corpus");

  // Without an explicit vocabulary, build one from the corpus itself.
  const auto vocab = vocab_path.empty()
                         ? clr::Vocabulary::build(corpus, 1, corpus.size() * 64 + 6)
                         : clr::Vocabulary::load(vocab_path);

  clr::CompiledLexicon compiled;
  if (!lexicon_path.empty()) {
    const auto lexicon = clr::SynonymLexicon::load(lexicon_path);
    compiled = clr::CompiledLexicon(lexicon, vocab);
    std::cerr << "lexicon coverage: " << lexicon.coverage(corpus) << "\n";
  } else if (pipeline.uses_lexicon()) {
    throw std::runtime_error("augmentation '" + pipeline.name() + "' needs --lexicon");
  }

  const clr::AugmentationParams params;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto ids = vocab.encode(corpus[i]);
    for (std::int64_t v = 0; v < views; ++v) {
      const auto view_seed = clr::mix_seed(seed, clr::stream::kAugment, 0, i,
                                           static_cast<std::uint64_t>(v));
      const auto augmented = clr::augment(ids, pipeline, params, view_seed, &compiled);
      const auto tokens = vocab.decode(augmented);
      for (std::size_t t = 0; t < tokens.size(); ++t) {
        if (t) std::cout << ' ';
        std::cout << tokens[t];
      }
      std::cout << '\n';
    }
  }
  return 0;
}

int cmd_embed(const std::string& checkpoint_path, const std::string& vocab_path,
              const std::string& input_path, const std::string& pooling_name) {
  const auto pooling = pooling_name == "mean" ? clr::Pooling::Mean : clr::Pooling::Cls;
  auto embedder = clr::Embedder::from_files(checkpoint_path, vocab_path);
  const auto sentences = read_lines(input_path);
  const auto vectors = embedder.embed(sentences, pooling);
  char buf[32];
  for (Eigen::Index r = 0; r < vectors.rows(); ++r) {
    for (Eigen::Index c = 0; c < vectors.cols(); ++c) {
      if (c) std::cout << ' ';
      std::snprintf(buf, sizeof buf, "%.7g", static_cast<double>(vectors(r, c)));
      std::cout << buf;
    }
    std::cout << '\n';
  }
  return 0;
}

int cmd_eval_sts(const std::string& checkpoint_path, const std::string& vocab_path,
                 const std::string& pairs_path, const std::string& pooling_name,
                 const std::string& scores_csv) {
  const auto pooling = pooling_name == "mean" ? clr::Pooling::Mean : clr::Pooling::Cls;
  auto embedder = clr::Embedder::from_files(checkpoint_path, vocab_path);
  const auto pairs = clr::load_eval_pairs(pairs_path);
  const auto result = clr::sts_eval(pairs, embedder, pooling);
  clr::write_sts_report(std::cout, result, pooling, pairs.size());
  if (!scores_csv.empty()) {
    std::ofstream out(scores_csv, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write scores csv: " + scores_csv);
    clr::write_sts_scores_csv(out, pairs, result);
  }
  return 0;
}

int cmd_inspect(const std::string& path) {
  const auto summary = clr::inspect_checkpoint(path);
  char buf[64];
  std::cout << "version: " << summary.version << "\n";
  std::cout << "step: " << summary.step << "\n";
  const auto& c = summary.config;
  std::cout << "layers: " << c.layers << "\n";
  std::cout << "heads: " << c.heads << "\n";
  std::cout << "hidden: " << c.hidden << "\n";
  std::cout << "ffn_dim: " << c.ffn_dim << "\n";
  std::cout << "vocab_size: " << c.vocab_size << "\n";
  std::cout << "max_positions: " << c.max_positions << "\n";
  std::snprintf(buf, sizeof buf, "%g", c.dropout);
  std::cout << "dropout: " << buf << "\n";
  std::cout << "projection_dim: " << c.projection_dim << "\n";
  std::cout << "tensors: " << summary.tensors.size() << "\n";
  for (const auto& t : summary.tensors) {
    std::cout << t.name << " [";
    for (std::size_t i = 0; i < t.dims.size(); ++i) {
      if (i) std::cout << " x ";
      std::cout << t.dims[i];
    }
    std::cout << "]\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"contrastive sentence-representation pre-training"};
  app.require_subcommand(1);

  // build-vocab
  std::string bv_corpus, bv_out;
  std::int64_t bv_min_freq = 1, bv_max_size = 50000, bv_min_len = 4, bv_max_len = 64;
  auto* build_vocab = app.add_subcommand("build-vocab", "build a vocabulary file from a corpus");
  build_vocab->add_option("--corpus", bv_corpus, "corpus file, one sentence per line")->required();
  build_vocab->add_option("--out", bv_out, "output vocabulary file")->required();
  build_vocab->add_option("--min-freq", bv_min_freq, "minimum token frequency");
  build_vocab->add_option("--max-size", bv_max_size, "maximum vocabulary size");
  build_vocab->add_option("--min-len", bv_min_len, "minimum sentence length kept");
  build_vocab->add_option("--max-len", bv_max_len, "maximum sentence length kept");

  // augment
  std::string ag_kind = "del-span", ag_corpus, ag_vocab, ag_lexicon;
  std::uint64_t ag_seed = 1;
  std::int64_t ag_views = 1, ag_min_len = 4, ag_max_len = 64;
  auto* augment = app.add_subcommand("augment", "print augmented views of a corpus");
  augment->add_option("--kind", ag_kind,
                      "del-word, del-span, reorder, subs, or compositions like subs+del-span");
  augment->add_option("--seed", ag_seed, "seed for view sampling");
  augment->add_option("--corpus", ag_corpus, "corpus file")->required();
  augment->add_option("--vocab", ag_vocab, "vocabulary file (default: built from the corpus)");
  augment->add_option("--lexicon", ag_lexicon, "synonym lexicon TSV (needed for subs)");
  augment->add_option("--views", ag_views, "views emitted per sentence");
  augment->add_option("--min-len", ag_min_len, "minimum sentence length kept");
  augment->add_option("--max-len", ag_max_len, "maximum sentence length kept");

  // pretrain
  std::string pt_config;
  std::vector<std::string> pt_sets;
  auto* pretrain = app.add_subcommand("pretrain", "run a pre-training job");
  pretrain->add_option("--config", pt_config, "run config file (key = value lines)");
  pretrain->add_option("--set", pt_sets, "override a config key, e.g. --set total_steps=500");
  std::string pt_corpus, pt_vocab, pt_lexicon, pt_run_dir, pt_augmentation, pt_loss_mode;
  std::uint64_t pt_seed = 0;
  auto* o_corpus = pretrain->add_option("--corpus", pt_corpus, "corpus file");
  auto* o_vocab = pretrain->add_option("--vocab", pt_vocab, "vocabulary file");
  auto* o_lexicon = pretrain->add_option("--lexicon", pt_lexicon, "synonym lexicon TSV");
  auto* o_run_dir = pretrain->add_option("--run-dir", pt_run_dir, "output directory");
  auto* o_aug = pretrain->add_option("--augmentation", pt_augmentation, "augmentation pipeline");
  auto* o_mode = pretrain->add_option("--loss-mode", pt_loss_mode, "mlm, cl, or mlm+cl");
  auto* o_seed = pretrain->add_option("--seed", pt_seed, "run seed");

  // embed
  std::string em_checkpoint, em_vocab, em_input, em_pooling = "cls";
  auto* embed = app.add_subcommand("embed", "print sentence embeddings");
  embed->add_option("--checkpoint", em_checkpoint, "checkpoint file")->required();
  embed->add_option("--vocab", em_vocab, "vocabulary file")->required();
  embed->add_option("--input", em_input, "sentences, one per line")->required();
  embed->add_option("--pooling", em_pooling, "cls or mean")
      ->check(CLI::IsMember({"cls", "mean"}));

  // eval-sts
  std::string es_checkpoint, es_vocab, es_pairs, es_pooling = "cls", es_scores;
  auto* eval_sts = app.add_subcommand("eval-sts", "correlate embedding cosines with gold scores");
  eval_sts->add_option("--checkpoint", es_checkpoint, "checkpoint file")->required();
  eval_sts->add_option("--vocab", es_vocab, "vocabulary file")->required();
  eval_sts->add_option("--pairs", es_pairs, "TSV: sentence_a<TAB>sentence_b<TAB>gold")->required();
  eval_sts->add_option("--pooling", es_pooling, "cls or mean")
      ->check(CLI::IsMember({"cls", "mean"}));
  eval_sts->add_option("--scores-csv", es_scores, "write per-pair scores here");

  // inspect-checkpoint
  std::string ic_path;
  auto* inspect = app.add_subcommand("inspect-checkpoint", "print checkpoint header and tensors");
  inspect->add_option("file", ic_path, "checkpoint file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (build_vocab->parsed())
      return cmd_build_vocab(bv_corpus, bv_out, bv_min_freq, bv_max_size, bv_min_len, bv_max_len);
    if (augment->parsed())
      return cmd_augment(ag_kind, ag_seed, ag_corpus, ag_vocab, ag_lexicon, ag_views, ag_min_len,
                         ag_max_len);
    if (pretrain->parsed()) {
      auto cfg = pt_config.empty() ? clr::RunConfig{} : clr::RunConfig::from_file(pt_config);
      for (const auto& kv : pt_sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
          throw std::runtime_error("--set expects key=value, got: " + kv);
        cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
      }
      if (o_corpus->count()) cfg.corpus = pt_corpus;
      if (o_vocab->count()) cfg.vocab = pt_vocab;
      if (o_lexicon->count()) cfg.lexicon = pt_lexicon;
      if (o_run_dir->count()) cfg.run_dir = pt_run_dir;
      if (o_aug->count()) cfg.augmentation = pt_augmentation;
      if (o_mode->count()) cfg.loss_mode = pt_loss_mode;
      if (o_seed->count()) cfg.seed = pt_seed;
      if (cfg.corpus.empty()) throw std::runtime_error("pretrain needs a corpus (--corpus)");
      if (cfg.vocab.empty()) throw std::runtime_error("pretrain needs a vocabulary (--vocab)");
      clr::run_pretrain(cfg, &std::cerr);
      return 0;
    }
    if (embed->parsed()) return cmd_embed(em_checkpoint, em_vocab, em_input, em_pooling);
    if (eval_sts->parsed())
      return cmd_eval_sts(es_checkpoint, es_vocab, es_pairs, es_pooling, es_scores);
    if (inspect->parsed()) return cmd_inspect(ic_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
