#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "clr/run_config.hpp"

using namespace clr;

TEST_CASE("config files override defaults and unknown keys are rejected") {
  const auto dir = std::filesystem::temp_directory_path() / "clr_cfg_test";
  std::filesystem::create_directories(dir);
  const auto path = (dir / "run.cfg").string();
  {
    std::ofstream out(path, std::ios::binary);
    out << "# comment line\n";
    out << "total_steps = 500\n";
    out << "augmentation = subs+del-span   # trailing comment\n";
    out << "peak_lr = 3e-4\n";
    out << "\n";
  }
  const auto cfg = RunConfig::from_file(path);
  CHECK(cfg.total_steps == 500);
  CHECK(cfg.augmentation == "subs+del-span");
  CHECK(cfg.peak_lr == doctest::Approx(3e-4));
  CHECK(cfg.warmup_steps == 200);  // untouched default

  RunConfig fresh;
  CHECK_THROWS_AS(fresh.set("not_a_key", "1"), std::invalid_argument);
  CHECK_THROWS_AS(fresh.set("total_steps", "five"), std::invalid_argument);
  {
    std::ofstream out(path, std::ios::binary);
    out << "mystery = 12\n";
  }
  CHECK_THROWS_AS(RunConfig::from_file(path), std::invalid_argument);
  std::filesystem::remove_all(dir);
}

TEST_CASE("echo re-parses to an identical configuration") {
  RunConfig cfg;
  cfg.set("seed", "99");
  cfg.set("dropout", "0.05");
  cfg.set("loss_mode", "mlm");
  const auto text = cfg.echo();

  RunConfig round;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    REQUIRE(eq != std::string::npos);
    auto key = line.substr(0, eq - 1);
    auto value = line.substr(eq + 2);
    round.set(key, value);
  }
  CHECK(round.echo() == text);
  CHECK(round.seed == 99);
  CHECK(round.dropout == doctest::Approx(0.05));
  CHECK(round.loss_mode == "mlm");
}

TEST_CASE("derived configs carry the right fields") {
  RunConfig cfg;
  cfg.set("layers", "2");
  cfg.set("heads", "2");
  cfg.set("hidden", "32");
  cfg.set("temperature", "0.25");
  cfg.set("wd_style", "l2");
  const auto trainer = cfg.trainer_config(64);
  CHECK(trainer.encoder.layers == 2);
  CHECK(trainer.encoder.vocab_size == 64);
  CHECK(trainer.loss.temperature == doctest::Approx(0.25));
  CHECK(trainer.adam.wd_style == WeightDecayStyle::L2);
  CHECK(trainer.schedule.peak_lr == doctest::Approx(6e-4));

  cfg.set("heads", "3");  // 32 % 3 != 0
  CHECK_THROWS_AS(cfg.encoder_config(64), std::invalid_argument);
}
