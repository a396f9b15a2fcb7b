#pragma once

#include <cstdint>
#include <stdexcept>

namespace clr {

// Linear warmup to peak_lr at warmup_steps, then linear decay to zero at
// total_steps.
struct Schedule {
  double peak_lr = 6e-4;
  std::int64_t warmup_steps = 200;
  std::int64_t total_steps = 2000;

  void validate() const {
    if (!(peak_lr > 0.0)) throw std::invalid_argument("peak_lr must be positive");
    if (warmup_steps <= 0 || warmup_steps >= total_steps)
      throw std::invalid_argument("need 0 < warmup_steps < total_steps");
  }
};

double lr_at(std::int64_t step, const Schedule& schedule);

}  // namespace clr
