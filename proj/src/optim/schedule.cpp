#include "clr/optim/schedule.hpp"

namespace clr {

double lr_at(std::int64_t step, const Schedule& schedule) {
  schedule.validate();
  if (step < 0 || step > schedule.total_steps)
    throw std::invalid_argument("step outside schedule range");
  if (step <= schedule.warmup_steps)
    return schedule.peak_lr * static_cast<double>(step) /
           static_cast<double>(schedule.warmup_steps);
  return schedule.peak_lr * static_cast<double>(schedule.total_steps - step) /
         static_cast<double>(schedule.total_steps - schedule.warmup_steps);
}

}  // namespace clr
