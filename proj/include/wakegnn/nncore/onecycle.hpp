#pragma once

#include <cstdint>

namespace wakegnn::nn {

/// One-cycle learning-rate schedule: cosine ramp from max_lr / div_factor up to
/// max_lr over the warmup steps, then cosine decay down to max_lr / final_div_factor.
struct OneCycleSchedule {
  double max_lr = 1e-3;
  std::int64_t total_steps = 1;
  double warmup_fraction = 0.3;
  double div_factor = 25.0;
  double final_div_factor = 1e4;

  /// Step index at which the schedule peaks. Rounded so the peak lands on an integer step.
  std::int64_t warmup_steps() const;
  double initial_lr() const { return max_lr / div_factor; }
  double final_lr() const { return max_lr / final_div_factor; }
};

void validate(const OneCycleSchedule& s);

/// Learning rate at `step`, 0 <= step <= total_steps.
double onecycle_lr(std::int64_t step, const OneCycleSchedule& s);

}  // namespace wakegnn::nn
