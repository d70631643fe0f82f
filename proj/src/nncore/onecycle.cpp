#include "wakegnn/nncore/onecycle.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "wakegnn/common/error.hpp"

namespace wakegnn::nn {

std::int64_t OneCycleSchedule::warmup_steps() const {
  const auto w = static_cast<std::int64_t>(std::llround(warmup_fraction * static_cast<double>(total_steps)));
  // Keep at least one step on each side of the peak.
  if (total_steps >= 2) {
    if (w < 1) return 1;
    if (w > total_steps - 1) return total_steps - 1;
  }
  return w;
}

void validate(const OneCycleSchedule& s) {
  if (!(s.max_lr > 0.0)) throw ConfigError("one-cycle: max_lr must be positive");
  if (s.total_steps < 1) throw ConfigError("one-cycle: total_steps must be >= 1");
  if (!(s.warmup_fraction > 0.0 && s.warmup_fraction < 1.0)) {
    throw ConfigError("one-cycle: warmup_fraction must lie in (0, 1)");
  }
  if (!(s.div_factor > 0.0) || !(s.final_div_factor > 0.0)) {
    throw ConfigError("one-cycle: div factors must be positive");
  }
}

namespace {

// Cosine interpolation from `from` (t = 0) to `to` (t = 1).
double cosine_anneal(double from, double to, double t) {
  return to + (from - to) * 0.5 * (1.0 + std::cos(std::numbers::pi * t));
}

}  // namespace

double onecycle_lr(std::int64_t step, const OneCycleSchedule& s) {
  validate(s);
  if (step < 0 || step > s.total_steps) {
    throw ConfigError("onecycle_lr: step " + std::to_string(step) + " outside [0, " +
                      std::to_string(s.total_steps) + "]");
  }
  const std::int64_t warm = s.warmup_steps();
  if (step == warm) return s.max_lr;
  if (step < warm) {
    return cosine_anneal(s.initial_lr(), s.max_lr, static_cast<double>(step) / static_cast<double>(warm));
  }
  const double t = static_cast<double>(step - warm) / static_cast<double>(s.total_steps - warm);
  return cosine_anneal(s.max_lr, s.final_lr(), t);
}

}  // namespace wakegnn::nn
