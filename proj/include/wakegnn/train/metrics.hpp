#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "wakegnn/meshgraph/features.hpp"
#include "wakegnn/meshgraph/sample.hpp"

namespace wakegnn::train {

inline constexpr double kRelativeErrorFloor = 1e-6;

/// Box-plot summary. Quartiles use linear interpolation between order
/// statistics; whiskers reach the most extreme data within 1.5 IQR of the box.
struct BoxStats {
  std::size_t count = 0;
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
  double iqr = 0.0;
  double whisker_low = 0.0;
  double whisker_high = 0.0;
  std::size_t outliers = 0;
  double mean = 0.0;
};

/// Throws DataError for an empty input.
BoxStats box_stats(std::vector<double> values);

/// Linear-interpolation quantile of sorted data, q in [0, 1].
double quantile_sorted(std::span<const double> sorted, double q);

/// Per-vertex errors of one scalar field pooled over every vertex of every sample.
struct FieldMetrics {
  std::string name;
  std::vector<double> relative_error;  // |pred - true| / max(|true|, floor)
  BoxStats relative;
  BoxStats inlet_normalized;  // |pred - true| / inlet reference of the sample
  double median_accuracy = 0.0;  // 1 - median relative error
  double mse = 0.0;              // physical units
};

struct MetricsReport {
  FieldMetrics speed;  // |U|
  FieldMetrics tke;
  double mse_normalized = 0.0;  // all four target channels, standardised
  double mse_physical = 0.0;    // all four target channels, physical units
  std::size_t n_samples = 0;
  std::size_t n_vertices = 0;
};

/// Pools errors over all samples. `pred`, `truth` and `cond` are parallel arrays.
/// Throws DataError when empty or when lengths disagree.
MetricsReport compute_metrics(std::span<const mesh::FieldSnapshot> pred, std::span<const mesh::FieldSnapshot> truth,
                              std::span<const mesh::GlobalConditions> cond, const mesh::NormalizationStats& stats);

/// Summary CSV: one row per (field, error kind) with the box statistics.
void write_metrics_csv(const std::filesystem::path& path, const MetricsReport& r);

/// Multi-line human-readable box-and-whisker summary.
std::string format_summary(const MetricsReport& r);

}  // namespace wakegnn::train
