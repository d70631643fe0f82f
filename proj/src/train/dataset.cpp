#include "wakegnn/train/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "wakegnn/common/error.hpp"
#include "wakegnn/common/random.hpp"

namespace wakegnn::train {

std::string_view to_string(Split s) {
  switch (s) {
    case Split::Train: return "train";
    case Split::Val: return "val";
    case Split::Test: return "test";
  }
  return "?";
}

Split split_from_string(std::string_view s) {
  if (s == "train") return Split::Train;
  if (s == "val") return Split::Val;
  if (s == "test") return Split::Test;
  throw UsageError("unknown split '" + std::string(s) + "' (expected train, val or test)");
}

void validate(const SplitRatios& r) {
  if (!(r.train >= 0.0 && r.val >= 0.0 && r.test >= 0.0)) throw ConfigError("split ratios must be non-negative");
  if (std::abs(r.train + r.val + r.test - 1.0) > 1e-9) throw ConfigError("split ratios must sum to 1");
}

const std::vector<std::size_t>& Dataset::indices(Split s) const {
  switch (s) {
    case Split::Train: return train;
    case Split::Val: return val;
    case Split::Test: return test;
  }
  return train;
}

SplitCounts split_counts(std::size_t n, const SplitRatios& r) {
  validate(r);
  // The 1e-9 slack absorbs ratios like 750/7700 whose product lands just below an integer.
  auto part = [n](double ratio) { return static_cast<std::size_t>(std::floor(static_cast<double>(n) * ratio + 1e-9)); };
  SplitCounts c;
  c.val = part(r.val);
  c.test = part(r.test);
  c.train = n - c.val - c.test;
  return c;
}

Dataset split_dataset(std::vector<mesh::Sample> samples, const SplitRatios& r, std::uint64_t seed,
                      mesh::TargetMode mode) {
  if (samples.empty()) throw DataError("split_dataset: no samples");
  const SplitCounts c = split_counts(samples.size(), r);
  std::vector<std::size_t> order(samples.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  shuffle(std::span<std::size_t>(order), rng);

  Dataset ds;
  ds.train.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(c.train));
  ds.val.assign(order.begin() + static_cast<std::ptrdiff_t>(c.train),
                order.begin() + static_cast<std::ptrdiff_t>(c.train + c.val));
  ds.test.assign(order.begin() + static_cast<std::ptrdiff_t>(c.train + c.val), order.end());
  for (auto* v : {&ds.train, &ds.val, &ds.test}) std::sort(v->begin(), v->end());
  ds.samples = std::move(samples);
  // With no training samples the identity stats are kept; a checkpoint supplies real ones.
  ds.stats.target_mode = mode;
  if (!ds.train.empty()) ds.stats = compute_stats(ds.samples, ds.train, mode);
  return ds;
}

namespace {

struct Moments {
  double sum = 0.0;
  double sum_sq = 0.0;
  double count = 0.0;

  void add(double x) {
    sum += x;
    sum_sq += x * x;
    count += 1.0;
  }
  double mean() const { return sum / count; }
  double scale() const {
    const double m = mean();
    const double var = std::max(0.0, sum_sq / count - m * m);
    const double sd = std::sqrt(var);
    return sd > 1e-12 * std::max(1.0, std::abs(m)) ? sd : 1.0;
  }
};

}  // namespace

mesh::NormalizationStats compute_stats(std::span<const mesh::Sample> samples, std::span<const std::size_t> indices,
                                       mesh::TargetMode mode) {
  if (indices.empty()) throw DataError("compute_stats: no samples selected");
  std::array<Moments, 3> coord;
  std::array<Moments, 3> global;
  std::array<Moments, 4> target;
  std::set<const mesh::Graph*> seen;
  for (std::size_t idx : indices) {
    const mesh::Sample& s = samples[idx];
    // Coordinates are counted once per distinct graph.
    if (seen.insert(s.graph.get()).second) {
      for (const Vec3& p : s.graph->positions()) {
        for (int a = 0; a < 3; ++a) coord[a].add(p[a]);
      }
    }
    global[0].add(s.conditions.u_inf);
    global[1].add(s.conditions.ti_inf);
    global[2].add(s.conditions.yaw_deg);
    const auto& f = s.fields;
    const auto ref = mesh::target_reference(s.conditions, mode);
    for (std::size_t i = 0; i < f.size(); ++i) {
      target[0].add(f.u[i] / ref[0]);
      target[1].add(f.v[i] / ref[1]);
      target[2].add(f.w[i] / ref[2]);
      target[3].add(f.tke[i] / ref[3]);
    }
  }
  mesh::NormalizationStats st;
  st.target_mode = mode;
  for (int a = 0; a < 3; ++a) {
    st.coord_mean[a] = coord[a].mean();
    st.coord_scale[a] = coord[a].scale();
    st.global_mean[a] = global[a].mean();
    st.global_scale[a] = global[a].scale();
  }
  for (int a = 0; a < 4; ++a) {
    st.target_mean[a] = target[a].mean();
    st.target_scale[a] = target[a].scale();
  }
  return st;
}

void to_json(nlohmann::json& j, const SplitRatios& r) { j = {r.train, r.val, r.test}; }

void from_json(const nlohmann::json& j, SplitRatios& r) {
  const auto v = j.get<std::vector<double>>();
  if (v.size() != 3) throw ConfigError("split ratios need three entries [train, val, test]");
  r = {v[0], v[1], v[2]};
  validate(r);
}

}  // namespace wakegnn::train
