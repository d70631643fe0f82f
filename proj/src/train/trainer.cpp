#include "wakegnn/train/trainer.hpp"

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include <cmath>
#include <fstream>
#include <limits>
#include <random>

#include "wakegnn/common/alloc.hpp"
#include "wakegnn/common/error.hpp"
#include "wakegnn/common/random.hpp"
#include "wakegnn/meshgraph/features.hpp"
#include "wakegnn/nncore/checkpoint.hpp"
#include "wakegnn/nncore/loss.hpp"
#include "wakegnn/nncore/onecycle.hpp"

namespace wakegnn::train {

namespace {

template <typename T>
struct Example {
  nn::Tensor2<T> features;
  nn::Tensor2<T> targets;
};

template <typename T>
Example<T> make_example(const mesh::Sample& s, const mesh::NormalizationStats& stats) {
  return {mesh::assemble_features(*s.graph, s.conditions, stats).template cast<T>(),
          mesh::normalize_targets(s.fields, s.conditions, stats).template cast<T>()};
}

std::span<const gnn::NeighborLists> full_nbrs(const mesh::Graph& g) { return {&g.csr(), 1}; }

template <typename T>
void zero_grads(gnn::GnnModel<T>& g) {
  gnn::for_each_param(g, [](const std::string&, nn::Tensor2<T>& t) { t.setZero(); });
}

void write_curves(const std::filesystem::path& dir, const std::vector<CurvePoint>& train,
                  const std::vector<ValPoint>& val) {
  std::ofstream t(dir / "train_curve.csv");
  t << "optimizer_step,micro_step,lr,train_loss\n";
  for (const auto& p : train) t << fmt::format("{},{},{:.9g},{:.9g}\n", p.optimizer_step, p.micro_step, p.lr, p.train_loss);
  std::ofstream v(dir / "val_curve.csv");
  v << "micro_step,epoch,val_mse,improved\n";
  for (const auto& p : val) v << fmt::format("{},{:.6g},{:.9g},{}\n", p.micro_step, p.epoch, p.val_mse, p.improved ? 1 : 0);
  if (!t || !v) throw DataError("failed writing training curves to " + dir.string());
}

}  // namespace

template <typename T>
double mean_mse(const gnn::GnnModel<T>& model, const Dataset& ds, std::span<const std::size_t> indices) {
  if (indices.empty()) throw DataError("mean_mse: no samples");
  double total = 0.0;
  for (std::size_t i : indices) {
    const auto ex = make_example<T>(ds.samples[i], ds.stats);
    const auto pred = gnn::model_forward(model, full_nbrs(*ds.samples[i].graph), ex.features);
    total += static_cast<double>((pred - ex.targets).squaredNorm()) / static_cast<double>(pred.size());
  }
  return total / static_cast<double>(indices.size());
}

template <typename T>
nn::Checkpoint make_checkpoint(const gnn::GnnModel<T>& model, const nn::AdamWState<T>* optimizer,
                               const mesh::NormalizationStats& stats, const TrainRunConfig& cfg, nlohmann::json extra) {
  extra["normalization"] = stats;
  extra["run"] = cfg;
  extra["seed"] = cfg.seed;
  return gnn::to_checkpoint(model, optimizer, std::move(extra));
}

template <typename T>
TrainResult<T> train_loop(gnn::GnnModel<T> model, const Dataset& ds, const TrainRunConfig& cfg,
                          const TrainOutputs& out) {
  validate(cfg);
  gnn::validate(model.config);
  tune_allocator();
  if (ds.train.empty()) throw DataError("train: empty train split");
  if (model.config.in_channels != mesh::kFeatureCount || model.config.out_channels != mesh::kTargetCount) {
    throw DimensionError(fmt::format("train: model maps {} -> {} channels, data has {} -> {}", model.config.in_channels,
                                     model.config.out_channels, mesh::kFeatureCount, mesh::kTargetCount));
  }
  if (cfg.sample_neighbors && model.config.fanout.size() != static_cast<std::size_t>(model.config.n_layers)) {
    throw ConfigError("train: neighbour sampling needs one fanout per layer");
  }
  if (out.dir) std::filesystem::create_directories(*out.dir);

  nn::OneCycleSchedule sched;
  sched.max_lr = cfg.max_lr;
  sched.total_steps = cfg.optimizer_steps();
  sched.warmup_fraction = cfg.warmup_fraction;
  sched.div_factor = cfg.div_factor;
  sched.final_div_factor = cfg.final_div_factor;
  nn::validate(sched);

  std::vector<std::size_t> val_idx = ds.val;
  if (cfg.max_val_samples > 0 && val_idx.size() > static_cast<std::size_t>(cfg.max_val_samples)) {
    val_idx.resize(static_cast<std::size_t>(cfg.max_val_samples));
  }

  TrainResult<T> r;
  r.optimizer.hyper = cfg.adamw;
  r.best_val_mse = std::numeric_limits<double>::quiet_NaN();
  r.initial_train_mse = mean_mse(model, ds, ds.train);
  r.best_model = model;

  gnn::GnnModel<T> grads = gnn::zeros_like(model);
  const auto slots = gnn::param_slots(model, grads);

  const std::size_t n_train = ds.train.size();
  std::vector<std::size_t> checkpoints;  // positions within an epoch that trigger validation
  for (int k = 1; k <= cfg.validations_per_epoch; ++k) {
    checkpoints.push_back((static_cast<std::size_t>(k) * n_train + cfg.validations_per_epoch - 1) /
                          static_cast<std::size_t>(cfg.validations_per_epoch));
  }

  std::mt19937_64 order_rng(mix_seed(cfg.seed));
  std::vector<std::size_t> order = ds.train;
  const T grad_scale = T(1) / static_cast<T>(cfg.accumulation);
  const std::int64_t total_micro = cfg.optimizer_steps() * cfg.accumulation;
  double window_loss = 0.0;
  std::int64_t last_val_step = -1;

  auto run_validation = [&](std::int64_t micro_done) {
    if (val_idx.empty()) return;
    ValPoint vp;
    vp.micro_step = micro_done;
    vp.epoch = static_cast<double>(micro_done) / static_cast<double>(n_train);
    vp.val_mse = mean_mse(model, ds, val_idx);
    if (!std::isfinite(vp.val_mse)) throw NumericalError(fmt::format("train: non-finite validation loss at micro-step {}", micro_done));
    vp.improved = r.best_history.empty() || vp.val_mse < r.best_history.back();
    if (vp.improved) {
      r.best_history.push_back(vp.val_mse);
      r.best_val_mse = vp.val_mse;
      r.best_micro_step = micro_done;
      r.best_model = model;
      if (out.dir) {
        nn::write_checkpoint(*out.dir / "best.ckp",
                             make_checkpoint(model, &r.optimizer, ds.stats, cfg,
                                             {{"micro_step", micro_done}, {"val_mse", vp.val_mse}}));
      }
    }
    spdlog::info("validation at micro-step {} (epoch {:.2f}): mse {:.6g}{}", micro_done, vp.epoch, vp.val_mse,
                 vp.improved ? " *" : "");
    r.val_curve.push_back(vp);
    if (out.on_validation) out.on_validation(vp);
    last_val_step = micro_done;
  };

  for (std::int64_t micro = 0; micro < total_micro; ++micro) {
    const std::size_t pos = static_cast<std::size_t>(micro) % n_train;
    if (pos == 0) shuffle(std::span<std::size_t>(order), order_rng);
    const mesh::Sample& s = ds.samples[order[pos]];
    const auto ex = make_example<T>(s, ds.stats);

    std::vector<gnn::NeighborLists> sampled;
    std::span<const gnn::NeighborLists> nbrs = full_nbrs(*s.graph);
    if (cfg.sample_neighbors) {
      sampled = gnn::neighbor_sample(*s.graph, model.config.fanout, mix_seed(cfg.seed ^ (static_cast<std::uint64_t>(micro) << 1)));
      nbrs = sampled;
    }
    gnn::ForwardCache<T> cache;
    const auto pred = gnn::model_forward(model, nbrs, ex.features, &cache);
    auto loss = nn::mse_loss(pred, ex.targets);
    if (!std::isfinite(static_cast<double>(loss.value))) {
      throw NumericalError(fmt::format("train: non-finite loss at micro-step {}", micro));
    }
    window_loss += static_cast<double>(loss.value);
    loss.grad *= grad_scale;
    gnn::model_backward(model, nbrs, cache, loss.grad, grads);

    if ((micro + 1) % cfg.accumulation == 0) {
      const std::int64_t step = micro / cfg.accumulation;
      const double lr = nn::onecycle_lr(step, sched);
      nn::adamw_step<T>(slots, r.optimizer, lr);
      zero_grads(grads);
      r.train_curve.push_back({step, micro + 1, lr, window_loss / static_cast<double>(cfg.accumulation)});
      window_loss = 0.0;
    }

    const std::size_t done_in_epoch = pos + 1;
    if (std::find(checkpoints.begin(), checkpoints.end(), done_in_epoch) != checkpoints.end()) run_validation(micro + 1);
  }
  if (last_val_step != total_micro) run_validation(total_micro);
  if (val_idx.empty()) r.best_model = model;

  r.final_train_mse = mean_mse(model, ds, ds.train);
  r.final_model = model;
  if (out.dir) {
    nn::write_checkpoint(*out.dir / "final.ckp",
                         make_checkpoint(model, &r.optimizer, ds.stats, cfg, {{"micro_step", total_micro}}));
    if (val_idx.empty()) {
      nn::write_checkpoint(*out.dir / "best.ckp",
                           make_checkpoint(model, &r.optimizer, ds.stats, cfg, {{"micro_step", total_micro}}));
    }
    write_curves(*out.dir, r.train_curve, r.val_curve);
  }
  return r;
}

#define WAKEGNN_INSTANTIATE(T)                                                                                \
  template TrainResult<T> train_loop<T>(gnn::GnnModel<T>, const Dataset&, const TrainRunConfig&,             \
                                        const TrainOutputs&);                                                 \
  template double mean_mse<T>(const gnn::GnnModel<T>&, const Dataset&, std::span<const std::size_t>);        \
  template nn::Checkpoint make_checkpoint<T>(const gnn::GnnModel<T>&, const nn::AdamWState<T>*,              \
                                             const mesh::NormalizationStats&, const TrainRunConfig&, nlohmann::json);

WAKEGNN_INSTANTIATE(float)
WAKEGNN_INSTANTIATE(double)

}  // namespace wakegnn::train
