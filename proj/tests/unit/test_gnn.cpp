#include <algorithm>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "gradcheck.hpp"
#include "oracles.hpp"
#include "wakegnn/common/error.hpp"
#include "wakegnn/gnn/layers.hpp"
#include "wakegnn/gnn/model.hpp"
#include "wakegnn/gnn/neighbors.hpp"

using namespace wakegnn;
using namespace wakegnn::gnn;
using T2 = nn::Tensor2<double>;

namespace {

T2 random_tensor(Eigen::Index r, Eigen::Index c, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  T2 t(r, c);
  for (Eigen::Index i = 0; i < t.size(); ++i) t.data()[i] = nd(rng);
  return t;
}

ModelConfig small_config(Variant v, int layers, int hidden, int in = 5) {
  ModelConfig c;
  c.variant = v;
  c.n_layers = layers;
  c.hidden = hidden;
  c.in_channels = in;
  c.gat_heads = 2;
  c.fanout.assign(layers, 3);
  return c;
}

// Gives zero-initialised biases random values so every parameter is exercised.
void randomise_biases(GnnModel<double>& m, std::mt19937_64& rng) {
  for_each_param(m, [&](const std::string& n, T2& t) {
    if (n.ends_with("bias")) t = 0.1 * random_tensor(t.rows(), t.cols(), rng);
  });
}

}  // namespace

TEST(Sage, TwoVertexHandExample) {
  const auto g = oracle::make_graph(2, {{0, 1}});
  T2 h(2, 1);
  h << 1, 3;
  const LinearParams<double> p{T2::Identity(2, 2), T2::Zero(1, 2)};
  T2 expect(2, 2);
  expect << 1, 3, 3, 1;
  EXPECT_EQ(sage_layer_forward(h, full_neighbors(g), p, Activation::None), expect);
}

TEST(Sage, EdgelessAggregateIsZero) {
  const auto g = oracle::make_graph(3, {});
  std::mt19937_64 rng(1);
  const T2 h = random_tensor(3, 2, rng);
  const LinearParams<double> p{T2::Identity(4, 4), T2::Zero(1, 4)};
  const auto out = sage_layer_forward(h, full_neighbors(g), p, Activation::None);
  EXPECT_EQ(out.leftCols(2), h);
  EXPECT_EQ(out.rightCols(2), T2::Zero(3, 2));
}

TEST(Layers, MatchDenseOraclesOnRandomGraphs) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = std::uniform_int_distribution<int>(1, 10)(rng);
    const int f = std::uniform_int_distribution<int>(1, 4)(rng);
    const int out = 2 * std::uniform_int_distribution<int>(1, 3)(rng);
    const auto edges = oracle::random_edges(n, 0.4, rng);
    const auto g = oracle::make_graph(n, edges);
    const auto nb = full_neighbors(g);
    const auto a = oracle::adjacency(n, edges);
    const T2 h = random_tensor(n, f, rng);

    const LinearParams<double> ps{random_tensor(2 * f, out, rng), random_tensor(1, out, rng)};
    EXPECT_LT((sage_layer_forward(h, nb, ps) - oracle::sage(h, a, ps.weight, ps.bias, true)).cwiseAbs().maxCoeff(),
              1e-12);

    const LinearParams<double> pg{random_tensor(f, out, rng), random_tensor(1, out, rng)};
    EXPECT_LT((gcn_layer_forward(h, nb, pg) - oracle::gcn(h, a, pg.weight, pg.bias, true)).cwiseAbs().maxCoeff(),
              1e-12);

    LayerParams<double> pa{{random_tensor(f, out, rng), random_tensor(1, out, rng)},
                           random_tensor(2, out / 2, rng), random_tensor(2, out / 2, rng)};
    const auto expect = oracle::gat(h, a, pa.lin.weight, pa.lin.bias, pa.att_src, pa.att_dst, 2, true, true);
    EXPECT_LT((gat_layer_forward(h, nb, pa, 2) - expect).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(SageRes, ZeroWeightIsolatesResiduals) {
  std::mt19937_64 rng(3);
  const auto g = oracle::make_graph(4, {{0, 1}, {1, 2}, {2, 3}});
  const T2 h = random_tensor(4, 3, rng);
  const T2 h0 = random_tensor(4, 3, rng);
  const LinearParams<double> p{T2::Zero(6, 3), T2::Zero(1, 3)};
  EXPECT_EQ(sage_res_layer_forward(h, h0, full_neighbors(g), p, 0.1, 0.9), T2(0.1 * h0 + 0.9 * h));
}

TEST(SageRes, ZeroScalesReduceToSage) {
  std::mt19937_64 rng(4);
  const auto g = oracle::make_graph(5, {{0, 1}, {1, 2}, {3, 4}});
  const T2 h = random_tensor(5, 3, rng);
  const LinearParams<double> p{random_tensor(6, 3, rng), random_tensor(1, 3, rng)};
  EXPECT_EQ(sage_res_layer_forward(h, T2(random_tensor(5, 3, rng)), full_neighbors(g), p, 0.0, 0.0),
            sage_layer_forward(h, full_neighbors(g), p));
}

TEST(SageRes, GradientThroughResidualPaths) {
  std::mt19937_64 rng(5);
  const auto g = oracle::make_graph(6, oracle::random_connected_edges(6, 0.3, rng));
  const auto nb = full_neighbors(g);
  T2 h = random_tensor(6, 3, rng);
  T2 h0 = random_tensor(6, 3, rng);
  LinearParams<double> p{random_tensor(6, 3, rng), random_tensor(1, 3, rng)};
  const T2 r = random_tensor(6, 3, rng);
  auto loss = [&] { return (sage_res_layer_forward(h, h0, nb, p, 0.1, 0.9).array() * r.array()).sum(); };
  SageCache<double> cache;
  sage_res_layer_forward(h, h0, nb, p, 0.1, 0.9, &cache);
  auto gp = nn::zeros_like(p);
  const auto gi = sage_res_layer_backward(h, nb, p, 0.1, 0.9, cache, r, gp);
  EXPECT_LT(oracle::max_relative_error(gi.h, oracle::numeric_gradient(h, loss, 1e-6), 1e-8), 1e-6);
  EXPECT_LT(oracle::max_relative_error(gi.h0, oracle::numeric_gradient(h0, loss, 1e-6), 1e-8), 1e-6);
  EXPECT_LT(oracle::max_relative_error(gp.weight, oracle::numeric_gradient(p.weight, loss, 1e-6), 1e-8), 1e-6);
}

TEST(Gcn, IsolatedVertexAndSymmetry) {
  std::mt19937_64 rng(6);
  const LinearParams<double> p{random_tensor(2, 3, rng), T2::Zero(1, 3)};
  T2 h(1, 2);
  h << 0.7, -1.2;
  EXPECT_LT((gcn_layer_forward(h, full_neighbors(oracle::make_graph(1, {})), p) -
             oracle::relu(h * p.weight)).cwiseAbs().maxCoeff(), 1e-15);
  T2 h2(2, 2);
  h2 << 0.4, 0.9, 0.4, 0.9;
  const auto out = gcn_layer_forward(h2, full_neighbors(oracle::make_graph(2, {{0, 1}})), p);
  EXPECT_EQ(out.row(0), out.row(1));
}

TEST(Gat, SingletonAttentionAndNormalisation) {
  std::mt19937_64 rng(7);
  LayerParams<double> p{{random_tensor(3, 4, rng), T2::Zero(1, 4)}, random_tensor(2, 2, rng), random_tensor(2, 2, rng)};
  const T2 h = random_tensor(1, 3, rng);
  GatCache<double> cache;
  const auto out = gat_layer_forward(h, full_neighbors(oracle::make_graph(1, {})), p, 2, Activation::Relu, &cache);
  EXPECT_LT((out - oracle::relu(h * p.lin.weight)).cwiseAbs().maxCoeff(), 1e-15);
  for (double a : cache.attention) EXPECT_EQ(a, 1.0);

  // Vertex 0 with two neighbours of identical features, self excluded.
  T2 h3(3, 3);
  h3.row(0) = random_tensor(1, 3, rng);
  h3.row(1) = h3.row(2) = random_tensor(1, 3, rng);
  gat_layer_forward(h3, full_neighbors(oracle::make_graph(3, {{0, 1}, {0, 2}})), p, 2, Activation::Relu, &cache,
                    false);
  const auto& an = cache.attention_nbrs;
  for (auto e = an.offsets[0]; e < an.offsets[1]; ++e)
    for (int k = 0; k < 2; ++k) EXPECT_DOUBLE_EQ(cache.attention[e * 2 + k], 0.5);

  const auto g = oracle::make_graph(9, oracle::random_edges(9, 0.5, rng));
  gat_layer_forward(random_tensor(9, 3, rng), full_neighbors(g), p, 2, Activation::Relu, &cache);
  for (std::size_t v = 0; v < 9; ++v) {
    for (int k = 0; k < 2; ++k) {
      double s = 0.0;
      for (auto e = cache.attention_nbrs.offsets[v]; e < cache.attention_nbrs.offsets[v + 1]; ++e)
        s += cache.attention[e * 2 + k];
      EXPECT_NEAR(s, 1.0, 1e-12);
    }
  }
}

TEST(Gat, HeadsMustDivideWidth) {
  LayerParams<double> p{{T2::Zero(3, 5), T2::Zero(1, 5)}, T2::Zero(2, 2), T2::Zero(2, 2)};
  EXPECT_THROW(gat_layer_forward(T2(T2::Zero(1, 3)), full_neighbors(oracle::make_graph(1, {})), p, 2),
               DimensionError);
}

TEST(NeighborSample, SaturationMembershipDeterminism) {
  std::mt19937_64 rng(8);
  const auto g = oracle::make_graph(12, oracle::random_connected_edges(12, 0.3, rng));
  const std::vector<int> big{100, 100};
  const auto full = neighbor_sample(g, big, 1);
  EXPECT_EQ(full[0], full_neighbors(g));
  EXPECT_EQ(full[1], full_neighbors(g));

  const std::vector<int> one{1};
  const auto s = neighbor_sample(g, one, 9);
  for (std::size_t v = 0; v < 12; ++v) {
    ASSERT_EQ(s[0].offsets[v + 1] - s[0].offsets[v], std::min<std::size_t>(1, g.degree(v)));
    if (g.degree(v) == 0) continue;
    const auto nb = g.neighbors(v);
    EXPECT_TRUE(std::binary_search(nb.begin(), nb.end(), s[0].indices[s[0].offsets[v]]));
  }
  EXPECT_EQ(neighbor_sample(g, one, 9), s);
  const std::vector<int> zero{0};
  EXPECT_THROW(neighbor_sample(g, zero, 1), ConfigError);
}

TEST(Jk, WidthsAndSymmetry) {
  std::mt19937_64 rng(9);
  const T2 a = random_tensor(4, 3, rng);
  const LinearParams<double> p1{random_tensor(3, 2, rng), random_tensor(1, 2, rng)};
  EXPECT_LT((jk_aggregate<double>({a}, p1) - nn::linear_forward(a, p1)).cwiseAbs().maxCoeff(), 1e-15);

  std::vector<T2> six(6, T2::Ones(5, 128));
  EXPECT_EQ(jk_concat(six).cols(), 768);

  // Two identical outputs with a projection whose two blocks are equal.
  const T2 half = random_tensor(3, 2, rng);
  T2 w(6, 2);
  w << half, half;
  const LinearParams<double> p{w, T2::Zero(1, 2)};
  const T2 b = random_tensor(4, 3, rng);
  EXPECT_LT((jk_aggregate<double>({a, b}, p) - jk_aggregate<double>({b, a}, p)).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_THROW(jk_concat<double>({a, T2(T2::Ones(2, 3))}), DimensionError);
}

TEST(Model, ZeroWeightsGiveZeroOutput) {
  auto m = init_model<double>(small_config(Variant::SageJkRes, 3, 8), 1);
  for_each_param(m, [](const std::string&, T2& t) { t.setZero(); });
  std::mt19937_64 rng(10);
  const auto g = oracle::make_graph(7, oracle::random_connected_edges(7, 0.3, rng));
  const NeighborLists nb = full_neighbors(g);
  const auto out = model_forward(m, std::span(&nb, 1), random_tensor(7, 5, rng));
  EXPECT_EQ(out, T2::Zero(7, 4));
}

class ModelGradient : public ::testing::TestWithParam<Variant> {};

TEST_P(ModelGradient, FullModelMatchesFiniteDifferences) {
  std::mt19937_64 rng(11);
  auto m = init_model<double>(small_config(GetParam(), 3, 8), 5);
  randomise_biases(m, rng);
  const auto g = oracle::make_graph(20, oracle::random_connected_edges(20, 0.15, rng));
  const NeighborLists nb = full_neighbors(g);
  const auto res = oracle::model_gradient_check(m, std::span(&nb, 1), random_tensor(20, 5, rng),
                                                random_tensor(20, 4, rng), 1e-6, 1e-4);
  EXPECT_LT(res.max_rel_error, 1e-5) << "worst parameter " << res.worst_param;
}

INSTANTIATE_TEST_SUITE_P(Variants, ModelGradient,
                         ::testing::Values(Variant::Sage, Variant::SageJkRes, Variant::Gcn, Variant::Gat),
                         [](const auto& info) { return std::string(to_string(info.param)); });

TEST(Model, SampledNeighbourhoodGradient) {
  std::mt19937_64 rng(12);
  auto m = init_model<double>(small_config(Variant::SageJkRes, 2, 6), 2);
  randomise_biases(m, rng);
  const auto g = oracle::make_graph(15, oracle::random_connected_edges(15, 0.3, rng));
  const auto nbrs = neighbor_sample(g, m.config.fanout, 4);
  const auto res = oracle::model_gradient_check(m, nbrs, random_tensor(15, 5, rng), random_tensor(15, 4, rng), 1e-6,
                                                1e-4);
  EXPECT_LT(res.max_rel_error, 1e-5) << res.worst_param;
}

TEST(Model, GradientCompleteness) {
  std::mt19937_64 rng(13);
  auto m = init_model<double>(small_config(Variant::SageJkRes, 3, 8), 7);
  randomise_biases(m, rng);
  const auto g = oracle::make_graph(10, oracle::random_connected_edges(10, 0.3, rng));
  const NeighborLists nb = full_neighbors(g);
  const T2 x = random_tensor(10, 5, rng);
  ForwardCache<double> cache;
  model_forward(m, std::span(&nb, 1), x, &cache);

  auto grads = zeros_like(m);
  model_backward(m, std::span(&nb, 1), cache, T2(T2::Zero(10, 4)), grads);
  for_each_param(grads, [](const std::string& n, T2& t) { EXPECT_EQ(t.cwiseAbs().maxCoeff(), 0.0) << n; });

  grads = zeros_like(m);
  model_backward(m, std::span(&nb, 1), cache, random_tensor(10, 4, rng), grads);
  for_each_param(grads, [](const std::string& n, T2& t) { EXPECT_GT(t.cwiseAbs().maxCoeff(), 0.0) << n; });
}

TEST(Model, PermutationEquivariance) {
  std::mt19937_64 rng(14);
  for (auto v : {Variant::Sage, Variant::SageJkRes, Variant::Gcn, Variant::Gat}) {
    auto m = init_model<double>(small_config(v, 3, 8), 3);
    const int n = 12;
    const auto edges = oracle::random_connected_edges(n, 0.25, rng);
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<std::pair<int, int>> pedges;
    for (auto [a, b] : edges) pedges.emplace_back(perm[a], perm[b]);
    const NeighborLists nb = full_neighbors(oracle::make_graph(n, edges));
    const NeighborLists pnb = full_neighbors(oracle::make_graph(n, pedges));
    const T2 x = random_tensor(n, 5, rng);
    T2 px(n, 5);
    for (int i = 0; i < n; ++i) px.row(perm[i]) = x.row(i);
    const auto out = model_forward(m, std::span(&nb, 1), x);
    const auto pout = model_forward(m, std::span(&pnb, 1), px);
    for (int i = 0; i < n; ++i) EXPECT_LT((pout.row(perm[i]) - out.row(i)).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Model, ParameterCounts) {
  ModelConfig c;
  const auto m = init_model<float>(c, 0);
  const auto n = count_params(m);
  EXPECT_GT(n, 100'000u);
  EXPECT_LT(n, 500'000u);
  c.hidden = 256;
  EXPECT_GT(count_params(init_model<float>(c, 0)), 2 * n);
}

TEST(Model, CheckpointRoundTrip) {
  std::mt19937_64 rng(15);
  auto m = init_model<double>(small_config(Variant::Gat, 2, 4), 1);
  randomise_biases(m, rng);
  const auto back = model_from_checkpoint<double>(to_checkpoint<double>(m, nullptr));
  EXPECT_EQ(back.config, m.config);
  std::vector<T2> a, b;
  for_each_param(m, [&](const std::string&, T2& t) { a.push_back(t); });
  for_each_param(back, [&](const std::string&, const T2& t) { b.push_back(t); });
  EXPECT_EQ(a, b);
}
