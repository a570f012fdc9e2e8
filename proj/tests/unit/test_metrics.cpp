#include <catch_amalgamated.hpp>

#include "ctan/harness/metrics.hpp"
#include "ctan/harness/negative.hpp"
#include "ctan/rng.hpp"
#include "support/oracles.hpp"

using namespace ctan;
using namespace ctan::harness;

TEST_CASE("auc extremes", "[harness]") {
  CHECK(auc({1.0, 2.0, 3.0}, {-1.0, 0.0}) == 1.0);
  CHECK(auc({0.5, 0.5}, {0.5, 0.5, 0.5}) == 0.5);  // all ties
  CHECK(auc({-1.0}, {1.0}) == 0.0);
  CHECK_THROWS_AS(auc({}, {1.0}), ContractError);
  CHECK_THROWS_AS(auc({1.0}, {}), ContractError);
}

TEST_CASE("auc equals pair-counting oracle exactly, ties included",
          "[harness]") {
  Rng rng(911);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t np = 1 + rng.uniform_int(1000);
    const std::size_t nn = 1 + rng.uniform_int(1000);
    std::vector<double> pos(np), neg(nn);
    // coarse grid of values forces plenty of exact ties
    for (auto& v : pos) v = static_cast<double>(rng.uniform_int(20)) / 4.0;
    for (auto& v : neg) v = static_cast<double>(rng.uniform_int(20)) / 4.0;
    CHECK(auc(pos, neg) == oracle::auc_pair_counting(pos, neg));
  }
}

TEST_CASE("accuracy counting", "[harness]") {
  std::vector<double> logits{1.0, -2.0, 0.5, -0.1, 3.0, 2.0, -1.0, 0.2, -0.2, 0.9};
  std::vector<int> labels{1, -1, 1, 1, 1, -1, -1, 1, 1, 1};
  // per-element agreement: + + + - + - + + - + = 7 of 10
  CHECK(accuracy(logits, labels) == 0.7);

  std::vector<int> flipped;
  for (int l : labels) flipped.push_back(-l);
  CHECK(accuracy(logits, flipped) == 0.3);
  CHECK(accuracy(logits, flipped) ==
        Catch::Approx(1.0 - accuracy(logits, labels)));

  std::vector<double> all_right{1.0, -1.0};
  CHECK(accuracy(all_right, {1, -1}) == 1.0);
  CHECK_THROWS_AS(accuracy({1.0}, {1, -1}), ContractError);
}

TEST_CASE("negative pools nest across phases", "[harness]") {
  ctdg::EventStream s;
  s.node_feat_dim = 0;
  s.edge_feat_dim = 0;
  auto push = [&](double t, int u, int v) {
    ctdg::Event e;
    e.time = t;
    e.kind = ctdg::EventKind::EdgeAdd;
    e.src = s.intern(u);
    e.dst = s.intern(v);
    s.events.push_back(e);
  };
  // 10 events, split 7/1/2; later splits introduce new nodes
  for (int i = 0; i < 7; ++i) push(i, 0, 1 + i % 3);
  push(7, 4, 5);
  push(8, 6, 7);
  push(9, 0, 8);
  ctdg::SplitSpec split = ctdg::chronological_split(s);
  NegativePools pools = build_negative_pools(s, split);

  for (NodeId u : pools.train.pool)
    CHECK(std::find(pools.val.pool.begin(), pools.val.pool.end(), u) !=
          pools.val.pool.end());
  for (NodeId u : pools.val.pool)
    CHECK(std::find(pools.test.pool.begin(), pools.test.pool.end(), u) !=
          pools.test.pool.end());
  CHECK(pools.test.pool.size() == s.node_count());

  // train-phase samples always come from the training node set
  Rng rng(5);
  for (int i = 0; i < 100; ++i) {
    NodeId nd = negative_sample(pools.train, 1, rng);
    CHECK(std::find(pools.train.pool.begin(), pools.train.pool.end(), nd) !=
          pools.train.pool.end());
    CHECK(nd != 1);
  }
}

TEST_CASE("negative_sample: pool of two always yields the other node",
          "[harness]") {
  NegSampleSpec spec{Phase::Train, {3, 9}};
  Rng rng(1);
  for (int i = 0; i < 20; ++i) CHECK(negative_sample(spec, 9, rng) == 3);

  NegSampleSpec singleton{Phase::Train, {9}};
  CHECK_THROWS_AS(negative_sample(singleton, 9, rng), ContractError);
}

TEST_CASE("negative_sample draws uniformly (chi-squared at 1%)", "[harness]") {
  const std::size_t pool_size = 10;
  NegSampleSpec spec{Phase::Test, {}};
  for (NodeId u = 0; u < pool_size; ++u) spec.pool.push_back(u);
  const NodeId positive = 4;
  Rng rng(20240);
  std::vector<std::size_t> counts(pool_size, 0);
  const std::size_t draws = 100000;
  for (std::size_t i = 0; i < draws; ++i) counts[negative_sample(spec, positive, rng)]++;
  CHECK(counts[positive] == 0);
  const double expected =
      static_cast<double>(draws) / static_cast<double>(pool_size - 1);
  double chi2 = 0.0;
  for (NodeId u = 0; u < pool_size; ++u) {
    if (u == positive) continue;
    const double diff = static_cast<double>(counts[u]) - expected;
    chi2 += diff * diff / expected;
  }
  // dof = (pool_size - 1) - 1 cells
  CHECK(chi2 < oracle::chi2_quantile(static_cast<double>(pool_size - 2), 0.01));
}
