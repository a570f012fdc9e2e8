#pragma once

#include <algorithm>
#include <vector>

#include "ctan/ctdg/split.hpp"
#include "ctan/rng.hpp"

namespace ctan::harness {

enum class Phase { Train, Val, Test };

/// Candidate pool for negative destinations in one evaluation phase.
struct NegSampleSpec {
  Phase phase = Phase::Train;
  std::vector<NodeId> pool;  // sorted, unique
};

/// Phase pools per the protocol: training negatives come from nodes seen in
/// the training split, validation from train+val, test from the entire
/// node set. Nested by construction.
struct NegativePools {
  NegSampleSpec train, val, test;
};

inline NegativePools build_negative_pools(const ctdg::EventStream& s,
                                          const ctdg::SplitSpec& split) {
  auto collect = [&](std::size_t begin, std::size_t end,
                     std::vector<NodeId>& out) {
    for (std::size_t i = begin; i < end; ++i) {
      const ctdg::Event& e = s.events[i];
      out.push_back(e.src);
      if (e.kind == ctdg::EventKind::EdgeAdd) out.push_back(e.dst);
    }
  };
  auto finalize = [](std::vector<NodeId>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  };
  NegativePools pools;
  pools.train.phase = Phase::Train;
  collect(0, split.train_end, pools.train.pool);
  finalize(pools.train.pool);
  pools.val.phase = Phase::Val;
  pools.val.pool = pools.train.pool;
  collect(split.train_end, split.val_end, pools.val.pool);
  finalize(pools.val.pool);
  pools.test.phase = Phase::Test;
  pools.test.pool.resize(s.node_count());
  for (std::size_t i = 0; i < s.node_count(); ++i)
    pools.test.pool[i] = static_cast<NodeId>(i);
  return pools;
}

/// Uniform draw from the pool, redrawn while it equals the positive
/// destination.
inline NodeId negative_sample(const NegSampleSpec& spec, NodeId positive_dst,
                              Rng& rng) {
  if (spec.pool.empty())
    throw ContractError("negative_sample: empty pool");
  if (spec.pool.size() == 1 && spec.pool[0] == positive_dst)
    throw ContractError("negative_sample: pool holds only the positive");
  while (true) {
    const NodeId cand = spec.pool[rng.uniform_int(spec.pool.size())];
    if (cand != positive_dst) return cand;
  }
}

}  // namespace ctan::harness
