#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <unordered_set>

#include "ctan/ctdg/event.hpp"

namespace ctan::ctdg {

/// Index boundaries of a chronological train/val/test split over the
/// time-ordered event list: [0, train_end), [train_end, val_end),
/// [val_end, N).
struct SplitSpec {
  std::size_t train_end = 0;
  std::size_t val_end = 0;
  std::size_t total = 0;

  std::size_t train_size() const { return train_end; }
  std::size_t val_size() const { return val_end - train_end; }
  std::size_t test_size() const { return total - val_end; }
};

inline SplitSpec chronological_split(
    const EventStream& s,
    std::array<double, 3> ratios = {0.70, 0.15, 0.15}) {
  const double sum = ratios[0] + ratios[1] + ratios[2];
  if (std::abs(sum - 1.0) > 1e-12)
    throw ContractError("split: ratios must sum to 1");
  const std::size_t n = s.events.size();
  if (n < 3) throw ContractError("split: need at least 3 events");
  SplitSpec spec;
  spec.total = n;
  spec.train_end = static_cast<std::size_t>(
      std::floor(ratios[0] * static_cast<double>(n)));
  spec.val_end = static_cast<std::size_t>(
      std::floor((ratios[0] + ratios[1]) * static_cast<double>(n)));
  return spec;
}

/// Fraction of test-time edge occurrences whose (src, dst) pair never
/// appears in train or validation. Pairs are unordered.
inline double surprise_index(const EventStream& s, const SplitSpec& split) {
  auto key = [](NodeId a, NodeId b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32) | b;
  };
  std::unordered_set<std::uint64_t> seen;
  for (std::size_t i = 0; i < split.val_end; ++i) {
    const Event& e = s.events[i];
    if (e.kind == EventKind::EdgeAdd) seen.insert(key(e.src, e.dst));
  }
  std::size_t test_edges = 0, unseen = 0;
  for (std::size_t i = split.val_end; i < s.events.size(); ++i) {
    const Event& e = s.events[i];
    if (e.kind != EventKind::EdgeAdd) continue;
    ++test_edges;
    if (!seen.count(key(e.src, e.dst))) ++unseen;
  }
  if (test_edges == 0)
    throw ContractError("surprise index: empty test set");
  return static_cast<double>(unseen) / static_cast<double>(test_edges);
}

/// Dataset statistics of the kind reported for C-TDG benchmarks.
struct StreamStats {
  std::size_t nodes = 0;
  std::size_t edges = 0;
  std::size_t events = 0;
  std::int64_t node_feat_dim = 0;
  std::int64_t edge_feat_dim = 0;
  std::size_t train_events = 0, val_events = 0, test_events = 0;
  double surprise = 0.0;
  bool surprise_defined = false;
};

inline StreamStats stream_stats(const EventStream& s) {
  StreamStats st;
  st.nodes = s.node_count();
  st.edges = s.edge_count();
  st.events = s.events.size();
  st.node_feat_dim = s.node_feat_dim;
  st.edge_feat_dim = s.edge_feat_dim;
  if (s.events.size() >= 3) {
    SplitSpec split = chronological_split(s);
    st.train_events = split.train_size();
    st.val_events = split.val_size();
    st.test_events = split.test_size();
    try {
      st.surprise = surprise_index(s, split);
      st.surprise_defined = true;
    } catch (const ContractError&) {
      st.surprise_defined = false;
    }
  }
  return st;
}

}  // namespace ctan::ctdg
