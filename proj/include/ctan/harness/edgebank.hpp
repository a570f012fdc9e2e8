#pragma once

#include <limits>
#include <unordered_map>
#include <vector>

#include "ctan/harness/metrics.hpp"
#include "ctan/harness/negative.hpp"

namespace ctan::harness {

/// Memorization baseline: an edge scores 1 iff the pair was observed within
/// the memory window before the query time, else 0. Pairs are unordered.
class EdgeBank {
 public:
  /// window in time units; infinity keeps everything ever seen.
  explicit EdgeBank(double window = std::numeric_limits<double>::infinity())
      : window_(window) {
    if (!(window_ > 0.0))
      throw ContractError("edgebank: window must be positive");
  }

  void observe(NodeId u, NodeId v, double t) { last_seen_[key(u, v)] = t; }

  /// 1 iff (u, v) was seen at some time in [t - window, t).
  int score(NodeId u, NodeId v, double t) const {
    auto it = last_seen_.find(key(u, v));
    if (it == last_seen_.end()) return 0;
    if (it->second >= t) return 0;  // strictly before the query
    return it->second >= t - window_ ? 1 : 0;
  }

  void clear() { last_seen_.clear(); }

 private:
  static std::uint64_t key(NodeId a, NodeId b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32) | b;
  }
  double window_;
  std::unordered_map<std::uint64_t, double> last_seen_;
};

/// Streaming EdgeBank evaluation on the test split: memory absorbs every
/// event before the query time; each positive is paired with one sampled
/// negative destination from the test-phase pool.
inline double edgebank_test_auc(const ctdg::EventStream& s,
                                const ctdg::SplitSpec& split, double window,
                                std::uint64_t neg_seed) {
  EdgeBank bank(window);
  NegativePools pools = build_negative_pools(s, split);
  Rng rng(neg_seed);
  std::vector<double> pos, neg;
  for (std::size_t i = 0; i < s.events.size(); ++i) {
    const ctdg::Event& e = s.events[i];
    if (e.kind != ctdg::EventKind::EdgeAdd) continue;
    if (i >= split.val_end) {
      pos.push_back(static_cast<double>(bank.score(e.src, e.dst, e.time)));
      const NodeId nd = negative_sample(pools.test, e.dst, rng);
      neg.push_back(static_cast<double>(bank.score(e.src, nd, e.time)));
    }
    bank.observe(e.src, e.dst, e.time);
  }
  if (pos.empty()) throw ContractError("edgebank: empty test split");
  return auc(pos, neg);
}

/// The window grid from the evaluation protocol: fractions of the training
/// time span plus the infinite window.
inline std::vector<double> edgebank_window_grid(const ctdg::EventStream& s,
                                                const ctdg::SplitSpec& split) {
  const double span =
      split.train_end >= 2
          ? s.events[split.train_end - 1].time - s.events.front().time
          : 1.0;
  std::vector<double> windows;
  for (double frac : {0.01, 0.05, 0.10, 0.25, 0.50, 0.75, 1.0})
    windows.push_back(std::max(frac * span, 1e-9));
  windows.push_back(std::numeric_limits<double>::infinity());
  return windows;
}

}  // namespace ctan::harness
