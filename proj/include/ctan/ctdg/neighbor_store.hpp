#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "ctan/common.hpp"
#include "ctan/rng.hpp"

namespace ctan::ctdg {

/// Per-node chronological interaction history. Edge feature vectors are
/// stored once per event in a shared pool; entries hold an index into it.
class TemporalNeighborStore {
 public:
  struct Entry {
    NodeId neighbor;
    double time;
    std::uint32_t feature_ref;  // index into the shared feature pool
  };

  enum class Sampling { MostRecent, Uniform };

  void ensure_node(NodeId u) {
    if (u >= lists_.size()) lists_.resize(u + 1);
  }

  /// Records an undirected interaction; both endpoints see each other.
  /// Append order must follow event time (ties keep insertion order).
  void add_interaction(NodeId u, NodeId v, double time,
                       std::vector<double> edge_features) {
    ensure_node(std::max(u, v));
    if (!lists_[u].empty() && lists_[u].back().time > time)
      throw CausalityError("neighbor store: out-of-order insertion");
    if (!lists_[v].empty() && lists_[v].back().time > time)
      throw CausalityError("neighbor store: out-of-order insertion");
    const auto ref = static_cast<std::uint32_t>(features_.size());
    features_.push_back(std::move(edge_features));
    lists_[u].push_back({v, time, ref});
    if (v != u) lists_[v].push_back({u, time, ref});
  }

  /// The k most recent entries of u strictly before time t, most recent
  /// first. Unknown nodes and k = 0 give an empty list. With Uniform
  /// sampling, k entries are drawn without replacement from the history
  /// (order still most-recent-first).
  std::vector<Entry> neighbors_before(NodeId u, double t, std::size_t k,
                                      Sampling mode = Sampling::MostRecent,
                                      Rng* rng = nullptr) const {
    std::vector<Entry> out;
    if (k == 0 || u >= lists_.size()) return out;
    const auto& hist = lists_[u];
    // first entry with time >= t; everything before it is admissible
    auto it = std::lower_bound(
        hist.begin(), hist.end(), t,
        [](const Entry& e, double t_) { return e.time < t_; });
    const std::size_t n = static_cast<std::size_t>(it - hist.begin());
    if (n == 0) return out;
    if (mode == Sampling::MostRecent || n <= k) {
      const std::size_t take = std::min(k, n);
      out.reserve(take);
      for (std::size_t i = 0; i < take; ++i) out.push_back(hist[n - 1 - i]);
      return out;
    }
    if (rng == nullptr)
      throw ContractError("neighbors_before: uniform sampling needs an rng");
    // Floyd's sampling of k distinct indices in [0, n)
    std::vector<std::size_t> picked;
    picked.reserve(k);
    for (std::size_t j = n - k; j < n; ++j) {
      std::size_t r = static_cast<std::size_t>(rng->uniform_int(j + 1));
      if (std::find(picked.begin(), picked.end(), r) != picked.end()) r = j;
      picked.push_back(r);
    }
    std::sort(picked.begin(), picked.end(), std::greater<>());
    out.reserve(k);
    for (std::size_t idx : picked) out.push_back(hist[idx]);
    return out;
  }

  const std::vector<double>& edge_features(std::uint32_t ref) const {
    return features_.at(ref);
  }

  std::size_t degree(NodeId u) const {
    return u < lists_.size() ? lists_[u].size() : 0;
  }

  void clear() {
    lists_.clear();
    features_.clear();
  }

 private:
  std::vector<std::vector<Entry>> lists_;
  std::vector<std::vector<double>> features_;
};

}  // namespace ctan::ctdg
