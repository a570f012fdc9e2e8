#pragma once

#include <unordered_map>
#include <vector>

#include "ctan/common.hpp"
#include "ctan/num/tensor.hpp"

namespace ctan::ctdg {

/// Persistent node states h_u and last-event times t_u^-. Untouched nodes
/// read as the zero vector with t^- equal to the query time, so the elapsed
/// time a fresh node sees is exactly zero.
class NodeStateTable {
 public:
  explicit NodeStateTable(std::int64_t state_dim) : dim_(state_dim) {}

  struct ReadResult {
    num::Tensor state;
    double t_minus;
    bool fresh;
  };

  ReadResult read(NodeId u, double now) const {
    auto it = states_.find(u);
    if (it == states_.end())
      return {num::Tensor::zeros({dim_}), now, true};
    return {it->second.h, it->second.t_minus, false};
  }

  void write(NodeId u, num::Tensor h, double t) {
    if (h.rank() != 1 || h.shape()[0] != dim_)
      throw ContractError("state table: wrong state dimension on write");
    if (t > clock_) clock_ = t;
    states_[u] = Slot{std::move(h), t};
  }

  bool touched(NodeId u) const { return states_.count(u) != 0; }
  std::int64_t dim() const { return dim_; }
  std::size_t touched_count() const { return states_.size(); }

  /// Latest write time seen; used for causality checks upstream.
  double clock() const { return clock_; }

  void reset() {
    states_.clear();
    clock_ = 0.0;
  }

 private:
  struct Slot {
    num::Tensor h;
    double t_minus;
  };
  std::int64_t dim_;
  double clock_ = 0.0;
  std::unordered_map<NodeId, Slot> states_;
};

}  // namespace ctan::ctdg
