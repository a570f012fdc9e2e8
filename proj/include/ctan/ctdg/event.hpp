#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "ctan/common.hpp"

namespace ctan::ctdg {

enum class EventKind : std::uint8_t { NodeCreate, EdgeAdd };

/// One timestamped observation in the C-TDG stream. Node ids are internal
/// dense ids assigned by the stream's interner.
struct Event {
  double time = 0.0;
  EventKind kind = EventKind::EdgeAdd;
  NodeId src = kNoNode;
  NodeId dst = kNoNode;  // kNoNode for NodeCreate
  std::vector<double> src_features;
  std::vector<double> dst_features;
  std::vector<double> edge_features;  // EdgeAdd only
};

/// Validated, time-ordered event list with stable first-appearance node-id
/// interning. External ids are preserved for callers that need to relate
/// events back to the source file.
class EventStream {
 public:
  std::vector<Event> events;
  std::int64_t node_feat_dim = 0;
  std::int64_t edge_feat_dim = 0;

  std::size_t node_count() const { return external_ids_.size(); }
  std::size_t edge_count() const {
    return static_cast<std::size_t>(
        std::count_if(events.begin(), events.end(), [](const Event& e) {
          return e.kind == EventKind::EdgeAdd;
        }));
  }

  NodeId intern(std::int64_t external_id) {
    auto [it, inserted] = intern_.try_emplace(
        external_id, static_cast<NodeId>(external_ids_.size()));
    if (inserted) external_ids_.push_back(external_id);
    return it->second;
  }

  std::int64_t external_id(NodeId u) const {
    return external_ids_.at(u);
  }

  bool empty() const { return events.empty(); }

  /// Checks the stream-wide invariants; called by loaders after ingestion.
  void validate() const {
    double last = -1.0;
    for (std::size_t i = 0; i < events.size(); ++i) {
      const Event& e = events[i];
      if (e.time < 0.0)
        throw ContractError("event " + std::to_string(i) + ": negative time");
      if (e.time < last)
        throw ContractError("event " + std::to_string(i) +
                            ": decreasing timestamp");
      last = e.time;
      if (static_cast<std::int64_t>(e.src_features.size()) != node_feat_dim ||
          (e.kind == EventKind::EdgeAdd &&
           (static_cast<std::int64_t>(e.dst_features.size()) != node_feat_dim ||
            static_cast<std::int64_t>(e.edge_features.size()) != edge_feat_dim)))
        throw ContractError("event " + std::to_string(i) +
                            ": inconsistent feature dimensions");
    }
  }

 private:
  std::unordered_map<std::int64_t, NodeId> intern_;
  std::vector<std::int64_t> external_ids_;
};

}  // namespace ctan::ctdg
