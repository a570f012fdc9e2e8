#pragma once

#include <span>
#include <unordered_map>
#include <vector>

#include "ctan/ctdg/event.hpp"
#include "ctan/ctdg/neighbor_store.hpp"
#include "ctan/ctdg/node_state.hpp"
#include "ctan/model/layers.hpp"

namespace ctan::model {

/// Runs the per-event Cauchy sub-problems over the temporal graph: seed the
/// touched nodes, expand L hops of temporal neighbors, set initial
/// conditions through psi, apply L shared-weight Euler steps with attention
/// aggregation, and persist the resulting states.
///
/// With carry_gradients the updated states stay on the tape as live values,
/// so a whole episode backpropagates through every event (sequence task).
/// Without it states are re-read from the table as constants per call
/// (link prediction truncates gradients at event boundaries).
class EventProcessor {
 public:
  EventProcessor(const ParamValues& pv, num::Tape& tape,
                 ctdg::TemporalNeighborStore& store,
                 ctdg::NodeStateTable& states, double dt_scale,
                 bool carry_gradients, Rng* sampler_rng = nullptr)
      : pv_(pv),
        tape_(tape),
        store_(store),
        states_(states),
        dt_scale_(dt_scale > 0.0 ? dt_scale : 1.0),
        carry_(carry_gradients),
        rng_(sampler_rng) {
    if (pv_.cfg->uniform_sampler && rng_ == nullptr)
      throw ContractError("processor: uniform sampling needs an rng");
  }

  /// Full pipeline for one event; returns the persisted subgraph nodes.
  std::vector<NodeId> process_event(const ctdg::Event& e) {
    if (e.time < states_.clock())
      throw CausalityError("process_event: event time precedes stored state");
    std::vector<NodeId> seeds{e.src};
    if (e.kind == ctdg::EventKind::EdgeAdd && e.dst != e.src)
      seeds.push_back(e.dst);
    std::vector<SubNode> nodes;
    std::vector<num::Value> h = propagate(e.time, seeds, &e, nodes);
    std::vector<NodeId> touched;
    touched.reserve(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      states_.write(nodes[i].id, tape_.value(h[i]), e.time);
      if (carry_) live_[nodes[i].id] = h[i];
      touched.push_back(nodes[i].id);
    }
    if (e.kind == ctdg::EventKind::EdgeAdd)
      store_.add_interaction(e.src, e.dst, e.time, e.edge_features);
    return touched;
  }

  /// History-only query embeddings at time t for the given nodes: the same
  /// propagation but with no event features, no event edge, and no
  /// persistence. This is what link scoring reads, so a score at time t
  /// never sees the event it predicts.
  std::vector<num::Value> embed_at(double t, std::span<const NodeId> seeds) {
    std::vector<SubNode> nodes;
    std::vector<num::Value> h = propagate(t, seeds, nullptr, nodes);
    std::unordered_map<NodeId, num::Value> by_id;
    for (std::size_t i = 0; i < nodes.size(); ++i) by_id[nodes[i].id] = h[i];
    std::vector<num::Value> out;
    out.reserve(seeds.size());
    for (NodeId u : seeds) out.push_back(by_id.at(u));
    return out;
  }

  /// Current state of u as a tape value (live when carrying gradients).
  num::Value state_value(NodeId u, double now) {
    if (carry_) {
      auto it = live_.find(u);
      if (it != live_.end()) return it->second;
    }
    return tape_.constant(states_.read(u, now).state);
  }

  const ParamValues& params() const { return pv_; }

 private:
  struct AggEdge {
    NodeId from;
    double dt;                        // raw elapsed time, normalized at encode
    const std::vector<double>* feat;  // nullptr -> zero edge features
  };
  struct SubNode {
    NodeId id;
    double dt_self;
    std::vector<AggEdge> in;
  };

  num::Value encode_edge(const AggEdge& edge) {
    const std::int64_t d_e = pv_.cfg->edge_feat_dim;
    num::Value ef =
        edge.feat == nullptr
            ? tape_.constant(num::Tensor::zeros({d_e}))
            : tape_.constant(num::Tensor({d_e}, *edge.feat));
    num::Value te = time_encode(tape_, pv_, edge.dt / dt_scale_);
    return num::concat({ef, te});
  }

  std::vector<num::Value> propagate(double t, std::span<const NodeId> seeds,
                                    const ctdg::Event* ev,
                                    std::vector<SubNode>& nodes) {
    const CtanConfig& cfg = *pv_.cfg;
    std::unordered_map<NodeId, std::size_t> index;
    auto touch = [&](NodeId u) -> std::size_t {
      auto it = index.find(u);
      if (it != index.end()) return it->second;
      SubNode n;
      n.id = u;
      n.dt_self = t - states_.read(u, t).t_minus;
      nodes.push_back(std::move(n));
      index.emplace(u, nodes.size() - 1);
      return nodes.size() - 1;
    };
    for (NodeId u : seeds) touch(u);

    // current-event edge joins both endpoints' aggregation sets; the edge
    // itself enters the neighbor store only after this propagation
    if (ev != nullptr && ev->kind == ctdg::EventKind::EdgeAdd) {
      const std::size_t si = index.at(ev->src), di = index.at(ev->dst);
      nodes[si].in.push_back({ev->dst, 0.0, &ev->edge_features});
      if (di != si) nodes[di].in.push_back({ev->src, 0.0, &ev->edge_features});
    }

    // L hops of temporal expansion; each node is expanded exactly once and
    // the outermost hop is not expanded further (truncated propagation)
    std::size_t level_begin = 0;
    for (std::int64_t hop = 0; hop < cfg.layers; ++hop) {
      const std::size_t level_end = nodes.size();
      if (level_begin == level_end) break;
      for (std::size_t i = level_begin; i < level_end; ++i) {
        const NodeId u = nodes[i].id;
        auto sampled = store_.neighbors_before(
            u, t, static_cast<std::size_t>(cfg.sampler_k),
            cfg.uniform_sampler
                ? ctdg::TemporalNeighborStore::Sampling::Uniform
                : ctdg::TemporalNeighborStore::Sampling::MostRecent,
            rng_);
        for (const auto& entry : sampled) {
          touch(entry.neighbor);
          nodes[i].in.push_back({entry.neighbor, t - entry.time,
                                 &store_.edge_features(entry.feature_ref)});
        }
      }
      level_begin = level_end;
    }

    // initial conditions: h0 = psi(stored state, x); x is the event's
    // feature vector on its seed nodes and zero elsewhere
    const std::int64_t d_n = cfg.node_feat_dim;
    std::vector<num::Value> h;
    h.reserve(nodes.size());
    for (const SubNode& n : nodes) {
      num::Value x;
      if (ev != nullptr && d_n > 0 && n.id == ev->src)
        x = tape_.constant(num::Tensor({d_n}, ev->src_features));
      else if (ev != nullptr && d_n > 0 &&
               ev->kind == ctdg::EventKind::EdgeAdd && n.id == ev->dst)
        x = tape_.constant(num::Tensor({d_n}, ev->dst_features));
      else
        x = tape_.constant(num::Tensor::zeros({d_n}));
      h.push_back(psi_apply(tape_, pv_, state_value(n.id, t), x));
    }

    // edge representations are layer-independent; encode them once
    std::vector<num::Value> self_ehat;
    std::vector<std::vector<num::Value>> in_ehat(nodes.size());
    self_ehat.reserve(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      self_ehat.push_back(encode_edge({nodes[i].id, nodes[i].dt_self, nullptr}));
      in_ehat[i].reserve(nodes[i].in.size());
      for (const AggEdge& edge : nodes[i].in)
        in_ehat[i].push_back(encode_edge(edge));
    }

    // L synchronous Euler steps over the subgraph with shared weights
    for (std::int64_t layer = 0; layer < cfg.layers; ++layer) {
      std::vector<num::Value> next;
      next.reserve(nodes.size());
      for (std::size_t i = 0; i < nodes.size(); ++i) {
        std::vector<NeighborTerm> terms;
        terms.reserve(nodes[i].in.size() + 1);
        terms.push_back({h[i], self_ehat[i]});
        for (std::size_t k = 0; k < nodes[i].in.size(); ++k)
          terms.push_back({h[index.at(nodes[i].in[k].from)], in_ehat[i][k]});
        num::Value phi = attention_aggregate(
            pv_, h[i], std::span<const NeighborTerm>(terms));
        next.push_back(euler_layer(pv_, h[i], phi));
      }
      h = std::move(next);
    }
    return h;
  }

  const ParamValues& pv_;
  num::Tape& tape_;
  ctdg::TemporalNeighborStore& store_;
  ctdg::NodeStateTable& states_;
  double dt_scale_;
  bool carry_;
  Rng* rng_;
  std::unordered_map<NodeId, num::Value> live_;
};

/// Mean inter-event time gap, the per-dataset scale that keeps normalized
/// elapsed times near unity. Computed over a prefix (the training split).
inline double mean_time_gap(const ctdg::EventStream& s, std::size_t end_index) {
  if (end_index > s.events.size()) end_index = s.events.size();
  if (end_index < 2) return 1.0;
  const double span = s.events[end_index - 1].time - s.events[0].time;
  const double gaps = static_cast<double>(end_index - 1);
  const double mean = span / gaps;
  return mean > 0.0 ? mean : 1.0;
}

}  // namespace ctan::model
