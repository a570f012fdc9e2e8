#pragma once

#include <cmath>
#include <vector>

#include "ctan/harness/metrics.hpp"
#include "ctan/harness/negative.hpp"
#include "ctan/harness/train_config.hpp"
#include "ctan/model/checkpoint.hpp"
#include "ctan/model/processor.hpp"
#include "ctan/num/adam.hpp"

namespace ctan::harness {

struct LinkPredResult {
  model::Checkpoint best;  // best-validation-AUC parameters
  std::vector<nlohmann::json> metrics;
  double test_auc = 0.0;
  double best_val_auc = 0.0;
  int epochs_run = 0;
};

namespace detail {

/// One pass over [begin, end): score each positive against one sampled
/// negative before the event's edge becomes visible, then process the
/// event. With a non-null adam the BCE on both scores trains the model.
/// Scores use history-only query embeddings, so nothing at time t ever
/// sees the event at time t.
struct LinkPassResult {
  std::vector<double> pos, neg;
  double mean_loss = 0.0;
};

inline LinkPassResult link_pass(const ctdg::EventStream& s, std::size_t begin,
                                std::size_t end,
                                const NegSampleSpec& neg_spec,
                                model::CtanParams& params, double dt_scale,
                                ctdg::TemporalNeighborStore& store,
                                ctdg::NodeStateTable& states, num::Adam* adam,
                                Rng& rng, bool score_events) {
  LinkPassResult out;
  double loss_sum = 0.0;
  std::size_t loss_count = 0;
  for (std::size_t i = begin; i < end; ++i) {
    const ctdg::Event& e = s.events[i];
    num::Tape tape;
    model::ParamValues pv = model::bind_params(tape, params);
    model::EventProcessor proc(pv, tape, store, states, dt_scale,
                               /*carry=*/false);
    if (score_events && e.kind == ctdg::EventKind::EdgeAdd) {
      const NodeId nd = negative_sample(neg_spec, e.dst, rng);
      std::vector<NodeId> seeds{e.src, e.dst, nd};
      auto z = proc.embed_at(e.time, seeds);
      num::Value pos_logit = model::readout_link(pv, z[0], z[1]);
      num::Value neg_logit = model::readout_link(pv, z[0], z[2]);
      out.pos.push_back(tape.value(pos_logit).value());
      out.neg.push_back(tape.value(neg_logit).value());
      if (adam != nullptr) {
        num::Value loss = num::add(num::bce_with_logit(pos_logit, 1.0),
                                   num::bce_with_logit(neg_logit, 0.0));
        const double loss_val = tape.value(loss).value();
        if (!std::isfinite(loss_val))
          throw NumericError("link training diverged: non-finite loss");
        loss_sum += loss_val;
        ++loss_count;
        tape.backward(loss);
        std::vector<num::Tensor> grads =
            model::collect_grads(tape, pv, params);
        std::vector<num::Tensor*> ptrs;
        for (auto& [name, t] : params.named()) ptrs.push_back(t);
        adam->step(ptrs, grads);
      }
    }
    proc.process_event(e);
  }
  out.mean_loss = loss_count > 0 ? loss_sum / static_cast<double>(loss_count)
                                 : 0.0;
  return out;
}

}  // namespace detail

/// Test AUC of a saved model: one evaluation pass carrying states
/// train -> val -> test, scoring only the test events.
inline double evaluate_linkpred(const ctdg::EventStream& s,
                                const ctdg::SplitSpec& split,
                                model::Checkpoint ck, std::uint64_t seed) {
  NegativePools pools = build_negative_pools(s, split);
  ctdg::TemporalNeighborStore store;
  ctdg::NodeStateTable states(ck.params.cfg.d);
  Rng rng = Rng(seed).derive(4000);
  detail::link_pass(s, 0, split.val_end, pools.val, ck.params, ck.dt_scale,
                    store, states, nullptr, rng, /*score_events=*/false);
  auto test_out = detail::link_pass(s, split.val_end, s.events.size(),
                                    pools.test, ck.params, ck.dt_scale, store,
                                    states, nullptr, rng,
                                    /*score_events=*/true);
  return auc(test_out.pos, test_out.neg);
}

/// Future link prediction: states reset at epoch start, the stream is
/// processed chronologically, one negative per positive, early stopping on
/// validation AUC. The final evaluation pass carries states train -> val ->
/// test with the best parameters.
inline LinkPredResult train_linkpred(const ctdg::EventStream& s,
                                     const ctdg::SplitSpec& split,
                                     const model::CtanConfig& model_cfg,
                                     const TrainConfig& train_cfg,
                                     std::uint64_t seed) {
  train_cfg.validate();
  model::CtanConfig cfg = model_cfg;
  apply_ablation(cfg, train_cfg.ablation);
  cfg.validate();

  const double dt_scale = model::mean_time_gap(s, split.train_end);
  NegativePools pools = build_negative_pools(s, split);

  Rng rng(seed);
  model::CtanParams params =
      model::CtanParams::init(cfg, model::ReadoutKind::Link, rng);
  std::vector<num::Tensor*> ptrs;
  for (auto& [name, t] : params.named()) ptrs.push_back(t);
  num::Adam adam({.lr = train_cfg.lr, .weight_decay = train_cfg.weight_decay},
                 ptrs);

  LinkPredResult result;
  result.best_val_auc = -1.0;
  result.best.params = params;
  result.best.dt_scale = dt_scale;

  int stall = 0;
  for (int epoch = 0; epoch < train_cfg.epochs; ++epoch) {
    result.epochs_run = epoch + 1;
    ctdg::TemporalNeighborStore store;
    ctdg::NodeStateTable states(cfg.d);
    Rng train_rng = rng.derive(2000 + static_cast<std::uint64_t>(epoch));
    auto train_out = detail::link_pass(s, 0, split.train_end, pools.train,
                                       params, dt_scale, store, states, &adam,
                                       train_rng, /*score_events=*/true);
    Rng val_rng = rng.derive(3000);
    auto val_out = detail::link_pass(s, split.train_end, split.val_end,
                                     pools.val, params, dt_scale, store,
                                     states, nullptr, val_rng,
                                     /*score_events=*/true);
    const double val_auc = auc(val_out.pos, val_out.neg);
    const double train_auc = auc(train_out.pos, train_out.neg);

    result.metrics.push_back({{"epoch", epoch},
                              {"split", "train"},
                              {"loss", train_out.mean_loss},
                              {"auc", train_auc},
                              {"lr", adam.lr()}});
    result.metrics.push_back({{"epoch", epoch},
                              {"split", "val"},
                              {"loss", 0.0},
                              {"auc", val_auc},
                              {"lr", adam.lr()}});

    if (val_auc > result.best_val_auc + 1e-12) {
      result.best_val_auc = val_auc;
      result.best.params = params;
      stall = 0;
    } else if (++stall >= train_cfg.early_stop_patience) {
      break;
    }
  }

  // evaluation pass: states continue train -> val -> test
  {
    ctdg::TemporalNeighborStore store;
    ctdg::NodeStateTable states(cfg.d);
    Rng eval_rng = rng.derive(4000);
    detail::link_pass(s, 0, split.train_end, pools.train, result.best.params,
                      dt_scale, store, states, nullptr, eval_rng,
                      /*score_events=*/false);
    detail::link_pass(s, split.train_end, split.val_end, pools.val,
                      result.best.params, dt_scale, store, states, nullptr,
                      eval_rng, /*score_events=*/false);
    auto test_out = detail::link_pass(s, split.val_end, s.events.size(),
                                      pools.test, result.best.params, dt_scale,
                                      store, states, nullptr, eval_rng,
                                      /*score_events=*/true);
    result.test_auc = auc(test_out.pos, test_out.neg);
    result.metrics.push_back({{"epoch", result.epochs_run},
                              {"split", "test"},
                              {"loss", 0.0},
                              {"auc", result.test_auc},
                              {"lr", adam.lr()}});
  }
  return result;
}

}  // namespace ctan::harness
