#pragma once

#include <cmath>
#include <numeric>
#include <vector>

#include "ctan/datagen/path_graph.hpp"
#include "ctan/harness/metrics.hpp"
#include "ctan/harness/train_config.hpp"
#include "ctan/model/checkpoint.hpp"
#include "ctan/model/processor.hpp"
#include "ctan/num/adam.hpp"

namespace ctan::harness {

struct SequenceResult {
  model::Checkpoint best;         // best-validation-loss parameters
  std::vector<nlohmann::json> metrics;  // one line per epoch and split
  double test_accuracy = 0.0;
  double best_val_loss = 0.0;
};

namespace detail {

/// Forward pass over one instance; returns the readout logit of the last
/// event's destination. With a non-null adam, runs backward + one update.
inline double run_instance(const datagen::PathGraphInstance& inst,
                           model::CtanParams& params, num::Adam* adam,
                           double* loss_out) {
  num::Tape tape;
  model::ParamValues pv = model::bind_params(tape, params);
  ctdg::TemporalNeighborStore store;
  ctdg::NodeStateTable states(params.cfg.d);
  model::EventProcessor proc(pv, tape, store, states, 1.0,
                             /*carry=*/adam != nullptr);
  for (const ctdg::Event& e : inst.events) proc.process_event(e);
  const ctdg::Event& last = inst.events.back();
  num::Value logit =
      model::readout_sequence(pv, proc.state_value(last.dst, last.time));
  const double label01 = inst.label > 0 ? 1.0 : 0.0;
  num::Value loss = num::bce_with_logit(logit, label01);
  const double loss_val = tape.value(loss).value();
  if (!std::isfinite(loss_val))
    throw NumericError("sequence training diverged: non-finite loss");
  if (loss_out != nullptr) *loss_out = loss_val;
  if (adam != nullptr) {
    tape.backward(loss);
    std::vector<num::Tensor> grads = model::collect_grads(tape, pv, params);
    std::vector<num::Tensor*> ptrs;
    for (auto& [name, t] : params.named()) ptrs.push_back(t);
    adam->step(ptrs, grads);
  }
  return tape.value(logit).value();
}

inline std::pair<double, double> evaluate_split(
    const datagen::PathGraphDataset& ds, std::size_t begin, std::size_t end,
    model::CtanParams& params) {
  std::vector<double> logits;
  std::vector<int> labels;
  std::vector<double> losses;
  for (std::size_t i = begin; i < end; ++i) {
    double loss = 0.0;
    logits.push_back(run_instance(ds.instances[i], params, nullptr, &loss));
    labels.push_back(ds.instances[i].label);
    losses.push_back(loss);
  }
  return {mean(losses), accuracy(logits, labels)};
}

}  // namespace detail

/// Test accuracy of a saved model over the dataset's test instances.
inline double evaluate_sequence(const datagen::PathGraphDataset& ds,
                                model::Checkpoint ck) {
  auto [loss, acc] = detail::evaluate_split(ds, ds.val_end,
                                            ds.instances.size(), ck.params);
  return acc;
}

/// Sequence-classification training: events stream one at a time within an
/// instance, gradients flow through the whole episode, one Adam step per
/// instance (batch size 1). The learning rate halves when validation loss
/// stalls; the best-validation-loss parameters are kept.
inline SequenceResult train_sequence(const datagen::PathGraphDataset& ds,
                                     const model::CtanConfig& model_cfg,
                                     const TrainConfig& train_cfg,
                                     std::uint64_t seed) {
  train_cfg.validate();
  model::CtanConfig cfg = model_cfg;
  apply_ablation(cfg, train_cfg.ablation);
  cfg.validate();

  Rng rng = Rng(seed);
  model::CtanParams params =
      model::CtanParams::init(cfg, model::ReadoutKind::Sequence, rng);
  std::vector<num::Tensor*> ptrs;
  for (auto& [name, t] : params.named()) ptrs.push_back(t);
  num::Adam adam({.lr = train_cfg.lr, .weight_decay = train_cfg.weight_decay},
                 ptrs);

  SequenceResult result;
  result.best_val_loss = 1e300;
  result.best.params = params;
  result.best.dt_scale = 1.0;  // unit steps within each instance

  std::vector<std::size_t> order(ds.train_end);
  std::iota(order.begin(), order.end(), 0);

  int stall = 0;
  for (int epoch = 0; epoch < train_cfg.epochs; ++epoch) {
    // deterministic reshuffle per epoch
    Rng shuffle_rng = rng.derive(1000 + static_cast<std::uint64_t>(epoch));
    for (std::size_t i = order.size(); i > 1; --i)
      std::swap(order[i - 1], order[shuffle_rng.uniform_int(i)]);

    std::vector<double> train_losses;
    std::vector<double> train_logits;
    std::vector<int> train_labels;
    for (std::size_t idx : order) {
      double loss = 0.0;
      train_logits.push_back(
          detail::run_instance(ds.instances[idx], params, &adam, &loss));
      train_labels.push_back(ds.instances[idx].label);
      train_losses.push_back(loss);
    }
    auto [val_loss, val_acc] =
        detail::evaluate_split(ds, ds.train_end, ds.val_end, params);

    result.metrics.push_back({{"epoch", epoch},
                              {"split", "train"},
                              {"loss", mean(train_losses)},
                              {"acc", accuracy(train_logits, train_labels)},
                              {"lr", adam.lr()}});
    result.metrics.push_back({{"epoch", epoch},
                              {"split", "val"},
                              {"loss", val_loss},
                              {"acc", val_acc},
                              {"lr", adam.lr()}});

    if (val_loss < result.best_val_loss - 1e-12) {
      result.best_val_loss = val_loss;
      result.best.params = params;
      stall = 0;
    } else if (++stall >= train_cfg.lr_halving_patience) {
      adam.set_lr(adam.lr() * 0.5);
      stall = 0;
    }
  }

  auto [test_loss, test_acc] = detail::evaluate_split(
      ds, ds.val_end, ds.instances.size(), result.best.params);
  result.test_accuracy = test_acc;
  result.metrics.push_back({{"epoch", train_cfg.epochs},
                            {"split", "test"},
                            {"loss", test_loss},
                            {"acc", test_acc},
                            {"lr", adam.lr()}});
  return result;
}

}  // namespace ctan::harness
