#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "ctan/jsonutil.hpp"
#include "ctan/model/config.hpp"

namespace ctan::harness {

enum class Task { SequenceCls, LinkPred };
enum class Ablation { None, LargeGamma };

inline std::string to_string(Task t) {
  return t == Task::SequenceCls ? "sequence" : "linkpred";
}
inline std::string to_string(Ablation a) {
  return a == Ablation::None ? "none" : "large_gamma";
}

struct TrainConfig {
  Task task = Task::SequenceCls;
  int epochs = 20;
  int batch_size = 1;
  double lr = 3e-4;
  double weight_decay = 1e-7;
  int lr_halving_patience = 5;   // sequence task scheduler
  int early_stop_patience = 50;  // link prediction early stopping
  std::vector<std::uint64_t> seeds = {1, 2, 3};
  Ablation ablation = Ablation::None;

  void validate() const {
    if (task == Task::SequenceCls && batch_size != 1)
      throw ContractError("train config: sequence task uses batch size 1");
    if (epochs < 1) throw ContractError("train config: epochs must be >= 1");
    if (lr <= 0.0) throw ContractError("train config: lr must be > 0");
    if (seeds.empty()) throw ContractError("train config: need at least one seed");
  }
};

inline nlohmann::json to_json(const TrainConfig& c) {
  return {{"task", to_string(c.task)},
          {"epochs", c.epochs},
          {"batch_size", c.batch_size},
          {"lr", c.lr},
          {"weight_decay", c.weight_decay},
          {"lr_halving_patience", c.lr_halving_patience},
          {"early_stop_patience", c.early_stop_patience},
          {"seeds", c.seeds},
          {"ablation", to_string(c.ablation)}};
}

inline TrainConfig train_config_from_json(const nlohmann::json& j) {
  reject_unknown_keys(j,
                      {"task", "epochs", "batch_size", "lr", "weight_decay",
                       "lr_halving_patience", "early_stop_patience", "seeds",
                       "ablation"},
                      "train config");
  TrainConfig c;
  if (j.contains("task")) {
    const std::string t = j.at("task").get<std::string>();
    if (t == "sequence") c.task = Task::SequenceCls;
    else if (t == "linkpred") c.task = Task::LinkPred;
    else throw ParseError("train config: unknown task '" + t + "'");
  }
  c.epochs = json_get_or<int>(j, "epochs", c.epochs);
  c.batch_size = json_get_or<int>(j, "batch_size", c.batch_size);
  c.lr = json_get_or<double>(j, "lr", c.lr);
  c.weight_decay = json_get_or<double>(j, "weight_decay", c.weight_decay);
  c.lr_halving_patience =
      json_get_or<int>(j, "lr_halving_patience", c.lr_halving_patience);
  c.early_stop_patience =
      json_get_or<int>(j, "early_stop_patience", c.early_stop_patience);
  c.seeds = json_get_or<std::vector<std::uint64_t>>(j, "seeds", c.seeds);
  if (j.contains("ablation")) {
    const std::string a = j.at("ablation").get<std::string>();
    if (a == "none") c.ablation = Ablation::None;
    else if (a == "large_gamma") c.ablation = Ablation::LargeGamma;
    else throw ParseError("train config: unknown ablation '" + a + "'");
  }
  c.validate();
  return c;
}

/// The dissipativeness control: gamma = 5 with eps = 1 drives every
/// eigenvalue real part far negative, so the discretized map contracts
/// state differences instead of preserving them.
inline void apply_ablation(model::CtanConfig& cfg, Ablation a) {
  if (a == Ablation::LargeGamma) {
    cfg.gamma = 5.0;
    cfg.epsilon = 1.0;
  }
}

}  // namespace ctan::harness
