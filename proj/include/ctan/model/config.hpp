#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "ctan/common.hpp"
#include "ctan/jsonutil.hpp"

namespace ctan::model {

/// Initial-condition function combining the stored state with the node's
/// input features at event arrival.
enum class PsiKind { Addition, Concat, TanhConcat };

inline std::string to_string(PsiKind k) {
  switch (k) {
    case PsiKind::Addition: return "addition";
    case PsiKind::Concat: return "concat";
    case PsiKind::TanhConcat: return "tanh_concat";
  }
  throw ContractError("bad psi kind");
}

inline PsiKind psi_from_string(const std::string& s) {
  if (s == "addition") return PsiKind::Addition;
  if (s == "concat") return PsiKind::Concat;
  if (s == "tanh_concat") return PsiKind::TanhConcat;
  throw ParseError("unknown psi kind '" + s + "'");
}

struct CtanConfig {
  std::int64_t d = 32;             // state dimension
  std::int64_t node_feat_dim = 0;  // d_n
  std::int64_t edge_feat_dim = 0;  // d_e
  std::int64_t layers = 1;         // L, forward-Euler steps
  double epsilon = 1.0;            // step size
  double gamma = 0.1;              // diffusion shift
  PsiKind psi = PsiKind::TanhConcat;
  std::int64_t time_dim = 1;
  std::int64_t heads = 1;
  std::int64_t sampler_k = 5;
  bool uniform_sampler = false;  // default is most-recent-k

  double terminal_time() const { return epsilon * static_cast<double>(layers); }

  void validate() const {
    if (d < 1) throw ContractError("config: d must be >= 1");
    if (epsilon <= 0.0) throw ContractError("config: epsilon must be > 0");
    if (gamma < 0.0) throw ContractError("config: gamma must be >= 0");
    if (layers < 1) throw ContractError("config: layers must be >= 1");
    if (heads < 1 || d % heads != 0)
      throw ContractError("config: d must be divisible by heads");
    if (time_dim < 1) throw ContractError("config: time_dim must be >= 1");
    if (sampler_k < 0) throw ContractError("config: sampler_k must be >= 0");
    if (psi == PsiKind::Addition && node_feat_dim > d)
      throw ContractError("config: addition psi needs node_feat_dim <= d");
    if (node_feat_dim < 0 || edge_feat_dim < 0)
      throw ContractError("config: negative feature dims");
  }
};

inline nlohmann::json to_json(const CtanConfig& c) {
  return {{"d", c.d},
          {"node_feat_dim", c.node_feat_dim},
          {"edge_feat_dim", c.edge_feat_dim},
          {"layers", c.layers},
          {"epsilon", c.epsilon},
          {"gamma", c.gamma},
          {"psi", to_string(c.psi)},
          {"time_dim", c.time_dim},
          {"heads", c.heads},
          {"sampler_k", c.sampler_k},
          {"uniform_sampler", c.uniform_sampler}};
}

inline CtanConfig config_from_json(const nlohmann::json& j) {
  reject_unknown_keys(j,
                      {"d", "node_feat_dim", "edge_feat_dim", "layers",
                       "epsilon", "gamma", "psi", "time_dim", "heads",
                       "sampler_k", "uniform_sampler"},
                      "model config");
  CtanConfig c;
  c.d = json_get_or<std::int64_t>(j, "d", c.d);
  c.node_feat_dim = json_get_or<std::int64_t>(j, "node_feat_dim", c.node_feat_dim);
  c.edge_feat_dim = json_get_or<std::int64_t>(j, "edge_feat_dim", c.edge_feat_dim);
  c.layers = json_get_or<std::int64_t>(j, "layers", c.layers);
  c.epsilon = json_get_or<double>(j, "epsilon", c.epsilon);
  c.gamma = json_get_or<double>(j, "gamma", c.gamma);
  if (j.contains("psi")) c.psi = psi_from_string(j.at("psi").get<std::string>());
  c.time_dim = json_get_or<std::int64_t>(j, "time_dim", c.time_dim);
  c.heads = json_get_or<std::int64_t>(j, "heads", c.heads);
  c.sampler_k = json_get_or<std::int64_t>(j, "sampler_k", c.sampler_k);
  c.uniform_sampler = json_get_or<bool>(j, "uniform_sampler", c.uniform_sampler);
  c.validate();
  return c;
}

}  // namespace ctan::model
