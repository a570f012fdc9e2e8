#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "ctan/model/config.hpp"
#include "ctan/num/tape.hpp"
#include "ctan/rng.hpp"

namespace ctan::model {

enum class ReadoutKind { Sequence, Link };

inline std::string to_string(ReadoutKind k) {
  return k == ReadoutKind::Sequence ? "sequence" : "link";
}

inline ReadoutKind readout_from_string(const std::string& s) {
  if (s == "sequence") return ReadoutKind::Sequence;
  if (s == "link") return ReadoutKind::Link;
  throw ParseError("unknown readout kind '" + s + "'");
}

/// All learnable tensors. One shared copy serves every Euler step (weight
/// sharing across layers); the anti-symmetrization of W happens at use,
/// never in storage.
struct CtanParams {
  CtanConfig cfg;
  ReadoutKind readout = ReadoutKind::Sequence;

  num::Tensor W;         // d x d, raw
  num::Tensor b;         // d
  num::Tensor Vn, Vk, Vq;  // d x d
  num::Tensor Ve;        // d x (d_e + time_dim)
  num::Tensor Vt_w;      // time_dim x 1
  num::Tensor Vt_b;      // time_dim
  num::Tensor Psi_proj;  // d x (d + d_n), Concat/TanhConcat only
  num::Tensor R1_w;      // d x d (sequence) or d x 2d (link)
  num::Tensor R1_b;      // d
  num::Tensor R2_w;      // d
  num::Tensor R2_b;      // scalar

  static CtanParams init(const CtanConfig& cfg, ReadoutKind readout,
                         Rng& rng) {
    cfg.validate();
    CtanParams p;
    p.cfg = cfg;
    p.readout = readout;
    const std::int64_t d = cfg.d;
    auto glorot = [&rng](std::vector<std::int64_t> shape) {
      num::Tensor t(shape);
      const double fan_in = static_cast<double>(shape.back());
      const double fan_out = static_cast<double>(shape.front());
      const double s = std::sqrt(6.0 / (fan_in + fan_out));
      for (std::int64_t i = 0; i < t.numel(); ++i) t[i] = rng.uniform(-s, s);
      return t;
    };
    p.W = glorot({d, d});
    p.b = num::Tensor::zeros({d});
    p.Vn = glorot({d, d});
    p.Vk = glorot({d, d});
    p.Vq = glorot({d, d});
    p.Ve = glorot({d, cfg.edge_feat_dim + cfg.time_dim});
    p.Vt_w = glorot({cfg.time_dim, 1});
    p.Vt_b = num::Tensor::zeros({cfg.time_dim});
    if (cfg.psi != PsiKind::Addition)
      p.Psi_proj = glorot({d, d + cfg.node_feat_dim});
    const std::int64_t r_in = readout == ReadoutKind::Link ? 2 * d : d;
    p.R1_w = glorot({d, r_in});
    p.R1_b = num::Tensor::zeros({d});
    // zero output layer: a freshly initialized model emits logit 0, i.e.
    // probability one half, for every input
    p.R2_w = num::Tensor::zeros({d});
    p.R2_b = num::Tensor::scalar(0.0);
    return p;
  }

  std::vector<std::pair<std::string, num::Tensor*>> named() {
    std::vector<std::pair<std::string, num::Tensor*>> out = {
        {"W", &W},       {"b", &b},       {"Vn", &Vn},   {"Vk", &Vk},
        {"Vq", &Vq},     {"Ve", &Ve},     {"Vt_w", &Vt_w}, {"Vt_b", &Vt_b},
        {"R1_w", &R1_w}, {"R1_b", &R1_b}, {"R2_w", &R2_w}, {"R2_b", &R2_b}};
    if (cfg.psi != PsiKind::Addition) out.insert(out.begin() + 8, {"Psi_proj", &Psi_proj});
    return out;
  }

  std::vector<std::pair<std::string, const num::Tensor*>> named() const {
    auto mut = const_cast<CtanParams*>(this)->named();
    std::vector<std::pair<std::string, const num::Tensor*>> out;
    out.reserve(mut.size());
    for (auto& [n, t] : mut) out.emplace_back(n, t);
    return out;
  }

  std::int64_t count() const {
    std::int64_t n = 0;
    for (const auto& [name, t] : named()) n += t->numel();
    return n;
  }
};

/// Leaves for one tape; created once per forward pass so that every Euler
/// step reads the very same parameter nodes.
struct ParamValues {
  num::Value W, b, Vn, Vk, Vq, Ve, Vt_w, Vt_b, Psi_proj, R1_w, R1_b, R2_w,
      R2_b;
  const CtanConfig* cfg = nullptr;
};

inline ParamValues bind_params(num::Tape& tape, const CtanParams& p) {
  ParamValues v;
  v.cfg = &p.cfg;
  v.W = tape.leaf(p.W);
  v.b = tape.leaf(p.b);
  v.Vn = tape.leaf(p.Vn);
  v.Vk = tape.leaf(p.Vk);
  v.Vq = tape.leaf(p.Vq);
  v.Ve = tape.leaf(p.Ve);
  v.Vt_w = tape.leaf(p.Vt_w);
  v.Vt_b = tape.leaf(p.Vt_b);
  if (p.cfg.psi != PsiKind::Addition) v.Psi_proj = tape.leaf(p.Psi_proj);
  v.R1_w = tape.leaf(p.R1_w);
  v.R1_b = tape.leaf(p.R1_b);
  v.R2_w = tape.leaf(p.R2_w);
  v.R2_b = tape.leaf(p.R2_b);
  return v;
}

/// Gradients aligned with params.named() order after tape.backward().
inline std::vector<num::Tensor> collect_grads(const num::Tape& tape,
                                              const ParamValues& v,
                                              const CtanParams& p) {
  std::vector<num::Tensor> out;
  out.push_back(tape.grad(v.W));
  out.push_back(tape.grad(v.b));
  out.push_back(tape.grad(v.Vn));
  out.push_back(tape.grad(v.Vk));
  out.push_back(tape.grad(v.Vq));
  out.push_back(tape.grad(v.Ve));
  out.push_back(tape.grad(v.Vt_w));
  out.push_back(tape.grad(v.Vt_b));
  if (p.cfg.psi != PsiKind::Addition) out.push_back(tape.grad(v.Psi_proj));
  out.push_back(tape.grad(v.R1_w));
  out.push_back(tape.grad(v.R1_b));
  out.push_back(tape.grad(v.R2_w));
  out.push_back(tape.grad(v.R2_b));
  return out;
}

}  // namespace ctan::model
