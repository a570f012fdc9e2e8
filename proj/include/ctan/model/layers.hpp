#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "ctan/model/params.hpp"

namespace ctan::model {

/// W - W^T - gamma*I on plain tensors. The differentiable pipeline applies
/// the same matrix through its action on a vector (see antisym_apply), so
/// no transpose primitive is needed on the tape.
inline num::Tensor antisymmetrize(const num::Tensor& w, double gamma) {
  if (w.rank() != 2 || w.rows() != w.cols())
    throw ContractError("antisymmetrize: W must be square");
  const std::int64_t d = w.rows();
  num::Tensor out({d, d});
  for (std::int64_t i = 0; i < d; ++i)
    for (std::int64_t j = 0; j < d; ++j)
      out.at(i, j) = w.at(i, j) - w.at(j, i) - (i == j ? gamma : 0.0);
  return out;
}

/// (W - W^T - gamma*I) h as tape operations: W h - (h^T W)^T - gamma h.
inline num::Value antisym_apply(num::Value w, num::Value h, double gamma) {
  num::Value wh = num::matmul(w, h);
  num::Value wth = num::matmul(h, w);  // rank-1 promotion gives W^T h
  num::Value out = num::sub(wh, wth);
  if (gamma != 0.0) out = num::add(out, num::scale(h, -gamma));
  return out;
}

/// Learned affine embedding of the elapsed time: Vt_w * dt + Vt_b.
/// dt must already be normalized by the dataset's time scale.
inline num::Value time_encode(num::Tape& tape, const ParamValues& pv,
                              double dt) {
  if (dt < 0.0)
    throw ContractError("time_encode: negative elapsed time (causality "
                        "violation upstream)");
  num::Value dtv = tape.constant(num::Tensor({1}, {dt}));
  return num::add(num::matmul(pv.Vt_w, dtv), pv.Vt_b);
}

/// One neighbor's contribution to the aggregation: its current state and
/// the edge representation e_hat = e_uv || time_encode(t - t_v^-).
struct NeighborTerm {
  num::Value h;
  num::Value e_hat;
};

/// Transformer-style aggregation over the temporal neighborhood plus the
/// self entry:
///   Phi = sum_v alpha_uv (Vn h_v + Ve e_hat_uv),
///   alpha = softmax(q^T K_v / sqrt(d_head)),
///   q = Vq h_u, K_v = Vk h_v + Ve e_hat_uv.
/// With heads > 1 the score and the weighted sum run per head slice and the
/// head outputs are concatenated.
inline num::Value attention_aggregate(const ParamValues& pv, num::Value h_u,
                                      std::span<const NeighborTerm> terms) {
  if (terms.empty())
    throw ContractError("attention_aggregate: empty neighbor set");
  const std::int64_t d = pv.cfg->d;
  const std::int64_t heads = pv.cfg->heads;
  const std::int64_t dh = d / heads;
  const double inv_sqrt = 1.0 / std::sqrt(static_cast<double>(dh));

  num::Value q = num::matmul(pv.Vq, h_u);
  std::vector<num::Value> keys, msgs;
  keys.reserve(terms.size());
  msgs.reserve(terms.size());
  for (const NeighborTerm& t : terms) {
    num::Value ve = num::matmul(pv.Ve, t.e_hat);
    keys.push_back(num::add(num::matmul(pv.Vk, t.h), ve));
    msgs.push_back(num::add(num::matmul(pv.Vn, t.h), ve));
  }

  auto head_slice = [&](num::Value v, std::int64_t head) {
    return heads == 1 ? v : num::slice(v, head * dh, dh);
  };

  std::vector<num::Value> head_out;
  head_out.reserve(static_cast<std::size_t>(heads));
  for (std::int64_t head = 0; head < heads; ++head) {
    num::Value qh = head_slice(q, head);
    std::vector<num::Value> scores;
    scores.reserve(terms.size());
    for (std::size_t i = 0; i < terms.size(); ++i)
      scores.push_back(
          num::scale(num::dot(qh, head_slice(keys[i], head)), inv_sqrt));
    num::Value alpha =
        num::softmax_set(num::concat(std::span<const num::Value>(scores)));
    num::Value acc;
    for (std::size_t i = 0; i < terms.size(); ++i) {
      num::Value term = num::mul(head_slice(msgs[i], head),
                                 num::slice(alpha, static_cast<std::int64_t>(i), 1));
      acc = i == 0 ? term : num::add(acc, term);
    }
    head_out.push_back(acc);
  }
  return heads == 1 ? head_out[0]
                    : num::concat(std::span<const num::Value>(head_out));
}

/// Initial condition for an event's propagation.
inline num::Value psi_apply(num::Tape& tape, const ParamValues& pv,
                            num::Value h_prev, num::Value x) {
  const CtanConfig& cfg = *pv.cfg;
  switch (cfg.psi) {
    case PsiKind::Addition: {
      if (cfg.node_feat_dim > cfg.d)
        throw ContractError("psi addition: node_feat_dim > d");
      if (cfg.node_feat_dim == 0) return h_prev;
      num::Value padded =
          cfg.node_feat_dim == cfg.d
              ? x
              : num::concat({x, tape.constant(num::Tensor::zeros(
                                    {cfg.d - cfg.node_feat_dim}))});
      return num::add(h_prev, padded);
    }
    case PsiKind::Concat:
      return num::matmul(pv.Psi_proj, num::concat({h_prev, x}));
    case PsiKind::TanhConcat:
      return num::matmul(pv.Psi_proj, num::tanh(num::concat({h_prev, x})));
  }
  throw ContractError("psi_apply: bad kind");
}

/// One forward-Euler step with the shared anti-symmetrized weight:
///   h <- h + eps * tanh((W - W^T - gamma I) h + Phi + b)
inline num::Value euler_layer(const ParamValues& pv, num::Value h_prev,
                              num::Value phi) {
  const CtanConfig& cfg = *pv.cfg;
  num::Value pre = num::add(num::add(antisym_apply(pv.W, h_prev, cfg.gamma), phi),
                            pv.b);
  return num::add(h_prev, num::scale(num::tanh(pre), cfg.epsilon));
}

/// Sequence-task readout: MLP d -> d -> 1 with tanh hidden activation,
/// producing the logit for the positive class.
inline num::Value readout_sequence(const ParamValues& pv, num::Value h) {
  num::Value hidden = num::tanh(num::add(num::matmul(pv.R1_w, h), pv.R1_b));
  return num::add(num::dot(pv.R2_w, hidden), pv.R2_b);
}

/// Link readout: MLP on the concatenated pair, 2d -> d -> 1.
inline num::Value readout_link(const ParamValues& pv, num::Value h_src,
                               num::Value h_dst) {
  num::Value hidden = num::tanh(
      num::add(num::matmul(pv.R1_w, num::concat({h_src, h_dst})), pv.R1_b));
  return num::add(num::dot(pv.R2_w, hidden), pv.R2_b);
}

}  // namespace ctan::model
