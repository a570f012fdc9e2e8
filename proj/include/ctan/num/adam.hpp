#pragma once

#include <cmath>
#include <vector>

#include "ctan/num/tensor.hpp"

namespace ctan::num {

struct AdamConfig {
  double lr = 3e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double weight_decay = 0.0;  // decoupled, applied directly to the weights
};

/// Adam with bias correction and optional decoupled weight decay. One state
/// object owns the moments for a fixed parameter list.
class Adam {
 public:
  Adam(AdamConfig cfg, const std::vector<Tensor*>& params) : cfg_(cfg) {
    for (Tensor* p : params) {
      m_.emplace_back(Tensor::zeros(p->shape()));
      v_.emplace_back(Tensor::zeros(p->shape()));
    }
  }

  std::int64_t step_count() const { return step_; }
  double lr() const { return cfg_.lr; }
  void set_lr(double lr) { cfg_.lr = lr; }

  /// In-place update. Refuses the whole step if any gradient entry is not
  /// finite, leaving parameters and moments untouched.
  void step(const std::vector<Tensor*>& params,
            const std::vector<Tensor>& grads) {
    if (params.size() != m_.size() || grads.size() != m_.size())
      throw ContractError("adam: parameter/gradient count mismatch");
    for (std::size_t k = 0; k < params.size(); ++k) {
      if (!params[k]->same_shape(grads[k]))
        throw DimensionError("adam: gradient shape mismatch for parameter " +
                             std::to_string(k));
      if (!grads[k].all_finite())
        throw NumericError("adam: non-finite gradient in parameter " +
                           std::to_string(k) + ", update refused");
    }
    ++step_;
    const double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(step_));
    const double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(step_));
    for (std::size_t k = 0; k < params.size(); ++k) {
      Tensor& p = *params[k];
      const Tensor& g = grads[k];
      Tensor& m = m_[k];
      Tensor& v = v_[k];
      for (std::int64_t i = 0; i < p.numel(); ++i) {
        m[i] = cfg_.beta1 * m[i] + (1.0 - cfg_.beta1) * g[i];
        v[i] = cfg_.beta2 * v[i] + (1.0 - cfg_.beta2) * g[i] * g[i];
        const double mhat = m[i] / bc1;
        const double vhat = v[i] / bc2;
        p[i] -= cfg_.lr * mhat / (std::sqrt(vhat) + cfg_.eps);
        if (cfg_.weight_decay != 0.0) p[i] -= cfg_.lr * cfg_.weight_decay * p[i];
      }
    }
  }

 private:
  AdamConfig cfg_;
  std::int64_t step_ = 0;
  std::vector<Tensor> m_, v_;
};

}  // namespace ctan::num
