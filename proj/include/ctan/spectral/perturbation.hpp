#pragma once

#include <cmath>
#include <vector>

#include "ctan/num/tensor.hpp"

namespace ctan::spectral {

/// Evolves a state perturbation through the linearized Euler layer
/// delta <- (I + eps*(A - gamma I)) delta  (sigma = identity, Phi = 0)
/// and returns ||delta||_2 for steps 0..steps.
inline std::vector<double> perturbation_growth(const num::Tensor& antisym,
                                               double gamma, double eps,
                                               int steps,
                                               const std::vector<double>& delta0) {
  const std::int64_t d = antisym.rows();
  if (antisym.rank() != 2 || antisym.cols() != d)
    throw ContractError("perturbation_growth: matrix must be square");
  if (static_cast<std::int64_t>(delta0.size()) != d)
    throw ContractError("perturbation_growth: perturbation size mismatch");

  auto norm2 = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
  };

  std::vector<double> delta = delta0;
  std::vector<double> trace;
  trace.reserve(static_cast<std::size_t>(steps) + 1);
  trace.push_back(norm2(delta));
  std::vector<double> next(static_cast<std::size_t>(d));
  for (int step = 0; step < steps; ++step) {
    for (std::int64_t i = 0; i < d; ++i) {
      double acc = 0.0;
      for (std::int64_t j = 0; j < d; ++j)
        acc += antisym.at(i, j) * delta[static_cast<std::size_t>(j)];
      acc -= gamma * delta[static_cast<std::size_t>(i)];
      next[static_cast<std::size_t>(i)] =
          delta[static_cast<std::size_t>(i)] + eps * acc;
    }
    delta.swap(next);
    trace.push_back(norm2(delta));
  }
  return trace;
}

}  // namespace ctan::spectral
