#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "ctan/num/tensor.hpp"

namespace ctan::spectral {

/// Eigenvalues of a symmetric matrix by the cyclic Jacobi rotation method.
/// Deterministic sweep order (p = 0..d-2, q = p+1..d-1). Convergence is an
/// off-diagonal Frobenius norm below 1e-12 on the unit-Frobenius-normalized
/// matrix; 100 sweeps is far more than the quadratic convergence needs.
/// Returns eigenvalues sorted ascending.
inline std::vector<double> jacobi_eigenvalues(const num::Tensor& sym,
                                              double tol = 1e-12,
                                              int max_sweeps = 100) {
  if (sym.rank() != 2 || sym.rows() != sym.cols())
    throw ContractError("jacobi: matrix must be square");
  const std::int64_t d = sym.rows();
  for (std::int64_t i = 0; i < d; ++i)
    for (std::int64_t j = i + 1; j < d; ++j)
      if (std::abs(sym.at(i, j) - sym.at(j, i)) >
          1e-12 * std::max(1.0, std::abs(sym.at(i, j))))
        throw ContractError("jacobi: matrix is not symmetric");

  double fro = 0.0;
  for (std::int64_t i = 0; i < d * d; ++i) fro += sym[i] * sym[i];
  fro = std::sqrt(fro);
  const double scale = fro > 0.0 ? fro : 1.0;

  num::Tensor a({d, d});
  for (std::int64_t i = 0; i < d * d; ++i) a[i] = sym[i] / scale;

  auto off_fro = [&] {
    double s = 0.0;
    for (std::int64_t i = 0; i < d; ++i)
      for (std::int64_t j = 0; j < d; ++j)
        if (i != j) s += a.at(i, j) * a.at(i, j);
    return std::sqrt(s);
  };

  int sweep = 0;
  while (off_fro() > tol) {
    if (++sweep > max_sweeps)
      throw NumericError("jacobi: no convergence after " +
                         std::to_string(max_sweeps) + " sweeps");
    for (std::int64_t p = 0; p < d - 1; ++p)
      for (std::int64_t q = p + 1; q < d; ++q) {
        const double apq = a.at(p, q);
        if (apq == 0.0) continue;
        const double theta = (a.at(q, q) - a.at(p, p)) / (2.0 * apq);
        const double t =
            (theta >= 0.0 ? 1.0 : -1.0) /
            (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const double tau = s / (1.0 + c);
        const double app = a.at(p, p), aqq = a.at(q, q);
        a.at(p, p) = app - t * apq;
        a.at(q, q) = aqq + t * apq;
        a.at(p, q) = 0.0;
        a.at(q, p) = 0.0;
        for (std::int64_t r = 0; r < d; ++r) {
          if (r == p || r == q) continue;
          const double arp = a.at(r, p), arq = a.at(r, q);
          a.at(r, p) = arp - s * (arq + tau * arp);
          a.at(p, r) = a.at(r, p);
          a.at(r, q) = arq + s * (arp - tau * arq);
          a.at(q, r) = a.at(r, q);
        }
      }
  }

  std::vector<double> eig(static_cast<std::size_t>(d));
  for (std::int64_t i = 0; i < d; ++i)
    eig[static_cast<std::size_t>(i)] = a.at(i, i) * scale;
  std::sort(eig.begin(), eig.end());
  return eig;
}

}  // namespace ctan::spectral
