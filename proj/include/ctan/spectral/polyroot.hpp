#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "ctan/num/tensor.hpp"

namespace ctan::spectral {

/// Characteristic polynomial coefficients of a small square matrix by the
/// Faddeev-LeVerrier recurrence. Returns {1, c1, ..., cn} for
/// lambda^n + c1 lambda^{n-1} + ... + cn.
inline std::vector<double> char_poly(const num::Tensor& m) {
  const std::int64_t d = m.rows();
  if (m.rank() != 2 || m.cols() != d)
    throw ContractError("char_poly: matrix must be square");
  std::vector<double> coeff{1.0};
  num::Tensor mk = m;  // M_1 = A
  for (std::int64_t k = 1; k <= d; ++k) {
    double tr = 0.0;
    for (std::int64_t i = 0; i < d; ++i) tr += mk.at(i, i);
    const double ck = -tr / static_cast<double>(k);
    coeff.push_back(ck);
    if (k == d) break;
    // M_{k+1} = A (M_k + c_k I)
    num::Tensor shifted = mk;
    for (std::int64_t i = 0; i < d; ++i) shifted.at(i, i) += ck;
    num::Tensor next({d, d});
    for (std::int64_t i = 0; i < d; ++i)
      for (std::int64_t j = 0; j < d; ++j) {
        double acc = 0.0;
        for (std::int64_t l = 0; l < d; ++l)
          acc += m.at(i, l) * shifted.at(l, j);
        next.at(i, j) = acc;
      }
    mk = std::move(next);
  }
  return coeff;
}

/// All complex roots of a real polynomial by Durand-Kerner iteration.
/// coeff = {1, c1, ..., cn} (monic). Intended for degree <= 8 where the
/// coefficients stay well conditioned.
inline std::vector<std::complex<double>> poly_roots(
    const std::vector<double>& coeff, int max_iter = 2000,
    double tol = 1e-14) {
  const std::size_t n = coeff.size() - 1;
  if (n == 0) return {};
  if (coeff[0] != 1.0) throw ContractError("poly_roots: polynomial not monic");

  auto eval = [&](std::complex<double> z) {
    std::complex<double> acc = coeff[0];
    for (std::size_t i = 1; i <= n; ++i) acc = acc * z + coeff[i];
    return acc;
  };

  double radius = 0.0;
  for (std::size_t i = 1; i <= n; ++i) radius = std::max(radius, std::abs(coeff[i]));
  radius = 1.0 + radius;

  // deterministic non-real starting angles avoid symmetric stalls
  std::vector<std::complex<double>> z(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double ang = 2.0 * M_PI * (static_cast<double>(j) + 0.25) /
                       static_cast<double>(n) + 0.31;
    z[j] = radius * std::complex<double>(std::cos(ang), std::sin(ang));
  }

  for (int it = 0; it < max_iter; ++it) {
    double max_step = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      std::complex<double> denom = 1.0;
      for (std::size_t k = 0; k < n; ++k)
        if (k != j) denom *= (z[j] - z[k]);
      const std::complex<double> step = eval(z[j]) / denom;
      z[j] -= step;
      max_step = std::max(max_step, std::abs(step));
    }
    if (max_step < tol * std::max(1.0, radius)) return z;
  }
  throw NumericError("poly_roots: Durand-Kerner did not converge");
}

/// Eigenvalues of a small (d <= 8) real matrix via its characteristic
/// polynomial. The independent cross-check route for the structured
/// eigensolvers.
inline std::vector<std::complex<double>> eigvals_char_poly(
    const num::Tensor& m) {
  if (m.rows() > 8)
    throw ContractError(
        "eigvals_char_poly: limited to d <= 8, coefficients degrade beyond");
  return poly_roots(char_poly(m));
}

}  // namespace ctan::spectral
