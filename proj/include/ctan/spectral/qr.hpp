#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "ctan/num/tensor.hpp"

namespace ctan::spectral {

namespace detail {

/// In-place Householder reduction to upper Hessenberg form.
inline void hessenberg(num::Tensor& a) {
  const std::int64_t n = a.rows();
  std::vector<double> v(static_cast<std::size_t>(n));
  for (std::int64_t k = 0; k + 2 < n; ++k) {
    double norm2 = 0.0;
    for (std::int64_t i = k + 1; i < n; ++i) norm2 += a.at(i, k) * a.at(i, k);
    const double norm = std::sqrt(norm2);
    if (norm == 0.0) continue;
    const double alpha = a.at(k + 1, k) >= 0.0 ? -norm : norm;
    double vtv = 0.0;
    for (std::int64_t i = k + 1; i < n; ++i) {
      v[static_cast<std::size_t>(i)] = a.at(i, k);
      if (i == k + 1) v[static_cast<std::size_t>(i)] -= alpha;
      vtv += v[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(i)];
    }
    if (vtv == 0.0) continue;
    const double beta = 2.0 / vtv;
    // rows: A <- (I - beta v v^T) A
    for (std::int64_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::int64_t i = k + 1; i < n; ++i)
        s += v[static_cast<std::size_t>(i)] * a.at(i, j);
      s *= beta;
      for (std::int64_t i = k + 1; i < n; ++i)
        a.at(i, j) -= s * v[static_cast<std::size_t>(i)];
    }
    // cols: A <- A (I - beta v v^T)
    for (std::int64_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::int64_t j = k + 1; j < n; ++j)
        s += a.at(i, j) * v[static_cast<std::size_t>(j)];
      s *= beta;
      for (std::int64_t j = k + 1; j < n; ++j)
        a.at(i, j) -= s * v[static_cast<std::size_t>(j)];
    }
  }
}

inline double sign_of(double a, double b) { return b >= 0.0 ? std::abs(a) : -std::abs(a); }

}  // namespace detail

/// Francis double-shift QR eigenvalue reference for small dense real
/// matrices. This is the classical Hessenberg-QR iteration with deflation
/// and exceptional shifts; it serves as the independent cross-check route
/// next to the structure-exploiting solvers.
inline std::vector<std::complex<double>> eigvals_qr(num::Tensor a) {
  if (a.rank() != 2 || a.rows() != a.cols())
    throw ContractError("eigvals_qr: matrix must be square");
  const std::int64_t n = a.rows();
  if (n == 0) return {};
  if (n == 1) return {std::complex<double>(a.at(0, 0), 0.0)};
  detail::hessenberg(a);

  const double eps = 2.220446049250313e-16;
  double anorm = 0.0;
  for (std::int64_t i = 0; i < n; ++i)
    for (std::int64_t j = std::max<std::int64_t>(i - 1, 0); j < n; ++j)
      anorm += std::abs(a.at(i, j));

  std::vector<std::complex<double>> eig(static_cast<std::size_t>(n));
  std::int64_t nn = n - 1;
  double t = 0.0;
  while (nn >= 0) {
    int its = 0;
    std::int64_t l;
    do {
      for (l = nn; l >= 1; --l) {
        double s = std::abs(a.at(l - 1, l - 1)) + std::abs(a.at(l, l));
        if (s == 0.0) s = anorm;
        if (std::abs(a.at(l, l - 1)) <= eps * s) {
          a.at(l, l - 1) = 0.0;
          break;
        }
      }
      double x = a.at(nn, nn);
      if (l == nn) {
        eig[static_cast<std::size_t>(nn--)] = {x + t, 0.0};
      } else {
        double y = a.at(nn - 1, nn - 1);
        double w = a.at(nn, nn - 1) * a.at(nn - 1, nn);
        if (l == nn - 1) {
          double p = 0.5 * (y - x);
          double q = p * p + w;
          double z = std::sqrt(std::abs(q));
          x += t;
          if (q >= 0.0) {
            z = p + detail::sign_of(z, p);
            eig[static_cast<std::size_t>(nn - 1)] = {x + z, 0.0};
            eig[static_cast<std::size_t>(nn)] = {z != 0.0 ? x - w / z : x + z,
                                                 0.0};
          } else {
            eig[static_cast<std::size_t>(nn - 1)] = {x + p, z};
            eig[static_cast<std::size_t>(nn)] = {x + p, -z};
          }
          nn -= 2;
        } else {
          if (its == 60) throw NumericError("eigvals_qr: too many iterations");
          if (its == 10 || its == 20 || its == 30 || its == 40 || its == 50) {
            t += x;
            for (std::int64_t i = 0; i <= nn; ++i) a.at(i, i) -= x;
            double s = std::abs(a.at(nn, nn - 1)) + std::abs(a.at(nn - 1, nn - 2));
            y = x = 0.75 * s;
            w = -0.4375 * s * s;
          }
          ++its;
          std::int64_t m;
          double p = 0.0, q = 0.0, r = 0.0, z = 0.0;
          for (m = nn - 2; m >= l; --m) {
            z = a.at(m, m);
            const double rr = x - z;
            const double ss = y - z;
            p = (rr * ss - w) / a.at(m + 1, m) + a.at(m, m + 1);
            q = a.at(m + 1, m + 1) - z - rr - ss;
            r = a.at(m + 2, m + 1);
            const double scale = std::abs(p) + std::abs(q) + std::abs(r);
            p /= scale;
            q /= scale;
            r /= scale;
            if (m == l) break;
            const double u = std::abs(a.at(m, m - 1)) * (std::abs(q) + std::abs(r));
            const double v = std::abs(p) * (std::abs(a.at(m - 1, m - 1)) +
                                            std::abs(z) + std::abs(a.at(m + 1, m + 1)));
            if (u <= eps * v) break;
          }
          for (std::int64_t i = m + 2; i <= nn; ++i) {
            a.at(i, i - 2) = 0.0;
            if (i != m + 2) a.at(i, i - 3) = 0.0;
          }
          for (std::int64_t k = m; k <= nn - 1; ++k) {
            if (k != m) {
              p = a.at(k, k - 1);
              q = a.at(k + 1, k - 1);
              r = k != nn - 1 ? a.at(k + 2, k - 1) : 0.0;
              x = std::abs(p) + std::abs(q) + std::abs(r);
              if (x != 0.0) {
                p /= x;
                q /= x;
                r /= x;
              }
            }
            double s = detail::sign_of(std::sqrt(p * p + q * q + r * r), p);
            if (s == 0.0) continue;
            if (k == m) {
              if (l != m) a.at(k, k - 1) = -a.at(k, k - 1);
            } else {
              a.at(k, k - 1) = -s * x;
            }
            p += s;
            x = p / s;
            y = q / s;
            z = r / s;
            q /= p;
            r /= p;
            for (std::int64_t j = k; j <= nn; ++j) {
              double pp = a.at(k, j) + q * a.at(k + 1, j);
              if (k != nn - 1) {
                pp += r * a.at(k + 2, j);
                a.at(k + 2, j) -= pp * z;
              }
              a.at(k + 1, j) -= pp * y;
              a.at(k, j) -= pp * x;
            }
            const std::int64_t mmin = std::min(nn, k + 3);
            for (std::int64_t i = l; i <= mmin; ++i) {
              double pp = x * a.at(i, k) + y * a.at(i, k + 1);
              if (k != nn - 1) {
                pp += z * a.at(i, k + 2);
                a.at(i, k + 2) -= pp * r;
              }
              a.at(i, k + 1) -= pp * q;
              a.at(i, k) -= pp;
            }
          }
        }
      }
    } while (l < nn - 1);
  }
  return eig;
}

}  // namespace ctan::spectral
