#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "ctan/spectral/jacobi.hpp"
#include "ctan/spectral/polyroot.hpp"

namespace ctan::spectral {

enum class SpectrumMethod { AntisymSquare, SimilarityReduce, CharPoly };

/// Eigenvalue set of a d x d matrix, with multiplicity.
struct Spectrum {
  std::vector<std::complex<double>> eigenvalues;
  std::int64_t matrix_dim = 0;
  SpectrumMethod method = SpectrumMethod::AntisymSquare;

  double max_abs_real() const {
    double m = 0.0;
    for (const auto& z : eigenvalues) m = std::max(m, std::abs(z.real()));
    return m;
  }

  double max_abs_imag() const {
    double m = 0.0;
    for (const auto& z : eigenvalues) m = std::max(m, std::abs(z.imag()));
    return m;
  }

  /// Worst distance from any eigenvalue to the conjugate of its best
  /// matching partner; zero for a spectrum closed under conjugation.
  double conjugate_pairing_defect() const {
    double worst = 0.0;
    for (const auto& z : eigenvalues) {
      double best = 1e300;
      for (const auto& w : eigenvalues)
        best = std::min(best, std::abs(w - std::conj(z)));
      worst = std::max(worst, best);
    }
    return worst;
  }
};

namespace detail {

inline void require_antisymmetric(const num::Tensor& a, double tol = 1e-12) {
  if (a.rank() != 2 || a.rows() != a.cols())
    throw ContractError("antisym_eigvals: matrix must be square");
  double worst = 0.0;
  for (std::int64_t i = 0; i < a.rows(); ++i)
    for (std::int64_t j = 0; j < a.cols(); ++j)
      worst = std::max(worst, std::abs(a.at(i, j) + a.at(j, i)));
  if (worst >= tol)
    throw ContractError("antisym_eigvals: ||A + A^T||_inf = " +
                        std::to_string(worst) + " exceeds tolerance");
}

}  // namespace detail

/// Spectrum of an anti-symmetric matrix through its square: A^2 is
/// symmetric negative semidefinite with eigenvalues -b^2, each appearing
/// twice per conjugate pair +-ib (plus a lone zero for odd d). The pairing
/// is rebuilt explicitly, so the returned spectrum is closed under
/// conjugation by construction.
inline Spectrum antisym_eigvals(const num::Tensor& a) {
  detail::require_antisymmetric(a);
  const std::int64_t d = a.rows();
  num::Tensor sq({d, d});
  for (std::int64_t i = 0; i < d; ++i)
    for (std::int64_t j = 0; j < d; ++j) {
      double acc = 0.0;
      for (std::int64_t l = 0; l < d; ++l) acc += a.at(i, l) * a.at(l, j);
      sq.at(i, j) = acc;
    }
  // enforce exact symmetry of the square before the Jacobi sweep
  for (std::int64_t i = 0; i < d; ++i)
    for (std::int64_t j = i + 1; j < d; ++j) {
      const double m = 0.5 * (sq.at(i, j) + sq.at(j, i));
      sq.at(i, j) = m;
      sq.at(j, i) = m;
    }
  std::vector<double> mu = jacobi_eigenvalues(sq);

  std::vector<double> b(mu.size());
  for (std::size_t i = 0; i < mu.size(); ++i)
    b[i] = std::sqrt(std::max(0.0, -mu[i]));
  std::sort(b.begin(), b.end(), std::greater<>());

  Spectrum s;
  s.matrix_dim = d;
  s.method = SpectrumMethod::AntisymSquare;
  std::size_t i = 0;
  while (i + 1 < b.size()) {
    const double mag = 0.5 * (b[i] + b[i + 1]);
    s.eigenvalues.push_back({0.0, mag});
    s.eigenvalues.push_back({0.0, -mag});
    i += 2;
  }
  if (i < b.size()) s.eigenvalues.push_back({0.0, 0.0});  // odd d
  return s;
}

/// Diagonal of sigma' pre-activation derivatives times a shifted
/// anti-symmetric matrix: the Jacobian shape certified by the theory.
struct JacobianSpec {
  std::vector<double> diag;  // positive entries, (0, 1] for tanh
  num::Tensor antisym;       // W - W^T part
  double gamma = 0.0;
};

/// Result of jacobian_spectrum. Exact eigenvalues are available whenever a
/// structure-preserving route exists (gamma = 0, or D = I, or d <= 8 via
/// the characteristic polynomial); the Bendixson rectangle from the
/// symmetric and anti-symmetric parts is always filled in.
struct JacobianSpectrum {
  Spectrum spectrum;
  bool exact = false;
  double re_lo = 0.0, re_hi = 0.0;  // [-gamma*max(D), -gamma*min(D)]
  double im_bound = 0.0;            // spectral radius of the antisym part
};

/// Eigenvalues of diag(D) * (A - gamma I) for anti-symmetric A. Uses the
/// similarity D^{1/2} (A - gamma I) D^{1/2}, whose anti-symmetric part is
/// handled by antisym_eigvals and whose symmetric part is -gamma*D.
inline JacobianSpectrum jacobian_spectrum(const JacobianSpec& spec) {
  const num::Tensor& a = spec.antisym;
  detail::require_antisymmetric(a);
  const std::int64_t d = a.rows();
  if (static_cast<std::int64_t>(spec.diag.size()) != d)
    throw ContractError("jacobian_spectrum: diagonal size mismatch");
  double dmin = 1e300, dmax = 0.0;
  for (double v : spec.diag) {
    if (v <= 0.0)
      throw ContractError("jacobian_spectrum: diagonal entries must be positive");
    dmin = std::min(dmin, v);
    dmax = std::max(dmax, v);
  }

  // S = D^{1/2} A D^{1/2}: exactly anti-symmetric in floating point
  num::Tensor s({d, d});
  for (std::int64_t i = 0; i < d; ++i)
    for (std::int64_t j = 0; j < d; ++j)
      s.at(i, j) = std::sqrt(spec.diag[static_cast<std::size_t>(i)]) *
                   a.at(i, j) *
                   std::sqrt(spec.diag[static_cast<std::size_t>(j)]);

  JacobianSpectrum out;
  Spectrum anti = antisym_eigvals(s);
  out.im_bound = anti.max_abs_imag();
  out.re_lo = -spec.gamma * dmax;
  out.re_hi = -spec.gamma * dmin;

  bool identity_diag = true;
  for (double v : spec.diag) identity_diag = identity_diag && v == 1.0;

  if (spec.gamma == 0.0) {
    out.spectrum = std::move(anti);
    out.spectrum.method = SpectrumMethod::SimilarityReduce;
    out.spectrum.matrix_dim = d;
    out.exact = true;
  } else if (identity_diag) {
    // spectrum of A - gamma I is the anti-symmetric spectrum shifted left
    Spectrum base = antisym_eigvals(a);
    for (auto& z : base.eigenvalues) z -= spec.gamma;
    base.method = SpectrumMethod::SimilarityReduce;
    out.spectrum = std::move(base);
    out.exact = true;
  } else if (d <= 8) {
    num::Tensor m({d, d});
    for (std::int64_t i = 0; i < d; ++i)
      for (std::int64_t j = 0; j < d; ++j)
        m.at(i, j) = spec.diag[static_cast<std::size_t>(i)] *
                     (a.at(i, j) - (i == j ? spec.gamma : 0.0));
    out.spectrum.eigenvalues = eigvals_char_poly(m);
    out.spectrum.matrix_dim = d;
    out.spectrum.method = SpectrumMethod::CharPoly;
    out.exact = true;
  } else {
    out.spectrum.matrix_dim = d;
    out.exact = false;  // only the Bendixson rectangle is certified
  }
  return out;
}

/// Forward-Euler amplification factor |1 + eps*lambda|.
inline double euler_amplification(std::complex<double> lambda, double eps) {
  if (eps <= 0.0) throw ContractError("euler_amplification: eps must be > 0");
  return std::abs(1.0 + eps * lambda);
}

/// Squared amplification margin on the imaginary axis:
/// |1 + i*eps*b|^2 - 1 = (eps*b)^2, which stays strictly positive in f64
/// for every nonzero b even where the amplification itself rounds to 1.
inline double euler_instability_margin(double b, double eps) {
  if (eps <= 0.0) throw ContractError("euler_instability_margin: eps must be > 0");
  return (eps * b) * (eps * b);
}

}  // namespace ctan::spectral
