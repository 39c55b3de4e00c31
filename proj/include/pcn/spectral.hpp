#pragma once

#include <Eigen/Dense>
#include <memory>
#include <stdexcept>

// Spectral-space arithmetic for fields on [0,1] with homogeneous Dirichlet
// boundary. A field is stored as its coefficients x_j against the orthonormal
// sine basis phi_j(s) = sqrt(2) sin(j*pi*s), j = 1..N. All operators used here
// (the covariance and its powers, Sobolev weightings) are diagonal in that
// basis, so fields are plain dense coefficient arrays.

namespace pcn {

using Array = Eigen::ArrayXd;

inline void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

// (1^p, 2^p, ..., n^p)
Array mode_powers(int n, double p);

// H^r norm of a coefficient vector: ( sum_j j^{2r} x_j^2 )^{1/2}.
// r = 0 is the canonical L^2 norm of the field.
template <class D>
double sobolev_norm(const Eigen::ArrayBase<D>& x, double r) {
  const auto& xd = x.derived();
  if (r == 0.0) return std::sqrt(xd.square().sum());
  const Eigen::Index n = xd.size();
  double acc = 0.0;
  for (Eigen::Index j = 1; j <= n; ++j) {
    const double c = xd.coeff(j - 1);
    acc += std::pow(static_cast<double>(j), 2.0 * r) * c * c;
  }
  return std::sqrt(acc);
}

// Eigenvalues lambda_j > 0 of the trace-class covariance C, together with the
// declared decay exponent kappa > 1/2. Construction validates the two-sided
// power-law envelope c1 * j^-kappa <= lambda_j <= c2 * j^-kappa, the numeric
// form of "lambda_j comparable to j^-kappa".
class CovarianceSpectrum {
 public:
  CovarianceSpectrum(Array eigenvalues, double kappa, double c1 = 0.5,
                     double c2 = 2.0);

  const Array& lambda() const { return lambda_; }
  double kappa() const { return kappa_; }
  int modes() const { return static_cast<int>(lambda_.size()); }
  double c1() const { return c1_; }
  double c2() const { return c2_; }

 private:
  Array lambda_;
  double kappa_, c1_, c2_;
};

// C^p acting on coefficients: (C^p x)_j = lambda_j^{2p} x_j.
// p = 1 applies the covariance, p = -1/2 the Cameron-Martin weighting.
Array apply_c_power(const Array& x, const CovarianceSpectrum& spec, double p);

// Truncated trace of C viewed on H^r: sum_{j<=n} j^{2r} lambda_j^2.
double covariance_trace(const CovarianceSpectrum& spec, double r, int n);

// Dense synthesis/analysis between coefficients and the uniform grid
// s_i = i/m, i = 0..m. The matrix is built once per (n_modes, m) pair and
// shared; instances are immutable after construction.
class SineTransform {
 public:
  static std::shared_ptr<const SineTransform> get(int n_modes, int m);

  // samples_i = sum_j x_j sqrt(2) sin(j pi i / m); endpoints exactly zero
  Array synthesize(const Array& coeffs) const;
  // trapezoid-rule coefficients of the first n modes (exact rectangle rule
  // under zero endpoints): x_j = (1/m) sum_i g_i sqrt(2) sin(j pi i / m)
  Array analyze(const Array& samples, int n) const;

  int n_modes() const { return static_cast<int>(matrix_.cols()); }
  int grid_m() const { return static_cast<int>(matrix_.rows()) - 1; }

 private:
  SineTransform(int n_modes, int m);
  Eigen::MatrixXd matrix_;  // (m+1) x n_modes
};

// anti-aliasing default: grid with m = 4N panels for an N-mode field
inline int default_grid_size(int n_modes) { return 4 * n_modes; }

// grid samples of an N-mode field; requires m >= 2N so the sine system stays
// orthogonal on the grid
Array to_grid(const Array& coeffs, int m);

// first n sine coefficients of a Dirichlet grid function (m panels, m+1
// samples); requires n <= m/2
Array to_spectral(const Array& samples, int n);

// composite trapezoid rule over [0,1] for m+1 equispaced samples
double trapezoid(const Array& samples);

}  // namespace pcn
