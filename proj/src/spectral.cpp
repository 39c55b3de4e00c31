#include "pcn/spectral.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <utility>

namespace pcn {

Array mode_powers(int n, double p) {
  require(n >= 1, "mode_powers: n must be >= 1");
  Array w(n);
  for (int j = 1; j <= n; ++j) w[j - 1] = std::pow(static_cast<double>(j), p);
  return w;
}

CovarianceSpectrum::CovarianceSpectrum(Array eigenvalues, double kappa,
                                       double c1, double c2)
    : lambda_(std::move(eigenvalues)), kappa_(kappa), c1_(c1), c2_(c2) {
  require(lambda_.size() >= 1, "CovarianceSpectrum: need at least one mode");
  require(std::isfinite(kappa_) && kappa_ > 0.5,
          "CovarianceSpectrum: decay exponent kappa must exceed 1/2");
  require(c1_ > 0.0 && c1_ <= c2_,
          "CovarianceSpectrum: need 0 < c1 <= c2 for the decay envelope");
  const int n = modes();
  for (int j = 1; j <= n; ++j) {
    const double lj = lambda_[j - 1];
    require(std::isfinite(lj) && lj > 0.0,
            "CovarianceSpectrum: eigenvalues must be positive and finite");
    const double jk = std::pow(static_cast<double>(j), -kappa_);
    // hair of relative slack so exact power laws survive rounding
    require(lj >= c1_ * jk * (1.0 - 1e-9) && lj <= c2_ * jk * (1.0 + 1e-9),
            "CovarianceSpectrum: eigenvalue outside declared decay envelope");
  }
}

Array apply_c_power(const Array& x, const CovarianceSpectrum& spec, double p) {
  require(x.size() == spec.lambda().size(),
          "apply_c_power: field and spectrum dimensions differ");
  if (p == 0.0) return x;
  if (p == 1.0) return x * spec.lambda().square();
  return x * spec.lambda().pow(2.0 * p);
}

double covariance_trace(const CovarianceSpectrum& spec, double r, int n) {
  require(n >= 1, "covariance_trace: n must be >= 1");
  require(n <= spec.modes(), "covariance_trace: n exceeds stored modes");
  double acc = 0.0;
  for (int j = 1; j <= n; ++j) {
    const double lj = spec.lambda()[j - 1];
    acc += std::pow(static_cast<double>(j), 2.0 * r) * lj * lj;
  }
  return acc;
}

SineTransform::SineTransform(int n_modes, int m) : matrix_(m + 1, n_modes) {
  const double sqrt2 = std::sqrt(2.0);
  for (int i = 0; i <= m; ++i) {
    for (int j = 1; j <= n_modes; ++j) {
      matrix_(i, j - 1) = sqrt2 * std::sin(j * M_PI * i / m);
    }
  }
  matrix_.row(0).setZero();
  matrix_.row(m).setZero();
}

std::shared_ptr<const SineTransform> SineTransform::get(int n_modes, int m) {
  require(n_modes >= 1, "SineTransform: need at least one mode");
  require(m >= 2 * n_modes, "SineTransform: grid too coarse, need m >= 2N");
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::shared_ptr<const SineTransform>>
      cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{n_modes, m}];
  if (!slot) slot.reset(new SineTransform(n_modes, m));
  return slot;
}

Array SineTransform::synthesize(const Array& coeffs) const {
  require(coeffs.size() == matrix_.cols(),
          "SineTransform: coefficient count mismatch");
  Array out = (matrix_ * coeffs.matrix()).array();
  out[0] = 0.0;
  out[out.size() - 1] = 0.0;
  return out;
}

Array SineTransform::analyze(const Array& samples, int n) const {
  require(samples.size() == matrix_.rows(),
          "SineTransform: sample count mismatch");
  require(n >= 1 && n <= matrix_.cols(), "SineTransform: bad mode count");
  const double m = static_cast<double>(grid_m());
  return (matrix_.leftCols(n).transpose() * samples.matrix()).array() / m;
}

Array to_grid(const Array& coeffs, int m) {
  const int n = static_cast<int>(coeffs.size());
  require(n >= 1, "to_grid: empty field");
  require(m >= 2 * n, "to_grid: resolution too low, need m >= 2N");
  require(coeffs.allFinite(), "to_grid: non-finite coefficient");
  return SineTransform::get(n, m)->synthesize(coeffs);
}

Array to_spectral(const Array& samples, int n) {
  const int m = static_cast<int>(samples.size()) - 1;
  require(m >= 2, "to_spectral: need at least 3 samples");
  require(n >= 1 && 2 * n <= m, "to_spectral: too many modes requested, need n <= m/2");
  return SineTransform::get(n, m)->analyze(samples, n);
}

double trapezoid(const Array& samples) {
  const int m = static_cast<int>(samples.size()) - 1;
  require(m >= 1, "trapezoid: need at least 2 samples");
  const double interior = samples.sum() - samples[0] - samples[m];
  return (interior + 0.5 * (samples[0] + samples[m])) / m;
}

}  // namespace pcn
