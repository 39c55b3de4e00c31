#include "pcn/potential.hpp"

#include <cmath>

namespace pcn {

DiagonalQuadratic::DiagonalQuadratic(double s) : s_(s) {
  require(std::isfinite(s) && s >= 0.0,
          "DiagonalQuadratic: Sobolev index must be nonnegative");
}

double DiagonalQuadratic::value(const Array& x) const {
  const double n = sobolev_norm(x, s_);
  return 0.5 * n * n;
}

Array DiagonalQuadratic::grad(const Array& x) const {
  if (s_ == 0.0) return x;
  return x * mode_powers(static_cast<int>(x.size()), 2.0 * s_);
}

DoubleWell::DoubleWell(double lambda) : lambda_(lambda) {
  require(std::isfinite(lambda) && lambda > 0.0,
          "DoubleWell: lambda must be positive");
}

double DoubleWell::value(const Array& x) const {
  const int n = static_cast<int>(x.size());
  const Array g = to_grid(x, default_grid_size(n));
  return 0.25 * lambda_ * trapezoid((g.square() - 1.0).square());
}

Array DoubleWell::grad(const Array& x) const {
  const int n = static_cast<int>(x.size());
  const Array g = to_grid(x, default_grid_size(n));
  // pointwise functional derivative lambda * g * (g^2 - 1), projected back
  return to_spectral(lambda_ * g * (g.square() - 1.0), n);
}

Array drift(const Potential& p, const CovarianceSpectrum& spec,
            const Array& x) {
  return -x - apply_c_power(p.grad(x), spec, 1.0);
}

double taylor_remainder_ratio(const Potential& p, const Array& x,
                              const Array& y) {
  require(x.size() == y.size(), "taylor_remainder_ratio: dimension mismatch");
  const Array dx = y - x;
  const double denom = sobolev_norm(dx, p.sobolev_index());
  if (denom == 0.0) return 0.0;
  const double linear = (p.grad(x) * dx).sum();
  return std::abs(p.value(y) - p.value(x) - linear) / (denom * denom);
}

}  // namespace pcn
