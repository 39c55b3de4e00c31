#pragma once

#include <string>

#include "pcn/spectral.hpp"

// The non-quadratic part Psi of the energy J(x) = 1/2 ||C^{-1/2}x||^2 + Psi(x),
// together with the limiting drift d(x) = -(x + C grad Psi(x)).

namespace pcn {

class Potential {
 public:
  virtual ~Potential() = default;

  // Psi(x) >= 0 for all shipped instances
  virtual double value(const Array& x) const = 0;
  // spectral coefficients of the L^2 representer of grad Psi(x)
  virtual Array grad(const Array& x) const = 0;
  // Sobolev index s used by the H^s diagnostics paired with this potential
  virtual double sobolev_index() const = 0;
  virtual std::string label() const = 0;
};

// Psi == 0: the chain degenerates to the exact Ornstein-Uhlenbeck recursion.
class ZeroPotential final : public Potential {
 public:
  double value(const Array&) const override { return 0.0; }
  Array grad(const Array& x) const override { return Array::Zero(x.size()); }
  double sobolev_index() const override { return 0.0; }
  std::string label() const override { return "zero"; }
};

// Psi(x) = 1/2 ||x||_s^2 = 1/2 sum_j j^{2s} x_j^2, grad coefficient j^{2s} x_j.
// Keeps the target Gaussian, so stationary moments are known in closed form.
class DiagonalQuadratic final : public Potential {
 public:
  explicit DiagonalQuadratic(double s);
  double value(const Array& x) const override;
  Array grad(const Array& x) const override;
  double sobolev_index() const override { return s_; }
  std::string label() const override { return "diagonal_quadratic"; }
  double s() const { return s_; }

 private:
  double s_;
};

// Psi(x) = (lambda/4) int_0^1 (x(s)^2 - 1)^2 ds, evaluated by trapezoid
// quadrature on a 4N-panel grid; gradient is the pointwise function
// lambda * x (x^2 - 1) projected back onto the sine modes.
class DoubleWell final : public Potential {
 public:
  explicit DoubleWell(double lambda);
  double value(const Array& x) const override;
  Array grad(const Array& x) const override;
  // smallest index with the L^4 embedding available for this well
  double sobolev_index() const override { return 0.25; }
  std::string label() const override { return "double_well"; }
  double lambda() const { return lambda_; }

 private:
  double lambda_;
};

// limiting drift d(x) = -x - C grad Psi(x)
Array drift(const Potential& p, const CovarianceSpectrum& spec, const Array& x);

// |Psi(y) - Psi(x) - <grad Psi(x), y - x>| / ||y - x||_s^2 with s the
// potential's Sobolev index; 0 by convention when y == x. Bounded ratios
// witness the second-order Taylor control of Psi.
double taylor_remainder_ratio(const Potential& p, const Array& x,
                              const Array& y);

}  // namespace pcn
