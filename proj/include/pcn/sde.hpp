#pragma once

#include "pcn/gaussian.hpp"
#include "pcn/potential.hpp"

// Reference integrators for the limiting dynamics
//   dz = -(z + C grad Psi(z)) dt + sqrt(2*tau) dW,   W a C-Wiener process,
// plus closed forms for the exact Ornstein-Uhlenbeck transition and the
// quadratic-variation fluid limit.

namespace pcn {

class SdeParams {
 public:
  SdeParams(double dt, double tau, CovarianceSpectrum spec);

  double dt() const { return dt_; }
  double tau() const { return tau_; }
  const CovarianceSpectrum& spec() const { return spec_; }
  int n_modes() const { return spec_.modes(); }

 private:
  double dt_, tau_;
  CovarianceSpectrum spec_;
};

// explicit Euler-Maruyama step
Array em_step(const Array& z, const Potential& p, const SdeParams& params,
              RngStream& rng);

// exact transition of the linear SDE dz = -z dt + sqrt(2*tau) dW over time t:
//   z(t) = e^{-t} x + sqrt(tau*(1 - e^{-2t})) xi,  xi ~ N(0,C).
// Coincides with the Metropolis proposal at delta = (1 - e^{-2t})/2.
Array ou_exact_step(const Array& x, const CovarianceSpectrum& spec, double t,
                    double tau, RngStream& rng);

// solution of v' = -2(v - tau): v(t) = tau + (v0 - tau) e^{-2t}
double fluid_ode_solution(double v0, double tau, double t);

// quadratic variation after k accepted Metropolis moves:
//   u(k) = (1-2*delta)^k v0 + (1 - (1-2*delta)^k) tau
double all_accepted_qv(double v0, double tau, double delta, long long k);

}  // namespace pcn
