#include "pcn/sde.hpp"

#include <cmath>

namespace pcn {

SdeParams::SdeParams(double dt, double tau, CovarianceSpectrum spec)
    : dt_(dt), tau_(tau), spec_(std::move(spec)) {
  require(std::isfinite(dt) && dt > 0.0 && dt <= 0.1,
          "SdeParams: dt must lie in (0, 0.1]");
  require(std::isfinite(tau) && tau > 0.0, "SdeParams: tau must be positive");
}

Array em_step(const Array& z, const Potential& p, const SdeParams& params,
              RngStream& rng) {
  require(z.size() == params.n_modes(), "em_step: state/spectrum size mismatch");
  const double dt = params.dt();
  return z + dt * drift(p, params.spec(), z) +
         std::sqrt(2.0 * params.tau()) *
             brownian_increment(params.spec(), params.n_modes(), dt, rng);
}

Array ou_exact_step(const Array& x, const CovarianceSpectrum& spec, double t,
                    double tau, RngStream& rng) {
  require(std::isfinite(t) && t > 0.0, "ou_exact_step: t must be positive");
  require(std::isfinite(tau) && tau > 0.0, "ou_exact_step: tau must be positive");
  require(x.size() == spec.modes(), "ou_exact_step: state/spectrum size mismatch");
  const double decay = std::exp(-t);
  const double noise = std::sqrt(tau * (1.0 - decay * decay));
  return decay * x + noise * sample_gaussian(spec, spec.modes(), 1.0, rng);
}

double fluid_ode_solution(double v0, double tau, double t) {
  require(std::isfinite(v0) && std::isfinite(tau) && std::isfinite(t),
          "fluid_ode_solution: arguments must be finite");
  return tau + (v0 - tau) * std::exp(-2.0 * t);
}

double all_accepted_qv(double v0, double tau, double delta, long long k) {
  require(std::isfinite(v0) && std::isfinite(tau),
          "all_accepted_qv: arguments must be finite");
  require(delta > 0.0 && delta < 0.5, "all_accepted_qv: delta must lie in (0, 1/2)");
  require(k >= 0, "all_accepted_qv: step count must be non-negative");
  const double contraction = std::pow(1.0 - 2.0 * delta, static_cast<double>(k));
  return contraction * v0 + (1.0 - contraction) * tau;
}

}  // namespace pcn
