#include "pcn/gaussian.hpp"

#include <cmath>

namespace pcn {

void sample_gaussian_into(Array& out, const CovarianceSpectrum& spec, int n,
                          double tau, RngStream& rng) {
  require(n >= 1 && n <= spec.modes(),
          "sample_gaussian: mode count outside stored spectrum");
  require(std::isfinite(tau) && tau > 0.0,
          "sample_gaussian: temperature must be positive");
  out.resize(n);
  const double rt = std::sqrt(tau);
  for (int j = 0; j < n; ++j) out[j] = rt * spec.lambda()[j] * rng.normal();
}

Array sample_gaussian(const CovarianceSpectrum& spec, int n, double tau,
                      RngStream& rng) {
  Array out;
  sample_gaussian_into(out, spec, n, tau, rng);
  return out;
}

CovarianceSpectrum brownian_bridge_spectrum(int n) {
  require(n >= 1, "brownian_bridge_spectrum: n must be >= 1");
  Array lambda(n);
  for (int j = 1; j <= n; ++j) lambda[j - 1] = 1.0 / (j * M_PI);
  return CovarianceSpectrum(std::move(lambda), /*kappa=*/1.0,
                            /*c1=*/0.25, /*c2=*/0.5);
}

Array brownian_increment(const CovarianceSpectrum& spec, int n, double dt,
                         RngStream& rng) {
  require(std::isfinite(dt) && dt > 0.0,
          "brownian_increment: dt must be positive");
  require(n >= 1 && n <= spec.modes(),
          "brownian_increment: mode count outside stored spectrum");
  Array out(n);
  const double rdt = std::sqrt(dt);
  for (int j = 0; j < n; ++j) out[j] = rdt * spec.lambda()[j] * rng.normal();
  return out;
}

}  // namespace pcn
