#pragma once

#include "pcn/rng.hpp"
#include "pcn/spectral.hpp"

// Sampling from the centred Gaussian N(0, tau*C) by Karhunen-Loeve expansion,
// plus the Brownian-bridge covariance preset and C-Wiener increments for the
// SDE integrator.

namespace pcn {

// x_j = sqrt(tau) * lambda_j * rho_j with rho_j i.i.d. standard normal;
// the truncated Karhunen-Loeve draw from N(0, tau*C) over the first n modes.
Array sample_gaussian(const CovarianceSpectrum& spec, int n, double tau,
                      RngStream& rng);

// in-place variant for allocation-free inner loops
void sample_gaussian_into(Array& out, const CovarianceSpectrum& spec, int n,
                          double tau, RngStream& rng);

// Covariance of the Brownian bridge on [0,1]: the inverse Dirichlet Laplacian,
// lambda_j = 1/(j*pi), decay exponent kappa = 1. The declared envelope is
// centred on the exact constant 1/pi.
CovarianceSpectrum brownian_bridge_spectrum(int n);

// Increment of the C-Wiener process over a step dt: dW_j = lambda_j sqrt(dt) rho_j.
Array brownian_increment(const CovarianceSpectrum& spec, int n, double dt,
                         RngStream& rng);

}  // namespace pcn
