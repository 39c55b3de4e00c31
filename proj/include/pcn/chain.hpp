#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "pcn/gaussian.hpp"
#include "pcn/potential.hpp"

// The preconditioned Crank-Nicolson Metropolis kernel
//   proposal   y = (1-2*delta)^{1/2} x + sqrt(2*delta*tau) xi,  xi ~ N(0,C)
//   acceptance alpha = 1 ^ exp(-(Psi(y)-Psi(x))/tau)
// together with the Monte Carlo estimators of its one-step drift and noise.

namespace pcn {

class PcnParams {
 public:
  PcnParams(double delta, double tau, CovarianceSpectrum spec,
            std::uint64_t seed = 0, std::uint64_t stream_id = 0);

  double delta() const { return delta_; }
  double tau() const { return tau_; }
  const CovarianceSpectrum& spec() const { return spec_; }
  int n_modes() const { return spec_.modes(); }
  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }
  RngStream make_stream() const { return RngStream(seed_, stream_id_); }

  // (1-2*delta)^{1/2}
  double contraction() const;
  // sqrt(2*delta*tau)
  double noise_scale() const;

 private:
  double delta_, tau_;
  CovarianceSpectrum spec_;
  std::uint64_t seed_, stream_id_;
};

struct ChainState {
  Array x;
  long long k = 0;         // step count
  long long accepted = 0;  // accepted-move count t(k) <= k
  double qv_partial = 0.0; // cached V_N(x) over all retained modes
};

// initial state with the quadratic-variation cache filled in
ChainState make_chain_state(Array x0, const PcnParams& params);

struct Proposal {
  Array y;
  Array xi;  // the same xi is reused by acceptance diagnostics
};

Proposal propose(const Array& x, const PcnParams& params, RngStream& rng);

// 1 ^ exp(-(Psi(y)-Psi(x))/tau); exponent clamped to [-745, 0] so the result
// is exactly 1 whenever Psi(y) <= Psi(x) and never underflows to garbage
double acceptance_prob(const Potential& p, const Array& x, const Array& y,
                       double tau);

// one Metropolis transition: x' = gamma*y + (1-gamma)*x, gamma = 1{U < alpha}
ChainState step(const ChainState& state, const Potential& p,
                const PcnParams& params, RngStream& rng);

struct Trajectory {
  double delta = 0.0;
  int stride = 1;
  long long n_steps = 0;
  int n_qv = 0;  // modes entering the cached qv series (all retained modes)
  std::vector<long long> snapshot_steps;
  std::vector<Array> states;        // states[i] = x at snapshot_steps[i]
  std::vector<std::uint8_t> flags;  // flags[k] = 1 iff step k -> k+1 accepted
  std::vector<double> qv;           // qv[k] = V_N(x^k), k = 0..n_steps
  double horizon() const { return delta * static_cast<double>(n_steps); }
};

// iterate the kernel from `initial`, snapshotting every `stride` steps (the
// initial and final states are always kept); acceptance flags and the
// quadratic-variation series are recorded at every step
Trajectory run_chain(const Array& initial, const Potential& p,
                     const PcnParams& params, long long n_steps,
                     int stride = 10);

// piecewise-linear interpolant between consecutive states; requires a
// stride-1 trajectory so every step is available
Array interpolate(const Trajectory& traj, double t);

enum class DriftEstimator {
  // the literal estimator: average of gamma*(y-x)/delta over (xi,U) pairs
  sample_path,
  // same expectation, far lower variance: the Bernoulli gamma is replaced by
  // its conditional mean alpha(x,xi), and E[xi] = 0 is used to centre the
  // noise term. Needed to resolve the O(sqrt(delta)) drift bias at small
  // delta, where the sample-path estimator's Monte Carlo floor (of size
  // ~ sqrt(2*tau/(delta*n_mc)) per mode) dominates.
  conditional_mean,
};

// Monte Carlo estimate of the one-step drift
//   d_delta(x) = E[x' - x | x] / delta
Array empirical_drift(const Potential& p, const PcnParams& params,
                      const Array& x, long long n_mc, RngStream& rng,
                      DriftEstimator method = DriftEstimator::sample_path);

// first-order acceptance expansion:
//   1 - sqrt(2*delta/tau) * <grad Psi(x), xi> restricted to positive values
double linearized_acceptance(const Potential& p, const Array& x,
                             const Array& xi, const PcnParams& params);

// entry (i,j), 1-indexed, of the one-step noise covariance in the rescaled
// basis phi_hat_j = j^{-s} phi_j of H^s, where the noise is
//   Gamma = (2*tau*delta)^{-1/2} * (increment - mean increment)
// and s is the potential's Sobolev index
double empirical_noise_covariance(const Potential& p, const PcnParams& params,
                                  const Array& x, int i, int j, long long n_mc,
                                  RngStream& rng);

struct IdentityResidual {
  double residual;   // H^s distance between the estimate and its closed form
  double std_error;  // Monte Carlo standard error of that distance scale
};

// residual of the exact identity
//   sqrt(2*tau/delta) * E[linearized_acceptance * xi] = -C grad Psi(x)
IdentityResidual acceptance_noise_identity(const Potential& p, const Array& x,
                                           const PcnParams& params,
                                           long long n_mc, RngStream& rng);

namespace detail {
// shared driver for fixed-temperature and annealed runs; tau_at(k) supplies
// the temperature used by both the proposal and the acceptance test at step k
Trajectory run_loop(const Array& initial, const Potential& p,
                    const CovarianceSpectrum& spec, double delta,
                    const std::function<double(long long)>& tau_at,
                    long long n_steps, int stride, RngStream& rng);
}  // namespace detail

}  // namespace pcn
