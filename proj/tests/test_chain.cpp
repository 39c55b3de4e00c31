#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "pcn/chain.hpp"
#include "pcn/diagnostics.hpp"
#include "pcn/gaussian.hpp"
#include "pcn/potential.hpp"
#include "pcn/sde.hpp"

using namespace pcn;

namespace {

Array unit_mode(int n, int j) {
  Array x = Array::Zero(n);
  x(j) = 1.0;
  return x;
}

}  // namespace

TEST_CASE("parameter validation") {
  const CovarianceSpectrum spec = brownian_bridge_spectrum(4);
  CHECK_THROWS_AS(PcnParams(0.0, 1.0, spec), std::invalid_argument);
  CHECK_THROWS_AS(PcnParams(0.5, 1.0, spec), std::invalid_argument);
  CHECK_THROWS_AS(PcnParams(0.6, 1.0, spec), std::invalid_argument);
  CHECK_THROWS_AS(PcnParams(0.1, -1.0, spec), std::invalid_argument);
  CHECK_THROWS_AS(PcnParams(0.1, 0.0, spec), std::invalid_argument);

  PcnParams params(0.1, 2.0, spec, 7, 3);
  CHECK(params.contraction() == doctest::Approx(std::sqrt(0.8)).epsilon(1e-15));
  CHECK(params.noise_scale() ==
        doctest::Approx(std::sqrt(2.0 * 0.1 * 2.0)).epsilon(1e-15));
}

TEST_CASE("proposal matches the exact autonomous gaussian step") {
  // with delta = (1 - e^{-2t})/2 the proposal is the time-t exact step of the
  // linear SDE dz = -z dt + sqrt(2 tau) dW, mode by mode
  const int n = 16;
  const CovarianceSpectrum spec = brownian_bridge_spectrum(n);
  const double t = 0.37, tau = 1.7;
  const double delta = 0.5 * (1.0 - std::exp(-2.0 * t));

  PcnParams params(delta, tau, spec, 11, 2);
  RngStream rng_a = params.make_stream();
  RngStream rng_b = params.make_stream();

  Array x(n);
  for (int j = 0; j < n; ++j) x(j) = std::sin(1.0 + j);

  const Proposal prop = propose(x, params, rng_a);
  const Array z = ou_exact_step(x, spec, t, tau, rng_b);
  CHECK((prop.y - z).abs().maxCoeff() < 1e-13);
}

TEST_CASE("acceptance probability") {
  const CovarianceSpectrum spec = brownian_bridge_spectrum(8);
  ZeroPotential zero;
  DiagonalQuadratic quad(0.0);
  const Array x = unit_mode(8, 0);
  const Array y = 0.5 * x;

  // free chain accepts everything
  CHECK(acceptance_prob(zero, x, y, 0.3) == 1.0);
  // downhill moves are certain
  CHECK(acceptance_prob(quad, x, y, 0.3) == 1.0);
  // uphill move at temperature tau
  const double a = acceptance_prob(quad, y, x, 2.0);
  const double dpsi = 0.5 * (1.0 - 0.25);
  CHECK(a == doctest::Approx(std::exp(-dpsi / 2.0)).epsilon(1e-14));

  CHECK_THROWS_AS(acceptance_prob(quad, x, y, 0.0), std::invalid_argument);
}

TEST_CASE("free chain accepts every move and tracks qv") {
  const int n = 12;
  const CovarianceSpectrum spec = brownian_bridge_spectrum(n);
  ZeroPotential pot;
  PcnParams params(0.05, 1.0, spec, 5, 1);
  const Array x0 = unit_mode(n, 1);

  const Trajectory traj = run_chain(x0, pot, params, 200, 10);
  CHECK(traj.n_steps == 200);
  CHECK(traj.stride == 10);
  CHECK(static_cast<int>(traj.states.size()) == 21);
  CHECK(static_cast<int>(traj.flags.size()) == 200);
  for (auto f : traj.flags) CHECK(f == 1);

  CHECK(traj.snapshot_steps.back() == 200);
  long long accepted = 0;
  for (auto f : traj.flags) accepted += f;
  CHECK(accepted == 200);

  // per-step qv series covers k = 0..n_steps and matches a recomputation
  // from the snapshots
  CHECK(traj.qv.size() == 201);
  CHECK(traj.n_qv == n);
  for (std::size_t i = 0; i < traj.states.size(); ++i) {
    const double v = quadratic_variation(traj.states[i], spec, n);
    CHECK(traj.qv[traj.snapshot_steps[i]] == doctest::Approx(v).epsilon(1e-12));
  }
}

TEST_CASE("runs replay bit for bit") {
  const int n = 8;
  const CovarianceSpectrum spec = brownian_bridge_spectrum(n);
  DoubleWell pot(5.0);
  PcnParams params(0.02, 0.5, spec, 123, 4);
  const Array x0 = Array::Zero(n);

  const Trajectory a = run_chain(x0, pot, params, 150, 5);
  const Trajectory b = run_chain(x0, pot, params, 150, 5);
  REQUIRE(a.states.size() == b.states.size());
  for (std::size_t i = 0; i < a.states.size(); ++i) {
    CHECK((a.states[i] - b.states[i]).abs().maxCoeff() == 0.0);
  }
  CHECK(a.flags == b.flags);
}

TEST_CASE("trajectory shape edge cases") {
  const CovarianceSpectrum spec = brownian_bridge_spectrum(4);
  ZeroPotential pot;
  PcnParams params(0.1, 1.0, spec, 2, 0);
  const Array x0 = unit_mode(4, 0);

  // stride == n_steps keeps only the two endpoints
  const Trajectory t2 = run_chain(x0, pot, params, 30, 30);
  CHECK(t2.states.size() == 2);
  // ragged tail: 25 steps at stride 10 snapshots k = 0,10,20,25
  const Trajectory t3 = run_chain(x0, pot, params, 25, 10);
  CHECK(t3.states.size() == 4);
  CHECK(t3.snapshot_steps.back() == 25);

  CHECK_THROWS_AS(run_chain(x0, pot, params, 0, 10), std::invalid_argument);
  CHECK_THROWS_AS(run_chain(x0, pot, params, 10, 0), std::invalid_argument);
}

TEST_CASE("interpolation in diffusion time") {
  const int n = 6;
  const CovarianceSpectrum spec = brownian_bridge_spectrum(n);
  ZeroPotential pot;
  PcnParams params(0.01, 1.0, spec, 8, 0);
  const Array x0 = unit_mode(n, 2);

  const Trajectory traj = run_chain(x0, pot, params, 100, 1);
  CHECK(traj.horizon() == doctest::Approx(1.0).epsilon(1e-14));

  // exact at knots
  const Array at3 = interpolate(traj, 3 * 0.01);
  CHECK((at3 - traj.states[3]).abs().maxCoeff() == 0.0);
  // linear halfway between knots
  const Array mid = interpolate(traj, 3.5 * 0.01);
  const Array expect = 0.5 * (traj.states[3] + traj.states[4]);
  CHECK((mid - expect).abs().maxCoeff() < 1e-14);

  CHECK_THROWS_AS(interpolate(traj, -0.001), std::domain_error);
  CHECK_THROWS_AS(interpolate(traj, 1.0 + 1e-6), std::domain_error);

  const Trajectory coarse = run_chain(x0, pot, params, 100, 10);
  CHECK_THROWS_AS(interpolate(coarse, 0.5), std::invalid_argument);
}

TEST_CASE("free-chain drift estimator is noise free") {
  // conditional_mean averages the analytic one-step mean, so with Psi == 0
  // the estimate equals ((1-2 delta)^{1/2} - 1)/delta * x with no MC error
  const int n = 10;
  const CovarianceSpectrum spec = brownian_bridge_spectrum(n);
  ZeroPotential pot;
  const double delta = 0.03;
  PcnParams params(delta, 1.0, spec, 3, 0);
  RngStream rng = params.make_stream();

  Array x(n);
  for (int j = 0; j < n; ++j) x(j) = 1.0 / (1 + j);

  const Array dh = empirical_drift(pot, params, x, 1000, rng,
                                   DriftEstimator::conditional_mean);
  const double c = (std::sqrt(1.0 - 2.0 * delta) - 1.0) / delta;
  CHECK((dh - c * x).abs().maxCoeff() < 1e-13);
}

TEST_CASE("drift estimators agree within monte carlo error") {
  const int n = 8;
  const CovarianceSpectrum spec = brownian_bridge_spectrum(n);
  DiagonalQuadratic pot(0.0);
  PcnParams params(0.01, 1.0, spec, 17, 0);
  const Array x = unit_mode(n, 0);

  RngStream r1 = params.make_stream();
  RngStream r2(17, 99);
  const Array a = empirical_drift(pot, params, x, 40000, r1,
                                  DriftEstimator::sample_path);
  const Array b = empirical_drift(pot, params, x, 40000, r2,
                                  DriftEstimator::conditional_mean);
  // sample-path noise dominates: sd per mode ~ sqrt(2 tau / delta / n_mc)
  const double tol = 5.0 * std::sqrt(2.0 / 0.01 / 40000.0);
  CHECK(sobolev_norm(a - b, 0.0) < tol * std::sqrt(double(n)));

  CHECK_THROWS_AS(
      empirical_drift(pot, params, x, 999, r1, DriftEstimator::sample_path),
      std::invalid_argument);
}

TEST_CASE("linearized acceptance") {
  const int n = 8;
  const CovarianceSpectrum spec = brownian_bridge_spectrum(n);
  PcnParams params(0.02, 1.5, spec, 9, 0);
  DiagonalQuadratic pot(0.0);
  ZeroPotential zero;
  const Array x = unit_mode(n, 0);

  // favorable noise (<grad Psi, xi> <= 0) saturates at one
  Array xi = Array::Zero(n);
  xi(0) = -2.0;
  CHECK(linearized_acceptance(pot, x, xi, params) == 1.0);
  CHECK(linearized_acceptance(zero, x, xi, params) == 1.0);

  // adverse noise clips the linear expansion at zero probability
  xi(0) = 2.0;
  const double expected =
      1.0 - std::sqrt(2.0 * 0.02 / 1.5) * 2.0;
  CHECK(linearized_acceptance(pot, x, xi, params) ==
        doctest::Approx(std::max(0.0, expected)).epsilon(1e-14));
}

TEST_CASE("noise covariance estimator sees the prior covariance") {
  // at x = 0 and Psi quadratic every move is accept/reject symmetric around
  // zero; the scaled increment covariance approaches lambda_i^2 delta_ij
  const int n = 6;
  const CovarianceSpectrum spec = brownian_bridge_spectrum(n);
  ZeroPotential pot;
  PcnParams params(0.05, 1.0, spec, 21, 0);
  const Array x = Array::Zero(n);

  RngStream rng = params.make_stream();
  const double c11 = empirical_noise_covariance(pot, params, x, 1, 1, 10000, rng);
  const double l1 = spec.lambda()(0);
  // free chain: Gamma = xi exactly, so c11 is a 1e4-sample variance of
  // N(0, l1^2); 5 standard errors corresponds to |c11 - l1^2| < 7.2e-3
  CHECK(std::abs(c11 - l1 * l1) < 5.0 * l1 * l1 * std::sqrt(2.0 / 10000.0));

  RngStream rng2 = params.make_stream();
  const double c12 = empirical_noise_covariance(pot, params, x, 1, 2, 10000, rng2);
  CHECK(std::abs(c12) < 5.0 * l1 * spec.lambda()(1) / std::sqrt(10000.0));

  CHECK_THROWS_AS(
      empirical_noise_covariance(pot, params, x, 0, 1, 10000, rng),
      std::invalid_argument);
  CHECK_THROWS_AS(
      empirical_noise_covariance(pot, params, x, 1, 1, 9999, rng),
      std::invalid_argument);
}

TEST_CASE("acceptance noise identity residual is small for a quadratic") {
  const int n = 8;
  const CovarianceSpectrum spec = brownian_bridge_spectrum(n);
  DiagonalQuadratic pot(0.0);
  PcnParams params(0.001, 1.0, spec, 31, 0);
  const Array x = unit_mode(n, 0);

  RngStream rng = params.make_stream();
  const IdentityResidual r = acceptance_noise_identity(pot, x, params, 20000, rng);
  CHECK(r.std_error > 0.0);
  CHECK(r.residual < 4.0 * r.std_error + 0.05);
}
