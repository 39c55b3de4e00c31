#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "pcn/chain.hpp"
#include "pcn/diagnostics.hpp"
#include "pcn/gaussian.hpp"
#include "pcn/potential.hpp"

using namespace pcn;

namespace {

QvSeries make_series(std::vector<double> times, std::vector<double> values,
                     int n_qv) {
  QvSeries s;
  s.times = std::move(times);
  s.values = std::move(values);
  s.n_qv = n_qv;
  return s;
}

}  // namespace

TEST_CASE("quadratic variation closed forms") {
  const int n = 16;
  const CovarianceSpectrum spec = brownian_bridge_spectrum(n);

  // x_j = lambda_j makes every term one
  const Array x = spec.lambda();
  CHECK(quadratic_variation(x, spec, n) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(quadratic_variation(x, spec, 5) == doctest::Approx(1.0).epsilon(1e-14));

  // quadratic homogeneity
  const double v = quadratic_variation(3.0 * x, spec, n);
  CHECK(v == doctest::Approx(9.0).epsilon(1e-13));

  CHECK_THROWS_AS(quadratic_variation(x, spec, 0), std::invalid_argument);
  CHECK_THROWS_AS(quadratic_variation(x, spec, n + 1), std::invalid_argument);
}

TEST_CASE("additivity residual") {
  const int n = 2048;
  const CovarianceSpectrum spec = brownian_bridge_spectrum(n);
  const Array x = spec.lambda();

  RngStream rng(3, 0);
  CHECK(qv_additivity_residual(x, 0.0, spec, n, rng) == 0.0);

  // chi-square concentration: residual ~ (2*alpha + alpha^2*sqrt(2))/sqrt(n)
  double worst = 0.0;
  for (int t = 0; t < 20; ++t) {
    worst = std::max(worst, qv_additivity_residual(x, 0.5, spec, n, rng));
  }
  CHECK(worst < 0.15);
  CHECK(worst > 0.0);
}

TEST_CASE("qv series fast path matches recomputation") {
  const int n = 10;
  const CovarianceSpectrum spec = brownian_bridge_spectrum(n);
  ZeroPotential pot;
  PcnParams params(0.02, 1.0, spec, 41, 0);
  Array x0 = spec.lambda();

  const Trajectory traj = run_chain(x0, pot, params, 100, 10);

  // full mode count: served from the per-step cache, one point per step
  const QvSeries fast = qv_series(traj, spec, n);
  CHECK(fast.times.size() == 101);
  CHECK(fast.n_qv == n);
  CHECK(fast.times.front() == 0.0);
  CHECK(fast.times.back() == doctest::Approx(2.0).epsilon(1e-14));
  for (std::size_t i = 0; i < traj.states.size(); ++i) {
    const double recomputed = quadratic_variation(traj.states[i], spec, n);
    CHECK(fast.values[traj.snapshot_steps[i]] ==
          doctest::Approx(recomputed).epsilon(1e-13));
  }

  // reduced mode count: recomputed from snapshots only
  const QvSeries slow = qv_series(traj, spec, 4);
  CHECK(slow.times.size() == traj.states.size());
  for (std::size_t i = 0; i < traj.states.size(); ++i) {
    const double recomputed = quadratic_variation(traj.states[i], spec, 4);
    CHECK(slow.values[i] == doctest::Approx(recomputed).epsilon(1e-13));
  }
}

TEST_CASE("series interpolation") {
  const QvSeries s = make_series({0.0, 0.5, 1.0}, {1.0, 2.0, 4.0}, 8);
  CHECK(s.value_at(0.0) == 1.0);
  CHECK(s.value_at(1.0) == 4.0);
  CHECK(s.value_at(0.25) == doctest::Approx(1.5).epsilon(1e-14));
  CHECK(s.value_at(0.75) == doctest::Approx(3.0).epsilon(1e-14));
  CHECK_THROWS_AS(s.value_at(-0.1), std::domain_error);
  CHECK_THROWS_AS(s.value_at(1.1), std::domain_error);
}

TEST_CASE("replica averaging") {
  const QvSeries a = make_series({0.0, 1.0}, {1.0, 3.0}, 4);
  const QvSeries b = make_series({0.0, 1.0}, {3.0, 5.0}, 4);
  const QvSeries m = average_qv_series({a, b});
  CHECK(m.values[0] == 2.0);
  CHECK(m.values[1] == 4.0);
  CHECK(m.n_qv == 4);

  CHECK_THROWS_AS(average_qv_series({}), std::invalid_argument);
  const QvSeries c = make_series({0.0, 2.0}, {3.0, 5.0}, 4);
  CHECK_THROWS_AS(average_qv_series({a, c}), std::invalid_argument);
}

TEST_CASE("fluid limit distance") {
  // a series already solving v' = -2(v - tau) has zero sup error
  const double tau = 0.8, v0 = 0.2;
  std::vector<double> ts, vs;
  for (int k = 0; k <= 100; ++k) {
    const double t = 0.01 * k;
    ts.push_back(t);
    vs.push_back(fluid_ode_solution(v0, tau, t));
  }
  const QvSeries s = make_series(ts, vs, 16);
  CHECK(fluid_limit_sup_error(s, tau, 1.0) < 1e-14);

  // constant offset is picked up in the sup
  std::vector<double> shifted = vs;
  for (double& v : shifted) v += 0.05;
  const QvSeries s2 = make_series(ts, shifted, 16);
  // the ode now starts at v0 + 0.05, and |v(t) - ode(t)| grows towards
  // 0.05 * (1 - e^{-2t}) at the end of the window
  const double expect = 0.05 * (1.0 - std::exp(-2.0));
  CHECK(fluid_limit_sup_error(s2, tau, 1.0) ==
        doctest::Approx(expect).epsilon(1e-10));

  CHECK_THROWS_AS(fluid_limit_sup_error(s, tau, 1.5), std::invalid_argument);
  CHECK_THROWS_AS(fluid_limit_sup_error(s, tau, -1.0), std::invalid_argument);
}

TEST_CASE("accepted moves gap") {
  const int n = 8;
  const CovarianceSpectrum spec = brownian_bridge_spectrum(n);
  ZeroPotential pot;
  PcnParams params(0.01, 1.0, spec, 11, 0);

  // free chain accepts everything
  const Trajectory traj = run_chain(Array::Zero(n), pot, params, 50, 50);
  CHECK(accepted_moves_gap(traj) == 0.0);

  // hand-built all-rejected record: gap = delta * n_steps
  Trajectory stuck;
  stuck.delta = 0.1;
  stuck.stride = 5;
  stuck.n_steps = 5;
  stuck.n_qv = n;
  stuck.snapshot_steps = {0, 5};
  stuck.states = {Array::Zero(n), Array::Zero(n)};
  stuck.flags.assign(5, 0);
  stuck.qv.assign(6, 0.0);
  CHECK(accepted_moves_gap(stuck) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("order fit recovers exact power laws") {
  std::vector<std::pair<double, double>> pts;
  for (double x : {1.0, 2.0, 4.0, 8.0, 16.0}) {
    pts.emplace_back(x, 3.0 * std::sqrt(x));
  }
  const OrderFit f = fit_order(pts);
  CHECK(f.slope == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(f.intercept == doctest::Approx(std::log(3.0)).epsilon(1e-12));
  CHECK(f.residual < 1e-12);

  pts.clear();
  for (double x : {0.5, 1.0, 2.0}) pts.emplace_back(x, 0.25 * x * x);
  CHECK(fit_order(pts).slope == doctest::Approx(2.0).epsilon(1e-12));

  CHECK_THROWS_AS(fit_order({{1.0, 1.0}, {2.0, 2.0}}), std::domain_error);
  CHECK_THROWS_AS(fit_order({{1.0, 1.0}, {2.0, 0.0}, {3.0, 1.0}}),
                  std::domain_error);
  CHECK_THROWS_AS(fit_order({{1.0, 1.0}, {1.0, 2.0}, {1.0, 3.0}}),
                  std::domain_error);
}

TEST_CASE("diagnostic report bookkeeping") {
  DiagnosticReport rep;
  rep.name = "probe";
  rep.parameters = {{"delta", 0.5}};
  rep.residuals = {{"gap", 0.01}};
  rep.passes = {{"first", true}, {"second", true}};
  CHECK(rep.all_pass());
  rep.passes.emplace_back("third", false);
  CHECK_FALSE(rep.all_pass());

  const std::string json = rep.to_json();
  CHECK(json.find("\"name\"") != std::string::npos);
  CHECK(json.find("probe") != std::string::npos);
  CHECK(json.find("\"passes\"") != std::string::npos);
  CHECK(json.find("gap") != std::string::npos);
}

TEST_CASE("invariance surrogates on the free chain") {
  const int n = 32;
  const CovarianceSpectrum spec = brownian_bridge_spectrum(n);
  const ZeroPotential pot;
  const double delta = 1e-2, tau = 1.0;
  PcnParams params(delta, tau, spec, 7, 0);
  RngStream rng = params.make_stream();

  const Trajectory traj = detail::run_loop(
      Array::Zero(n), pot, spec, delta, [tau](long long) { return tau; },
      20000, 1, rng);
  const DiagnosticReport rep = invariance_surrogates(pot, params, traj, 0.1);
  CHECK(!rep.residuals.empty());
  CHECK(rep.all_pass());

  // stride-1 data is mandatory
  const Trajectory coarse = run_chain(Array::Zero(n), pot, params, 100, 10);
  CHECK_THROWS_AS(invariance_surrogates(pot, params, coarse, 0.1),
                  std::invalid_argument);
  CHECK_THROWS_AS(invariance_surrogates(pot, params, traj, 0.0),
                  std::invalid_argument);
}

TEST_CASE("metropolis chain keeps the reference gaussian moments") {
  // with Psi == 0 the kernel preserves N(0, tau*C) exactly at every delta
  const int n = 6;
  const CovarianceSpectrum spec = brownian_bridge_spectrum(n);
  ZeroPotential pot;
  const double tau = 1.5;
  PcnParams params(0.1, tau, spec, 19, 5);

  const StationaryMoments m =
      pcn_second_moments(pot, params, Array::Zero(n), 40000, 2000, 20);
  REQUIRE(m.second_moment.size() == n);
  for (int j = 0; j < 3; ++j) {
    const double target = tau * spec.lambda()(j) * spec.lambda()(j);
    CHECK(std::abs(m.second_moment(j) - target) <
          5.0 * m.std_error(j) + 0.02 * target);
  }

  CHECK_THROWS_AS(
      pcn_second_moments(pot, params, Array::Zero(n), 1000, 1000, 10),
      std::invalid_argument);
  CHECK_THROWS_AS(
      pcn_second_moments(pot, params, Array::Zero(n), 1000, -1, 10),
      std::invalid_argument);
}
