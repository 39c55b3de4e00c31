#include "pcn/anneal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace pcn {

CoolingSchedule::CoolingSchedule(Kind kind, double tau0, double rho, double c)
    : kind_(kind), tau0_(tau0), rho_(rho), c_(c) {}

CoolingSchedule CoolingSchedule::fixed(double tau0) {
  require(std::isfinite(tau0) && tau0 > 0.0,
          "CoolingSchedule: tau0 must be positive");
  return CoolingSchedule(Kind::fixed, tau0, 1.0, 0.0);
}

CoolingSchedule CoolingSchedule::geometric(double tau0, double rho) {
  require(std::isfinite(tau0) && tau0 > 0.0,
          "CoolingSchedule: tau0 must be positive");
  require(std::isfinite(rho) && rho > 0.0 && rho < 1.0,
          "CoolingSchedule: rho must lie in (0,1)");
  return CoolingSchedule(Kind::geometric, tau0, rho, 0.0);
}

CoolingSchedule CoolingSchedule::logarithmic(double c) {
  require(std::isfinite(c) && c > 0.0, "CoolingSchedule: c must be positive");
  return CoolingSchedule(Kind::logarithmic, c / std::log(2.0), 1.0, c);
}

double CoolingSchedule::tau_at(long long k) const {
  require(k >= 0, "CoolingSchedule: step index must be non-negative");
  double tau = tau0_;
  switch (kind_) {
    case Kind::fixed:
      break;
    case Kind::geometric:
      tau = tau0_ * std::pow(rho_, static_cast<double>(k));
      break;
    case Kind::logarithmic:
      tau = c_ / std::log(static_cast<double>(k) + 2.0);
      break;
  }
  return std::max(tau, std::numeric_limits<double>::min());
}

double objective(const Potential& p, const CovarianceSpectrum& spec,
                 const Array& x) {
  require(x.size() == spec.modes(),
          "objective: state dimension differs from spectrum");
  return 0.5 * (x / spec.lambda()).square().sum() + p.value(x);
}

AnnealResult anneal(const Potential& p, const CovarianceSpectrum& spec,
                    const CoolingSchedule& schedule, double delta,
                    long long n_steps, const Array& initial, RngStream& rng,
                    int stride) {
  require(std::isfinite(delta) && delta > 0.0 && delta < 0.5,
          "anneal: delta must lie in (0, 1/2)");
  Trajectory traj = detail::run_loop(
      initial, p, spec, delta,
      [&schedule](long long k) { return schedule.tau_at(k); }, n_steps, stride,
      rng);
  AnnealResult out;
  out.final_state = traj.states.back();
  out.trajectory = std::move(traj);
  return out;
}

namespace {

// RK4 pass through x'' = -lambda*x*(1-x^2) from x(0)=0, x'(0)=a with q
// substeps per grid panel; optionally records the m+1 node values. Returns
// the terminal value x(1) whose root in a is the shooting target.
double shoot(double lambda, double a, int m, int q, Array* nodes) {
  const double h = 1.0 / (static_cast<double>(m) * static_cast<double>(q));
  auto acc = [lambda](double x) { return -lambda * x * (1.0 - x * x); };
  double x = 0.0, v = a;
  if (nodes) (*nodes)[0] = 0.0;
  for (int i = 0; i < m; ++i) {
    for (int s = 0; s < q; ++s) {
      const double k1x = v, k1v = acc(x);
      const double k2x = v + 0.5 * h * k1v, k2v = acc(x + 0.5 * h * k1x);
      const double k3x = v + 0.5 * h * k2v, k3v = acc(x + 0.5 * h * k2x);
      const double k4x = v + h * k3v, k4v = acc(x + h * k3x);
      x += h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
      v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    }
    if (nodes) (*nodes)[i + 1] = x;
  }
  return x;
}

double bvp_residual(const Array& g, double lambda) {
  const auto m = static_cast<int>(g.size()) - 1;
  const double ih2 = static_cast<double>(m) * static_cast<double>(m);
  double worst = 0.0;
  for (int i = 1; i < m; ++i) {
    const double f = ih2 * (g[i - 1] - 2.0 * g[i] + g[i + 1]) +
                     lambda * g[i] * (1.0 - g[i] * g[i]);
    worst = std::max(worst, std::abs(f));
  }
  return worst;
}

// Newton iteration on the centered-difference system with fixed zero
// boundaries; the tridiagonal Newton systems are solved by elimination.
// Returns the final max-norm residual.
double newton_polish(Array& g, double lambda) {
  const auto m = static_cast<int>(g.size()) - 1;
  const int n = m - 1;
  const double ih2 = static_cast<double>(m) * static_cast<double>(m);
  Array rhs(n), diag(n), cp(n), dp(n);
  for (int iter = 0; iter < 60; ++iter) {
    if (bvp_residual(g, lambda) <= 1e-12 * (1.0 + lambda)) break;
    for (int i = 1; i <= n; ++i) {
      rhs[i - 1] = -(ih2 * (g[i - 1] - 2.0 * g[i] + g[i + 1]) +
                     lambda * g[i] * (1.0 - g[i] * g[i]));
      diag[i - 1] = -2.0 * ih2 + lambda * (1.0 - 3.0 * g[i] * g[i]);
    }
    cp[0] = ih2 / diag[0];
    dp[0] = rhs[0] / diag[0];
    for (int i = 1; i < n; ++i) {
      const double denom = diag[i] - ih2 * cp[i - 1];
      cp[i] = ih2 / denom;
      dp[i] = (rhs[i] - ih2 * dp[i - 1]) / denom;
    }
    g[n] += dp[n - 1];
    for (int i = n - 2; i >= 0; --i) {
      dp[i] -= cp[i] * dp[i + 1];
      g[i + 1] += dp[i];
    }
  }
  return bvp_residual(g, lambda);
}

}  // namespace

std::vector<ElSolution> euler_lagrange_solutions(double lambda, int m) {
  require(std::isfinite(lambda) && lambda > 0.0,
          "euler_lagrange_solutions: lambda must be positive");
  require(m >= 64, "euler_lagrange_solutions: need m >= 64");
  const int q = (10000 + m - 1) / m;  // >= 1e4 integrator substeps in total

  std::vector<ElSolution> sols;
  ElSolution zero;
  zero.samples = Array::Zero(m + 1);
  zero.branch = "zero";
  zero.residual = 0.0;
  sols.push_back(std::move(zero));

  const double pi = std::numbers::pi;
  if (lambda <= pi * pi) return sols;  // below the first bifurcation

  // scan the initial slope for a sign change of the terminal value; the
  // energy bound for arcs staying inside |x| < 1 caps the slope at
  // sqrt(lambda/2)
  const double a_max = std::sqrt(lambda / 2.0);
  const int n_scan = 64;
  double lo = 0.0, hi = 0.0, flo = 0.0, fhi = 0.0;
  bool found = false;
  double prev_a = a_max * 1e-4;
  double prev_f = shoot(lambda, prev_a, m, q, nullptr);
  for (int i = 1; i <= n_scan && !found; ++i) {
    const double frac = 1e-4 + (1.0 - 2e-4) * static_cast<double>(i) / n_scan;
    const double a = a_max * frac;
    const double fa = shoot(lambda, a, m, q, nullptr);
    if ((prev_f < 0.0) != (fa < 0.0)) {
      lo = prev_a;
      flo = prev_f;
      hi = a;
      fhi = fa;
      found = true;
    }
    prev_a = a;
    prev_f = fa;
  }
  if (!found) return sols;  // no bracket: only the zero branch exists

  // secant iteration on the bracket, falling back to bisection whenever the
  // secant step leaves it
  double a0 = lo, f0 = flo, a1 = hi, f1 = fhi;
  for (int it = 0; it < 80; ++it) {
    double a2 = (f1 != f0) ? a1 - f1 * (a1 - a0) / (f1 - f0) : 0.5 * (lo + hi);
    if (!std::isfinite(a2) || !(a2 > lo && a2 < hi)) a2 = 0.5 * (lo + hi);
    const double f2 = shoot(lambda, a2, m, q, nullptr);
    if ((f2 < 0.0) == (flo < 0.0)) {
      lo = a2;
      flo = f2;
    } else {
      hi = a2;
      fhi = f2;
    }
    a0 = a1;
    f0 = f1;
    a1 = a2;
    f1 = f2;
    if (std::abs(f2) < 1e-13 || hi - lo < 1e-15 * a_max) break;
  }

  ElSolution plus;
  plus.samples = Array(m + 1);
  shoot(lambda, a1, m, q, &plus.samples);
  plus.samples[0] = 0.0;
  plus.samples[m] = 0.0;
  plus.residual = newton_polish(plus.samples, lambda);
  if (plus.residual > 1e-8 * (1.0 + lambda))
    throw std::runtime_error(
        "euler_lagrange_solutions: Newton refinement did not reach tolerance");
  if (plus.samples.maxCoeff() < -plus.samples.minCoeff())
    plus.samples = -plus.samples;  // orient the labelled branch upward
  plus.branch = "positive";

  ElSolution minus;
  minus.samples = -plus.samples;
  minus.branch = "negative";
  minus.residual = plus.residual;

  sols.push_back(std::move(plus));
  sols.push_back(std::move(minus));
  return sols;
}

double l2_error_to_minimizer(const Array& x,
                             const std::vector<ElSolution>& sols) {
  const ElSolution* first = nullptr;
  for (const auto& s : sols)
    if (s.branch != "zero") {
      first = &s;
      break;
    }
  if (!first)
    throw std::domain_error("l2_error_to_minimizer: no nonzero branch");
  const auto m = static_cast<int>(first->samples.size()) - 1;
  const Array g = to_grid(x, m);
  double best = std::numeric_limits<double>::infinity();
  for (const auto& s : sols) {
    if (s.branch == "zero") continue;
    require(s.samples.size() == g.size(),
            "l2_error_to_minimizer: branches on different grids");
    best = std::min(best, std::sqrt(trapezoid((g - s.samples).square())));
  }
  return best;
}

double grid_energy(const Array& samples, double lambda) {
  require(std::isfinite(lambda) && lambda > 0.0,
          "grid_energy: lambda must be positive");
  require(samples.size() >= 2, "grid_energy: need at least two samples");
  const auto m = static_cast<int>(samples.size()) - 1;
  const double h = 1.0 / m;
  double dirichlet = 0.0;
  for (int i = 0; i < m; ++i) {
    const double d = (samples[i + 1] - samples[i]) / h;
    dirichlet += 0.5 * d * d * h;
  }
  const double well =
      0.25 * lambda * trapezoid((samples.square() - 1.0).square());
  return dirichlet + well;
}

bool plateau_ok(const std::vector<double>& errors) {
  require(errors.size() >= 8, "plateau_ok: need at least 8 samples");
  const std::size_t q = std::max<std::size_t>(4, errors.size() / 4);
  const std::size_t start = errors.size() - q;
  const std::size_t half = q / 2;
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = start; i < start + half; ++i) ma += errors[i];
  for (std::size_t i = start + half; i < errors.size(); ++i) mb += errors[i];
  ma /= static_cast<double>(half);
  mb /= static_cast<double>(q - half);
  // 0.5 sits near 3 sigma of plateau autocorrelation noise at the default
  // snapshot counts; genuine transients trend far more than 50% per quarter
  return std::abs(mb - ma) <= 0.5 * std::abs(ma) + 1e-12;
}

TauScalingResult tau_scaling_experiment(double lambda,
                                        const std::vector<double>& taus,
                                        double delta, long long n_steps,
                                        int n_replicas, int n_modes,
                                        const RngStream& base) {
  require(std::isfinite(lambda) && lambda > 0.0,
          "tau_scaling_experiment: lambda must be positive");
  require(!taus.empty(), "tau_scaling_experiment: need temperatures");
  for (double t : taus)
    require(std::isfinite(t) && t > 0.0,
            "tau_scaling_experiment: temperatures must be positive");
  require(std::isfinite(delta) && delta > 0.0 && delta < 0.5,
          "tau_scaling_experiment: delta must lie in (0, 1/2)");
  require(n_steps >= 16, "tau_scaling_experiment: need n_steps >= 16");
  require(n_replicas >= 1, "tau_scaling_experiment: need replicas");
  require(n_modes >= 4, "tau_scaling_experiment: need at least 4 modes");

  const int m = std::max(64, default_grid_size(n_modes));
  const auto sols = euler_lagrange_solutions(lambda, m);
  const DoubleWell well(lambda);
  const CovarianceSpectrum spec = brownian_bridge_spectrum(n_modes);
  const Array x0 = Array::Zero(n_modes);
  const int stride = static_cast<int>(std::max<long long>(1, n_steps / 512));

  TauScalingResult out;
  std::vector<std::pair<double, double>> pts;
  for (std::size_t ti = 0; ti < taus.size(); ++ti) {
    const double tau = taus[ti];
    std::vector<double> plateau_means;
    for (int r = 0; r < n_replicas; ++r) {
      RngStream rng(base.seed(),
                    base.stream_id() * 1000003ULL +
                        static_cast<std::uint64_t>(ti) *
                            static_cast<std::uint64_t>(n_replicas) +
                        static_cast<std::uint64_t>(r) + 1ULL);
      const Trajectory traj = detail::run_loop(
          x0, well, spec, delta, [tau](long long) { return tau; }, n_steps,
          stride, rng);
      std::vector<double> errs;
      errs.reserve(traj.states.size());
      for (const auto& st : traj.states)
        errs.push_back(l2_error_to_minimizer(st, sols));
      if (!plateau_ok(errs)) continue;
      double sum = 0.0;
      int cnt = 0;
      for (std::size_t i = 0; i < traj.states.size(); ++i) {
        if (2 * traj.snapshot_steps[i] >= n_steps) {
          sum += errs[i];
          ++cnt;
        }
      }
      plateau_means.push_back(sum / static_cast<double>(cnt));
    }
    TauScalingPoint pt;
    pt.tau = tau;
    pt.replicas_used = static_cast<int>(plateau_means.size());
    pt.plateau_ok = pt.replicas_used >= 1 && 2 * pt.replicas_used >= n_replicas;
    if (!plateau_means.empty()) {
      double mean = 0.0;
      for (double v : plateau_means) mean += v;
      mean /= static_cast<double>(plateau_means.size());
      double var = 0.0;
      for (double v : plateau_means) var += (v - mean) * (v - mean);
      pt.mean_error = mean;
      pt.std_error =
          plateau_means.size() > 1
              ? std::sqrt(var / (static_cast<double>(plateau_means.size()) - 1.0) /
                          static_cast<double>(plateau_means.size()))
              : 0.0;
    }
    if (pt.plateau_ok) pts.emplace_back(tau, pt.mean_error);
    out.points.push_back(pt);
  }
  out.fit = fit_order(pts);
  return out;
}

}  // namespace pcn
