#include "pcn/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "json.hpp"

namespace pcn {

double quadratic_variation(const Array& x, const CovarianceSpectrum& spec,
                           int n_qv) {
  require(x.size() == spec.modes(),
          "quadratic_variation: state dimension differs from spectrum");
  require(n_qv >= 1 && n_qv <= spec.modes(),
          "quadratic_variation: n_qv must lie in [1, N]");
  return (x.head(n_qv) / spec.lambda().head(n_qv)).square().mean();
}

double qv_additivity_residual(const Array& x, double alpha,
                              const CovarianceSpectrum& spec, int n_qv,
                              RngStream& rng) {
  require(std::isfinite(alpha), "qv_additivity_residual: alpha must be finite");
  const Array xi = sample_gaussian(spec, spec.modes(), 1.0, rng);
  const double before = quadratic_variation(x, spec, n_qv);
  const double after = quadratic_variation(x + alpha * xi, spec, n_qv);
  return std::abs(after - before - alpha * alpha);
}

double QvSeries::value_at(double t) const {
  require(times.size() >= 1 && times.size() == values.size(),
          "QvSeries: malformed series");
  if (!(t >= times.front() && t <= times.back()))
    throw std::domain_error("QvSeries: time outside sampled range");
  const auto it = std::upper_bound(times.begin(), times.end(), t);
  if (it == times.end()) return values.back();
  const auto hi = static_cast<std::size_t>(it - times.begin());
  if (hi == 0) return values.front();
  const std::size_t lo = hi - 1;
  const double span = times[hi] - times[lo];
  if (span <= 0.0) return values[lo];
  const double theta = (t - times[lo]) / span;
  return (1.0 - theta) * values[lo] + theta * values[hi];
}

QvSeries qv_series(const Trajectory& traj, const CovarianceSpectrum& spec,
                   int n_qv) {
  require(n_qv >= 1 && n_qv <= spec.modes(),
          "qv_series: n_qv must lie in [1, N]");
  QvSeries series;
  series.n_qv = n_qv;
  if (n_qv == traj.n_qv &&
      traj.qv.size() == static_cast<std::size_t>(traj.n_steps) + 1) {
    series.times.resize(traj.qv.size());
    for (std::size_t k = 0; k < traj.qv.size(); ++k)
      series.times[k] = traj.delta * static_cast<double>(k);
    series.values = traj.qv;
    return series;
  }
  require(traj.states.size() == traj.snapshot_steps.size(),
          "qv_series: malformed trajectory");
  series.times.reserve(traj.states.size());
  series.values.reserve(traj.states.size());
  for (std::size_t i = 0; i < traj.states.size(); ++i) {
    series.times.push_back(traj.delta *
                           static_cast<double>(traj.snapshot_steps[i]));
    series.values.push_back(quadratic_variation(traj.states[i], spec, n_qv));
  }
  return series;
}

QvSeries average_qv_series(const std::vector<QvSeries>& replicas) {
  require(!replicas.empty(), "average_qv_series: need at least one series");
  QvSeries mean = replicas.front();
  for (std::size_t r = 1; r < replicas.size(); ++r) {
    const QvSeries& s = replicas[r];
    require(s.times == mean.times && s.n_qv == mean.n_qv,
            "average_qv_series: replicas must share sample times and n_qv");
    for (std::size_t k = 0; k < mean.values.size(); ++k)
      mean.values[k] += s.values[k];
  }
  const double inv = 1.0 / static_cast<double>(replicas.size());
  for (double& v : mean.values) v *= inv;
  return mean;
}

double fluid_limit_sup_error(const QvSeries& series, double tau,
                             double horizon) {
  require(!series.times.empty(), "fluid_limit_sup_error: empty series");
  require(std::isfinite(tau) && std::isfinite(horizon) && horizon >= 0.0,
          "fluid_limit_sup_error: bad tau or horizon");
  require(horizon <= series.times.back(),
          "fluid_limit_sup_error: horizon beyond series end");
  const double v0 = series.values.front();
  double sup = 0.0;
  for (std::size_t k = 0; k < series.times.size(); ++k) {
    const double t = series.times[k];
    if (t > horizon) break;
    sup = std::max(sup,
                   std::abs(series.values[k] - fluid_ode_solution(v0, tau, t)));
  }
  sup = std::max(sup, std::abs(series.value_at(horizon) -
                               fluid_ode_solution(v0, tau, horizon)));
  return sup;
}

double accepted_moves_gap(const Trajectory& traj) {
  long long accepted = 0;
  long long max_gap = 0;
  for (std::size_t k = 0; k < traj.flags.size(); ++k) {
    accepted += traj.flags[k];
    const long long gap = static_cast<long long>(k) + 1 - accepted;
    max_gap = std::max(max_gap, gap);
  }
  return traj.delta * static_cast<double>(max_gap);
}

OrderFit fit_order(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 3)
    throw std::domain_error("fit_order: need at least 3 points");
  OrderFit fit;
  for (const auto& [x, y] : points) {
    if (!(x > 0.0) || !(y > 0.0) || !std::isfinite(x) || !std::isfinite(y))
      throw std::domain_error("fit_order: points must be positive and finite");
    fit.log_x.push_back(std::log(x));
    fit.log_y.push_back(std::log(y));
  }
  const auto n = static_cast<double>(points.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    mx += fit.log_x[i];
    my += fit.log_y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    sxx += (fit.log_x[i] - mx) * (fit.log_x[i] - mx);
    sxy += (fit.log_x[i] - mx) * (fit.log_y[i] - my);
  }
  if (!(sxx > 0.0))
    throw std::domain_error("fit_order: abscissae must not coincide");
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double r = fit.log_y[i] - (fit.intercept + fit.slope * fit.log_x[i]);
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / n);
  return fit;
}

bool DiagnosticReport::all_pass() const {
  for (const auto& [name_, ok] : passes)
    if (!ok) return false;
  return true;
}

std::string DiagnosticReport::to_json() const {
  nlohmann::ordered_json j;
  j["name"] = name;
  j["parameters"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : parameters) j["parameters"][k] = v;
  j["residuals"] = nlohmann::ordered_json::array();
  for (const auto& [k, v] : residuals)
    j["residuals"].push_back({{"name", k}, {"value", v}});
  if (fit) {
    j["fit"] = {{"slope", fit->slope},
                {"intercept", fit->intercept},
                {"residual", fit->residual}};
  } else {
    j["fit"] = nullptr;
  }
  j["passes"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : passes) j["passes"][k] = v;
  j["all_pass"] = all_pass();
  return j.dump(2);
}

DiagnosticReport invariance_surrogates(const Potential& p,
                                       const PcnParams& params,
                                       const Trajectory& traj, double epsilon) {
  require(traj.stride == 1, "invariance_surrogates: needs a stride-1 trajectory");
  require(std::isfinite(epsilon) && epsilon > 0.0,
          "invariance_surrogates: epsilon must be positive");
  const int n = params.n_modes();
  require(n >= 5, "invariance_surrogates: need at least 5 modes");
  require(traj.states.size() ==
              static_cast<std::size_t>(traj.n_steps) + 1,
          "invariance_surrogates: trajectory is missing states");

  const double delta = params.delta();
  const double tau = params.tau();
  const double s = p.sobolev_index();
  const double horizon = traj.horizon();
  const Array w = mode_powers(n, 2.0 * s);
  const double trace = covariance_trace(params.spec(), s, n);
  const double scale = 1.0 / std::sqrt(2.0 * tau * delta);
  const double threshold = epsilon / delta;

  static constexpr int kPairs[4][2] = {{1, 1}, {1, 2}, {2, 2}, {5, 5}};
  double pair_sums[4] = {0.0, 0.0, 0.0, 0.0};
  double sum_sq = 0.0;
  double lindeberg = 0.0;

  Array gamma(n);
  for (long long k = 0; k < traj.n_steps; ++k) {
    const Array& x = traj.states[static_cast<std::size_t>(k)];
    const Array& x1 = traj.states[static_cast<std::size_t>(k) + 1];
    gamma = scale * (x1 - x - delta * drift(p, params.spec(), x));
    const double g2 = (w * gamma.square()).sum();
    sum_sq += g2;
    if (g2 > threshold) lindeberg += g2;
    for (int q = 0; q < 4; ++q) {
      const int i = kPairs[q][0], j = kPairs[q][1];
      pair_sums[q] += std::pow(static_cast<double>(i), s) * gamma[i - 1] *
                      std::pow(static_cast<double>(j), s) * gamma[j - 1];
    }
  }

  const double target_trace = horizon * trace;
  const double trace_rel = std::abs(delta * sum_sq - target_trace) / target_trace;
  const double lindeberg_rel = delta * lindeberg / target_trace;

  DiagnosticReport rep;
  rep.name = "invariance_surrogates";
  rep.parameters = {{"delta", delta},
                    {"tau", tau},
                    {"epsilon", epsilon},
                    {"n_steps", static_cast<double>(traj.n_steps)},
                    {"n_modes", static_cast<double>(n)},
                    {"sobolev_index", s},
                    {"horizon", horizon}};
  rep.residuals.emplace_back("trace", trace_rel);

  const Array& lambda = params.spec().lambda();
  for (int q = 0; q < 4; ++q) {
    const int i = kPairs[q][0], j = kPairs[q][1];
    const double empirical = delta * pair_sums[q];
    const double diag_i = std::pow(static_cast<double>(i), 2.0 * s) *
                          lambda[i - 1] * lambda[i - 1];
    const double diag_j = std::pow(static_cast<double>(j), 2.0 * s) *
                          lambda[j - 1] * lambda[j - 1];
    double rel;
    if (i == j) {
      rel = std::abs(empirical - horizon * diag_i) / (horizon * diag_i);
    } else {
      rel = std::abs(empirical) / (horizon * std::sqrt(diag_i * diag_j));
    }
    rep.residuals.emplace_back(
        "pair_" + std::to_string(i) + "_" + std::to_string(j), rel);
  }
  rep.residuals.emplace_back("lindeberg", lindeberg_rel);

  // fixed acceptance bands (artifact policy, not an asymptotic claim)
  rep.passes.emplace_back("trace", trace_rel <= 0.1);
  for (std::size_t q = 1; q <= 4; ++q)
    rep.passes.emplace_back(rep.residuals[q].first,
                            rep.residuals[q].second <= 0.2);
  rep.passes.emplace_back("lindeberg", lindeberg_rel <= 0.01);
  return rep;
}

namespace {

StationaryMoments finish_batches(const Eigen::MatrixXd& batch_means) {
  const auto b = static_cast<double>(batch_means.cols());
  const Eigen::VectorXd row_mean = batch_means.rowwise().mean();
  const Eigen::MatrixXd centered = batch_means.colwise() - row_mean;
  StationaryMoments out;
  out.second_moment = row_mean.array();
  out.std_error =
      (centered.array().square().rowwise().sum() / ((b - 1.0) * b)).sqrt();
  return out;
}

void validate_moment_args(Eigen::Index state_size, int n_modes,
                          long long n_steps, long long burn_in,
                          int n_batches) {
  require(state_size == n_modes,
          "second_moments: state dimension differs from spectrum");
  require(burn_in >= 0 && n_steps > burn_in,
          "second_moments: need n_steps > burn_in >= 0");
  require(n_batches >= 2 && n_steps - burn_in >= n_batches,
          "second_moments: need at least n_batches post-burn-in steps");
}

}  // namespace

StationaryMoments pcn_second_moments(const Potential& p,
                                     const PcnParams& params,
                                     const Array& initial, long long n_steps,
                                     long long burn_in, int n_batches) {
  const int n = params.n_modes();
  validate_moment_args(initial.size(), n, n_steps, burn_in, n_batches);
  RngStream rng = params.make_stream();
  const double a = params.contraction();
  const double b = params.noise_scale();
  const double tau = params.tau();
  const long long n_post = n_steps - burn_in;

  Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(n, n_batches);
  std::vector<long long> counts(static_cast<std::size_t>(n_batches), 0);

  Array x = initial, xi(n), y(n);
  double psi_x = p.value(x);
  for (long long k = 0; k < n_steps; ++k) {
    sample_gaussian_into(xi, params.spec(), n, 1.0, rng);
    y = a * x + b * xi;
    const double psi_y = p.value(y);
    double alpha = 1.0;
    if (psi_y > psi_x) alpha = std::exp(std::max(-(psi_y - psi_x) / tau, -745.0));
    if (rng.uniform() < alpha) {
      x.swap(y);
      psi_x = psi_y;
    }
    if (k >= burn_in) {
      const auto idx = static_cast<std::size_t>(
          (k - burn_in) * n_batches / n_post);
      sums.col(static_cast<Eigen::Index>(idx)) += x.square().matrix();
      counts[idx] += 1;
    }
  }
  Eigen::MatrixXd means(n, n_batches);
  for (int c = 0; c < n_batches; ++c)
    means.col(c) = sums.col(c) / static_cast<double>(counts[static_cast<std::size_t>(c)]);
  return finish_batches(means);
}

StationaryMoments em_second_moments(const Potential& p, const SdeParams& params,
                                    const Array& initial, long long n_steps,
                                    long long burn_in, int n_batches,
                                    RngStream& rng) {
  const int n = params.n_modes();
  validate_moment_args(initial.size(), n, n_steps, burn_in, n_batches);
  const double dt = params.dt();
  const Array c2 = params.spec().lambda().square();
  const Array noise_sd =
      std::sqrt(2.0 * params.tau() * dt) * params.spec().lambda();
  const long long n_post = n_steps - burn_in;

  Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(n, n_batches);
  std::vector<long long> counts(static_cast<std::size_t>(n_batches), 0);

  Array z = initial;
  for (long long k = 0; k < n_steps; ++k) {
    z += dt * (-z - c2 * p.grad(z));
    for (int j = 0; j < n; ++j) z[j] += noise_sd[j] * rng.normal();
    if (k >= burn_in) {
      const auto idx = static_cast<std::size_t>(
          (k - burn_in) * n_batches / n_post);
      sums.col(static_cast<Eigen::Index>(idx)) += z.square().matrix();
      counts[idx] += 1;
    }
  }
  Eigen::MatrixXd means(n, n_batches);
  for (int c = 0; c < n_batches; ++c)
    means.col(c) = sums.col(c) / static_cast<double>(counts[static_cast<std::size_t>(c)]);
  return finish_batches(means);
}

}  // namespace pcn
