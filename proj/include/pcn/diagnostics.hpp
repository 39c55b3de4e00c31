#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pcn/chain.hpp"
#include "pcn/sde.hpp"

// Quadratic-variation computation, fluid-limit comparison, accepted-move
// accounting, invariance-principle surrogates, and order-of-convergence
// regression utilities.

namespace pcn {

// V_n(x) = (1/n) sum_{j<=n} (x_j / lambda_j)^2
double quadratic_variation(const Array& x, const CovarianceSpectrum& spec,
                           int n_qv);

// draws xi ~ N(0,C) and returns |V_n(x + alpha*xi) - V_n(x) - alpha^2|; the
// additivity V(x + alpha*xi) = V(x) + alpha^2 holds exactly only in the
// n_qv -> infinity limit, so the residual carries a chi-square band of width
// about sqrt(2/n_qv)
double qv_additivity_residual(const Array& x, double alpha,
                              const CovarianceSpectrum& spec, int n_qv,
                              RngStream& rng);

struct QvSeries {
  std::vector<double> times;   // t_k = delta * k
  std::vector<double> values;  // v(t_k) = V_n(x^k)
  int n_qv = 0;

  // piecewise-linear interpolant; t outside the sampled range -> domain error
  double value_at(double t) const;
};

// V_n evaluated along a trajectory. When n_qv equals the trajectory's cached
// mode count the per-step cache is used (one sample every step); otherwise
// V_n is recomputed from the stored snapshots.
QvSeries qv_series(const Trajectory& traj, const CovarianceSpectrum& spec,
                   int n_qv);

// pointwise mean of replica series sharing identical sample times
QvSeries average_qv_series(const std::vector<QvSeries>& replicas);

// sup_{t <= horizon} |v(t) - fluid_ode_solution(v(0), tau, t)|, the distance
// to the solution of v' = -2(v - tau) started from the series' first value
double fluid_limit_sup_error(const QvSeries& series, double tau,
                             double horizon);

// max over k of delta*(k - t(k)) where t(k) counts accepted moves among the
// first k steps; 0 exactly when every proposal is accepted, delta*n_steps in
// the all-rejected worst case
double accepted_moves_gap(const Trajectory& traj);

struct OrderFit {
  std::vector<double> log_x;
  std::vector<double> log_y;
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // rms misfit in log-log coordinates
};

// least-squares line through (log x, log y); the slope estimates the
// convergence order. Fewer than 3 points or nonpositive values -> domain error.
OrderFit fit_order(const std::vector<std::pair<double, double>>& points);

struct DiagnosticReport {
  std::string name;
  std::vector<std::pair<std::string, double>> parameters;
  std::vector<std::pair<std::string, double>> residuals;
  std::vector<std::pair<std::string, bool>> passes;
  std::optional<OrderFit> fit;

  bool all_pass() const;
  // JSON object with fields name, parameters, residuals, fit, passes
  std::string to_json() const;
};

// Finite-delta surrogates for the three conditions of the martingale
// invariance principle, computed from the rescaled one-step noise
//   Gamma^k = (x^{k+1} - x^k - delta*d(x^k)) / sqrt(2*tau*delta),
// d the limiting drift:
//   (1) delta * sum_k |Gamma^k|_s^2         vs  T * Trace_{H^s}(C_s)
//   (2) delta * sum_k (i^s Gamma_i)(j^s Gamma_j)  vs  T * delta_ij j^{2s} lambda_j^2
//       over the index pairs {(1,1),(1,2),(2,2),(5,5)}
//   (3) the Lindeberg sum delta * sum_k |Gamma^k|_s^2 1{|Gamma^k|_s^2 > eps/delta}
// Requires a stride-1 trajectory. s is the potential's Sobolev index.
DiagnosticReport invariance_surrogates(const Potential& p,
                                       const PcnParams& params,
                                       const Trajectory& traj, double epsilon);

struct StationaryMoments {
  Array second_moment;  // per-mode E[x_j^2] estimate
  Array std_error;      // batch-means standard error of that estimate
};

// long-run second moments of the Metropolis chain (batch means after burn-in)
StationaryMoments pcn_second_moments(const Potential& p,
                                     const PcnParams& params,
                                     const Array& initial, long long n_steps,
                                     long long burn_in, int n_batches);

// long-run second moments of the Euler-Maruyama discretization
StationaryMoments em_second_moments(const Potential& p, const SdeParams& params,
                                    const Array& initial, long long n_steps,
                                    long long burn_in, int n_batches,
                                    RngStream& rng);

}  // namespace pcn
