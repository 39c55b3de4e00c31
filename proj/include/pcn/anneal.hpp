#pragma once

#include <string>
#include <vector>

#include "pcn/chain.hpp"
#include "pcn/diagnostics.hpp"

// Simulated annealing over the Metropolis kernel, the reference two-point
// boundary-value solver for the double-well minimizers, and the sqrt(tau)
// fluctuation-scaling experiment.

namespace pcn {

// Temperature schedule tau_k, strictly positive and non-increasing.
// Geometric and logarithmic schedules are floored at the smallest normal
// double so tau_k never reaches zero.
class CoolingSchedule {
 public:
  enum class Kind { fixed, geometric, logarithmic };

  static CoolingSchedule fixed(double tau0);
  static CoolingSchedule geometric(double tau0, double rho);
  // tau_k = c / log(k + 2)
  static CoolingSchedule logarithmic(double c);

  Kind kind() const { return kind_; }
  double tau0() const { return tau0_; }
  double rho() const { return rho_; }
  double c() const { return c_; }
  double tau_at(long long k) const;

 private:
  CoolingSchedule(Kind kind, double tau0, double rho, double c);
  Kind kind_;
  double tau0_, rho_, c_;
};

// the annealing objective J(x) = (1/2)|C^{-1/2}x|^2 + Psi(x)
double objective(const Potential& p, const CovarianceSpectrum& spec,
                 const Array& x);

struct AnnealResult {
  Array final_state;
  Trajectory trajectory;
};

// Metropolis run with tau = tau_k at step k (both proposal scale and
// acceptance temperature); a fixed schedule reproduces the plain kernel
AnnealResult anneal(const Potential& p, const CovarianceSpectrum& spec,
                    const CoolingSchedule& schedule, double delta,
                    long long n_steps, const Array& initial, RngStream& rng,
                    int stride = 10);

// One solution of the two-point boundary-value problem
//   x'' + lambda * x * (1 - x^2) = 0,  x(0) = x(1) = 0
// sampled on the uniform grid s_i = i/m, i = 0..m.
struct ElSolution {
  Array samples;        // m+1 node values, endpoints exactly zero
  std::string branch;   // "zero", "positive" or "negative"
  double residual = 0;  // max-norm centered-difference residual
};

// Solves the boundary-value problem by shooting (4th-order Runge-Kutta on
// x'' = -lambda*x*(1-x^2) with secant root-finding on x(1)) followed by a
// Newton refinement of the centered-difference system, so every returned
// solution has discrete residual <= 1e-8 * (1 + lambda). Returns the zero
// branch always; the +/- branches (negatives of each other by construction)
// appear once lambda exceeds pi^2, the first bifurcation point.
std::vector<ElSolution> euler_lagrange_solutions(double lambda, int m);

// L^2 grid-quadrature distance from the field x to the nearest nonzero
// branch; the zero saddle is never a candidate. No nonzero branch -> domain
// error.
double l2_error_to_minimizer(const Array& x,
                             const std::vector<ElSolution>& sols);

// J evaluated on grid samples: piecewise-linear Dirichlet energy plus the
// trapezoid rule for (lambda/4) * int (x^2-1)^2. The zero function gives
// exactly lambda/4.
double grid_energy(const Array& samples, double lambda);

// trend test on an error series: the means of the two halves of the last
// quarter must agree to 50% relative. Used to detect runs still in their
// transient phase.
bool plateau_ok(const std::vector<double>& errors);

struct TauScalingPoint {
  double tau = 0;
  double mean_error = 0;  // plateau L^2 error averaged over used replicas
  double std_error = 0;
  int replicas_used = 0;
  bool plateau_ok = false;  // at least half the replicas reached a plateau
};

struct TauScalingResult {
  std::vector<TauScalingPoint> points;
  OrderFit fit;  // log mean_error vs log tau over the plateaued points
};

// For each temperature: n_replicas independent double-well runs started at
// zero, plateau error = post-burn-in mean of the L^2 distance to the nearest
// minimizer (burn-in = first half). Points whose runs have not plateaued are
// excluded from the fit; fewer than 3 surviving points -> domain error.
// Replica streams are derived deterministically from `base`.
TauScalingResult tau_scaling_experiment(double lambda,
                                        const std::vector<double>& taus,
                                        double delta, long long n_steps,
                                        int n_replicas, int n_modes,
                                        const RngStream& base);

}  // namespace pcn
