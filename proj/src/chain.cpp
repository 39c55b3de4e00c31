#include "pcn/chain.hpp"

#include <cmath>
#include <utility>

namespace pcn {

namespace {

// V_N(x) = (1/N) sum_j (x_j / lambda_j)^2 over all retained modes
double qv_all_modes(const Array& x, const Array& inv_lambda_sq) {
  return (x.square() * inv_lambda_sq).mean();
}

double clamped_acceptance(double psi_x, double psi_y, double tau) {
  double expo = -(psi_y - psi_x) / tau;
  if (expo >= 0.0) return 1.0;
  if (expo < -745.0) expo = -745.0;  // exp underflow floor for doubles
  return std::exp(expo);
}

}  // namespace

PcnParams::PcnParams(double delta, double tau, CovarianceSpectrum spec,
                     std::uint64_t seed, std::uint64_t stream_id)
    : delta_(delta),
      tau_(tau),
      spec_(std::move(spec)),
      seed_(seed),
      stream_id_(stream_id) {
  require(std::isfinite(delta_) && delta_ > 0.0 && delta_ < 0.5,
          "PcnParams: delta must lie in (0, 1/2)");
  require(std::isfinite(tau_) && tau_ > 0.0,
          "PcnParams: temperature must be positive");
}

double PcnParams::contraction() const { return std::sqrt(1.0 - 2.0 * delta_); }

double PcnParams::noise_scale() const {
  return std::sqrt(2.0 * delta_ * tau_);
}

ChainState make_chain_state(Array x0, const PcnParams& params) {
  require(x0.size() == params.n_modes(),
          "make_chain_state: state dimension differs from spectrum");
  require(x0.allFinite(), "make_chain_state: non-finite coefficient");
  ChainState st;
  st.x = std::move(x0);
  const Array inv_l2 = params.spec().lambda().square().inverse();
  st.qv_partial = qv_all_modes(st.x, inv_l2);
  return st;
}

Proposal propose(const Array& x, const PcnParams& params, RngStream& rng) {
  require(x.size() == params.n_modes(),
          "propose: state dimension differs from spectrum");
  Proposal pr;
  pr.xi = sample_gaussian(params.spec(), params.n_modes(), 1.0, rng);
  pr.y = params.contraction() * x + params.noise_scale() * pr.xi;
  return pr;
}

double acceptance_prob(const Potential& p, const Array& x, const Array& y,
                       double tau) {
  require(std::isfinite(tau) && tau > 0.0,
          "acceptance_prob: temperature must be positive");
  return clamped_acceptance(p.value(x), p.value(y), tau);
}

ChainState step(const ChainState& state, const Potential& p,
                const PcnParams& params, RngStream& rng) {
  ChainState next = state;
  const Proposal pr = propose(state.x, params, rng);
  const double alpha = acceptance_prob(p, state.x, pr.y, params.tau());
  const double u = rng.uniform();
  next.k += 1;
  if (u < alpha) {
    next.x = pr.y;
    next.accepted += 1;
    const Array inv_l2 = params.spec().lambda().square().inverse();
    next.qv_partial = qv_all_modes(next.x, inv_l2);
  }
  return next;
}

namespace detail {

Trajectory run_loop(const Array& initial, const Potential& p,
                    const CovarianceSpectrum& spec, double delta,
                    const std::function<double(long long)>& tau_at,
                    long long n_steps, int stride, RngStream& rng) {
  require(n_steps >= 1, "run: need at least one step");
  require(stride >= 1, "run: stride must be >= 1");
  require(initial.size() == spec.modes(),
          "run: state dimension differs from spectrum");
  const int n = spec.modes();
  const double a = std::sqrt(1.0 - 2.0 * delta);
  const Array inv_l2 = spec.lambda().square().inverse();

  Trajectory traj;
  traj.delta = delta;
  traj.stride = stride;
  traj.n_steps = n_steps;
  traj.n_qv = n;
  traj.flags.reserve(static_cast<std::size_t>(n_steps));
  traj.qv.reserve(static_cast<std::size_t>(n_steps) + 1);

  Array x = initial;
  double psi_x = p.value(x);
  double qv = qv_all_modes(x, inv_l2);
  traj.qv.push_back(qv);
  traj.snapshot_steps.push_back(0);
  traj.states.push_back(x);

  Array xi(n), y(n);
  for (long long k = 0; k < n_steps; ++k) {
    const double tau = tau_at(k);
    const double b = std::sqrt(2.0 * delta * tau);
    sample_gaussian_into(xi, spec, n, 1.0, rng);
    y = a * x + b * xi;
    const double psi_y = p.value(y);
    const double alpha = clamped_acceptance(psi_x, psi_y, tau);
    const double u = rng.uniform();
    std::uint8_t accepted = 0;
    if (u < alpha) {
      accepted = 1;
      x.swap(y);
      psi_x = psi_y;
      qv = qv_all_modes(x, inv_l2);
    }
    traj.flags.push_back(accepted);
    traj.qv.push_back(qv);
    const long long k1 = k + 1;
    if (k1 % stride == 0 || k1 == n_steps) {
      if (traj.snapshot_steps.back() != k1) {
        traj.snapshot_steps.push_back(k1);
        traj.states.push_back(x);
      }
    }
  }
  return traj;
}

}  // namespace detail

Trajectory run_chain(const Array& initial, const Potential& p,
                     const PcnParams& params, long long n_steps, int stride) {
  RngStream rng = params.make_stream();
  const double tau = params.tau();
  return detail::run_loop(
      initial, p, params.spec(), params.delta(),
      [tau](long long) { return tau; }, n_steps, stride, rng);
}

Array interpolate(const Trajectory& traj, double t) {
  require(traj.stride == 1,
          "interpolate: needs a stride-1 trajectory for exactness");
  const double horizon = traj.horizon();
  if (!(t >= 0.0 && t <= horizon))
    throw std::domain_error("interpolate: time outside trajectory horizon");
  const double pos = t / traj.delta;
  long long k = static_cast<long long>(std::floor(pos));
  if (k >= traj.n_steps) return traj.states.back();
  const double theta = pos - static_cast<double>(k);
  const auto ik = static_cast<std::size_t>(k);
  return (1.0 - theta) * traj.states[ik] + theta * traj.states[ik + 1];
}

Array empirical_drift(const Potential& p, const PcnParams& params,
                      const Array& x, long long n_mc, RngStream& rng,
                      DriftEstimator method) {
  require(n_mc >= 1000, "empirical_drift: need n_mc >= 1000");
  require(x.size() == params.n_modes(),
          "empirical_drift: state dimension differs from spectrum");
  const int n = params.n_modes();
  const double delta = params.delta();
  const double tau = params.tau();
  const double a = params.contraction();
  const double b = params.noise_scale();
  const double psi_x = p.value(x);

  Array xi(n), y(n);
  Array acc = Array::Zero(n);
  double acc_alpha = 0.0;
  for (long long i = 0; i < n_mc; ++i) {
    sample_gaussian_into(xi, params.spec(), n, 1.0, rng);
    y = a * x + b * xi;
    const double alpha = clamped_acceptance(psi_x, p.value(y), tau);
    if (method == DriftEstimator::sample_path) {
      const double u = rng.uniform();
      if (u < alpha) acc += (y - x);
    } else {
      acc_alpha += alpha;
      acc += (alpha - 1.0) * xi;
    }
  }
  if (method == DriftEstimator::sample_path)
    return acc / (static_cast<double>(n_mc) * delta);
  const double inv = 1.0 / static_cast<double>(n_mc);
  return ((a - 1.0) / delta) * (acc_alpha * inv) * x +
         std::sqrt(2.0 * tau / delta) * (acc * inv);
}

double linearized_acceptance(const Potential& p, const Array& x,
                             const Array& xi, const PcnParams& params) {
  require(x.size() == xi.size(), "linearized_acceptance: dimension mismatch");
  const double z = (p.grad(x) * xi).sum();
  if (z <= 0.0) return 1.0;
  return 1.0 - std::sqrt(2.0 * params.delta() / params.tau()) * z;
}

double empirical_noise_covariance(const Potential& p, const PcnParams& params,
                                  const Array& x, int i, int j, long long n_mc,
                                  RngStream& rng) {
  require(n_mc >= 10000, "empirical_noise_covariance: need n_mc >= 10^4");
  const int n = params.n_modes();
  require(x.size() == n,
          "empirical_noise_covariance: state dimension differs from spectrum");
  require(i >= 1 && i <= n && j >= 1 && j <= n,
          "empirical_noise_covariance: mode index out of range");
  const double delta = params.delta();
  const double tau = params.tau();
  const double a = params.contraction();
  const double b = params.noise_scale();
  const double psi_x = p.value(x);
  const double s = p.sobolev_index();

  Array xi(n), y(n);
  double si = 0.0, sj = 0.0, sij = 0.0;
  for (long long t = 0; t < n_mc; ++t) {
    sample_gaussian_into(xi, params.spec(), n, 1.0, rng);
    y = a * x + b * xi;
    const double alpha = clamped_acceptance(psi_x, p.value(y), tau);
    const double u = rng.uniform();
    const double gamma = (u < alpha) ? 1.0 : 0.0;
    const double di = gamma * ((a - 1.0) * x[i - 1] + b * xi[i - 1]);
    const double dj = gamma * ((a - 1.0) * x[j - 1] + b * xi[j - 1]);
    si += di;
    sj += dj;
    sij += di * dj;
  }
  const double nn = static_cast<double>(n_mc);
  const double cov = (sij - si * sj / nn) / (nn - 1.0);
  const double weight =
      std::pow(static_cast<double>(i), s) * std::pow(static_cast<double>(j), s);
  return weight * cov / (2.0 * tau * delta);
}

IdentityResidual acceptance_noise_identity(const Potential& p, const Array& x,
                                           const PcnParams& params,
                                           long long n_mc, RngStream& rng) {
  require(n_mc >= 10000, "acceptance_noise_identity: need n_mc >= 10^4");
  const int n = params.n_modes();
  require(x.size() == n,
          "acceptance_noise_identity: state dimension differs from spectrum");
  const double scale = std::sqrt(2.0 * params.tau() / params.delta());
  const double s = p.sobolev_index();
  const Array target = apply_c_power(p.grad(x), params.spec(), 1.0);

  Array xi(n);
  Array sum = Array::Zero(n), sumsq = Array::Zero(n);
  for (long long t = 0; t < n_mc; ++t) {
    sample_gaussian_into(xi, params.spec(), n, 1.0, rng);
    const double abar = linearized_acceptance(p, x, xi, params);
    sum += abar * xi;
    sumsq += (abar * xi).square();
  }
  const double nn = static_cast<double>(n_mc);
  const Array mean = scale * (sum / nn);
  const Array var = (sumsq - sum.square() / nn) / (nn - 1.0);
  const Array w = mode_powers(n, 2.0 * s);
  IdentityResidual out;
  out.residual = std::sqrt((w * (mean + target).square()).sum());
  out.std_error = std::sqrt((w * var).sum() * scale * scale / nn);
  return out;
}

}  // namespace pcn
