#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "pcn/gaussian.hpp"
#include "pcn/spectral.hpp"

using namespace pcn;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("mode_powers") {
  const Array p = mode_powers(4, 2.0);
  CHECK(p.size() == 4);
  CHECK(p(0) == doctest::Approx(1.0));
  CHECK(p(3) == doctest::Approx(16.0));
  CHECK_THROWS_AS(mode_powers(0, 1.0), std::invalid_argument);
}

TEST_CASE("sobolev norm closed forms") {
  Array x(2);
  x << 3.0, 4.0;
  CHECK(sobolev_norm(x, 0.0) == doctest::Approx(5.0).epsilon(1e-15));

  Array y(2);
  y << 1.0, 1.0;
  // 1^1 * 1 + 2^1 * 1 = 3 at r = 1/2
  CHECK(sobolev_norm(y, 0.5) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-15));
  // weights j^{-2} give 1 + 1/4
  CHECK(sobolev_norm(y, -1.0) ==
        doctest::Approx(std::sqrt(1.25)).epsilon(1e-15));
}

TEST_CASE("covariance spectrum validation") {
  Array good(3);
  good << 1.0, 0.5, 1.0 / 3.0;
  CHECK_NOTHROW(CovarianceSpectrum(good, 1.0));

  // kappa must exceed 1/2 (trace-class envelope)
  CHECK_THROWS_AS(CovarianceSpectrum(good, 0.5), std::invalid_argument);

  // eigenvalues must be positive
  Array bad = good;
  bad(1) = 0.0;
  CHECK_THROWS_AS(CovarianceSpectrum(bad, 1.0), std::invalid_argument);

  // two-sided envelope c1 j^-kappa <= lambda_j <= c2 j^-kappa
  Array outlier = good;
  outlier(2) = 3.0;  // far above c2 * 3^-1
  CHECK_THROWS_AS(CovarianceSpectrum(outlier, 1.0), std::invalid_argument);

  CHECK_THROWS_AS(CovarianceSpectrum(Array(), 1.0), std::invalid_argument);
}

TEST_CASE("brownian bridge spectrum") {
  const CovarianceSpectrum spec = brownian_bridge_spectrum(100);
  CHECK(spec.modes() == 100);
  CHECK(spec.kappa() == doctest::Approx(1.0));
  for (int j : {1, 7, 100}) {
    CHECK(spec.lambda()(j - 1) ==
          doctest::Approx(1.0 / (kPi * j)).epsilon(1e-15));
  }
}

TEST_CASE("covariance powers") {
  const CovarianceSpectrum spec = brownian_bridge_spectrum(8);
  Array x(8);
  for (int j = 0; j < 8; ++j) x(j) = 1.0 + j;

  // p = 0 is the identity
  CHECK(((apply_c_power(x, spec, 0.0) - x).abs().maxCoeff()) == 0.0);

  // C x multiplies mode j by lambda_j^2
  const Array cx = apply_c_power(x, spec, 1.0);
  CHECK(cx(2) == doctest::Approx(x(2) / (9.0 * kPi * kPi)).epsilon(1e-14));

  // group law C^a (C^b x) = C^{a+b} x
  const Array lhs = apply_c_power(apply_c_power(x, spec, 0.75), spec, -0.25);
  const Array rhs = apply_c_power(x, spec, 0.5);
  CHECK((lhs - rhs).abs().maxCoeff() < 1e-14);

  // Cameron-Martin weighting inverts the half power
  const Array back = apply_c_power(apply_c_power(x, spec, 0.5), spec, -0.5);
  CHECK((back - x).abs().maxCoeff() < 1e-12);

  Array wrong(3);
  wrong << 1, 2, 3;
  CHECK_THROWS_AS(apply_c_power(wrong, spec, 1.0), std::invalid_argument);
}

TEST_CASE("covariance trace") {
  const CovarianceSpectrum spec = brownian_bridge_spectrum(100);
  // sum over j <= 2 of 1/(pi j)^2 = (1 + 1/4)/pi^2
  CHECK(covariance_trace(spec, 0.0, 2) ==
        doctest::Approx(0.12665147955292222).epsilon(1e-15));
  CHECK(covariance_trace(spec, 0.0, 100) ==
        doctest::Approx(0.16565850400289914).epsilon(1e-15));
  // j^2 lambda_j^2 = 1/pi^2, so the r = 1 trace over n modes is n/pi^2
  CHECK(covariance_trace(spec, 1.0, 5) ==
        doctest::Approx(5.0 / (kPi * kPi)).epsilon(1e-14));
  CHECK_THROWS_AS(covariance_trace(spec, 0.0, 0), std::invalid_argument);
  CHECK_THROWS_AS(covariance_trace(spec, 0.0, 101), std::invalid_argument);
}

TEST_CASE("grid synthesis of a single mode") {
  const int m = 16;
  Array e1 = Array::Zero(4);
  e1(0) = 1.0;
  const Array g = to_grid(e1, m);
  CHECK(g.size() == m + 1);
  CHECK(g(0) == 0.0);
  CHECK(g(m) == 0.0);
  // midpoint of sqrt(2) sin(pi s) is sqrt(2)
  CHECK(g(m / 2) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  // the mode-2 coefficient of that grid function vanishes
  const Array c = to_spectral(g, 2);
  CHECK(c(0) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(std::abs(c(1)) < 1e-13);
}

TEST_CASE("round trip and Parseval") {
  const int n = 12, m = 48;
  RngStream rng(11, 0);
  Array x(n);
  for (int j = 0; j < n; ++j) x(j) = rng.normal();

  const Array g = to_grid(x, m);
  const Array back = to_spectral(g, n);
  CHECK((back - x).abs().maxCoeff() < 1e-12);

  // discrete Parseval: the rectangle rule of the squared field equals the
  // coefficient energy because the grid keeps the sine system orthonormal
  const double l2sq = trapezoid(g.square());
  CHECK(l2sq == doctest::Approx(x.square().sum()).epsilon(1e-12));

  CHECK_THROWS_AS(to_grid(x, 2 * n - 1), std::invalid_argument);
  CHECK_THROWS_AS(to_spectral(g, m / 2 + 1), std::invalid_argument);
}

TEST_CASE("trapezoid rule") {
  // linear function: trapezoid is exact
  const int m = 10;
  Array f(m + 1);
  for (int i = 0; i <= m; ++i) f(i) = 2.0 * i / m;
  CHECK(trapezoid(f) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("shared transform instances") {
  const auto a = SineTransform::get(8, 32);
  const auto b = SineTransform::get(8, 32);
  CHECK(a.get() == b.get());
  CHECK(a->n_modes() == 8);
  CHECK(a->grid_m() == 32);
}
