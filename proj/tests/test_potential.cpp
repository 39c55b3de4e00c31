#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "pcn/gaussian.hpp"
#include "pcn/potential.hpp"

using namespace pcn;

namespace {

constexpr double kPi = 3.14159265358979323846;

Array random_state(int n, std::uint64_t seed, double scale) {
  RngStream rng(seed, 0);
  Array x(n);
  for (int j = 0; j < n; ++j) x(j) = scale * rng.normal();
  return x;
}

// central finite difference of Psi along mode j
double fd_grad(const Potential& p, const Array& x, int j, double eps) {
  Array xp = x, xm = x;
  xp(j) += eps;
  xm(j) -= eps;
  return (p.value(xp) - p.value(xm)) / (2.0 * eps);
}

}  // namespace

TEST_CASE("zero potential") {
  ZeroPotential p;
  const Array x = random_state(8, 1, 1.0);
  CHECK(p.value(x) == 0.0);
  CHECK(p.grad(x).abs().maxCoeff() == 0.0);
  CHECK(p.sobolev_index() == 0.0);
  CHECK(p.label() == "zero");
}

TEST_CASE("diagonal quadratic closed forms") {
  DiagonalQuadratic p(0.25);
  CHECK(p.s() == 0.25);
  CHECK(p.label() == "diagonal_quadratic");

  Array x = Array::Zero(3);
  x << 1.0, 2.0, 0.5;
  // Psi = 1/2 sum j^{1/2} x_j^2
  const double expected =
      0.5 * (1.0 + std::sqrt(2.0) * 4.0 + std::sqrt(3.0) * 0.25);
  CHECK(p.value(x) == doctest::Approx(expected).epsilon(1e-15));

  const Array g = p.grad(x);
  CHECK(g(0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(g(1) == doctest::Approx(std::sqrt(2.0) * 2.0).epsilon(1e-15));

  // s = 0 reduces to Psi = |x|^2/2 with gradient x
  DiagonalQuadratic q(0.0);
  CHECK(q.value(x) == doctest::Approx(0.5 * x.square().sum()).epsilon(1e-15));
  CHECK((q.grad(x) - x).abs().maxCoeff() == 0.0);
}

TEST_CASE("quadratic taylor remainder is exactly one half") {
  // Psi(y) - Psi(x) - <grad, y-x> = 1/2 |y-x|^2 for the s = 0 quadratic,
  // and the ratio normalizes by the same norm
  DiagonalQuadratic p(0.0);
  const Array x = random_state(16, 3, 1.0);
  const Array y = random_state(16, 4, 0.5);
  CHECK(taylor_remainder_ratio(p, x, y) ==
        doctest::Approx(0.5).epsilon(1e-12));
  CHECK(taylor_remainder_ratio(p, x, x) == 0.0);
}

TEST_CASE("double well value at reference fields") {
  const double lambda = 2.0 * kPi * kPi;
  DoubleWell p(lambda);
  CHECK(p.lambda() == lambda);
  CHECK(p.label() == "double_well");
  CHECK(p.sobolev_index() == 0.25);

  // Psi(0) = (lambda/4) int (0 - 1)^2 = lambda/4, trapezoid-exact
  const Array zero = Array::Zero(32);
  CHECK(p.value(zero) == doctest::Approx(lambda / 4.0).epsilon(1e-13));
  CHECK(p.grad(zero).abs().maxCoeff() < 1e-12);

  CHECK_THROWS_AS(DoubleWell(-1.0), std::invalid_argument);
}

TEST_CASE("double well gradient against finite differences") {
  DoubleWell p(2.0 * kPi * kPi);
  const Array x = random_state(12, 9, 0.4);
  const Array g = p.grad(x);
  for (int j : {0, 1, 5, 11}) {
    const double fd = fd_grad(p, x, j, 1e-5);
    CHECK(g(j) == doctest::Approx(fd).epsilon(1e-6));
  }
}

TEST_CASE("diagonal quadratic gradient against finite differences") {
  DiagonalQuadratic p(0.25);
  const Array x = random_state(10, 21, 1.5);
  const Array g = p.grad(x);
  for (int j : {0, 3, 9}) {
    CHECK(g(j) == doctest::Approx(fd_grad(p, x, j, 1e-6)).epsilon(1e-7));
  }
}

TEST_CASE("double well taylor remainder stays bounded") {
  DoubleWell p(2.0 * kPi * kPi);
  const Array x = random_state(16, 30, 0.5);
  double worst = 0.0;
  for (int t = 0; t < 32; ++t) {
    const Array y = x + 0.1 * random_state(16, 40 + t, 1.0);
    worst = std::max(worst, taylor_remainder_ratio(p, x, y));
  }
  // second-order control on a bounded ball; constant is O(lambda * |x|^2)
  CHECK(worst < 500.0);
  CHECK(worst > 0.0);
}

TEST_CASE("limiting drift closed form") {
  const CovarianceSpectrum spec = brownian_bridge_spectrum(8);
  DiagonalQuadratic p(0.0);
  Array e1 = Array::Zero(8);
  e1(0) = 1.0;
  const Array d = drift(p, spec, e1);
  // d = -x - C grad Psi = -(1 + lambda_1^2) e_1
  CHECK(d(0) ==
        doctest::Approx(-(1.0 + 1.0 / (kPi * kPi))).epsilon(1e-14));
  for (int j = 1; j < 8; ++j) CHECK(d(j) == 0.0);

  // zero potential leaves pure -x
  ZeroPotential z;
  const Array dz = drift(z, spec, e1);
  CHECK((dz + e1).abs().maxCoeff() == 0.0);
}
