#include <doctest.h>

#include <cmath>
#include <numbers>

#include "clrlab/errors.hpp"
#include "clrlab/kernel.hpp"
#include "oracle.hpp"

using namespace clrlab;
using namespace clrlab::kernel;

namespace {
double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }
Point pt(std::initializer_list<double> v) {
  Point p(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) p[i++] = x;
  return p;
}
const double kPi = std::numbers::pi;
}  // namespace

TEST_CASE("symbol") {
  CHECK(symbol_h(pt({0.0})) == 0.0);
  CHECK(std::abs(symbol_h(pt({0.0, 0.0, std::sqrt(3.0)})) - 1.0) < 1e-15);
  CHECK(std::abs(symbol_h(pt({1.0, 1.0})) - (std::sqrt(3.0) - 1.0)) < 1e-15);
  CHECK(symbol_h(pt({0.3, -2.0})) == symbol_h(pt({-0.3, 2.0})));
  CHECK(rel(symbol_h(pt({1e-9})), 5e-19) < 1e-12);
}

TEST_CASE("free kernel at the origin, d = 3") {
  const double expected = 0.5 / (kPi * kPi) * std::exp(1.0) * oracle::bessel_k(2.0, 1.0);
  CHECK(rel(free_kernel(1.0, pt({0, 0, 0})), expected) < 1e-12);
}

TEST_CASE("free kernel against Fourier inversion, d = 1") {
  for (double t : {0.3, 1.0, 2.5}) {
    for (double x : {0.0, 0.4, 1.7, 5.0}) {
      const double upper = 80.0 / t;
      const double inv = oracle::tanh_sinh(
                             [&](double xi) {
                               return std::cos(xi * x) * std::exp(-t * (std::sqrt(1 + xi * xi) - 1));
                             },
                             0.0, upper, 1e-14) /
                         kPi;
      CAPTURE(t);
      CAPTURE(x);
      CHECK(rel(free_kernel(t, pt({x})), inv) < 1e-10);
    }
  }
}

TEST_CASE("free kernel shape") {
  const Point x = pt({0.3, -1.2, 0.8});
  CHECK(free_kernel(1.0, x) == free_kernel(1.0, Point(-x)));
  double prev = INFINITY;
  for (double r = 0.0; r < 30.0; r += 0.25) {
    const double v = free_kernel_radial(1.0, r, 3);
    CHECK(v > 0.0);
    CHECK(v < prev);
    prev = v;
  }
  CHECK_THROWS_AS(free_kernel(0.0, x), DomainError);
}

TEST_CASE("diagonal bound") {
  const double c = diagonal_bound_constant(3);
  for (double t : {0.1, 1.0, 10.0}) CHECK(free_kernel_radial(t, 0.0, 3) <= c * std::pow(t, -3) * (1 + std::pow(t, 1.5)));
}

TEST_CASE("mass and semigroup law") {
  for (int d : {1, 3})
    for (double t : {0.5, 1.0, 2.0}) CHECK(std::abs(free_kernel_mass(t, d) - 1.0) < 1e-6);
  CHECK(chapman_kolmogorov_residual_1d(0.5, 0.7, 0.2, -1.1) < 1e-4);
  CHECK(chapman_kolmogorov_residual_1d(1.0, 1.0, 0.0, 3.0) < 1e-4);
}

TEST_CASE("Levy density") {
  CHECK(rel(levy_density(pt({1.0})), oracle::bessel_k(1.0, 1.0) / kPi) < 1e-12);
  CHECK(rel(levy_density(pt({-1.0})), levy_density(pt({1.0}))) < 1e-15);
  const double r = std::sqrt(0.5 * 0.5 + 1.2 * 1.2);
  CHECK(rel(levy_density(pt({0.5, 1.2, 0.0})), levy_density(pt({0.0, 0.0, r}))) < 1e-14);
  CHECK(levy_density(pt({1e-3, 0, 0})) > levy_density(pt({1e-2, 0, 0})));
  CHECK_THROWS_AS(levy_density(pt({0.0, 0.0})), DomainError);
  // int min(1, |y|^2) n(dy) is finite; total second moment is d
  for (int d : {1, 2, 3}) {
    CHECK(std::abs(levy_second_moment(60.0, d) - d) < 1e-9);
    const double small = oracle::tanh_sinh(
        [d](double s) { return kernel::sphere_area(d) * std::pow(s, d + 1) * levy_density_radial(s, d); }, 0.0, 1.0);
    CHECK(rel(levy_second_moment(1.0, d), small) < 1e-10);
    CHECK(std::isfinite(levy_tail_mass(1.0, d)));
  }
}

TEST_CASE("Levy-Khinchin residual") {
  CHECK(levy_khinchin_residual(pt({0.0})) == 0.0);
  CHECK(levy_khinchin_residual(pt({1.0})) < 1e-3);
  CHECK(levy_khinchin_residual(pt({0.0, 0.0, 2.0})) < 1e-3);
  CHECK(levy_khinchin_residual(pt({0.6, -0.8})) < 1e-3);
  LevyKhinchinQuadrature coarse;
  coarse.r_min = 1e-2;
  coarse.radial_nodes = 16;
  LevyKhinchinQuadrature fine;
  fine.r_min = 1e-5;
  fine.radial_nodes = 128;
  fine.radial_panels = 8;
  const Point xi = pt({0.0, 0.0, 2.0});
  CHECK(levy_khinchin_residual(xi, fine) < levy_khinchin_residual(xi, coarse));
  LevyKhinchinQuadrature huge;
  huge.r_max = 1000.0;
  CHECK_THROWS_AS(levy_khinchin_residual(xi, huge), NumericalError);
}
