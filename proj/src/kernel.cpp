#include "clrlab/kernel.hpp"

#include <algorithm>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include "clrlab/errors.hpp"
#include "clrlab/quadrature.hpp"
#include "clrlab/specfun.hpp"

namespace clrlab::kernel {
namespace {

double order_of(int d) { return 0.5 * (d + 1); }

void check_dimension(int d) {
  if (d < 1 || d > 3) throw DomainError("dimension must be 1, 2 or 3, got " + std::to_string(d));
}

}  // namespace

double sphere_area(int d) {
  switch (d) {
    case 1: return 2.0;
    case 2: return 2.0 * std::numbers::pi;
    case 3: return 4.0 * std::numbers::pi;
    default: throw DomainError("sphere_area: d must be 1, 2 or 3");
  }
}

double free_kernel_radial(double t, double r, int d) {
  check_dimension(d);
  if (!(t > 0.0)) throw DomainError("free_kernel: t must be > 0");
  const double nu = order_of(d);
  const double big_r = std::hypot(r, t);
  const double prefactor =
      std::pow(2.0, -0.5 * (d - 1)) * std::pow(std::numbers::pi, -nu);
  // t e^t R^{-nu} K_nu(R) = t R^{-nu} e^{t-R} (e^R K_nu(R))
  return prefactor * t * std::pow(big_r, -nu) * std::exp(t - big_r) *
         specfun::bessel_k_scaled(nu, big_r);
}

double free_kernel(double t, const Point& x) {
  return free_kernel_radial(t, x.norm(), static_cast<int>(x.size()));
}

double levy_density_radial(double r, int d) {
  check_dimension(d);
  if (!(r > 0.0)) throw DomainError("levy_density: y = 0 is the non-integrable pole");
  const double nu = order_of(d);
  return 2.0 * std::pow(2.0 * std::numbers::pi, -nu) * std::pow(r, -nu) *
         specfun::bessel_k(nu, r);
}

double levy_density(const Point& y) {
  return levy_density_radial(y.norm(), static_cast<int>(y.size()));
}

double levy_second_moment(double radius, int d) {
  check_dimension(d);
  if (!(radius > 0.0)) return 0.0;
  const double nu = order_of(d);
  const double c = 2.0 * std::pow(2.0 * std::numbers::pi, -nu);
  // r^{d+1} * density = c r^nu K_nu(r), bounded at 0
  auto integrand = [&](double r) {
    if (r <= 0.0) return c * std::pow(2.0, nu - 1.0) * std::tgamma(nu);
    return c * std::pow(r, nu) * specfun::bessel_k(nu, r);
  };
  const double upper = std::min(radius, 800.0);
  double total = 0.0;
  // Panels at 1 and 10 keep the r^nu log r behaviour near 0 inside one smooth piece.
  double lo = 0.0;
  for (double b : {1.0, 10.0, upper}) {
    if (b <= lo) continue;
    const double hi = std::min(b, upper);
    total += quad::integrate(integrand, lo, hi).value;
    lo = hi;
    if (lo >= upper) break;
  }
  return sphere_area(d) * total;
}

double levy_tail_mass(double radius, int d) {
  check_dimension(d);
  if (!(radius > 0.0)) throw DomainError("levy_tail_mass: radius must be > 0");
  auto integrand = [&](double r) { return std::pow(r, d - 1) * levy_density_radial(r, d); };
  const double upper = radius + 60.0;
  return sphere_area(d) * quad::integrate(integrand, radius, upper).value;
}

double levy_khinchin_residual(const Point& xi, const LevyKhinchinQuadrature& q) {
  const int d = static_cast<int>(xi.size());
  check_dimension(d);
  if (!(q.r_min > 0.0 && q.r_min < 1.0 && q.r_max > 1.0))
    throw DomainError("levy_khinchin_residual: need 0 < r_min < 1 < r_max");
  if (q.radial_panels < 1 || q.radial_nodes < q.radial_panels || q.angular_nodes < 1)
    throw DomainError("levy_khinchin_residual: invalid node counts");
  if (q.r_max > 700.0)
    throw NumericalError("levy_khinchin", "r_max beyond the representable Bessel tail");

  const double k = xi.norm();
  if (k == 0.0) return 0.0;

  // Directions enter only through u = (y/|y|) . (xi/|xi|); average over the sphere.
  std::vector<double> u, wu;
  if (d == 1) {
    u = {-1.0, 1.0};
    wu = {0.5, 0.5};
  } else if (d == 2) {
    const int m = 2 * q.angular_nodes;
    for (int j = 0; j < m; ++j) {
      u.push_back(std::cos(2.0 * std::numbers::pi * (j + 0.5) / m));
      wu.push_back(1.0 / m);
    }
  } else {
    const auto& rule = quad::gauss_legendre(q.angular_nodes);
    for (int j = 0; j < q.angular_nodes; ++j) {
      u.push_back(rule.nodes[j]);
      wu.push_back(0.5 * rule.weights[j]);
    }
  }

  auto angular_average = [&](double r) {
    std::complex<double> acc = 0.0;
    for (std::size_t j = 0; j < u.size(); ++j) {
      const double phase = r * k * u[j];
      std::complex<double> v = std::polar(1.0, phase) - 1.0;
      if (r < 1.0) v -= std::complex<double>(0.0, phase);
      acc += wu[j] * v;
    }
    return acc;
  };

  const int per_panel = q.radial_nodes / q.radial_panels;
  const double s0 = std::log(q.r_min), s1 = std::log(q.r_max);
  const double panel_width = (s1 - s0) / q.radial_panels;
  const double area = sphere_area(d);
  std::complex<double> integral = 0.0;
  for (int p = 0; p < q.radial_panels; ++p) {
    const double a = s0 + p * panel_width;
    integral += quad::integrate_fixed(
        [&](double s) {
          const double r = std::exp(s);
          return area * std::pow(r, d) * levy_density_radial(r, d) * angular_average(r);
        },
        a, a + panel_width, per_panel);
  }
  // Small ball: e^{i y.xi} - 1 - i y.xi ~ -(y.xi)^2/2, and the angular mean of (y.xi)^2 is |y|^2 |xi|^2 / d.
  integral -= k * k / (2.0 * d) * levy_second_moment(q.r_min, d);
  return std::abs(symbol_h(xi) + integral);
}

double free_kernel_mass(double t, int d) {
  check_dimension(d);
  auto integrand = [&](double r) { return std::pow(r, d - 1) * free_kernel_radial(t, r, d); };
  double total = 0.0, lo = 0.0;
  for (double hi : {t, t + 5.0, t + 20.0, t + 80.0}) {
    total += quad::integrate(integrand, lo, hi).value;
    lo = hi;
  }
  // tail beyond t + 80 is below e^{-80}
  return sphere_area(d) * total;
}

double chapman_kolmogorov_residual_1d(double t, double s, double x, double y) {
  auto integrand = [&](double z) {
    return free_kernel_radial(t, std::abs(x - z), 1) * free_kernel_radial(s, std::abs(z - y), 1);
  };
  const double lo = std::min(x, y), hi = std::max(x, y);
  const double reach = t + s + 80.0;
  double total = 0.0;
  const double breaks[] = {lo - reach, lo - 10.0, lo, hi, hi + 10.0, hi + reach};
  for (int i = 0; i + 1 < 6; ++i)
    if (breaks[i + 1] > breaks[i]) total += quad::integrate(integrand, breaks[i], breaks[i + 1]).value;
  return std::abs(total - free_kernel_radial(t + s, std::abs(x - y), 1));
}

double diagonal_bound_constant(int d) {
  check_dimension(d);
  double best = 0.0;
  constexpr int points = 1201;
  for (int i = 0; i < points; ++i) {
    const double t = std::pow(10.0, -6.0 + 12.0 * i / (points - 1));
    const double ratio = free_kernel_radial(t, 0.0, d) * std::pow(t, d) / (1.0 + std::pow(t, 0.5 * d));
    best = std::max(best, ratio);
  }
  return best;
}

}  // namespace clrlab::kernel
