#pragma once

// The free relativistic objects: the symbol h(xi) = sqrt(1 + |xi|^2) - 1, the heat kernel of
// h(D), and the Levy measure n(dy) of the associated jump process (m = c = 1).

#include <Eigen/Core>
#include <cmath>

#include "clrlab/grid.hpp"

namespace clrlab::kernel {

/// sqrt(1 + |xi|^2) - 1, written as |xi|^2 / (sqrt(1 + |xi|^2) + 1) to keep relative accuracy at small |xi|.
template <typename Derived>
double symbol_h(const Eigen::MatrixBase<Derived>& xi) {
  const double s = xi.squaredNorm();
  return s / (std::sqrt(1.0 + s) + 1.0);
}

/// Area of the unit sphere S^{d-1} (2, 2 pi, 4 pi for d = 1, 2, 3).
double sphere_area(int d);

/// Kernel of e^{-t h(D)} as a function of r = |x|:
/// 2^{-(d-1)/2} pi^{-(d+1)/2} t e^t (r^2 + t^2)^{-(d+1)/4} K_{(d+1)/2}(sqrt(r^2 + t^2)).
double free_kernel_radial(double t, double r, int d);
double free_kernel(double t, const Point& x);

/// Density of n(dy): 2 (2 pi)^{-(d+1)/2} |y|^{-(d+1)/2} K_{(d+1)/2}(|y|). DomainError at y = 0.
double levy_density_radial(double r, int d);
double levy_density(const Point& y);

/// int_{|y| < radius} |y|^2 n(dy). Tends to d as radius -> infinity.
double levy_second_moment(double radius, int d);

/// int_{|y| >= radius} n(dy).
double levy_tail_mass(double radius, int d);

struct LevyKhinchinQuadrature {
  double r_min = 1e-4;
  double r_max = 40.0;
  int radial_nodes = 64;  // split evenly over radial_panels log-spaced panels
  int radial_panels = 4;
  int angular_nodes = 11;  // Gauss-Legendre in cos(angle) for d = 3 (exact to degree 21)
};

/// |h(xi) + int n(dy) (e^{i y.xi} - 1 - i y.xi 1_{|y|<1})| by radial-angular quadrature on
/// [r_min, r_max]; the ball |y| < r_min contributes its second-order Taylor term.
/// Throws NumericalError when r_max is beyond the range where K_nu is representable.
double levy_khinchin_residual(const Point& xi, const LevyKhinchinQuadrature& quad = {});

/// Radial quadrature of the free kernel over R^d; equals 1.
double free_kernel_mass(double t, int d);

/// |int p_t(x - z) p_s(z - y) dz - p_{t+s}(x - y)| in d = 1.
double chapman_kolmogorov_residual_1d(double t, double s, double x, double y);

/// Empirical constant C with p_t(0) <= C t^{-d} (1 + t^{d/2}): maximum of the ratio over a
/// log grid t in [1e-6, 1e6]. Certified only on that range.
double diagonal_bound_constant(int d);

}  // namespace clrlab::kernel
