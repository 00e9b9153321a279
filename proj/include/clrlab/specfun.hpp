#pragma once

// Special functions used throughout the library: the modified Bessel function of the
// third kind K_nu for real order nu >= 0 and the exponential integral E_1.

namespace clrlab::specfun {

/// Constant C in K_nu(r) <= C max(r^-nu, r^-1/2) e^-r, measured on r in [0.01, 100] and
/// nu in {1/2, 1, 3/2, 2, 5/2}. The maximum sits at r = 1, nu = 5/2, where the ratio is
/// 7 sqrt(pi/2) = 8.77319...; the published value is rounded up.
inline constexpr double kBesselBoundConstant = 8.7732;

/// K_nu(r) for nu >= 0 and r > 0. Temme's series for r < 2, Steed's continued fraction
/// otherwise, then forward recurrence in the order. Underflows to 0 for r beyond ~745.
/// Throws DomainError for r <= 0, nu < 0 or non-finite input.
double bessel_k(double nu, double r);

/// e^r K_nu(r); finite for all r > 0, used where K_nu alone would underflow.
double bessel_k_scaled(double nu, double r);

/// E_1(x) = int_1^inf e^{-xt}/t dt for x > 0. Power series on (0, 1], Lentz continued
/// fraction beyond. Throws DomainError for x <= 0.
double exp_integral_e1(double x);

/// e^x E_1(x), finite for large x.
double exp_integral_e1_scaled(double x);

}  // namespace clrlab::specfun
