#pragma once

// Reference values computed independently of the library: double-exponential quadrature
// (tanh-sinh on finite intervals, exp-sinh on half lines) with step halving until two levels
// agree. Slow and simple on purpose.

#include <cmath>
#include <functional>
#include <numbers>

namespace oracle {

inline double tanh_sinh(const std::function<double(double)>& f, double a, double b, double tol = 1e-15) {
  const double hw = 0.5 * (b - a);
  const double half_pi = 0.5 * std::numbers::pi;
  auto level = [&](double h) {
    double sum = 0.0;
    for (int k = -static_cast<int>(4.0 / h); k <= static_cast<int>(4.0 / h); ++k) {
      const double t = k * h;
      const double u = half_pi * std::sinh(t);
      const double ch = std::cosh(u);
      const double w = half_pi * std::cosh(t) / (ch * ch);
      // distance to the nearer endpoint, computed without cancellation
      const double gap = hw / (std::exp(std::abs(u)) * ch);
      const double x = u < 0 ? a + gap : b - gap;
      if (gap <= 0.0) continue;
      sum += w * f(x);
    }
    return hw * h * sum;
  };
  double h = 0.5, prev = level(h);
  for (int i = 0; i < 10; ++i) {
    h *= 0.5;
    const double cur = level(h);
    if (std::abs(cur - prev) <= tol * std::abs(cur)) return cur;
    prev = cur;
  }
  return prev;
}

// int_a^inf f by x = a + exp(pi/2 sinh t).
inline double exp_sinh(const std::function<double(double)>& f, double a, double tol = 1e-15) {
  const double half_pi = 0.5 * std::numbers::pi;
  auto level = [&](double h) {
    double sum = 0.0;
    for (int k = -static_cast<int>(5.0 / h); k <= static_cast<int>(4.0 / h); ++k) {
      const double t = k * h;
      const double e = std::exp(half_pi * std::sinh(t));
      if (e == 0.0 || !std::isfinite(e)) continue;
      const double v = f(a + e);
      if (v == 0.0) continue;
      sum += half_pi * std::cosh(t) * e * v;
    }
    return h * sum;
  };
  double h = 0.5, prev = level(h);
  for (int i = 0; i < 10; ++i) {
    h *= 0.5;
    const double cur = level(h);
    if (std::abs(cur - prev) <= tol * std::abs(cur)) return cur;
    prev = cur;
  }
  return prev;
}

// K_nu(r) = int_0^inf exp(-r cosh u) cosh(nu u) du
inline double bessel_k(double nu, double r) {
  const double upper = std::acosh(std::max(1.0, 745.0 / r)) + 1.0;
  return tanh_sinh([&](double u) { return std::exp(-r * std::cosh(u)) * std::cosh(nu * u); }, 0.0, upper);
}

// E_1(x) = int_1^inf exp(-x t) / t dt
inline double exp_integral_e1(double x) {
  return exp_sinh([&](double t) { return std::exp(-x * t) / t; }, 1.0);
}

// F_inf(1) = int_0^inf e^{-s} g_inf(s) ds with g_inf(s) = (1 - 1/s) 1_{s > 1}
inline double f_infinity_at_one() {
  return exp_sinh([](double s) { return std::exp(-s) * (1.0 - 1.0 / s); }, 1.0);
}

}  // namespace oracle
