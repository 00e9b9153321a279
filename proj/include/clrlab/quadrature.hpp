#pragma once

#include <Eigen/Core>
#include <functional>
#include <limits>

namespace clrlab::quad {

/// Gauss-Legendre rule on [-1, 1]; exact for polynomials of degree <= 2n-1.
struct GaussLegendre {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};

/// Nodes by Newton iteration on the Legendre three-term recurrence. Results are cached per n.
const GaussLegendre& gauss_legendre(int n);

/// Sum of f over the rule mapped to [a, b].
template <typename F>
auto integrate_fixed(F&& f, double a, double b, int n) {
  const auto& rule = gauss_legendre(n);
  const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  using R = decltype(f(mid));
  R acc = R(0);
  for (int i = 0; i < n; ++i) acc += rule.weights[i] * f(mid + half * rule.nodes[i]);
  return acc * half;
}

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  int evaluations = 0;
};

struct AdaptiveOptions {
  double abs_tol = 1e-13;
  double rel_tol = 1e-12;
  int max_depth = 50;
  int max_evaluations = 2'000'000;
};

/// Adaptive Gauss-Kronrod (7/15) on [a, b]. `b` may be +infinity, in which case the tail is
/// mapped with x = a + s/(1-s). Throws NumericalError when the evaluation budget runs out.
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     const AdaptiveOptions& opts = {});

}  // namespace clrlab::quad
