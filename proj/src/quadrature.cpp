#include "clrlab/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <utility>

#include "clrlab/errors.hpp"

namespace clrlab::quad {
namespace {

// Legendre P_n(x) and its derivative.
std::pair<double, double> legendre(int n, double x) {
  double p0 = 1.0, p1 = x;
  for (int k = 2; k <= n; ++k) {
    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  return {p1, n * (x * p1 - p0) / (x * x - 1.0)};
}

GaussLegendre compute_gauss_legendre(int n) {
  GaussLegendre rule{Eigen::VectorXd(n), Eigen::VectorXd(n)};
  if (n == 1) {
    rule.nodes[0] = 0.0;
    rule.weights[0] = 2.0;
    return rule;
  }
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      const auto [p, dp] = legendre(n, x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double dp = legendre(n, x).second;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

// Kronrod 15-point extension of the 7-point Gauss rule (abscissae in [0, 1]).
constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double value, error;
};

Segment gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  const double fc = f(c);
  double rk = fc * kWgk[7];
  double rg = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    const double fs = f(c - dx) + f(c + dx);
    rk += kWgk[j] * fs;
    if (j % 2 == 1) rg += kWg[j / 2] * fs;
  }
  return {rk * h, std::abs((rk - rg) * h)};
}

struct Adaptive {
  const std::function<double(double)>& f;
  const AdaptiveOptions& opts;
  int evals = 0;
  double tol = 0.0;

  Segment run(double a, double b, Segment whole, int depth) {
    if (whole.error <= tol * (b - a) || depth >= opts.max_depth) return whole;
    if (evals > opts.max_evaluations)
      throw NumericalError("quadrature", "evaluation budget exhausted");
    const double m = 0.5 * (a + b);
    const Segment l = gk15(f, a, m), r = gk15(f, m, b);
    evals += 30;
    const Segment lr = run(a, m, l, depth + 1);
    const Segment rr = run(m, b, r, depth + 1);
    return {lr.value + rr.value, lr.error + rr.error};
  }
};

}  // namespace

const GaussLegendre& gauss_legendre(int n) {
  static std::mutex mutex;
  static std::map<int, GaussLegendre> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_gauss_legendre(n)).first;
  return it->second;
}

QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     const AdaptiveOptions& opts) {
  if (std::isinf(b)) {
    const std::function<double(double)> mapped = [&](double s) {
      if (s >= 1.0) return 0.0;
      const double one_minus = 1.0 - s;
      return f(a + s / one_minus) / (one_minus * one_minus);
    };
    return integrate(mapped, 0.0, 1.0, opts);
  }
  if (b == a) return {};
  // Coarse pass to set an absolute tolerance scale, then bisect where the error estimate is large.
  const Segment first = gk15(f, a, b);
  Adaptive ad{f, opts};
  ad.evals = 15;
  const double scale = std::abs(first.value);
  ad.tol = std::max(opts.abs_tol, opts.rel_tol * scale) / (b - a);
  const Segment total = ad.run(a, b, first, 0);
  return {total.value, total.error, ad.evals};
}

}  // namespace clrlab::quad
