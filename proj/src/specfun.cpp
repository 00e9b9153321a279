#include "clrlab/specfun.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "clrlab/errors.hpp"

namespace clrlab::specfun {
namespace {

constexpr double kEps = 1e-17;
constexpr int kMaxIter = 10000;

// Taylor coefficients of 1/Gamma(1+z) about z = 0.
constexpr std::array<double, 26> kRecipGamma1p = {
    1.0,
    0.57721566490153286061,
    -0.65587807152025388108,
    -0.042002635034095235529,
    0.1665386113822914895,
    -0.042197734555544336748,
    -0.0096219715278769735621,
    0.0072189432466630995424,
    -0.0011651675918590651121,
    -0.00021524167411495097282,
    0.00012805028238811618615,
    -0.000020134854780788238656,
    -1.2504934821426706573e-6,
    1.1330272319816958824e-6,
    -2.0563384169776071035e-7,
    6.1160951044814158179e-9,
    5.0020076444692229301e-9,
    -1.1812745704870201446e-9,
    1.0434267116911005105e-10,
    7.782263439905071254e-12,
    -3.696805618642205708188e-12,
    5.100370287454475979015e-13,
    -2.058326053566506783222e-14,
    -5.34812253942301798237e-15,
    1.226778628238260790159e-15,
    -1.181259301697458769514e-16,
};

// Temme's auxiliary gamma combinations for |mu| <= 1/2:
//   gam1 = (1/Gamma(1-mu) - 1/Gamma(1+mu)) / (2 mu),  gam2 = (1/Gamma(1-mu) + 1/Gamma(1+mu)) / 2.
struct TemmeGammas {
  double gam1, gam2, gampl, gammi;
};

TemmeGammas temme_gammas(double mu) {
  double even = 0.0, odd = 0.0;
  const double mu2 = mu * mu;
  double p = 1.0;
  for (std::size_t k = 0; k + 1 < kRecipGamma1p.size(); k += 2) {
    even += kRecipGamma1p[k] * p;
    odd += kRecipGamma1p[k + 1] * p;
    p *= mu2;
  }
  TemmeGammas g{};
  g.gam1 = -odd;
  g.gam2 = even;
  g.gampl = even + mu * odd;  // 1/Gamma(1+mu)
  g.gammi = even - mu * odd;  // 1/Gamma(1-mu)
  return g;
}

// K_mu(x) and K_{mu+1}(x), multiplied by e^x when `scaled`.
void bessel_k_pair(double mu, double x, bool scaled, double& k_mu, double& k_mu1) {
  const double mu2 = mu * mu;
  if (x < 2.0) {
    const double x2 = 0.5 * x;
    const double pimu = std::numbers::pi * mu;
    const double fact = std::abs(pimu) < 1e-15 ? 1.0 : pimu / std::sin(pimu);
    double d = -std::log(x2);
    double e = mu * d;
    const double fact2 = std::abs(e) < 1e-15 ? 1.0 : std::sinh(e) / e;
    const TemmeGammas g = temme_gammas(mu);
    double ff = fact * (g.gam1 * std::cosh(e) + g.gam2 * fact2 * d);
    double sum = ff;
    e = std::exp(e);
    double p = 0.5 * e / g.gampl;
    double q = 0.5 / (e * g.gammi);
    double c = 1.0;
    d = x2 * x2;
    double sum1 = p;
    int i = 1;
    for (; i <= kMaxIter; ++i) {
      ff = (i * ff + p + q) / (i * static_cast<double>(i) - mu2);
      c *= d / i;
      p /= i - mu;
      q /= i + mu;
      const double del = c * ff;
      sum += del;
      sum1 += c * (p - i * ff);
      if (std::abs(del) < std::abs(sum) * kEps) break;
    }
    if (i > kMaxIter) throw NumericalError("bessel_k", "Temme series did not converge");
    k_mu = sum;
    k_mu1 = sum1 * 2.0 / x;
    if (scaled) {
      const double ex = std::exp(x);
      k_mu *= ex;
      k_mu1 *= ex;
    }
    return;
  }
  // Steed's method on the continued fraction for K_{mu+1}/K_mu.
  double b = 2.0 * (1.0 + x);
  double d = 1.0 / b;
  double h = d, delh = d;
  double q1 = 0.0, q2 = 1.0;
  const double a1 = 0.25 - mu2;
  double q = a1, c = a1;
  double a = -a1;
  double s = 1.0 + q * delh;
  int i = 2;
  for (; i <= kMaxIter; ++i) {
    a -= 2.0 * (i - 1);
    c = -a * c / i;
    const double qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += 2.0;
    d = 1.0 / (b + a * d);
    delh = (b * d - 1.0) * delh;
    h += delh;
    const double dels = q * delh;
    s += dels;
    if (std::abs(dels / s) < kEps) break;
  }
  if (i > kMaxIter) throw NumericalError("bessel_k", "Steed continued fraction did not converge");
  h *= a1;
  k_mu = std::sqrt(std::numbers::pi / (2.0 * x)) / s;
  if (!scaled) k_mu *= std::exp(-x);
  k_mu1 = k_mu * (mu + x + 0.5 - h) / x;
}

double bessel_k_impl(double nu, double r, bool scaled) {
  if (!std::isfinite(nu) || !std::isfinite(r))
    throw DomainError("bessel_k: non-finite argument");
  if (nu < 0.0) throw DomainError("bessel_k: order must be >= 0, got " + std::to_string(nu));
  if (r <= 0.0) throw DomainError("bessel_k: argument must be > 0, got " + std::to_string(r));
  if (!scaled && r > 746.0) return 0.0;
  const int nl = static_cast<int>(nu + 0.5);
  const double mu = nu - nl;
  double k_mu = 0.0, k_mu1 = 0.0;
  bessel_k_pair(mu, r, scaled, k_mu, k_mu1);
  for (int i = 1; i <= nl; ++i) {
    const double next = (mu + i) * (2.0 / r) * k_mu1 + k_mu;
    k_mu = k_mu1;
    k_mu1 = next;
  }
  return k_mu;
}

}  // namespace

double bessel_k(double nu, double r) { return bessel_k_impl(nu, r, false); }

double bessel_k_scaled(double nu, double r) { return bessel_k_impl(nu, r, true); }

double exp_integral_e1_scaled(double x) {
  if (!std::isfinite(x) || x <= 0.0)
    throw DomainError("exp_integral_e1: argument must be finite and > 0");
  if (x <= 1.0) {
    // E_1(x) = -gamma - ln x - sum_{k>=1} (-x)^k / (k k!)
    double sum = 0.0, term = 1.0;
    for (int k = 1; k <= 200; ++k) {
      term *= -x / k;
      const double del = term / k;
      sum += del;
      if (std::abs(del) < 1e-18) break;
    }
    return (-std::numbers::egamma - std::log(x) - sum) * std::exp(x);
  }
  constexpr double tiny = 1e-300;
  double b = x + 1.0;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= kMaxIter; ++i) {
    const double an = -static_cast<double>(i) * i;
    b += 2.0;
    d = 1.0 / (an * d + b);
    c = b + an / c;
    const double del = c * d;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) return h;
  }
  throw NumericalError("exp_integral_e1", "continued fraction did not converge");
}

double exp_integral_e1(double x) {
  const double s = exp_integral_e1_scaled(x);
  return x > 745.0 ? 0.0 : s * std::exp(-x);
}

}  // namespace clrlab::specfun
