#pragma once

// Birman-Schwinger operators K_alpha = V_-^{1/2} (H + alpha)^{-1} V_-^{1/2}, the g-function
// family and its transform F = Phi(g), and the counting-by-trace chain
//   N_{-alpha}(B, -V_-) <= #{mu > 1} <= F_inf(1)^{-1} Tr F_inf(K_alpha(A)) <= F_inf(1)^{-1} Tr F_inf(K_alpha).

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "clrlab/discrete.hpp"

namespace clrlab::birman {

struct BSOperator {
  Eigen::MatrixXcd matrix;
  double alpha = 0.0;
  std::string provenance;
};

/// Throws DomainError for alpha <= 0 or negative V_- samples, NumericalError if H + alpha is
/// not positive definite.
BSOperator birman_schwinger(const HermitianOperator& H, const Eigen::VectorXd& v_minus, double alpha);
BSOperator birman_schwinger(const HermitianOperator& H, const ScalarField& v_minus, double alpha);

Eigen::VectorXd bs_eigenvalues(const BSOperator& K);

/// Eigenvalues strictly greater than 1, with multiplicity.
int count_bs_above_one(const BSOperator& K);

enum class GKind { Lambda, Infinity, Approximant };

/// g_lambda(t) = e^{-lambda t}; g_inf(t) = 0 on [0, 1], 1 - 1/t beyond; g_n equals g_inf on [0, n],
/// (2n - 1)/t - 1 on [n, 2n - 1], 0 beyond.
struct GFunction {
  GKind kind = GKind::Infinity;
  double lambda = 1.0;
  int n = 1;

  static GFunction exponential(double lambda);
  static GFunction infinity();
  static GFunction approximant(int n);

  double operator()(double t) const;
  std::vector<double> kinks() const;
  std::string name() const;
};

double g_eval(const GFunction& g, double t);

/// F(t) = t int_0^inf e^{-s} g(ts) ds by adaptive quadrature split at the kinks of g.
double phi_transform(const GFunction& g, double t, double rel_tol = 1e-13);

/// Closed forms: F_lambda(t) = t / (1 + lambda t) and F_inf(t) = t e^{-1/t} - E_1(1/t).
double f_lambda(double lambda, double t);
double f_infinity(double t);

/// F(K) by spectral calculus on the Hermitian part of K.
Eigen::MatrixXcd matrix_function(const BSOperator& K, const std::function<double(double)>& F);

/// sum_k F_inf(mu_k) over the spectrum of K, with roundoff-negative mu clamped to 0.
double trace_f_infinity(const BSOperator& K);

struct ChainReport {
  double alpha = 0.0;
  int n_count = 0;           // eigenvalues of H_mag - V_- below -alpha
  int bs_count = 0;          // eigenvalues of K_alpha(A) above 1
  double trace_free = 0.0;   // Tr F_inf(K_alpha), free H
  double trace_mag = 0.0;    // Tr F_inf(K_alpha(A))
  double bound_value = 0.0;  // F_inf(1)^{-1} Tr F_inf(K_alpha)
  bool holds = false;
  std::string violation;     // empty when holds
};

/// Every stage of the chain on one grid. With throw_on_violation, a broken inequality raises
/// InvariantViolation carrying the offending numbers; sub-step failures propagate as
/// NumericalError with a stage label.
ChainReport counting_chain(const HermitianOperator& H_free, const HermitianOperator& H_mag,
                           const Eigen::VectorXd& v_minus, double alpha, double slack = 1e-9,
                           bool throw_on_violation = true);

std::string chain_csv_header();
std::string chain_csv_row(const ChainReport& r);

}  // namespace clrlab::birman
