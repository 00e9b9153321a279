#pragma once

// CLR-type bookkeeping: the right-hand side int V_-^d + int V_-^{d/2}, the constant
// C_bar_d, Lieb-Thirring sums, the Stieltjes form of those sums, and coupling scans.

#include <Eigen/Core>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "clrlab/discrete.hpp"
#include "clrlab/fields.hpp"

namespace clrlab::bounds {

struct ClrRhs {
  double rhs_d = 0.0;     // sum V_-^d dx^d
  double rhs_half = 0.0;  // sum V_-^{d/2} dx^d
};

ClrRhs clr_rhs(const Eigen::VectorXd& v_minus, const GridSpec& grid);
ClrRhs clr_rhs(const ScalarField& v_minus, const GridSpec& grid);

/// C_bar_d = C_vine int_1^inf s^{-d/2} g_inf(s) ds = C_vine (2/(d-2) - 2/d). DomainError for d < 3.
double cbar_d(int d, double c_vine);

/// sum |lambda_j|^k. DomainError if any entry is >= 0 or k <= 0.
double lt_sum(std::span<const double> negative_eigenvalues, double k);

/// lambda -> N_lambda = #{eigenvalues < lambda}, as a step function of a computed spectrum.
class CountingFunction {
 public:
  explicit CountingFunction(const Eigen::VectorXd& eigenvalues);
  int operator()(double lambda) const;
  const std::vector<double>& eigenvalues() const { return sorted_; }

 private:
  std::vector<double> sorted_;
};

/// beta^k N_{-beta} + k int_{lambda_min}^{-beta} |lambda|^{k-1} N_lambda d lambda, integrated
/// exactly piece by piece on the step function.
double stieltjes_lt(const CountingFunction& count, double k, double beta, double lambda_min);

/// |largest negative eigenvalue| / 1000, or 1e-3 when there is none.
double default_beta(const Eigen::VectorXd& eigenvalues);

/// Eigenvalues strictly below zero, ascending.
std::vector<double> negative_part_of_spectrum(const Eigen::VectorXd& eigenvalues);

struct BoundReport {
  double coupling = 0.0;
  int count = 0;
  double rhs_d = 0.0;
  double rhs_half = 0.0;
  double ratio = 0.0;
  double lambda_min = 0.0;
  std::vector<double> eigenvalues;     // the negative ones, ascending
  std::map<double, double> lt_sums;    // k -> sum |lambda_j|^k
  std::string error;                   // non-empty if this scan point failed
};

struct ScanSpec {
  GridSpec grid;
  ScalarField v_minus;                        // nonnegative profile; potential is -g * v_minus
  std::optional<VectorPotentialField> potential;  // magnetic variant when present
  std::vector<double> couplings;
  std::vector<double> lt_exponents = {1.0, 2.0};
  LevyBuildOptions build;
  int workers = 1;  // scan points evaluated concurrently
};

struct ScanResult {
  std::vector<BoundReport> rows;
  double empirical_cd = 0.0;  // max ratio over successful rows
  std::string builder;
};

ScanResult bound_scan(const ScanSpec& spec);

std::string scan_csv_header();
std::string scan_csv_row(const BoundReport& r);

}  // namespace clrlab::bounds
