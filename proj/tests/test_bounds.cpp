#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "clrlab/bounds.hpp"
#include "clrlab/discrete.hpp"
#include "clrlab/errors.hpp"

using namespace clrlab;
using namespace clrlab::bounds;

namespace {

GridSpec make_grid(int d, int n, double L) {
  GridSpec g;
  g.d = d;
  g.n = n;
  g.half_width = L;
  return g;
}

ScalarField gaussian_profile(double depth) {
  return {"well_-", [=](const Point& x) { return depth * std::exp(-x.squaredNorm()); }};
}

// int (c e^{-|x|^2})^p dx over R^3
double gaussian_moment(double c, double p) { return std::pow(c, p) * std::pow(std::numbers::pi / p, 1.5); }

}  // namespace

TEST_CASE("CLR right-hand side") {
  const GridSpec g = make_grid(3, 16, 8.0);
  const ClrRhs zero = clr_rhs(Eigen::VectorXd(Eigen::VectorXd::Zero(g.size())), g);
  CHECK(zero.rhs_d == 0.0);
  CHECK(zero.rhs_half == 0.0);
  Eigen::VectorXd cell = Eigen::VectorXd::Zero(g.size());
  cell[100] = 1.0;
  const ClrRhs one = clr_rhs(cell, g);
  CHECK(one.rhs_d == doctest::Approx(g.cell_volume()));
  CHECK(one.rhs_half == doctest::Approx(g.cell_volume()));

  // n = 16 (dx = 1) resolves the p = 3/2 moment; the p = 3 moment has width 1/sqrt(3) and needs dx = 1/2
  const ClrRhs coarse = clr_rhs(gaussian_profile(5.0), g);
  CHECK(std::abs(coarse.rhs_half / gaussian_moment(5.0, 1.5) - 1.0) < 0.02);
  const ClrRhs fine = clr_rhs(gaussian_profile(5.0), make_grid(3, 32, 8.0));
  CHECK(std::abs(fine.rhs_d / gaussian_moment(5.0, 3.0) - 1.0) < 0.02);
  CHECK(std::abs(fine.rhs_half / gaussian_moment(5.0, 1.5) - 1.0) < 0.02);
  CHECK_THROWS_AS(clr_rhs(Eigen::VectorXd(Eigen::VectorXd::Constant(g.size(), -1.0)), g), DomainError);
}

TEST_CASE("C bar") {
  CHECK(cbar_d(3, 1.5) == doctest::Approx(2.0));
  CHECK(cbar_d(4, 1.5) == doctest::Approx(0.75));
  CHECK(cbar_d(5, 1.0) == doctest::Approx(4.0 / 15.0));
  double prev = INFINITY;
  for (int d = 3; d < 200; ++d) {
    CHECK(cbar_d(d, 1.0) < prev);
    prev = cbar_d(d, 1.0);
  }
  CHECK(prev < 2e-4);
  CHECK_THROWS_AS(cbar_d(2, 1.0), DomainError);
}

TEST_CASE("Lieb-Thirring sums and the Stieltjes form") {
  CHECK(lt_sum(std::vector<double>{}, 1.0) == 0.0);
  CHECK(lt_sum(std::vector<double>{-1.0, -2.0}, 2.0) == 5.0);
  CHECK_THROWS_AS(lt_sum(std::vector<double>{-1.0, 0.0}, 1.0), DomainError);

  const CountingFunction single(Eigen::VectorXd::Constant(1, -1.0));
  CHECK(std::abs(stieltjes_lt(single, 1.0, 0.1, -1.0) - 1.0) < 1e-15);
  const CountingFunction none(Eigen::VectorXd::Constant(3, 0.5));
  CHECK(stieltjes_lt(none, 1.0, 0.1, -1.0) == 0.0);

  const GridSpec g = make_grid(1, 128, 10.0);
  const Eigen::VectorXd spectrum =
      eigenvalues(add_potential(build_h0_levy(g), Eigen::VectorXd(-sample_field(g, gaussian_profile(20.0)))));
  const CountingFunction count(spectrum);
  const double lambda_min = spectrum.minCoeff();
  for (double beta : {1e-3, default_beta(spectrum)})
    for (double k : {0.5, 1.0, 1.5, 2.0}) {
      std::vector<double> below;
      for (double l : negative_part_of_spectrum(spectrum))
        if (l < -beta) below.push_back(l);
      CHECK(below.size() > 2);
      CHECK(std::abs(stieltjes_lt(count, k, beta, lambda_min) - lt_sum(below, k)) < 1e-9);
    }
}

TEST_CASE("coupling scan") {
  ScanSpec spec;
  spec.grid = make_grid(3, 8, 4.0);
  spec.v_minus = gaussian_profile(1.0);
  spec.couplings = {0.01, 1.0, 5.0, 20.0};
  const ScanResult r = bound_scan(spec);
  REQUIRE(r.rows.size() == 4);
  CHECK(r.rows[0].count == 0);
  CHECK(r.rows[0].ratio == 0.0);
  int prev = 0;
  double max_ratio = 0.0;
  for (const auto& row : r.rows) {
    CHECK(row.error.empty());
    CHECK(row.count >= prev);
    CHECK(row.count == static_cast<int>(row.eigenvalues.size()));
    CHECK(std::isfinite(row.ratio));
    prev = row.count;
    max_ratio = std::max(max_ratio, row.ratio);
  }
  CHECK(prev > 0);
  CHECK(r.empirical_cd == max_ratio);
  CHECK(scan_csv_header() == "g,N,rhs_d,rhs_half,ratio,lambda_min,lt_k1,lt_k2");

  spec.couplings = {-1.0, 1.0};
  const ScanResult bad = bound_scan(spec);
  CHECK(!bad.rows[0].error.empty());
  CHECK(bad.rows[1].error.empty());
}

TEST_CASE("discarding the positive part") {
  const GridSpec g = make_grid(2, 16, 4.0);
  const HermitianOperator H = build_h0_levy(g);
  const Eigen::VectorXd v_minus = sample_field(g, gaussian_profile(8.0));
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  Eigen::VectorXd v_plus(g.size());
  for (Eigen::Index i = 0; i < v_plus.size(); ++i) v_plus[i] = u(gen);
  const int with_plus = eigen_count_below(add_potential(H, Eigen::VectorXd(v_plus - v_minus)), 0.0).count;
  const int without = eigen_count_below(add_potential(H, Eigen::VectorXd(-v_minus)), 0.0).count;
  CHECK(with_plus <= without);
  CHECK(without > 0);
}
