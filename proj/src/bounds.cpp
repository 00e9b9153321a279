#include "clrlab/bounds.hpp"

#include <algorithm>
#include <cmath>

#include "clrlab/detail/parallel.hpp"
#include "clrlab/errors.hpp"
#include "clrlab/format.hpp"

namespace clrlab::bounds {

ClrRhs clr_rhs(const Eigen::VectorXd& v_minus, const GridSpec& grid) {
  if ((v_minus.array() < 0.0).any()) throw DomainError("clr_rhs: V_- must be >= 0");
  const double vol = grid.cell_volume();
  const double d = grid.d;
  ClrRhs r;
  r.rhs_d = v_minus.array().pow(d).sum() * vol;
  r.rhs_half = v_minus.array().pow(0.5 * d).sum() * vol;
  return r;
}

ClrRhs clr_rhs(const ScalarField& v_minus, const GridSpec& grid) {
  return clr_rhs(sample_field(grid, v_minus), grid);
}

double cbar_d(int d, double c_vine) {
  if (d < 3) throw DomainError("cbar_d: s^{-d/2} g_inf(s) is integrable at infinity only for d >= 3");
  return c_vine * (2.0 / (d - 2.0) - 2.0 / d);
}

double lt_sum(std::span<const double> negative_eigenvalues, double k) {
  if (!(k > 0.0)) throw DomainError("lt_sum: k must be > 0");
  double total = 0.0;
  for (double lambda : negative_eigenvalues) {
    if (!(lambda < 0.0)) throw DomainError("lt_sum: non-negative entry " + format_double(lambda));
    total += std::pow(-lambda, k);
  }
  return total;
}

CountingFunction::CountingFunction(const Eigen::VectorXd& eigenvalues)
    : sorted_(eigenvalues.data(), eigenvalues.data() + eigenvalues.size()) {
  std::sort(sorted_.begin(), sorted_.end());
}

int CountingFunction::operator()(double lambda) const {
  return static_cast<int>(std::lower_bound(sorted_.begin(), sorted_.end(), lambda) - sorted_.begin());
}

double stieltjes_lt(const CountingFunction& count, double k, double beta, double lambda_min) {
  if (!(k > 0.0) || !(beta > 0.0)) throw DomainError("stieltjes_lt: need k > 0 and beta > 0");
  const double upper = -beta;
  double total = std::pow(beta, k) * count(upper);
  if (!(lambda_min < upper)) return total;
  // N is constant between consecutive eigenvalues; int_a^b |l|^{k-1} dl = (|a|^k - |b|^k)/k for a < b < 0.
  std::vector<double> cuts = {lambda_min};
  for (double e : count.eigenvalues())
    if (e > lambda_min && e < upper) cuts.push_back(e);
  cuts.push_back(upper);
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i], b = cuts[i + 1];
    if (b <= a) continue;
    const int n = count(0.5 * (a + b));
    if (n > 0) total += n * (std::pow(-a, k) - std::pow(-b, k));
  }
  return total;
}

double default_beta(const Eigen::VectorXd& eigenvalues) {
  double closest = 0.0;
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i)
    if (eigenvalues[i] < 0.0 && (closest == 0.0 || eigenvalues[i] > closest)) closest = eigenvalues[i];
  return closest == 0.0 ? 1e-3 : -closest / 1e3;
}

std::vector<double> negative_part_of_spectrum(const Eigen::VectorXd& eigenvalues) {
  std::vector<double> out;
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i)
    if (eigenvalues[i] < 0.0) out.push_back(eigenvalues[i]);
  std::sort(out.begin(), out.end());
  return out;
}

ScanResult bound_scan(const ScanSpec& spec) {
  const HermitianOperator base = spec.potential ? build_hA_levy(spec.grid, *spec.potential, spec.build)
                                                : build_h0_levy(spec.grid, spec.build);
  const Eigen::VectorXd profile = sample_field(spec.grid, spec.v_minus);
  ScanResult result;
  result.builder = to_string(base.tag);
  result.rows.resize(spec.couplings.size());
  detail::parallel_for(static_cast<std::int64_t>(spec.couplings.size()), spec.workers, [&](std::int64_t i) {
    BoundReport& row = result.rows[i];
    row.coupling = spec.couplings[i];
    try {
      const Eigen::VectorXd v = row.coupling * profile;
      const ClrRhs rhs = clr_rhs(v, spec.grid);
      row.rhs_d = rhs.rhs_d;
      row.rhs_half = rhs.rhs_half;
      const Eigen::VectorXd spectrum = eigenvalues(add_potential(base, Eigen::VectorXd(-v)));
      row.eigenvalues = negative_part_of_spectrum(spectrum);
      row.count = static_cast<int>(row.eigenvalues.size());
      row.lambda_min = spectrum.minCoeff();
      const double denom = rhs.rhs_d + rhs.rhs_half;
      row.ratio = denom > 0.0 ? row.count / denom : 0.0;
      for (double k : spec.lt_exponents) row.lt_sums[k] = lt_sum(row.eigenvalues, k);
    } catch (const std::exception& e) {
      row.error = e.what();
    }
  });
  for (const auto& row : result.rows)
    if (row.error.empty()) result.empirical_cd = std::max(result.empirical_cd, row.ratio);
  return result;
}

std::string scan_csv_header() { return "g,N,rhs_d,rhs_half,ratio,lambda_min,lt_k1,lt_k2"; }

std::string scan_csv_row(const BoundReport& r) {
  auto lt = [&](double k) {
    auto it = r.lt_sums.find(k);
    return it == r.lt_sums.end() ? std::string("nan") : format_double(it->second);
  };
  return format_double(r.coupling) + "," + std::to_string(r.count) + "," + format_double(r.rhs_d) + "," +
         format_double(r.rhs_half) + "," + format_double(r.ratio) + "," + format_double(r.lambda_min) + "," +
         lt(1.0) + "," + lt(2.0);
}

}  // namespace clrlab::bounds
