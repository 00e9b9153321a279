#include "clrlab/birman.hpp"

#include <cmath>
#include <sstream>

#include "clrlab/errors.hpp"
#include "clrlab/format.hpp"
#include "clrlab/quadrature.hpp"
#include "clrlab/specfun.hpp"

namespace clrlab::birman {

BSOperator birman_schwinger(const HermitianOperator& H, const Eigen::VectorXd& v_minus, double alpha) {
  if (!(alpha > 0.0)) throw DomainError("birman_schwinger: alpha must be > 0");
  if (v_minus.size() != H.side()) throw DomainError("birman_schwinger: size mismatch");
  if ((v_minus.array() < 0.0).any()) throw DomainError("birman_schwinger: V_- must be >= 0");
  Eigen::MatrixXcd shifted = H.matrix;
  shifted.diagonal().array() += alpha;
  Eigen::LLT<Eigen::MatrixXcd> llt(shifted);
  if (llt.info() != Eigen::Success)
    throw NumericalError("birman_schwinger", "H + alpha is not positive definite (" + H.provenance + ")");
  const Eigen::VectorXd root = v_minus.cwiseSqrt();
  Eigen::MatrixXcd rhs = Eigen::MatrixXcd::Zero(H.side(), H.side());
  rhs.diagonal() = root.cast<std::complex<double>>();
  Eigen::MatrixXcd k = root.asDiagonal() * llt.solve(rhs);
  BSOperator out;
  out.matrix = 0.5 * (k + k.adjoint());
  out.alpha = alpha;
  out.provenance = "K_alpha[" + H.provenance + "]";
  return out;
}

BSOperator birman_schwinger(const HermitianOperator& H, const ScalarField& v_minus, double alpha) {
  return birman_schwinger(H, sample_field(H.grid, v_minus), alpha);
}

Eigen::VectorXd bs_eigenvalues(const BSOperator& K) {
  if (K.matrix.imag().cwiseAbs().maxCoeff() == 0.0) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(K.matrix.real(), Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw NumericalError("bs_eigensolve", K.provenance);
    return solver.eigenvalues();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(K.matrix, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("bs_eigensolve", K.provenance);
  return solver.eigenvalues();
}

int count_bs_above_one(const BSOperator& K) {
  return static_cast<int>((bs_eigenvalues(K).array() > 1.0).count());
}

GFunction GFunction::exponential(double lambda) {
  if (!(lambda > 0.0)) throw DomainError("g_lambda: lambda must be > 0");
  return {GKind::Lambda, lambda, 1};
}

GFunction GFunction::infinity() { return {GKind::Infinity, 0.0, 1}; }

GFunction GFunction::approximant(int n) {
  if (n < 1) throw DomainError("g_n: n must be >= 1");
  return {GKind::Approximant, 0.0, n};
}

double GFunction::operator()(double t) const {
  if (t < 0.0) throw DomainError("g: argument must be >= 0");
  switch (kind) {
    case GKind::Lambda: return std::exp(-lambda * t);
    case GKind::Infinity: return t <= 1.0 ? 0.0 : 1.0 - 1.0 / t;
    case GKind::Approximant:
      if (t <= n) return t <= 1.0 ? 0.0 : 1.0 - 1.0 / t;
      if (t <= 2.0 * n - 1.0) return (2.0 * n - 1.0) / t - 1.0;
      return 0.0;
  }
  return 0.0;
}

std::vector<double> GFunction::kinks() const {
  switch (kind) {
    case GKind::Lambda: return {};
    case GKind::Infinity: return {1.0};
    case GKind::Approximant:
      if (n == 1) return {1.0};
      return {1.0, static_cast<double>(n), 2.0 * n - 1.0};
  }
  return {};
}

std::string GFunction::name() const {
  switch (kind) {
    case GKind::Lambda: return "g_lambda(" + format_double(lambda) + ")";
    case GKind::Infinity: return "g_inf";
    case GKind::Approximant: return "g_" + std::to_string(n);
  }
  return "g";
}

double g_eval(const GFunction& g, double t) { return g(t); }

double phi_transform(const GFunction& g, double t, double rel_tol) {
  if (!(t > 0.0)) throw DomainError("phi_transform: t must be > 0");
  auto integrand = [&](double s) { return std::exp(-s) * g(t * s); };
  quad::AdaptiveOptions opts;
  opts.rel_tol = rel_tol;
  opts.abs_tol = 0.0;
  double total = 0.0, lo = 0.0;
  std::vector<double> breaks;
  for (double k : g.kinks()) breaks.push_back(k / t);
  breaks.push_back((breaks.empty() ? 0.0 : breaks.back()) + 64.0);
  for (double hi : breaks) {
    if (hi <= lo) continue;
    const quad::QuadResult r = quad::integrate(integrand, lo, hi, opts);
    if (!std::isfinite(r.value)) throw NumericalError("phi_transform", "non-finite quadrature value");
    total += r.value;
    lo = hi;
  }
  return t * total;
}

double f_lambda(double lambda, double t) { return t / (1.0 + lambda * t); }

double f_infinity(double t) {
  if (t < 0.0) throw DomainError("f_infinity: t must be >= 0");
  if (t == 0.0) return 0.0;
  const double x = 1.0 / t;
  if (x > 745.0) return 0.0;
  // e^{-x} (1/x - e^x E_1(x)), both pieces O(1) after scaling
  return std::exp(-x) * (t - specfun::exp_integral_e1_scaled(x));
}

Eigen::MatrixXcd matrix_function(const BSOperator& K, const std::function<double(double)>& F) {
  return SpectralDecomposition(K.matrix, K.provenance).function_matrix(F);
}

double trace_f_infinity(const BSOperator& K) {
  const Eigen::VectorXd mu = bs_eigenvalues(K);
  double total = 0.0;
  for (Eigen::Index i = 0; i < mu.size(); ++i) total += f_infinity(std::max(0.0, mu[i]));
  return total;
}

ChainReport counting_chain(const HermitianOperator& H_free, const HermitianOperator& H_mag,
                           const Eigen::VectorXd& v_minus, double alpha, double slack,
                           bool throw_on_violation) {
  if (H_free.side() != H_mag.side()) throw DomainError("counting_chain: operators on different grids");
  ChainReport r;
  r.alpha = alpha;
  try {
    r.n_count = eigen_count_below(add_potential(H_mag, Eigen::VectorXd(-v_minus)), -alpha).count;
  } catch (const NumericalError& e) {
    throw NumericalError("chain/eigen_count", e.what());
  }
  const BSOperator k_mag = birman_schwinger(H_mag, v_minus, alpha);
  const BSOperator k_free = birman_schwinger(H_free, v_minus, alpha);
  r.bs_count = count_bs_above_one(k_mag);
  r.trace_mag = trace_f_infinity(k_mag);
  r.trace_free = trace_f_infinity(k_free);
  const double f1 = f_infinity(1.0);
  r.bound_value = r.trace_free / f1;

  std::ostringstream why;
  if (r.n_count > r.bs_count) why << "N_-alpha=" << r.n_count << " > #(mu>1)=" << r.bs_count << "; ";
  if (r.bs_count > r.trace_mag / f1 + slack)
    why << "#(mu>1)=" << r.bs_count << " > TrF(K_A)/F(1)=" << r.trace_mag / f1 << "; ";
  if (r.bs_count > r.bound_value + slack)
    why << "#(mu>1)=" << r.bs_count << " > F(1)^-1 TrF(K_0)=" << r.bound_value << "; ";
  if (r.trace_mag > r.trace_free + slack)
    why << "TrF(K_A)=" << r.trace_mag << " > TrF(K_0)=" << r.trace_free << "; ";
  r.violation = why.str();
  r.holds = r.violation.empty();
  if (!r.holds && throw_on_violation)
    throw InvariantViolation("counting chain at alpha=" + format_double(alpha) + ": " + r.violation);
  return r;
}

std::string chain_csv_header() { return "alpha,n_count,bs_count,trace_free,trace_mag,bound_value"; }

std::string chain_csv_row(const ChainReport& r) {
  return format_double(r.alpha) + "," + std::to_string(r.n_count) + "," + std::to_string(r.bs_count) +
         "," + format_double(r.trace_free) + "," + format_double(r.trace_mag) + "," +
         format_double(r.bound_value);
}

}  // namespace clrlab::birman
