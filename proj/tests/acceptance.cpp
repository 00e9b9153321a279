// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <exception>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "clrlab/birman.hpp"
#include "clrlab/bounds.hpp"
#include "clrlab/discrete.hpp"
#include "clrlab/fields.hpp"
#include "clrlab/kernel.hpp"
#include "clrlab/levy.hpp"
#include "clrlab/specfun.hpp"
#include "oracle.hpp"

using namespace clrlab;
using cd = std::complex<double>;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  double budget_seconds;
  std::function<Outcome()> body;
};

// Every spectrum computed by the suite, fed to the Stieltjes criterion at the end.
std::vector<std::pair<std::string, Eigen::VectorXd>> g_spectra;

void record(const std::string& label, const Eigen::VectorXd& spectrum) { g_spectra.emplace_back(label, spectrum); }

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

Point pt(std::initializer_list<double> v) {
  Point p(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) p[i++] = x;
  return p;
}

GridSpec make_grid(int d, int n, double L, Boundary b = Boundary::ZeroExtension) {
  GridSpec g;
  g.d = d;
  g.n = n;
  g.half_width = L;
  g.boundary = b;
  return g;
}

ScalarField well_profile(double depth, double width) {
  return {"well_-", [=](const Point& x) { return depth * std::exp(-x.squaredNorm() / (width * width)); }};
}

ScalarField well(double depth, double width) {
  return {"well", [=](const Point& x) { return -depth * std::exp(-x.squaredNorm() / (width * width)); }};
}

ScalarField gaussian_datum(double width) {
  return {"u", [=](const Point& x) { return std::exp(-0.5 * x.squaredNorm() / (width * width)); }};
}

VectorPotentialField constant_b(int d, double b) {
  return transversal_gauge_field(make_magnetic_field("constant-b", {{"b12", b}}, d));
}

levy::McOptions mc(std::int64_t paths, int steps, std::uint64_t seed) {
  levy::McOptions o;
  o.n_paths = paths;
  o.steps = steps;
  o.seed = seed;
  return o;
}

Eigen::VectorXcd random_complex(Eigen::Index n, unsigned seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> z;
  Eigen::VectorXcd u(n);
  for (Eigen::Index i = 0; i < n; ++i) u[i] = cd(z(gen), z(gen));
  return u;
}

Outcome levy_khinchin() {
  double worst = 0.0;
  for (int d : {1, 3})
    for (double s : {0.5, 1.0, 2.0}) {
      Point xi = Point::Zero(d);
      xi[d - 1] = s;
      worst = std::max(worst, kernel::levy_khinchin_residual(xi));
    }
  return {worst < 1e-3, "max residual " + num(worst)};
}

Outcome kernel_normalization() {
  double mass = 0.0;
  for (int d : {1, 3})
    for (double t : {0.5, 1.0, 2.0}) mass = std::max(mass, std::abs(kernel::free_kernel_mass(t, d) - 1.0));
  double ck = 0.0;
  for (double t : {0.5, 1.0})
    for (double s : {0.5, 2.0}) ck = std::max(ck, kernel::chapman_kolmogorov_residual_1d(t, s, 0.5, -0.25));
  return {mass <= 1e-6 && ck < 1e-4, "max |mass - 1| " + num(mass) + ", CK residual " + num(ck)};
}

Outcome increment_law() {
  const levy::McOptions o = mc(100000, 1, 17);
  double worst_sigma = 0.0;
  for (double s : {0.5, 1.0, 2.0}) {
    const levy::MCEstimate e = levy::empirical_characteristic(pt({s, 0.0}), 0.5, o);
    const double exact = std::exp(-0.5 * kernel::symbol_h(pt({s, 0.0})));
    worst_sigma = std::max(worst_sigma, std::abs(e.mean - exact) / e.stderr_);
  }
  const double ks = levy::increment_ks_distance(0.5, o);
  return {worst_sigma <= 3.0 && ks < 0.01, "max deviation " + num(worst_sigma) + " sigma, KS " + num(ks)};
}

Outcome feynman_kac_vs_spectral() {
  const GridSpec g = make_grid(1, 256, 16.0, Boundary::Periodic);
  const ScalarField V = well(2.0, 1.0), u = gaussian_datum(1.0);
  const HermitianOperator H = add_potential(build_h0_spectral(g), V);
  const std::int64_t idx = g.n / 2;
  const double ref = semigroup_apply(H, 1.0, sample_field(g, u).cast<cd>())[idx].real();
  const levy::MCEstimate e = levy::feynman_kac(u, V, 1.0, g.point(idx), mc(100000, 64, 1));
  const double diff = std::abs(e.mean.real() - ref);
  const double tol = std::max(3.0 * e.stderr_, 0.05 * std::abs(ref));
  return {diff <= tol, "MC " + num(e.mean.real()) + " vs spectral " + num(ref) + ", |diff| " + num(diff) +
                           " <= " + num(tol)};
}

Outcome gauge_covariance() {
  const GridSpec g = make_grid(2, 16, 4.0);
  const GaugeFunction phi = make_gauge("quadratic", {{"a", 0.5}, {"b", 0.25}, {"c", 0.1}}, 2);
  const VectorPotentialField A = constant_b(2, 1.0);
  const ScalarField V = well(4.0, 1.5);
  const HermitianOperator H = add_potential(build_hA_levy(g, A), V);
  const HermitianOperator Hs = add_potential(build_hA_levy(g, add_gradient(A, phi)), V);
  const double dev = (gauge_conjugate(H, phi).matrix - Hs.matrix).cwiseAbs().maxCoeff();
  const EigenCount a = eigen_count_below(H, 0.0), b = eigen_count_below(Hs, 0.0);
  record("gauge H_A + V", a.eigenvalues);
  record("gauge H_{A+grad phi} + V", b.eigenvalues);
  return {dev <= 1e-12 && a.count == b.count,
          "deviation " + num(dev) + ", counts " + std::to_string(a.count) + " / " + std::to_string(b.count)};
}

Outcome diamagnetic() {
  const GridSpec g = make_grid(2, 16, 4.0);
  const HermitianOperator H0 = build_h0_levy(g);
  const HermitianOperator HA = build_hA_levy(g, constant_b(2, 1.5));
  const SpectralDecomposition d0(H0), dA(HA);
  record("free Levy d=2", d0.eigenvalues());
  record("magnetic Levy d=2", dA.eigenvalues());
  double excess = -INFINITY;
  for (unsigned seed : {3u, 4u, 5u}) {
    const Eigen::VectorXcd u = random_complex(H0.side(), seed);
    const Eigen::VectorXcd abs_u = u.cwiseAbs().cast<cd>();
    for (double t : {0.1, 1.0, 5.0})
      excess = std::max(excess, (dA.semigroup(t, u).cwiseAbs() - d0.semigroup(t, abs_u).real()).maxCoeff());
    for (double lambda : {0.5, 1.0, 2.0})
      excess = std::max(excess, (dA.resolvent(lambda, u).cwiseAbs() - d0.resolvent(lambda, abs_u).real()).maxCoeff());
  }
  const levy::DiamagneticReport r =
      levy::diamagnetic_mc_check(gaussian_datum(1.0), well(2.0, 1.0), constant_b(2, 1.5), 1.0, pt({0.5, 0.0}),
                                 mc(100000, 32, 7));
  return {excess <= 1e-12 && r.holds && r.max_pathwise_excess <= 1e-12,
          "matrix excess " + num(excess) + ", pathwise excess " + num(r.max_pathwise_excess) + ", |mag| " +
              num(std::abs(r.magnetic.mean)) + " <= free " + num(r.free.mean.real())};
}

Outcome birman_schwinger() {
  const GridSpec g = make_grid(1, 200, 10.0);
  const HermitianOperator H = build_h0_levy(g);
  const Eigen::VectorXd raw = sample_field(g, well_profile(5.0, 1.0));
  const Eigen::VectorXd floored = raw.cwiseMax(1e-8);
  bool ok = true;
  std::ostringstream detail;
  for (double alpha : {0.05, 0.1, 0.5}) {
    const EigenCount nf = eigen_count_below(add_potential(H, Eigen::VectorXd(-floored)), -alpha);
    const EigenCount nr = eigen_count_below(add_potential(H, Eigen::VectorXd(-raw)), -alpha);
    const int bf = birman::count_bs_above_one(birman::birman_schwinger(H, floored, alpha));
    const int br = birman::count_bs_above_one(birman::birman_schwinger(H, raw, alpha));
    ok = ok && nf.count == bf && nr.count <= br;
    detail << "a=" << alpha << ": " << nf.count << "=" << bf << ", " << nr.count << "<=" << br << "; ";
    if (alpha == 0.05) {
      record("d=1 floored well", nf.eigenvalues);
      record("d=1 raw well", nr.eigenvalues);
    }
  }
  return {ok, detail.str()};
}

Outcome counting_chain() {
  const GridSpec g = make_grid(2, 16, 4.0);
  const HermitianOperator H0 = build_h0_levy(g);
  const HermitianOperator HA = build_hA_levy(g, constant_b(2, 1.0));
  const Eigen::VectorXd v = sample_field(g, well_profile(6.0, 1.2));
  record("chain H_A - V", eigenvalues(add_potential(HA, Eigen::VectorXd(-v))));
  bool ok = true;
  std::ostringstream detail;
  for (double alpha : {0.02, 0.05, 0.1, 0.2, 0.5}) {
    const birman::ChainReport r = birman::counting_chain(H0, HA, v, alpha, 1e-9, false);
    ok = ok && r.holds;
    detail << "a=" << alpha << ": " << r.n_count << "<=" << r.bs_count << "<=" << num(r.bound_value) << "; ";
    if (!r.holds) detail << "(" << r.violation << ") ";
  }
  return {ok, detail.str()};
}

Outcome clr_scan() {
  bounds::ScanSpec spec;
  spec.grid = make_grid(3, 16, 6.0);
  spec.v_minus = well_profile(1.0, 1.5);
  spec.couplings = {1, 2, 5, 10, 20, 50};
  const bounds::ScanResult free = bounds::bound_scan(spec);
  spec.potential = constant_b(3, 1.0);
  const bounds::ScanResult mag = bounds::bound_scan(spec);

  bool ok = free.empirical_cd > 0.0;
  bool increasing = true;
  double earlier_max = 0.0;
  std::ostringstream detail;
  for (std::size_t i = 0; i < free.rows.size(); ++i) {
    const bounds::BoundReport& f = free.rows[i];
    const bounds::BoundReport& m = mag.rows[i];
    ok = ok && f.error.empty() && m.error.empty();
    if (i > 0 && f.ratio <= free.rows[i - 1].ratio) increasing = false;
    if (i + 1 < free.rows.size()) earlier_max = std::max(earlier_max, f.ratio);
    const double line = free.empirical_cd * (f.rhs_d + f.rhs_half);
    ok = ok && m.count <= line;
    detail << "g=" << f.coupling << " N=" << f.count << "/" << m.count << " ratio " << num(f.ratio) << "; ";
    std::vector<double> spectrum = f.eigenvalues;
    record("scan free g=" + num(f.coupling), Eigen::Map<Eigen::VectorXd>(spectrum.data(), spectrum.size()));
    spectrum = m.eigenvalues;
    record("scan magnetic g=" + num(m.coupling), Eigen::Map<Eigen::VectorXd>(spectrum.data(), spectrum.size()));
  }
  ok = ok && !increasing && free.rows.back().ratio <= earlier_max;
  detail << "C_emp " << num(free.empirical_cd);
  return {ok, detail.str()};
}

Outcome stieltjes() {
  double worst = 0.0;
  std::string where;
  for (const auto& [label, spectrum] : g_spectra) {
    if (spectrum.size() == 0) continue;
    const double beta = bounds::default_beta(spectrum);
    const double lambda_min = std::min(spectrum.minCoeff(), -beta);
    const bounds::CountingFunction count(spectrum);
    std::vector<double> below;
    for (double l : bounds::negative_part_of_spectrum(spectrum))
      if (l < -beta) below.push_back(l);
    for (double k : {0.5, 1.0, 2.0}) {
      const double lt = bounds::lt_sum(below, k);
      const double rel = std::abs(bounds::stieltjes_lt(count, k, beta, lambda_min) - lt) / std::max(1.0, lt);
      if (rel > worst) {
        worst = rel;
        where = label;
      }
    }
  }
  return {!g_spectra.empty() && worst <= 1e-9,
          std::to_string(g_spectra.size()) + " spectra, max relative difference " + num(worst) +
              (where.empty() ? "" : " (" + where + ")")};
}

Outcome f_anchors() {
  double f_lambda = 0.0;
  for (double lambda : {0.1, 0.5, 1.0, 2.0, 10.0})
    for (double t : {0.01, 0.1, 0.5, 1.0, 2.0, 10.0, 100.0}) {
      const double exact = t / (1.0 + lambda * t);
      f_lambda = std::max(f_lambda, std::abs(birman::phi_transform(birman::GFunction::exponential(lambda), t) - exact));
      f_lambda = std::max(f_lambda, std::abs(birman::f_lambda(lambda, t) - exact));
    }
  const double oracle_f1 = oracle::f_infinity_at_one();
  const double f1 = std::max(std::abs(birman::f_infinity(1.0) - oracle_f1),
                             std::abs(birman::phi_transform(birman::GFunction::infinity(), 1.0) - oracle_f1));
  const double closed = std::abs(std::exp(-1.0) - oracle::exp_integral_e1(1.0) - oracle_f1);
  double cbar = 0.0;
  for (int d : {3, 4, 5}) {
    // s = 1/u maps the slowly decaying tail onto a finite interval
    const double integral = oracle::tanh_sinh([d](double u) { return std::pow(u, 0.5 * d - 2.0) * (1.0 - u); }, 0.0, 1.0);
    cbar = std::max(cbar, std::abs(bounds::cbar_d(d, 1.0) - integral));
  }
  return {f_lambda <= 1e-8 && f1 <= 1e-10 && closed <= 1e-10 && cbar <= 1e-10,
          "F_lambda " + num(f_lambda) + ", F_inf(1) " + num(f1) + ", C_d " + num(cbar)};
}

}  // namespace

int main() {
  // The Stieltjes criterion runs last so it sees every spectrum the others computed.
  const std::vector<Criterion> criteria = {
      {1, 10, levy_khinchin},   {2, 10, kernel_normalization}, {3, 30, increment_law},
      {4, 60, feynman_kac_vs_spectral}, {5, 60, gauge_covariance}, {6, 60, diamagnetic},
      {7, 60, birman_schwinger}, {8, 300, counting_chain},  {10, 2700, clr_scan},
      {11, 5, f_anchors},        {9, 60, stieltjes},
  };
  std::map<int, std::string> lines;
  int failures = 0;
  for (const Criterion& c : criteria) {
    std::fprintf(stderr, "running criterion %d\n", c.id);
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.body();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (seconds > c.budget_seconds) {
      o.pass = false;
      o.detail += " [over budget " + num(c.budget_seconds) + " s]";
    }
    if (!o.pass) ++failures;
    lines[c.id] = std::string(o.pass ? "PASS" : "FAIL") + " criterion " + std::to_string(c.id) + ": " + o.detail +
                  " (" + num(seconds) + " s)";
    std::fprintf(stderr, "%s\n", lines[c.id].c_str());
  }
  for (const auto& [id, line] : lines) std::printf("%s\n", line.c_str());
  std::printf("%d of %zu criteria passed\n", static_cast<int>(lines.size()) - failures, lines.size());
  return failures == 0 ? 0 : 1;
}
