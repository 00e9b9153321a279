#include "clrlab/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <functional>
#include <sstream>

#include <json.hpp>

#include "clrlab/birman.hpp"
#include "clrlab/bounds.hpp"
#include "clrlab/discrete.hpp"
#include "clrlab/errors.hpp"
#include "clrlab/fields.hpp"
#include "clrlab/format.hpp"
#include "clrlab/kernel.hpp"
#include "clrlab/levy.hpp"

namespace clrlab::experiments {
namespace {

using config::ExperimentConfig;
using json = nlohmann::json;

struct Report {
  json summary = json::object();
  std::vector<std::string> csv;  // header first; empty when the command has no table
  json timing = json::object();
  std::vector<std::string> violations;
};

struct Context {
  const ExperimentConfig& cfg;
  int workers;

  LevyBuildOptions build() const {
    LevyBuildOptions o;
    o.workers = workers;
    return o;
  }
  levy::McOptions mc() const {
    levy::McOptions o;
    o.n_paths = cfg.paths;
    o.steps = cfg.steps;
    o.seed = cfg.seed;
    o.workers = workers;
    return o;
  }
  ScalarField potential() const {
    if (!cfg.potential) return {"zero", [](const Point&) { return 0.0; }};
    return make_potential(cfg.potential->name, cfg.potential->params, cfg.d);
  }
  VectorPotentialField vector_potential() const {
    if (!cfg.magnetic) return zero_potential(cfg.d);
    return transversal_gauge_field(make_magnetic_field(cfg.magnetic->name, cfg.magnetic->params, cfg.d));
  }
  HermitianOperator levy_operator() const {
    return cfg.magnetic ? build_hA_levy(cfg.grid(), vector_potential(), build())
                        : build_h0_levy(cfg.grid(), build());
  }
  ScalarField initial_datum() const {
    const double w2 = cfg.u_width * cfg.u_width;
    return {"gaussian", [w2](const Point& x) { return std::exp(-0.5 * x.squaredNorm() / w2); }};
  }
  Point start_point() const {
    Point x = Point::Zero(cfg.d);
    for (int a = 0; a < static_cast<int>(cfg.x.size()); ++a) x[a] = cfg.x[a];
    return x;
  }
};

std::string fmt(double v) { return format_double(v); }

std::string join(const std::vector<std::string>& cells) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) out += (i ? "," : "") + cells[i];
  return out;
}

json estimate_json(const levy::MCEstimate& e) {
  return {{"re", e.mean.real()}, {"im", e.mean.imag()}, {"stderr", e.stderr_},
          {"n_paths", e.n_paths}, {"m", e.steps},        {"seed", e.seed}};
}

// Grid point closest to x; MC runs start there so that the matrix reference is exact.
std::int64_t nearest_index(const GridSpec& g, const Point& x) {
  Eigen::Vector3i idx = Eigen::Vector3i::Zero();
  for (int a = 0; a < g.d; ++a) {
    const long i = std::lround((x[a] + g.half_width) / g.spacing());
    idx[a] = static_cast<int>(std::clamp<long>(i, 0, g.n - 1));
  }
  return g.flat_index(idx);
}

// ---- commands -------------------------------------------------------------

Report kernel_check(const Context& ctx) {
  const int d = ctx.cfg.d;
  Report r;
  const double c_diag = kernel::diagonal_bound_constant(d);
  r.csv.push_back("t,mass,mass_error,ck_residual,diag_value,diag_ratio");
  double worst_mass = 0.0, worst_ck = 0.0, worst_diag = 0.0;
  for (double t : ctx.cfg.times) {
    const double mass = kernel::free_kernel_mass(t, d);
    const double ck = d == 1 ? kernel::chapman_kolmogorov_residual_1d(t, t, 0.5, -0.25) : 0.0;
    const double diag = kernel::free_kernel_radial(t, 0.0, d);
    const double ratio = diag / (std::pow(t, -d) * (1.0 + std::pow(t, 0.5 * d)));
    worst_mass = std::max(worst_mass, std::abs(mass - 1.0));
    worst_ck = std::max(worst_ck, ck);
    worst_diag = std::max(worst_diag, ratio);
    r.csv.push_back(join({fmt(t), fmt(mass), fmt(std::abs(mass - 1.0)), d == 1 ? fmt(ck) : "nan",
                          fmt(diag), fmt(ratio)}));
  }
  r.summary = {{"d", d},
               {"max_mass_error", worst_mass},
               {"max_ck_residual", d == 1 ? json(worst_ck) : json(nullptr)},
               {"diagonal_constant", c_diag},
               {"max_diagonal_ratio", worst_diag}};
  if (worst_mass > 1e-6) r.violations.push_back("kernel mass error " + fmt(worst_mass) + " > 1e-6");
  if (worst_ck > 1e-4) r.violations.push_back("Chapman-Kolmogorov residual " + fmt(worst_ck) + " > 1e-4");
  if (worst_diag > c_diag * (1.0 + 1e-12))
    r.violations.push_back("diagonal ratio " + fmt(worst_diag) + " exceeds constant " + fmt(c_diag));
  return r;
}

Report levy_khinchin(const Context& ctx) {
  Report r;
  r.csv.push_back("xi,h,residual");
  double worst = 0.0;
  for (double s : ctx.cfg.xi) {
    Point xi = Point::Zero(ctx.cfg.d);
    xi[ctx.cfg.d - 1] = s;
    const double res = kernel::levy_khinchin_residual(xi);
    worst = std::max(worst, res);
    r.csv.push_back(join({fmt(s), fmt(kernel::symbol_h(xi)), fmt(res)}));
  }
  r.summary = {{"d", ctx.cfg.d}, {"max_residual", worst}};
  if (worst >= 1e-3) r.violations.push_back("Levy-Khinchin residual " + fmt(worst) + " >= 1e-3");
  return r;
}

Report gauge_check(const Context& ctx) {
  const GridSpec grid = ctx.cfg.grid();
  const GaugeFunction phi = make_gauge(ctx.cfg.gauge->name, ctx.cfg.gauge->params, ctx.cfg.d);
  const VectorPotentialField A = ctx.vector_potential();
  const ScalarField V = ctx.potential();
  const HermitianOperator H = add_potential(build_hA_levy(grid, A, ctx.build()), V);
  const HermitianOperator H_shift = add_potential(build_hA_levy(grid, add_gradient(A, phi), ctx.build()), V);
  const HermitianOperator conj = gauge_conjugate(H, phi);
  const double deviation = (conj.matrix - H_shift.matrix).cwiseAbs().maxCoeff();
  const int count = eigen_count_below(H, 0.0).count;
  const int count_shift = eigen_count_below(H_shift, 0.0).count;
  Report r;
  r.csv = {"max_deviation,count,count_shifted", join({fmt(deviation), std::to_string(count),
                                                       std::to_string(count_shift)})};
  r.summary = {{"max_deviation", deviation},
               {"count", count},
               {"count_shifted", count_shift},
               {"hermitian_defect", hermitian_defect(H.matrix)}};
  if (deviation > 1e-12) r.violations.push_back("gauge deviation " + fmt(deviation) + " > 1e-12");
  if (count != count_shift)
    r.violations.push_back("negative-eigenvalue counts differ: " + std::to_string(count) + " vs " +
                           std::to_string(count_shift));
  return r;
}

// max over entries of |M_A| - M_0, where M_0 is the free matrix (real, entrywise >= |M_A| expected)
double domination_excess(const Eigen::MatrixXcd& mag, const Eigen::MatrixXcd& free) {
  return (mag.cwiseAbs() - free.real()).maxCoeff();
}

Report diamagnetic(const Context& ctx) {
  const GridSpec grid = ctx.cfg.grid();
  const ScalarField V = ctx.potential();
  const SpectralDecomposition mag(add_potential(ctx.levy_operator(), V));
  const SpectralDecomposition free(add_potential(build_h0_levy(grid, ctx.build()), V));
  const double bottom = std::min(mag.eigenvalues().minCoeff(), free.eigenvalues().minCoeff());
  Report r;
  r.csv.push_back("kind,parameter,max_excess");
  double worst = -INFINITY;
  auto record = [&](const std::string& kind, double p, double excess) {
    worst = std::max(worst, excess);
    r.csv.push_back(join({kind, fmt(p), fmt(excess)}));
    if (excess > 1e-12)
      r.violations.push_back(kind + " domination fails at " + fmt(p) + ": excess " + fmt(excess));
  };
  for (double t : ctx.cfg.times) {
    auto f = [t](double l) { return std::exp(-t * l); };
    record("semigroup", t, domination_excess(mag.function_matrix(f), free.function_matrix(f)));
  }
  for (double lambda : ctx.cfg.lambdas) {
    if (lambda + bottom <= 0.0)
      throw NumericalError("resolvent", "lambda = " + fmt(lambda) + " is not above -E_0, where E_0 = " + fmt(bottom) +
                                            " is the bottom of the spectrum");
    auto f = [lambda](double l) { return 1.0 / (l + lambda); };
    record("resolvent", lambda, domination_excess(mag.function_matrix(f), free.function_matrix(f)));
  }
  const levy::DiamagneticReport mc = levy::diamagnetic_mc_check(
      ctx.initial_datum(), V, ctx.vector_potential(), ctx.cfg.t, ctx.start_point(), ctx.mc());
  r.summary = {{"max_matrix_excess", worst},
               {"mc_magnetic", estimate_json(mc.magnetic)},
               {"mc_free", estimate_json(mc.free)},
               {"mc_max_pathwise_excess", mc.max_pathwise_excess},
               {"mc_margin", mc.margin},
               {"mc_holds", mc.holds}};
  r.timing["mc_wall_time"] = mc.magnetic.wall_time;
  if (!mc.holds)
    r.violations.push_back("Monte Carlo domination fails: |magnetic| = " + fmt(std::abs(mc.magnetic.mean)) +
                           ", free = " + fmt(mc.free.mean.real()) + ", pathwise excess " +
                           fmt(mc.max_pathwise_excess));
  return r;
}

Eigen::VectorXd v_minus_samples(const Context& ctx) {
  return sample_field(ctx.cfg.grid(), negative_part(ctx.potential()));
}

Report bs_count(const Context& ctx) {
  const HermitianOperator H = ctx.levy_operator();
  Eigen::VectorXd v = v_minus_samples(ctx);
  if (ctx.cfg.floor > 0.0) v = v.cwiseMax(ctx.cfg.floor);
  const Eigen::VectorXd spectrum = eigenvalues(add_potential(H, Eigen::VectorXd(-v)));
  Report r;
  r.csv.push_back("alpha,n_count,bs_count");
  json rows = json::array();
  for (double alpha : ctx.cfg.alphas) {
    const int n = count_below(spectrum, -alpha);
    const int bs = birman::count_bs_above_one(birman::birman_schwinger(H, v, alpha));
    r.csv.push_back(join({fmt(alpha), std::to_string(n), std::to_string(bs)}));
    rows.push_back({{"alpha", alpha}, {"n_count", n}, {"bs_count", bs}});
    const bool ok = ctx.cfg.floor > 0.0 ? n == bs : n <= bs;
    if (!ok)
      r.violations.push_back("alpha " + fmt(alpha) + ": N = " + std::to_string(n) + ", count(mu > 1) = " +
                             std::to_string(bs));
  }
  r.summary = {{"rows", rows}, {"floor", ctx.cfg.floor}, {"builder", to_string(H.tag)}};
  return r;
}

Report chain(const Context& ctx) {
  const HermitianOperator H_free = build_h0_levy(ctx.cfg.grid(), ctx.build());
  const HermitianOperator H_mag = ctx.cfg.magnetic ? ctx.levy_operator() : H_free;
  const Eigen::VectorXd v = v_minus_samples(ctx);
  Report r;
  r.csv.push_back(birman::chain_csv_header());
  json rows = json::array();
  for (double alpha : ctx.cfg.alphas) {
    const birman::ChainReport c = birman::counting_chain(H_free, H_mag, v, alpha, 1e-9, false);
    r.csv.push_back(birman::chain_csv_row(c));
    rows.push_back({{"alpha", c.alpha},
                    {"n_count", c.n_count},
                    {"bs_count", c.bs_count},
                    {"trace_free", c.trace_free},
                    {"trace_mag", c.trace_mag},
                    {"bound_value", c.bound_value},
                    {"holds", c.holds}});
    if (!c.holds) r.violations.push_back("alpha " + fmt(alpha) + ": " + c.violation);
  }
  r.summary = {{"rows", rows}, {"f_infinity_at_1", birman::f_infinity(1.0)}};
  return r;
}

json scan_json(const bounds::ScanResult& s) {
  json rows = json::array();
  for (const auto& row : s.rows) {
    json lt = json::object();
    for (const auto& [k, v] : row.lt_sums) lt[fmt(k)] = v;
    rows.push_back({{"g", row.coupling},
                    {"N", row.count},
                    {"rhs_d", row.rhs_d},
                    {"rhs_half", row.rhs_half},
                    {"ratio", row.ratio},
                    {"lambda_min", row.lambda_min},
                    {"lt", lt},
                    {"error", row.error}});
  }
  return {{"rows", rows}, {"empirical_cd", s.empirical_cd}, {"builder", s.builder}};
}

void check_scan(const bounds::ScanResult& s, const std::string& label, Report& r, bool& numerical_failure,
                std::string& failure) {
  int previous = -1;
  for (const auto& row : s.rows) {
    if (!row.error.empty()) {
      numerical_failure = true;
      failure += label + " g = " + fmt(row.coupling) + ": " + row.error + "; ";
      continue;
    }
    if (row.count < previous)
      r.violations.push_back(label + " count decreases at g = " + fmt(row.coupling) + ": " +
                             std::to_string(previous) + " -> " + std::to_string(row.count));
    previous = row.count;
  }
}

bounds::ScanSpec scan_spec(const Context& ctx, bool magnetic) {
  bounds::ScanSpec spec;
  spec.grid = ctx.cfg.grid();
  spec.v_minus = negative_part(ctx.potential());
  if (magnetic) spec.potential = ctx.vector_potential();
  spec.couplings = ctx.cfg.couplings;
  spec.lt_exponents = ctx.cfg.k_exponents;
  spec.build = ctx.build();
  return spec;
}

Report bound_scan(const Context& ctx) {
  Report r;
  bool numerical_failure = false;
  std::string failure;
  const bounds::ScanResult free = bounds::bound_scan(scan_spec(ctx, false));
  check_scan(free, "free", r, numerical_failure, failure);
  r.csv.push_back(bounds::scan_csv_header());
  for (const auto& row : free.rows) r.csv.push_back(bounds::scan_csv_row(row));
  r.summary = scan_json(free);
  if (ctx.cfg.magnetic) {
    const bounds::ScanResult mag = bounds::bound_scan(scan_spec(ctx, true));
    check_scan(mag, "magnetic", r, numerical_failure, failure);
    bool within = true;
    for (const auto& row : mag.rows)
      if (row.error.empty() && row.count > free.empirical_cd * (row.rhs_d + row.rhs_half) * (1.0 + 1e-12))
        within = false;
    json m = scan_json(mag);
    m["within_free_line"] = within;
    r.summary["magnetic"] = m;
  }
  if (numerical_failure) throw NumericalError("bound-scan", failure);
  return r;
}

Report lt_scan(const Context& ctx) {
  const HermitianOperator H = ctx.levy_operator();
  const Eigen::VectorXd profile = v_minus_samples(ctx);
  Report r;
  r.csv.push_back("g,k,beta,lambda_min,count,lt_sum,stieltjes,abs_diff");
  double worst = 0.0;
  for (double g : ctx.cfg.couplings) {
    const Eigen::VectorXd spectrum = eigenvalues(add_potential(H, Eigen::VectorXd(-g * profile)));
    const double beta = bounds::default_beta(spectrum);
    const double lambda_min = std::min(spectrum.minCoeff(), -beta);
    const bounds::CountingFunction count(spectrum);
    std::vector<double> below;
    for (double l : bounds::negative_part_of_spectrum(spectrum))
      if (l < -beta) below.push_back(l);
    for (double k : ctx.cfg.k_exponents) {
      const double lt = bounds::lt_sum(below, k);
      const double st = bounds::stieltjes_lt(count, k, beta, lambda_min);
      const double diff = std::abs(st - lt);
      worst = std::max(worst, diff / std::max(1.0, lt));
      r.csv.push_back(join({fmt(g), fmt(k), fmt(beta), fmt(lambda_min), std::to_string(below.size()),
                            fmt(lt), fmt(st), fmt(diff)}));
      if (diff > 1e-9 * std::max(1.0, lt))
        r.violations.push_back("g " + fmt(g) + ", k " + fmt(k) + ": Stieltjes " + fmt(st) + " vs sum " + fmt(lt));
    }
  }
  r.summary = {{"max_relative_difference", worst}, {"builder", to_string(H.tag)}};
  return r;
}

struct GridValue {
  std::complex<double> value;
  Point x;
};

// e^{-tH} u at the grid point nearest the configured start.
GridValue matrix_reference(const HermitianOperator& H, const Context& ctx) {
  const GridSpec grid = ctx.cfg.grid();
  const std::int64_t idx = nearest_index(grid, ctx.start_point());
  const Eigen::VectorXcd u = sample_field(grid, ctx.initial_datum()).cast<std::complex<double>>();
  return {semigroup_apply(H, ctx.cfg.t, u)[idx], grid.point(idx)};
}

Report fk_mc(const Context& ctx) {
  const GridSpec grid = ctx.cfg.grid();
  const ScalarField V = ctx.potential();
  const HermitianOperator H0 =
      grid.boundary == Boundary::Periodic ? build_h0_spectral(grid) : build_h0_levy(grid, ctx.build());
  const GridValue ref = matrix_reference(add_potential(H0, V), ctx);
  const double reference = ref.value.real();
  const Point& x = ref.x;
  const levy::MCEstimate est = levy::feynman_kac(ctx.initial_datum(), V, ctx.cfg.t, x, ctx.mc());
  const double diff = std::abs(est.mean.real() - reference);
  const double tol = std::max(3.0 * est.stderr_, 0.05 * std::abs(reference));
  Report r;
  r.csv = {"estimate,stderr,reference,abs_diff,tolerance",
           join({fmt(est.mean.real()), fmt(est.stderr_), fmt(reference), fmt(diff), fmt(tol)})};
  r.summary = {{"estimate", estimate_json(est)},
               {"reference", reference},
               {"reference_builder", to_string(H0.tag)},
               {"abs_diff", diff},
               {"tolerance", tol},
               {"t", ctx.cfg.t}};
  r.timing["mc_wall_time"] = est.wall_time;
  if (diff > tol)
    r.violations.push_back("|MC - reference| = " + fmt(diff) + " > " + fmt(tol) + " (MC " + fmt(est.mean.real()) +
                           ", reference " + fmt(reference) + ")");
  return r;
}

Report fki_mc(const Context& ctx) {
  const ScalarField V = ctx.potential();
  const VectorPotentialField A = ctx.vector_potential();
  const GridValue ref = matrix_reference(add_potential(ctx.levy_operator(), V), ctx);
  const levy::DiamagneticReport mc =
      levy::diamagnetic_mc_check(ctx.initial_datum(), V, A, ctx.cfg.t, ref.x, ctx.mc());
  Report r;
  r.csv = {"estimate_re,estimate_im,stderr,free_estimate,free_stderr,reference_re,reference_im",
           join({fmt(mc.magnetic.mean.real()), fmt(mc.magnetic.mean.imag()), fmt(mc.magnetic.stderr_),
                 fmt(mc.free.mean.real()), fmt(mc.free.stderr_), fmt(ref.value.real()), fmt(ref.value.imag())})};
  r.summary = {{"estimate", estimate_json(mc.magnetic)},
               {"free_estimate", estimate_json(mc.free)},
               {"lattice_reference", {{"re", ref.value.real()}, {"im", ref.value.imag()}}},
               {"max_pathwise_excess", mc.max_pathwise_excess},
               {"diamagnetic_holds", mc.holds},
               {"t", ctx.cfg.t}};
  r.timing["mc_wall_time"] = mc.magnetic.wall_time;
  if (!mc.holds)
    r.violations.push_back("|FKI| = " + fmt(std::abs(mc.magnetic.mean)) + " exceeds free estimate " +
                           fmt(mc.free.mean.real()));
  return r;
}

Report dispatch(const Context& ctx) {
  const std::string& c = ctx.cfg.command;
  if (c == "kernel-check") return kernel_check(ctx);
  if (c == "levy-khinchin") return levy_khinchin(ctx);
  if (c == "gauge-check") return gauge_check(ctx);
  if (c == "diamagnetic") return diamagnetic(ctx);
  if (c == "bs-count") return bs_count(ctx);
  if (c == "chain") return chain(ctx);
  if (c == "bound-scan") return bound_scan(ctx);
  if (c == "lt-scan") return lt_scan(ctx);
  if (c == "fk-mc") return fk_mc(ctx);
  return fki_mc(ctx);
}

void write_text(const std::filesystem::path& file, const std::string& text) {
  std::ofstream os(file, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + file.string());
  os << text;
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

RunOutcome run_experiment(const ExperimentConfig& base, const RunOptions& opts) {
  ExperimentConfig cfg = base;
  if (opts.seed) cfg.seed = *opts.seed;
  if (opts.out) cfg.output_directory = opts.out->string();
  const std::string hash = config::config_hash(cfg);
  const auto start = std::chrono::steady_clock::now();

  RunOutcome outcome;
  Report report;
  try {
    report = dispatch(Context{cfg, opts.workers});
  } catch (const NumericalError& e) {
    return {kNumericalFailure, "numerical failure in stage '" + e.stage() + "': " + e.what(), {}};
  } catch (const InvariantViolation& e) {
    return {kInvariantViolation, std::string("invariant violated: ") + e.what(), {}};
  } catch (const std::exception& e) {
    return {kNumericalFailure, "numerical failure in stage '" + cfg.command + "': " + e.what(), {}};
  }

  report.summary["command"] = cfg.command;
  report.summary["config_hash"] = hash;
  report.summary["version"] = kVersion;
  report.summary["invariants_hold"] = report.violations.empty();
  report.summary["violations"] = report.violations;

  const std::filesystem::path dir = cfg.output_directory;
  try {
    std::filesystem::create_directories(dir);
    const bool want_csv = std::find(cfg.formats.begin(), cfg.formats.end(), "csv") != cfg.formats.end();
    const bool want_json = std::find(cfg.formats.begin(), cfg.formats.end(), "json") != cfg.formats.end();
    if (want_csv && !report.csv.empty()) {
      std::string text = "# clrlab " + std::string(kVersion) + " config " + hash + "\n";
      for (const std::string& line : report.csv) text += line + "\n";
      outcome.files.push_back(dir / (cfg.command + ".csv"));
      write_text(outcome.files.back(), text);
    }
    if (want_json) {
      outcome.files.push_back(dir / (cfg.command + ".json"));
      write_text(outcome.files.back(), report.summary.dump(2) + "\n");
    }
    json meta = report.timing;
    meta["timestamp"] = utc_timestamp();
    meta["wall_time"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    meta["config_hash"] = hash;
    meta["version"] = kVersion;
    meta["workers"] = opts.workers;
    outcome.files.push_back(dir / (cfg.command + ".meta.json"));
    write_text(outcome.files.back(), meta.dump(2) + "\n");
  } catch (const std::exception& e) {
    return {kNumericalFailure, std::string("output stage: ") + e.what(), outcome.files};
  }

  if (!report.violations.empty()) {
    outcome.exit_code = kInvariantViolation;
    outcome.message = "invariant violated: ";
    for (std::size_t i = 0; i < report.violations.size(); ++i)
      outcome.message += (i ? "; " : "") + report.violations[i];
    return outcome;
  }
  outcome.message = cfg.command + ": all invariants hold (config " + hash + ")";
  return outcome;
}

int run(const std::filesystem::path& config_file, const RunOptions& opts, std::ostream& out,
        std::ostream& err) {
  ExperimentConfig cfg;
  try {
    cfg = config::load_config(config_file);
  } catch (const config::ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  }
  const RunOutcome outcome = run_experiment(cfg, opts);
  for (const auto& f : outcome.files) out << "wrote " << f.string() << "\n";
  (outcome.exit_code == kOk ? out : err) << outcome.message << "\n";
  return outcome.exit_code;
}

namespace {

const std::vector<std::pair<std::string, std::string>>& command_docs() {
  static const std::vector<std::pair<std::string, std::string>> docs = {
      {"kernel-check", "free kernel mass, Chapman-Kolmogorov residual (d = 1) and diagonal bound; needs scan.times"},
      {"levy-khinchin", "Levy-Khinchin residual at |xi| in scan.xi along the last axis"},
      {"gauge-check", "U H_A U* against H_{A + grad phi}; needs [gauge], optional [magnetic] and [potential]"},
      {"diamagnetic", "entrywise semigroup/resolvent domination and Monte Carlo domination; needs [magnetic], scan.times, scan.lambdas"},
      {"bs-count", "N_{-alpha} against count(mu > 1) of K_alpha; needs [potential], scan.alphas, optional scan.floor"},
      {"chain", "counting chain N <= count <= Tr F(K)/F(1), Tr F(K(A)) <= Tr F(K); needs [potential], scan.alphas"},
      {"bound-scan", "negative-eigenvalue counts against the CLR right-hand side over scan.couplings"},
      {"lt-scan", "Lieb-Thirring sums against their Stieltjes form over scan.couplings and scan.k"},
      {"fk-mc", "free Feynman-Kac Monte Carlo against e^{-tH} u on the grid"},
      {"fki-mc", "magnetic Feynman-Kac-Ito Monte Carlo with the diamagnetic bound; needs [magnetic]"}};
  return docs;
}

std::string kind_name(FieldKind k) {
  switch (k) {
    case FieldKind::Potential: return "potential";
    case FieldKind::Magnetic: return "magnetic";
    case FieldKind::Gauge: return "gauge";
  }
  return "?";
}

}  // namespace

std::string list_catalog(bool as_json) {
  if (as_json) {
    json out;
    out["version"] = kVersion;
    out["commands"] = json::array();
    for (const auto& [name, doc] : command_docs()) out["commands"].push_back({{"name", name}, {"description", doc}});
    out["fields"] = json::array();
    for (const CatalogEntry& e : field_catalog()) {
      json params = json::array();
      for (const ParamSpec& p : e.params)
        params.push_back({{"name", p.name}, {"default", p.default_value}, {"min", p.min_value},
                          {"max", p.max_value}, {"doc", p.doc}});
      out["fields"].push_back({{"name", e.name}, {"kind", kind_name(e.kind)},
                               {"description", e.description}, {"params", params}});
    }
    return out.dump(2) + "\n";
  }
  std::ostringstream os;
  os << "commands:\n";
  for (const auto& [name, doc] : command_docs()) os << "  " << name << "\n      " << doc << "\n";
  os << "\nfields:\n";
  for (const CatalogEntry& e : field_catalog()) {
    os << "  " << e.name << " (" << kind_name(e.kind) << "): " << e.description << "\n";
    for (const ParamSpec& p : e.params)
      os << "      " << p.name << " = " << format_double(p.default_value) << "  in [" << format_double(p.min_value)
         << ", " << format_double(p.max_value) << "]  " << p.doc << "\n";
  }
  return os.str();
}

}  // namespace clrlab::experiments
