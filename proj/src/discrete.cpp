#include "clrlab/discrete.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "clrlab/detail/parallel.hpp"
#include "clrlab/errors.hpp"
#include "clrlab/kernel.hpp"

namespace clrlab {
namespace {

using cd = std::complex<double>;

// Displacement-indexed table of a function of the lattice displacement, |delta_a| < n.
struct DisplacementTable {
  int d, n;
  std::vector<double> values;

  DisplacementTable(int d_, int n_) : d(d_), n(n_) {
    std::size_t size = 1;
    for (int a = 0; a < d; ++a) size *= static_cast<std::size_t>(2 * n - 1);
    values.assign(size, 0.0);
  }
  std::size_t offset(const Eigen::Vector3i& delta) const {
    std::size_t off = 0;
    for (int a = d - 1; a >= 0; --a) off = off * (2 * n - 1) + static_cast<std::size_t>(delta[a] + n - 1);
    return off;
  }
  double operator()(const Eigen::Vector3i& delta) const { return values[offset(delta)]; }
};

// Levy weight n(|delta| dx) dx^d memoized on the integer |delta|^2.
class LatticeWeights {
 public:
  LatticeWeights(int d, double dx) : d_(d), dx_(dx), volume_(std::pow(dx, d)) {}

  double operator()(std::int64_t q) {
    if (q == 0) return 0.0;
    if (static_cast<std::size_t>(q) >= cache_.size()) cache_.resize(q + 1, -1.0);
    double& slot = cache_[q];
    if (slot < 0.0) slot = kernel::levy_density_radial(dx_ * std::sqrt(static_cast<double>(q)), d_) * volume_;
    return slot;
  }

 private:
  int d_;
  double dx_, volume_;
  std::vector<double> cache_;
};

// Total jump rate of the infinite lattice within the cutoff.
double lattice_rate(int d, double dx, double cutoff, LatticeWeights& weights) {
  const int reach = static_cast<int>(std::ceil(cutoff / dx));
  const std::int64_t q_max = static_cast<std::int64_t>(std::floor((cutoff / dx) * (cutoff / dx)));
  // multiplicity of each |delta|^2 value, then one weighted sum (ascending q for a stable sum order)
  std::vector<std::int64_t> multiplicity(static_cast<std::size_t>(q_max) + 1, 0);
  const int lo1 = d >= 2 ? -reach : 0, lo2 = d >= 3 ? -reach : 0;
  const int hi1 = d >= 2 ? reach : 0, hi2 = d >= 3 ? reach : 0;
  for (int c = lo2; c <= hi2; ++c)
    for (int b = lo1; b <= hi1; ++b)
      for (int a = -reach; a <= reach; ++a) {
        const std::int64_t q = std::int64_t(a) * a + std::int64_t(b) * b + std::int64_t(c) * c;
        if (q > 0 && q <= q_max) ++multiplicity[q];
      }
  double total = 0.0;
  for (std::int64_t q = q_max; q >= 1; --q)
    if (multiplicity[q] > 0) total += static_cast<double>(multiplicity[q]) * weights(q);
  return total;
}

// m(delta) = N^{-1} sum_k h(xi_k) exp(i xi_k . delta dx) on the periodic grid, delta in [0, n)^d,
// by one 1-D DFT per axis.
std::vector<double> spectral_row(int d, int n, double half_width) {
  std::int64_t total = 1;
  for (int a = 0; a < d; ++a) total *= n;
  std::vector<cd> data(static_cast<std::size_t>(total));
  const double dxi = std::numbers::pi / half_width;
  for (std::int64_t flat = 0; flat < total; ++flat) {
    Point xi(d);
    std::int64_t rest = flat;
    for (int a = 0; a < d; ++a) {
      xi[a] = dxi * (static_cast<double>(rest % n) - n / 2);
      rest /= n;
    }
    data[flat] = kernel::symbol_h(xi);
  }
  // twiddle[k][j] = exp(2 pi i (k - n/2) j / n)
  std::vector<cd> twiddle(static_cast<std::size_t>(n) * n);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j) {
      const long long f = static_cast<long long>(k - n / 2) * j % n;
      twiddle[static_cast<std::size_t>(k) * n + j] = std::polar(1.0, 2.0 * std::numbers::pi * f / n);
    }
  std::int64_t stride = 1;
  std::vector<cd> line(n), out(n);
  for (int a = 0; a < d; ++a) {
    for (std::int64_t base = 0; base < total; ++base) {
      if ((base / stride) % n != 0) continue;
      for (int k = 0; k < n; ++k) line[k] = data[base + k * stride];
      for (int j = 0; j < n; ++j) {
        cd acc = 0.0;
        for (int k = 0; k < n; ++k) acc += line[k] * twiddle[static_cast<std::size_t>(k) * n + j];
        out[j] = acc;
      }
      for (int j = 0; j < n; ++j) data[base + j * stride] = out[j];
    }
    stride *= n;
  }
  std::vector<double> row(static_cast<std::size_t>(total));
  for (std::int64_t i = 0; i < total; ++i) row[i] = data[i].real() / static_cast<double>(total);
  // enforce m(delta) = m(-delta) exactly
  std::vector<double> sym(row.size());
  for (std::int64_t flat = 0; flat < total; ++flat) {
    std::int64_t rest = flat, mirror = 0, place = 1;
    for (int a = 0; a < d; ++a) {
      const std::int64_t i = rest % n;
      mirror += ((n - i) % n) * place;
      place *= n;
      rest /= n;
    }
    sym[flat] = 0.5 * (row[flat] + row[mirror]);
  }
  return sym;
}

}  // namespace

std::string to_string(BuilderTag tag) {
  switch (tag) {
    case BuilderTag::SpectralFree: return "spectral-free";
    case BuilderTag::LevyFree: return "levy-free";
    case BuilderTag::LevyMagnetic: return "levy-magnetic";
    case BuilderTag::Custom: break;
  }
  return "custom";
}

Eigen::VectorXd sample_field(const GridSpec& grid, const ScalarField& field) {
  Eigen::VectorXd v(grid.size());
  for (std::int64_t i = 0; i < grid.size(); ++i) v[i] = field(grid.point(i));
  return v;
}

HermitianOperator build_h0_spectral(const GridSpec& grid) {
  grid.validate();
  const int d = grid.d, n = grid.n;
  const std::vector<double> row = spectral_row(d, n, grid.half_width);
  const std::int64_t N = grid.size();
  Eigen::MatrixXcd m(N, N);
  for (std::int64_t j = 0; j < N; ++j) {
    const Eigen::Vector3i bj = grid.multi_index(j);
    for (std::int64_t i = 0; i < N; ++i) {
      const Eigen::Vector3i bi = grid.multi_index(i);
      std::int64_t flat = 0;
      for (int a = d - 1; a >= 0; --a) flat = flat * n + ((bi[a] - bj[a]) % n + n) % n;
      m(i, j) = row[flat];
    }
  }
  GridSpec g = grid;
  g.boundary = Boundary::Periodic;
  return {std::move(m), BuilderTag::SpectralFree, g, "build_h0_spectral"};
}

HermitianOperator build_h0_dirichlet_reference(const GridSpec& grid, int pad_factor) {
  grid.validate();
  if (pad_factor < 1) throw DomainError("dirichlet reference: pad_factor must be >= 1");
  const int d = grid.d, n = grid.n, big = pad_factor * n;
  const std::vector<double> row = spectral_row(d, big, pad_factor * grid.half_width);
  const std::int64_t N = grid.size();
  Eigen::MatrixXcd m(N, N);
  for (std::int64_t j = 0; j < N; ++j) {
    const Eigen::Vector3i bj = grid.multi_index(j);
    for (std::int64_t i = 0; i < N; ++i) {
      const Eigen::Vector3i bi = grid.multi_index(i);
      std::int64_t flat = 0;
      for (int a = d - 1; a >= 0; --a) flat = flat * big + ((bi[a] - bj[a]) % big + big) % big;
      m(i, j) = row[flat];
    }
  }
  GridSpec g = grid;
  g.boundary = Boundary::ZeroExtension;
  return {std::move(m), BuilderTag::Custom, g,
          "build_h0_dirichlet_reference(pad=" + std::to_string(pad_factor) + ")"};
}

double small_jump_radius(const GridSpec& grid) {
  const double dx = grid.spacing();
  switch (grid.d) {
    case 1: return 0.5 * dx;
    case 2: return dx / std::sqrt(std::numbers::pi);
    default: return dx * std::cbrt(3.0 / (4.0 * std::numbers::pi));
  }
}

namespace {

HermitianOperator build_levy(const GridSpec& grid, const VectorPotentialField* A,
                             const LevyBuildOptions& opts) {
  grid.validate();
  if (grid.boundary != Boundary::ZeroExtension)
    throw DomainError("build_hA_levy: the Levy builder needs a zero-extension grid");
  const int d = grid.d, n = grid.n;
  const double dx = grid.spacing();
  const std::int64_t N = grid.size();

  LatticeWeights weights(d, dx);
  const double laplace = kernel::levy_second_moment(small_jump_radius(grid), d) / (2.0 * d) / (dx * dx);
  const double diagonal = lattice_rate(d, dx, opts.jump_cutoff, weights) + 2.0 * d * laplace;

  DisplacementTable table(d, n);
  const double cutoff_q = (opts.jump_cutoff / dx) * (opts.jump_cutoff / dx);
  {
    const int lo1 = d >= 2 ? -(n - 1) : 0, lo2 = d >= 3 ? -(n - 1) : 0;
    const int hi1 = d >= 2 ? n - 1 : 0, hi2 = d >= 3 ? n - 1 : 0;
    for (int c = lo2; c <= hi2; ++c)
      for (int b = lo1; b <= hi1; ++b)
        for (int a = -(n - 1); a <= n - 1; ++a) {
          const Eigen::Vector3i delta(a, b, c);
          const std::int64_t q = std::int64_t(a) * a + std::int64_t(b) * b + std::int64_t(c) * c;
          double w = q <= cutoff_q ? weights(q) : 0.0;
          if (q == 1) w += laplace;
          table.values[table.offset(delta)] = w;
        }
  }

  Eigen::MatrixXcd m(N, N);
  detail::parallel_for(N, opts.workers, [&](std::int64_t i) {
    const Eigen::Vector3i bi = grid.multi_index(i);
    const Point xi = grid.point(i);
    m(i, i) = diagonal;
    for (std::int64_t j = i + 1; j < N; ++j) {
      const Eigen::Vector3i bj = grid.multi_index(j);
      const double w = table(bj - bi);
      cd value = -w;
      if (A != nullptr && w != 0.0) {
        const Point xj = grid.point(j);
        const double theta = (xj - xi).dot(circulation(*A, xi, xj, opts.circulation_nodes));
        value *= std::polar(1.0, -theta);
      }
      m(i, j) = value;
      m(j, i) = std::conj(value);
    }
  });
  if (A == nullptr) return {std::move(m), BuilderTag::LevyFree, grid, "build_h0_levy"};
  return {std::move(m), BuilderTag::LevyMagnetic, grid, "build_hA_levy(" + A->name + ")"};
}

}  // namespace

HermitianOperator build_hA_levy(const GridSpec& grid, const VectorPotentialField& A,
                                const LevyBuildOptions& opts) {
  return build_levy(grid, &A, opts);
}

HermitianOperator build_h0_levy(const GridSpec& grid, const LevyBuildOptions& opts) {
  return build_levy(grid, nullptr, opts);
}

HermitianOperator add_potential(const HermitianOperator& H, const Eigen::VectorXd& values) {
  if (values.size() != H.side()) throw DomainError("add_potential: size mismatch");
  if (!values.allFinite()) throw DomainError("add_potential: potential not finite on the grid");
  HermitianOperator out = H;
  out.matrix.diagonal().real() += values;
  out.provenance += " + V";
  return out;
}

HermitianOperator add_potential(const HermitianOperator& H, const ScalarField& V) {
  HermitianOperator out = add_potential(H, sample_field(H.grid, V));
  out.provenance = H.provenance + " + " + V.name;
  return out;
}

HermitianOperator gauge_conjugate(const HermitianOperator& H, const GaugeFunction& phi) {
  const std::int64_t N = H.side();
  Eigen::VectorXcd u(N);
  for (std::int64_t i = 0; i < N; ++i) u[i] = std::polar(1.0, phi.value(H.grid.point(i)));
  HermitianOperator out = H;
  out.matrix = u.asDiagonal() * H.matrix * u.conjugate().asDiagonal();
  out.provenance = "U(" + phi.name + ") " + H.provenance + " U*";
  return out;
}

Eigen::VectorXd eigenvalues(const HermitianOperator& H) {
  if (H.is_real()) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(H.matrix.real(), Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw NumericalError("eigensolve", H.provenance);
    return solver.eigenvalues();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(H.matrix, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("eigensolve", H.provenance);
  return solver.eigenvalues();
}

EigenCount eigen_count_below(const HermitianOperator& H, double threshold) {
  EigenCount out;
  out.eigenvalues = eigenvalues(H);
  out.count = count_below(out.eigenvalues, threshold);
  return out;
}

SpectralDecomposition::SpectralDecomposition(const Eigen::MatrixXcd& m, const std::string& provenance) {
  if (m.imag().cwiseAbs().maxCoeff() == 0.0) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m.real());
    if (solver.info() != Eigen::Success) throw NumericalError("eigensolve", provenance);
    values_ = solver.eigenvalues();
    vectors_ = solver.eigenvectors().cast<cd>();
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m);
    if (solver.info() != Eigen::Success) throw NumericalError("eigensolve", provenance);
    values_ = solver.eigenvalues();
    vectors_ = solver.eigenvectors();
  }
}

SpectralDecomposition::SpectralDecomposition(const HermitianOperator& H)
    : SpectralDecomposition(H.matrix, H.provenance) {}

Eigen::VectorXcd SpectralDecomposition::apply(const std::function<double(double)>& f,
                                              const Eigen::VectorXcd& u) const {
  Eigen::VectorXcd coeffs = vectors_.adjoint() * u;
  for (Eigen::Index k = 0; k < coeffs.size(); ++k) coeffs[k] *= f(values_[k]);
  return vectors_ * coeffs;
}

Eigen::MatrixXcd SpectralDecomposition::function_matrix(const std::function<double(double)>& f) const {
  Eigen::VectorXd fv = values_.unaryExpr(f);
  Eigen::MatrixXcd out = vectors_ * fv.asDiagonal() * vectors_.adjoint();
  return 0.5 * (out + out.adjoint());
}

Eigen::VectorXcd SpectralDecomposition::semigroup(double t, const Eigen::VectorXcd& u) const {
  if (t < 0.0) throw DomainError("semigroup: t must be >= 0");
  if (t == 0.0) return u;
  return apply([t](double lambda) { return std::exp(-t * lambda); }, u);
}

Eigen::VectorXcd SpectralDecomposition::resolvent(double lambda, const Eigen::VectorXcd& u) const {
  if (!(values_.minCoeff() + lambda > 0.0))
    throw NumericalError("resolvent", "H + lambda is not positive definite");
  return apply([lambda](double mu) { return 1.0 / (mu + lambda); }, u);
}

Eigen::VectorXcd semigroup_apply(const HermitianOperator& H, double t, const Eigen::VectorXcd& u) {
  if (t < 0.0) throw DomainError("semigroup_apply: t must be >= 0");
  if (t == 0.0) return u;
  return SpectralDecomposition(H).semigroup(t, u);
}

}  // namespace clrlab
