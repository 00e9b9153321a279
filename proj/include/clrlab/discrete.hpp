#pragma once

// Dense finite-dimensional realizations of H_0, H_A and H_A + V on a box lattice.
//
// Two builders:
//  * spectral: h(D) diagonal in the discrete Fourier basis of a periodic grid (exact symbol);
//  * Levy: the jump representation of H_A with lattice weights w(z) = n(z) dx^d, magnetic
//    phases exp(-i (y - x) . Gamma^A(x, y)) and zero extension outside the box. The free matrix
//    is a sub-Markov generator, so the diamagnetic and Kato inequalities hold entrywise.

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <functional>
#include <string>

#include "clrlab/fields.hpp"
#include "clrlab/grid.hpp"

namespace clrlab {

enum class BuilderTag : std::uint32_t {
  Custom = 0,
  SpectralFree = 1,
  LevyFree = 2,
  LevyMagnetic = 3,
};

std::string to_string(BuilderTag tag);

struct HermitianOperator {
  Eigen::MatrixXcd matrix;
  BuilderTag tag = BuilderTag::Custom;
  GridSpec grid;
  std::string provenance;

  Eigen::Index side() const { return matrix.rows(); }
  bool is_real() const { return matrix.imag().cwiseAbs().maxCoeff() == 0.0; }
};

/// max |M - M^*| relative to max |M|.
template <typename Derived>
double hermitian_defect(const Eigen::MatrixBase<Derived>& m) {
  const double scale = m.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() / scale;
}

/// Number of entries strictly below `threshold`.
template <typename Derived>
int count_below(const Eigen::MatrixBase<Derived>& values, double threshold) {
  return static_cast<int>((values.array() < threshold).count());
}

Eigen::VectorXd sample_field(const GridSpec& grid, const ScalarField& field);

/// h(D) on the periodic grid: eigenvalues h(xi_k) on the dual lattice (pi/L){-n/2..n/2-1}^d.
HermitianOperator build_h0_spectral(const GridSpec& grid);

/// Spectral h(D) on a box `pad_factor` times larger (same spacing), compressed to the original
/// box. Used as a Dirichlet-type reference for the zero-extension Levy builder.
HermitianOperator build_h0_dirichlet_reference(const GridSpec& grid, int pad_factor = 4);

struct LevyBuildOptions {
  int circulation_nodes = kDefaultLineNodes;
  double jump_cutoff = 40.0;  // lattice jumps longer than this carry weight < e^-40 and are dropped
  int workers = 0;            // 0: hardware concurrency
};

/// Radius of the ball with the volume of one lattice cell; jumps inside it are replaced by a
/// discrete magnetic Laplacian with coefficient levy_second_moment(radius)/(2d).
double small_jump_radius(const GridSpec& grid);

HermitianOperator build_hA_levy(const GridSpec& grid, const VectorPotentialField& A,
                                const LevyBuildOptions& opts = {});
HermitianOperator build_h0_levy(const GridSpec& grid, const LevyBuildOptions& opts = {});

/// H + diag(V(x)).
HermitianOperator add_potential(const HermitianOperator& H, const ScalarField& V);
HermitianOperator add_potential(const HermitianOperator& H, const Eigen::VectorXd& values);

/// U H U^* with U = diag(exp(i phi(x))).
HermitianOperator gauge_conjugate(const HermitianOperator& H, const GaugeFunction& phi);

/// Ascending eigenvalues. Uses the real symmetric solver when the matrix has no imaginary part.
Eigen::VectorXd eigenvalues(const HermitianOperator& H);

struct EigenCount {
  int count = 0;
  Eigen::VectorXd eigenvalues;  // full ascending spectrum
};

/// Eigenvalues strictly below `threshold` (ties excluded), with the full spectrum.
EigenCount eigen_count_below(const HermitianOperator& H, double threshold);

/// Eigendecomposition H = Q diag(lambda) Q^*, reused for functions of H.
class SpectralDecomposition {
 public:
  explicit SpectralDecomposition(const HermitianOperator& H);
  explicit SpectralDecomposition(const Eigen::MatrixXcd& m, const std::string& provenance = "matrix");

  const Eigen::VectorXd& eigenvalues() const { return values_; }
  const Eigen::MatrixXcd& eigenvectors() const { return vectors_; }

  /// f(H) u.
  Eigen::VectorXcd apply(const std::function<double(double)>& f, const Eigen::VectorXcd& u) const;
  /// f(H) as a dense matrix.
  Eigen::MatrixXcd function_matrix(const std::function<double(double)>& f) const;

  Eigen::VectorXcd semigroup(double t, const Eigen::VectorXcd& u) const;
  Eigen::VectorXcd resolvent(double lambda, const Eigen::VectorXcd& u) const;

 private:
  Eigen::VectorXd values_;
  Eigen::MatrixXcd vectors_;
};

/// e^{-tH} u. Returns u unchanged at t = 0.
Eigen::VectorXcd semigroup_apply(const HermitianOperator& H, double t, const Eigen::VectorXcd& u);

}  // namespace clrlab
