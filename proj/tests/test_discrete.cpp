#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <vector>

#include "clrlab/discrete.hpp"
#include "clrlab/errors.hpp"
#include "clrlab/kernel.hpp"
#include "clrlab/matrix_io.hpp"
#include "clrlab/quadrature.hpp"

using namespace clrlab;
using cd = std::complex<double>;

namespace {

GridSpec make_grid(int d, int n, double L, Boundary b) {
  GridSpec g;
  g.d = d;
  g.n = n;
  g.half_width = L;
  g.boundary = b;
  return g;
}

Eigen::VectorXcd random_complex(Eigen::Index n, unsigned seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> z;
  Eigen::VectorXcd u(n);
  for (Eigen::Index i = 0; i < n; ++i) u[i] = cd(z(gen), z(gen));
  return u;
}

ScalarField gaussian_well(double depth, double width) {
  return {"well", [=](const Point& x) { return -depth * std::exp(-x.squaredNorm() / (width * width)); }};
}

VectorPotentialField constant_b(double b) {
  return {"constant-b", 2, [b](const Point& x) {
            Point a(2);
            a << -0.5 * b * x[1], 0.5 * b * x[0];
            return a;
          },
          1};
}

GaugeFunction quadratic_gauge() {
  return {"quadratic", 2, [](const Point& x) { return 0.5 * x.squaredNorm() + 0.25 * x[0] * x[1] + 0.1 * x[0]; },
          [](const Point& x) {
            Point g(2);
            g << x[0] + 0.25 * x[1] + 0.1, x[1] + 0.25 * x[0];
            return g;
          },
          2};
}

}  // namespace

TEST_CASE("grid") {
  GridSpec g = make_grid(2, 8, 2.0, Boundary::ZeroExtension);
  CHECK(g.spacing() == 0.5);
  CHECK(g.size() == 64);
  CHECK(g.point(0)[0] == -2.0);
  CHECK(g.point(1)[0] == -1.5);
  CHECK(g.point(8)[1] == -1.5);
  CHECK(g.flat_index(g.multi_index(37)) == 37);
  CHECK_THROWS_AS(make_grid(2, 7, 1.0, Boundary::Periodic).validate(), DomainError);
  CHECK_THROWS_AS(make_grid(4, 8, 1.0, Boundary::Periodic).validate(), DomainError);
  CHECK_THROWS_AS(make_grid(3, 32, 1.0, Boundary::Periodic).validate(), NumericalError);
}

TEST_CASE("spectral builder") {
  const GridSpec g = make_grid(1, 16, 4.0, Boundary::Periodic);
  const HermitianOperator H = build_h0_spectral(g);
  CHECK(H.tag == BuilderTag::SpectralFree);
  CHECK(hermitian_defect(H.matrix) <= 1e-12);
  CHECK((H.matrix * Eigen::VectorXcd::Ones(16)).cwiseAbs().maxCoeff() < 1e-12);
  const double k = std::numbers::pi / 4.0 * 3.0;  // dual node 3
  Eigen::VectorXcd wave(16);
  for (int i = 0; i < 16; ++i) wave[i] = std::polar(1.0, k * g.point(i)[0]);
  const double hk = std::sqrt(1 + k * k) - 1;
  CHECK((H.matrix * wave - hk * wave).cwiseAbs().maxCoeff() < 1e-12);

  // the spectrum is the symbol on the dual lattice
  const GridSpec g2 = make_grid(2, 8, 3.0, Boundary::Periodic);
  std::vector<double> expected;
  for (int a = -4; a < 4; ++a)
    for (int b = -4; b < 4; ++b) {
      const double x = std::numbers::pi / 3.0 * a, y = std::numbers::pi / 3.0 * b;
      expected.push_back(std::sqrt(1 + x * x + y * y) - 1);
    }
  std::sort(expected.begin(), expected.end());
  const Eigen::VectorXd ev = eigenvalues(build_h0_spectral(g2));
  for (int i = 0; i < 64; ++i) CHECK(std::abs(ev[i] - expected[i]) < 1e-12);
  CHECK(count_below(ev, -1e-12) == 0);
}

TEST_CASE("Levy builder structure") {
  const GridSpec g = make_grid(2, 16, 4.0, Boundary::ZeroExtension);
  const HermitianOperator H0 = build_h0_levy(g);
  const HermitianOperator HA = build_hA_levy(g, constant_b(0.8));
  CHECK(H0.tag == BuilderTag::LevyFree);
  CHECK(HA.tag == BuilderTag::LevyMagnetic);
  CHECK(H0.is_real());
  CHECK(!HA.is_real());
  CHECK(hermitian_defect(H0.matrix) == 0.0);
  CHECK(hermitian_defect(HA.matrix) == 0.0);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < H0.side(); ++i)
    for (Eigen::Index j = 0; j < H0.side(); ++j) {
      if (i == j) {
        CHECK(HA.matrix(i, i) == H0.matrix(i, i));
        continue;
      }
      CHECK(H0.matrix(i, j).real() <= 0.0);
      worst = std::max(worst, std::abs(std::abs(HA.matrix(i, j)) + H0.matrix(i, j).real()));
    }
  CHECK(worst <= 1e-15);
  // free Levy matrix is positive: killing at the boundary
  CHECK(eigen_count_below(H0, 0.0).count == 0);
}

TEST_CASE("Levy builder gauge covariance") {
  const GridSpec g = make_grid(2, 16, 4.0, Boundary::ZeroExtension);
  const GaugeFunction phi = quadratic_gauge();
  const HermitianOperator lhs = gauge_conjugate(build_h0_levy(g), phi);
  VectorPotentialField grad{"grad", 2, phi.gradient, 1};
  const HermitianOperator rhs = build_hA_levy(g, grad);
  CHECK((lhs.matrix - rhs.matrix).cwiseAbs().maxCoeff() <= 1e-12);

  const VectorPotentialField A = constant_b(1.0);
  VectorPotentialField shifted{"shifted", 2, [&](const Point& x) { return Point(A(x) + phi.gradient(x)); }, 2};
  const ScalarField V = gaussian_well(4.0, 1.5);
  const HermitianOperator H = add_potential(build_hA_levy(g, A), V);
  const HermitianOperator Hs = add_potential(build_hA_levy(g, shifted), V);
  CHECK((gauge_conjugate(H, phi).matrix - Hs.matrix).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(eigen_count_below(H, 0.0).count == eigen_count_below(Hs, 0.0).count);
}

TEST_CASE("Levy builder against the Dirichlet reference") {
  const GridSpec g = make_grid(1, 256, 20.0, Boundary::ZeroExtension);
  const Eigen::VectorXd levy = eigenvalues(build_h0_levy(g));
  const Eigen::VectorXd ref = eigenvalues(build_h0_dirichlet_reference(g));
  for (int i = 0; i < 5; ++i) {
    CAPTURE(i);
    CAPTURE(levy[i]);
    CAPTURE(ref[i]);
    CHECK(std::abs(levy[i] - ref[i]) <= 0.05 * ref[i]);
  }
}

TEST_CASE("potentials and counting") {
  const GridSpec g = make_grid(1, 64, 8.0, Boundary::ZeroExtension);
  const HermitianOperator H0 = build_h0_levy(g);
  const Eigen::VectorXd base = eigenvalues(H0);
  const ScalarField zero{"zero", [](const Point&) { return 0.0; }};
  CHECK(add_potential(H0, zero).matrix == H0.matrix);
  const ScalarField c{"c", [](const Point&) { return 0.37; }};
  CHECK(((eigenvalues(add_potential(H0, c)) - base).array() - 0.37).abs().maxCoeff() < 1e-12);
  CHECK(eigenvalues(add_potential(H0, gaussian_well(5.0, 1.0)))[0] < base[0]);

  HermitianOperator toy;
  toy.matrix = Eigen::MatrixXcd::Zero(2, 2);
  toy.matrix(0, 0) = -1.0;
  toy.matrix(1, 1) = 1.0;
  CHECK(eigen_count_below(toy, 0.0).count == 1);
  CHECK(eigen_count_below(toy, -1.0).count == 0);

  int prev = 0;
  for (double depth : {1.0, 2.0, 5.0, 10.0, 20.0, 50.0}) {
    const int n = eigen_count_below(add_potential(H0, gaussian_well(depth, 1.0)), 0.0).count;
    CHECK(n >= prev);
    prev = n;
  }
  CHECK(prev > 1);
}

TEST_CASE("semigroup") {
  const GridSpec g = make_grid(1, 256, 20.0, Boundary::Periodic);
  const HermitianOperator H = build_h0_spectral(g);
  const SpectralDecomposition dec(H);
  const Eigen::VectorXcd v = random_complex(H.side(), 1);
  CHECK(semigroup_apply(H, 0.0, v) == v);
  const Eigen::VectorXcd two = dec.semigroup(0.3, dec.semigroup(0.5, v));
  CHECK((two - dec.semigroup(0.8, v)).cwiseAbs().maxCoeff() < 1e-10);

  // kernel convolution oracle for a Gaussian well inside the box
  auto u = [](double y) { return std::exp(-0.5 * y * y); };
  Eigen::VectorXcd uv(H.side());
  for (Eigen::Index i = 0; i < H.side(); ++i) uv[i] = u(g.point(i)[0]);
  const double t = 1.0;
  const Eigen::VectorXcd w = dec.semigroup(t, uv);
  for (double x : {0.0, 1.25, -2.5, 5.0}) {
    const std::int64_t idx = g.flat_index(Eigen::Vector3i(static_cast<int>(std::lround((x + 20.0) / g.spacing())), 0, 0));
    const double conv = quad::integrate(
                            [&](double y) { return kernel::free_kernel_radial(t, std::abs(x - y), 1) * u(y); },
                            -30.0, 30.0)
                            .value;
    CAPTURE(x);
    CHECK(std::abs(w[idx].real() - conv) < 1e-3);
  }
}

TEST_CASE("positivity, contraction, domination, Kato") {
  const GridSpec g = make_grid(2, 16, 4.0, Boundary::ZeroExtension);
  const HermitianOperator H0 = build_h0_levy(g);
  const HermitianOperator HA = build_hA_levy(g, constant_b(1.3));
  const SpectralDecomposition d0(H0), dA(HA);
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Eigen::VectorXcd pos(H0.side());
  for (Eigen::Index i = 0; i < pos.size(); ++i) pos[i] = unif(gen);
  const Eigen::VectorXcd u = random_complex(H0.side(), 3);
  const Eigen::VectorXcd abs_u = u.cwiseAbs().cast<cd>();
  for (double t : {0.1, 1.0, 5.0}) {
    const Eigen::VectorXcd p = d0.semigroup(t, pos);
    CHECK(p.real().minCoeff() >= -1e-12);
    CHECK(p.cwiseAbs().maxCoeff() <= pos.cwiseAbs().maxCoeff() + 1e-12);
    const Eigen::VectorXd excess = dA.semigroup(t, u).cwiseAbs() - d0.semigroup(t, abs_u).real();
    CHECK(excess.maxCoeff() <= 1e-12);
  }
  for (double lambda : {0.5, 1.0, 2.0}) {
    const Eigen::VectorXd excess = dA.resolvent(lambda, u).cwiseAbs() - d0.resolvent(lambda, abs_u).real();
    CHECK(excess.maxCoeff() <= 1e-12);
  }
  const Eigen::VectorXcd hu = HA.matrix * u;
  const Eigen::VectorXd h_abs = (H0.matrix * abs_u).real();
  double worst = INFINITY;
  for (Eigen::Index i = 0; i < u.size(); ++i)
    worst = std::min(worst, (std::conj(u[i] / std::abs(u[i])) * hu[i]).real() - h_abs[i]);
  CHECK(worst >= -1e-10);
}

TEST_CASE("matrix dump") {
  const GridSpec g = make_grid(1, 8, 2.0, Boundary::ZeroExtension);
  HermitianOperator H = build_hA_levy(g, {"a", 1, [](const Point& x) { return Point(Point::Constant(1, 0.3 * x[0])); }, 1});
  H.tag = BuilderTag::LevyMagnetic;
  const auto file = std::filesystem::temp_directory_path() / "clrlab_dump_test.bin";
  write_matrix_dump(file, H);
  CHECK(std::filesystem::file_size(file) == 32 + 8 * 8 * 8);
  std::ifstream in(file, std::ios::binary);
  char header[32];
  in.read(header, 32);
  CHECK(std::string(header, 8) == "CLRMAT01");
  CHECK(static_cast<unsigned char>(header[8]) == 8);
  CHECK(static_cast<unsigned char>(header[16]) == 3);
  const MatrixDump dump = read_matrix_dump(file);
  CHECK(dump.tag == BuilderTag::LevyMagnetic);
  CHECK((dump.matrix.cast<cd>() - H.matrix).cwiseAbs().maxCoeff() <= 1e-6 * H.matrix.cwiseAbs().maxCoeff());
  std::filesystem::remove(file);
}
