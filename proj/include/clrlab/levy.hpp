#pragma once

// Monte Carlo for the relativistic Levy process X_t with E e^{i xi.(X_t - X_0)} = e^{-t h(xi)}.
//
// Increments are sampled exactly by subordination: X_{k+1} = X_k + sqrt(S_k) Z_k with Z_k
// standard normal and S_k inverse Gaussian with mean dt and shape dt^2, whose Laplace transform
// is exp(-dt (sqrt(1 + 2u) - 1)). Path p of a run with root seed s draws from the Philox stream
// (s, p), so estimates do not depend on how paths are spread over workers.

#include <complex>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "clrlab/fields.hpp"
#include "clrlab/grid.hpp"
#include "clrlab/rng.hpp"

namespace clrlab::levy {

/// Inverse Gaussian draw, mean delta and shape delta^2 (Michael-Schucany-Haas).
double sample_subordinator_increment(double delta, PhiloxStream& rng);

struct PathSample {
  std::vector<double> times;         // 0 = t_0 < ... < t_m = t
  std::vector<Point> positions;      // X_0 .. X_m
  std::vector<double> subordinator;  // S_1 .. S_m
  std::uint64_t root_seed = 0;
  std::uint64_t stream = 0;
};

PathSample sample_path(const Point& x0, double t, int m, PhiloxStream& rng);

struct MCEstimate {
  std::complex<double> mean;
  double stderr_ = 0.0;
  std::int64_t n_paths = 0;
  int steps = 0;
  std::uint64_t seed = 0;
  double wall_time = 0.0;  // seconds; not part of any deterministic output
};

struct McOptions {
  std::int64_t n_paths = 100000;
  int steps = 64;
  std::uint64_t seed = 1;
  int workers = 0;
};

/// Mean and standard error of per-path values; pairwise summation in path order.
MCEstimate summarize(std::span<const std::complex<double>> values);

/// E_x[u(X_t) exp(-sum_k V(X_{t_k}) dt)], left-point rule in time.
MCEstimate feynman_kac(const ScalarField& u, const ScalarField& V, double t, const Point& x,
                       const McOptions& opts);

/// E_x[u(X_t) exp(-i sum_k (X_{k+1} - X_k) . Gamma^A(X_k, X_{k+1}) - sum_k V(X_{t_k}) dt)].
MCEstimate fki_magnetic(const ScalarField& u, const ScalarField& V, const VectorPotentialField& A,
                        double t, const Point& x, const McOptions& opts);

/// Free Feynman-Kac estimates at several step counts from one set of fine paths (each m must
/// divide the finest); coarse paths are the fine ones observed at every (m_max/m)-th time.
std::vector<MCEstimate> feynman_kac_refinement(const ScalarField& u, const ScalarField& V, double t,
                                               const Point& x, const McOptions& opts,
                                               std::span<const int> step_counts);

struct DiamagneticReport {
  MCEstimate magnetic;       // fki_magnetic with u
  MCEstimate free;           // feynman_kac with |u|, same paths
  double max_pathwise_excess = 0.0;  // max over paths of |magnetic integrand| - free integrand
  double margin = 0.0;       // free.mean - |magnetic.mean|
  bool holds = false;
};

/// |fki_magnetic(u)| <= feynman_kac(|u|) + 3 combined stderr under common random numbers,
/// and the pathwise bound |magnetic integrand| <= free integrand.
DiamagneticReport diamagnetic_mc_check(const ScalarField& u, const ScalarField& V,
                                       const VectorPotentialField& A, double t, const Point& x,
                                       const McOptions& opts);

/// Empirical E e^{i xi.(X_delta - X_0)} over n independent increments.
MCEstimate empirical_characteristic(const Point& xi, double delta, const McOptions& opts);

/// Kolmogorov-Smirnov distance between n sampled 1-D increments at lag delta and the CDF of
/// the free kernel p_delta.
double increment_ks_distance(double delta, const McOptions& opts);

/// Per-path dump. Layout (little-endian): "CLRPATH1", uint32 d, uint32 m, uint64 count, then per
/// path: uint64 stream, (m+1)*d float64 positions, m float64 subordinator increments.
void write_path_dump(const std::filesystem::path& file, std::span<const PathSample> paths);
std::vector<PathSample> read_path_dump(const std::filesystem::path& file);

}  // namespace clrlab::levy
