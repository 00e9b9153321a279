#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>

namespace clrlab {

/// A point or displacement in R^d, d <= 3. Fixed capacity so hot loops never touch the heap.
using Point = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, 3, 1>;

enum class Boundary { Periodic, ZeroExtension };

std::string to_string(Boundary b);
Boundary boundary_from_string(const std::string& s);

/// Uniform lattice on the box [-L, L)^d with n points per axis, x_i = -L + i dx, dx = 2L/n.
/// Flat index runs fastest along axis 0.
struct GridSpec {
  int d = 1;
  int n = 64;
  double half_width = 8.0;
  Boundary boundary = Boundary::ZeroExtension;
  std::int64_t size_cap = 8192;

  double spacing() const { return 2.0 * half_width / n; }
  double cell_volume() const;
  std::int64_t size() const;

  Point point(std::int64_t flat) const;
  Eigen::Vector3i multi_index(std::int64_t flat) const;
  std::int64_t flat_index(const Eigen::Vector3i& idx) const;

  /// Throws DomainError unless 1 <= d <= 3, n even and >= 8, L > 0 and n^d <= size_cap.
  void validate() const;
};

}  // namespace clrlab
