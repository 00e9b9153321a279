#include "clrlab/grid.hpp"

#include <cmath>
#include <stdexcept>

#include "clrlab/errors.hpp"

namespace clrlab {

std::string to_string(Boundary b) {
  return b == Boundary::Periodic ? "periodic" : "zero-extension";
}

Boundary boundary_from_string(const std::string& s) {
  if (s == "periodic") return Boundary::Periodic;
  if (s == "zero-extension" || s == "zero") return Boundary::ZeroExtension;
  throw std::invalid_argument("unknown boundary '" + s + "' (periodic | zero-extension)");
}

double GridSpec::cell_volume() const { return std::pow(spacing(), d); }

std::int64_t GridSpec::size() const {
  std::int64_t s = 1;
  for (int i = 0; i < d; ++i) s *= n;
  return s;
}

Eigen::Vector3i GridSpec::multi_index(std::int64_t flat) const {
  Eigen::Vector3i idx = Eigen::Vector3i::Zero();
  for (int a = 0; a < d; ++a) {
    idx[a] = static_cast<int>(flat % n);
    flat /= n;
  }
  return idx;
}

std::int64_t GridSpec::flat_index(const Eigen::Vector3i& idx) const {
  std::int64_t flat = 0;
  for (int a = d - 1; a >= 0; --a) flat = flat * n + idx[a];
  return flat;
}

Point GridSpec::point(std::int64_t flat) const {
  const Eigen::Vector3i idx = multi_index(flat);
  Point x(d);
  for (int a = 0; a < d; ++a) x[a] = -half_width + idx[a] * spacing();
  return x;
}

void GridSpec::validate() const {
  if (d < 1 || d > 3) throw DomainError("grid: d must be 1, 2 or 3");
  if (n < 8 || n % 2 != 0) throw DomainError("grid: n must be even and >= 8");
  if (!(half_width > 0.0) || !std::isfinite(half_width)) throw DomainError("grid: L must be > 0");
  if (size() > size_cap)
    throw NumericalError("grid", "n^d = " + std::to_string(size()) + " exceeds the dense size cap " +
                                     std::to_string(size_cap));
}

}  // namespace clrlab
