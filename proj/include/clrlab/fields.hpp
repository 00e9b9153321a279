#pragma once

// Electromagnetic data on R^d (d <= 3): scalar potentials, magnetic 2-forms, vector
// potentials, gauge functions, and the line integrals that tie them together.

#include <Eigen/Core>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "clrlab/grid.hpp"

namespace clrlab {

using ParamMap = std::map<std::string, double>;

struct ScalarField {
  std::string name;
  std::function<double(const Point&)> eval;

  double operator()(const Point& x) const { return eval(x); }
};

/// Magnetic 2-form; eval returns the antisymmetric d x d matrix B_jk(x).
struct MagneticField {
  std::string name;
  int d = 2;
  std::function<Eigen::Matrix3d(const Point&)> eval;
  std::optional<int> degree;  // polynomial degree of the components, when polynomial

  Eigen::Matrix3d operator()(const Point& x) const { return eval(x); }
};

struct VectorPotentialField {
  std::string name;
  int d = 2;
  std::function<Point(const Point&)> eval;
  std::optional<int> degree;

  Point operator()(const Point& x) const { return eval(x); }
};

struct GaugeFunction {
  std::string name;
  int d = 2;
  std::function<double(const Point&)> value;
  std::function<Point(const Point&)> gradient;
  std::optional<int> degree;
};

inline constexpr int kDefaultLineNodes = 8;

VectorPotentialField zero_potential(int d);
MagneticField zero_field(int d);

/// A_j(x) = -sum_k int_0^1 B_jk(s x) s x_k ds, Gauss-Legendre with `nodes` points.
Point transversal_gauge(const MagneticField& B, const Point& x, int nodes = kDefaultLineNodes);

/// The transversal gauge as a field. Degree hint is deg(B) + 1 when B is polynomial.
VectorPotentialField transversal_gauge_field(const MagneticField& B, int nodes = kDefaultLineNodes);

/// Average of A along the segment [x, y]; (y - x) . circulation is the line integral.
Point circulation(const VectorPotentialField& A, const Point& x, const Point& y,
                  int nodes = kDefaultLineNodes);

/// max over points and j < k of |d_j A_k - d_k A_j - B_jk| with central differences.
double check_dA_equals_B(const VectorPotentialField& A, const MagneticField& B,
                         std::span<const Point> points, double fd_step);

/// A + grad(phi).
VectorPotentialField add_gradient(const VectorPotentialField& A, const GaugeFunction& phi);

// ---- catalog ---------------------------------------------------------------

struct ParamSpec {
  std::string name;
  double default_value;
  double min_value;
  double max_value;
  std::string doc;
};

enum class FieldKind { Potential, Magnetic, Gauge };

struct CatalogEntry {
  std::string name;
  FieldKind kind;
  std::string description;
  std::vector<ParamSpec> params;
};

const std::vector<CatalogEntry>& field_catalog();
const CatalogEntry& catalog_entry(const std::string& name);  // throws std::out_of_range

/// Defaults filled in, unknown keys and out-of-range values rejected (std::invalid_argument).
ParamMap resolve_params(const CatalogEntry& entry, const ParamMap& given);

/// Scalar potential V (negative in the well). The magnitude of its negative part is `negative_part`.
ScalarField make_potential(const std::string& name, const ParamMap& params, int d);
ScalarField negative_part(const ScalarField& V);
MagneticField make_magnetic_field(const std::string& name, const ParamMap& params, int d);
GaugeFunction make_gauge(const std::string& name, const ParamMap& params, int d);

}  // namespace clrlab
