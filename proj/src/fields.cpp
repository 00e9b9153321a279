#include "clrlab/fields.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "clrlab/errors.hpp"
#include "clrlab/quadrature.hpp"

namespace clrlab {

VectorPotentialField zero_potential(int d) {
  return {"zero", d, [d](const Point&) { return Point(Point::Zero(d)); }, 0};
}

MagneticField zero_field(int d) {
  return {"zero", d, [](const Point&) { return Eigen::Matrix3d::Zero().eval(); }, 0};
}

Point transversal_gauge(const MagneticField& B, const Point& x, int nodes) {
  const int d = static_cast<int>(x.size());
  const auto& rule = quad::gauss_legendre(nodes);
  Point a = Point::Zero(d);
  for (int i = 0; i < nodes; ++i) {
    const double s = 0.5 * (1.0 + rule.nodes[i]);
    const double w = 0.5 * rule.weights[i];
    const Eigen::Matrix3d b = B(Point(s * x));
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k) a[j] -= w * b(j, k) * s * x[k];
  }
  return a;
}

VectorPotentialField transversal_gauge_field(const MagneticField& B, int nodes) {
  std::optional<int> degree;
  if (B.degree) degree = *B.degree + 1;
  return {"transversal(" + B.name + ")", B.d,
          [B, nodes](const Point& x) { return transversal_gauge(B, x, nodes); }, degree};
}

Point circulation(const VectorPotentialField& A, const Point& x, const Point& y, int nodes) {
  const auto& rule = quad::gauss_legendre(nodes);
  Point acc = Point::Zero(x.size());
  for (int i = 0; i < nodes; ++i) {
    const double s = 0.5 * (1.0 + rule.nodes[i]);
    acc += (0.5 * rule.weights[i]) * A(Point((1.0 - s) * x + s * y));
  }
  return acc;
}

double check_dA_equals_B(const VectorPotentialField& A, const MagneticField& B,
                         std::span<const Point> points, double fd_step) {
  if (!(fd_step > 0.0)) throw DomainError("check_dA_equals_B: fd_step must be > 0");
  double worst = 0.0;
  for (const Point& x : points) {
    const int d = static_cast<int>(x.size());
    // jac(k, j) = d_j A_k
    Eigen::Matrix3d jac = Eigen::Matrix3d::Zero();
    for (int j = 0; j < d; ++j) {
      Point xp = x, xm = x;
      xp[j] += fd_step;
      xm[j] -= fd_step;
      const Point diff = (A(xp) - A(xm)) / (2.0 * fd_step);
      for (int k = 0; k < d; ++k) jac(k, j) = diff[k];
    }
    const Eigen::Matrix3d b = B(x);
    for (int j = 0; j < d; ++j)
      for (int k = j + 1; k < d; ++k)
        worst = std::max(worst, std::abs(jac(k, j) - jac(j, k) - b(j, k)));
  }
  return worst;
}

VectorPotentialField add_gradient(const VectorPotentialField& A, const GaugeFunction& phi) {
  std::optional<int> degree;
  if (A.degree && phi.degree) degree = std::max(*A.degree, *phi.degree - 1);
  return {A.name + "+grad(" + phi.name + ")", A.d,
          [A, phi](const Point& x) { return Point(A(x) + phi.gradient(x)); }, degree};
}

// ---- catalog ---------------------------------------------------------------

const std::vector<CatalogEntry>& field_catalog() {
  static const std::vector<CatalogEntry> catalog = {
      {"gaussian-well",
       FieldKind::Potential,
       "V(x) = -depth * exp(-|x|^2 / width^2)",
       {{"depth", 1.0, 0.0, 1e4, "well depth (energy units)"},
        {"width", 1.0, 1e-3, 1e3, "Gaussian width (length units)"}}},
      {"compact-bump",
       FieldKind::Potential,
       "V(x) = -depth * exp(1 - 1/(1 - |x|^2/radius^2)) for |x| < radius, 0 outside",
       {{"depth", 1.0, 0.0, 1e4, "well depth at the origin"},
        {"radius", 1.0, 1e-3, 1e3, "support radius"}}},
      {"constant-b",
       FieldKind::Magnetic,
       "constant 2-form with components B_12, B_13, B_23 (d >= 2; B_13, B_23 need d = 3)",
       {{"b12", 1.0, -1e3, 1e3, "B_12"},
        {"b13", 0.0, -1e3, 1e3, "B_13"},
        {"b23", 0.0, -1e3, 1e3, "B_23"}}},
      {"linear-b",
       FieldKind::Magnetic,
       "B_12(x) = b0 + b1 * x_1, all other components zero (closed in every d >= 2)",
       {{"b0", 0.0, -1e3, 1e3, "constant part"}, {"b1", 1.0, -1e3, 1e3, "slope along x_1"}}},
      {"quadratic",
       FieldKind::Gauge,
       "phi(x) = a |x|^2 + b x_1 x_2 + c x_1 (the x_1 x_2 term needs d >= 2)",
       {{"a", 0.5, -1e3, 1e3, "isotropic quadratic coefficient"},
        {"b", 0.25, -1e3, 1e3, "cross term"},
        {"c", 0.1, -1e3, 1e3, "linear term"}}},
  };
  return catalog;
}

const CatalogEntry& catalog_entry(const std::string& name) {
  for (const auto& e : field_catalog())
    if (e.name == name) return e;
  throw std::out_of_range("unknown field name '" + name + "'");
}

ParamMap resolve_params(const CatalogEntry& entry, const ParamMap& given) {
  ParamMap out;
  for (const auto& p : entry.params) out[p.name] = p.default_value;
  for (const auto& [key, value] : given) {
    auto it = std::find_if(entry.params.begin(), entry.params.end(),
                           [&](const ParamSpec& p) { return p.name == key; });
    if (it == entry.params.end())
      throw std::invalid_argument("field '" + entry.name + "' has no parameter '" + key + "'");
    if (!(value >= it->min_value && value <= it->max_value))
      throw std::invalid_argument("parameter '" + key + "' of field '" + entry.name +
                                  "' out of range [" + std::to_string(it->min_value) + ", " +
                                  std::to_string(it->max_value) + "]");
    out[key] = value;
  }
  return out;
}

namespace {
const CatalogEntry& entry_of_kind(const std::string& name, FieldKind kind) {
  const CatalogEntry& e = catalog_entry(name);
  if (e.kind != kind) throw std::invalid_argument("field '" + name + "' has the wrong kind here");
  return e;
}
}  // namespace

ScalarField make_potential(const std::string& name, const ParamMap& params, int d) {
  const ParamMap p = resolve_params(entry_of_kind(name, FieldKind::Potential), params);
  (void)d;
  if (name == "gaussian-well") {
    const double depth = p.at("depth"), w2 = p.at("width") * p.at("width");
    return {name, [=](const Point& x) { return -depth * std::exp(-x.squaredNorm() / w2); }};
  }
  const double depth = p.at("depth"), r2 = p.at("radius") * p.at("radius");
  return {name, [=](const Point& x) {
            const double q = x.squaredNorm() / r2;
            return q < 1.0 ? -depth * std::exp(1.0 - 1.0 / (1.0 - q)) : 0.0;
          }};
}

ScalarField negative_part(const ScalarField& V) {
  return {V.name + "_-", [V](const Point& x) { return std::max(0.0, -V(x)); }};
}

MagneticField make_magnetic_field(const std::string& name, const ParamMap& params, int d) {
  const ParamMap p = resolve_params(entry_of_kind(name, FieldKind::Magnetic), params);
  if (d < 2) throw std::invalid_argument("magnetic fields need d >= 2");
  if (name == "constant-b") {
    Eigen::Matrix3d b = Eigen::Matrix3d::Zero();
    b(0, 1) = p.at("b12");
    if (d == 3) {
      b(0, 2) = p.at("b13");
      b(1, 2) = p.at("b23");
    } else if (p.at("b13") != 0.0 || p.at("b23") != 0.0) {
      throw std::invalid_argument("constant-b: b13/b23 need d = 3");
    }
    b = (b - b.transpose()).eval();
    return {name, d, [b](const Point&) { return b; }, 0};
  }
  const double b0 = p.at("b0"), b1 = p.at("b1");
  return {name, d,
          [=](const Point& x) {
            Eigen::Matrix3d b = Eigen::Matrix3d::Zero();
            b(0, 1) = b0 + b1 * x[0];
            b(1, 0) = -b(0, 1);
            return b;
          },
          1};
}

GaugeFunction make_gauge(const std::string& name, const ParamMap& params, int d) {
  const ParamMap p = resolve_params(entry_of_kind(name, FieldKind::Gauge), params);
  const double a = p.at("a"), b = d >= 2 ? p.at("b") : 0.0, c = p.at("c");
  return {name, d,
          [=](const Point& x) {
            double v = a * x.squaredNorm() + c * x[0];
            if (d >= 2) v += b * x[0] * x[1];
            return v;
          },
          [=](const Point& x) {
            Point g = 2.0 * a * x;
            g[0] += c;
            if (d >= 2) {
              g[0] += b * x[1];
              g[1] += b * x[0];
            }
            return g;
          },
          2};
}

}  // namespace clrlab
