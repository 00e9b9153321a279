#include "clrlab/levy.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "clrlab/detail/parallel.hpp"
#include "clrlab/errors.hpp"
#include "clrlab/kernel.hpp"
#include "clrlab/quadrature.hpp"

namespace clrlab::levy {
namespace {

using cd = std::complex<double>;

cd pairwise_sum(std::span<const cd> v) {
  if (v.size() <= 8) {
    cd acc = 0.0;
    for (const cd& x : v) acc += x;
    return acc;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 8) {
    double acc = 0.0;
    for (double x : v) acc += x;
    return acc;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

void validate(double t, const McOptions& opts) {
  if (!(t >= 0.0)) throw DomainError("Monte Carlo: t must be >= 0");
  if (opts.n_paths < 2) throw DomainError("Monte Carlo: need at least 2 paths");
  if (opts.steps < 1) throw DomainError("Monte Carlo: need at least 1 step");
}

// One increment of the subordinated Brownian motion.
void step(Point& x, double dt, PhiloxStream& rng, double* subordinator_out = nullptr) {
  const double s = sample_subordinator_increment(dt, rng);
  if (subordinator_out) *subordinator_out = s;
  const double scale = std::sqrt(s);
  for (Eigen::Index a = 0; a < x.size(); ++a) x[a] += scale * rng.normal();
}

template <typename PerPath>
std::vector<cd> run_paths(const McOptions& opts, PerPath&& per_path) {
  std::vector<cd> values(static_cast<std::size_t>(opts.n_paths));
  detail::parallel_for(opts.n_paths, opts.workers, [&](std::int64_t p) {
    PhiloxStream rng(opts.seed, static_cast<std::uint64_t>(p));
    values[static_cast<std::size_t>(p)] = per_path(rng);
  });
  return values;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

double sample_subordinator_increment(double delta, PhiloxStream& rng) {
  if (!(delta > 0.0)) throw DomainError("subordinator increment: delta must be > 0");
  const double nu = rng.normal();
  const double y = nu * nu;
  // roots of the MSH quadratic have product delta^2; take the larger one without cancellation
  const double large = delta + 0.5 * y + 0.5 * std::sqrt(y * (4.0 * delta + y));
  const double small = delta * delta / large;
  return rng.uniform() <= delta / (delta + small) ? small : large;
}

PathSample sample_path(const Point& x0, double t, int m, PhiloxStream& rng) {
  if (m < 1) throw DomainError("sample_path: m must be >= 1");
  if (!(t > 0.0)) throw DomainError("sample_path: t must be > 0");
  PathSample path;
  path.root_seed = rng.root_seed();
  path.stream = rng.stream_index();
  const double dt = t / m;
  Point x = x0;
  path.times.push_back(0.0);
  path.positions.push_back(x);
  for (int k = 0; k < m; ++k) {
    double s = 0.0;
    step(x, dt, rng, &s);
    path.subordinator.push_back(s);
    path.times.push_back(k + 1 == m ? t : (k + 1) * dt);
    path.positions.push_back(x);
  }
  return path;
}

MCEstimate summarize(std::span<const cd> values) {
  MCEstimate est;
  const auto n = static_cast<double>(values.size());
  est.n_paths = static_cast<std::int64_t>(values.size());
  est.mean = pairwise_sum(values) / n;
  std::vector<double> sq(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) sq[i] = std::norm(values[i] - est.mean);
  const double var = values.size() > 1 ? pairwise_sum(std::span<const double>(sq)) / (n - 1.0) : 0.0;
  est.stderr_ = std::sqrt(var / n);
  return est;
}

MCEstimate feynman_kac(const ScalarField& u, const ScalarField& V, double t, const Point& x,
                       const McOptions& opts) {
  validate(t, opts);
  const auto start = std::chrono::steady_clock::now();
  const double dt = t / opts.steps;
  const auto values = run_paths(opts, [&](PhiloxStream& rng) {
    Point pos = x;
    double action = 0.0;
    for (int k = 0; k < opts.steps; ++k) {
      action += V(pos) * dt;
      if (dt > 0.0) step(pos, dt, rng);
    }
    return cd(u(pos) * std::exp(-action));
  });
  MCEstimate est = summarize(values);
  est.steps = opts.steps;
  est.seed = opts.seed;
  est.wall_time = seconds_since(start);
  return est;
}

MCEstimate fki_magnetic(const ScalarField& u, const ScalarField& V, const VectorPotentialField& A,
                        double t, const Point& x, const McOptions& opts) {
  validate(t, opts);
  const auto start = std::chrono::steady_clock::now();
  const double dt = t / opts.steps;
  const auto values = run_paths(opts, [&](PhiloxStream& rng) {
    Point pos = x;
    double action = 0.0, phase = 0.0;
    for (int k = 0; k < opts.steps; ++k) {
      action += V(pos) * dt;
      if (dt > 0.0) {
        const Point prev = pos;
        step(pos, dt, rng);
        phase += (pos - prev).dot(circulation(A, prev, pos));
      }
    }
    return u(pos) * std::exp(cd(-action, -phase));
  });
  MCEstimate est = summarize(values);
  est.steps = opts.steps;
  est.seed = opts.seed;
  est.wall_time = seconds_since(start);
  return est;
}

std::vector<MCEstimate> feynman_kac_refinement(const ScalarField& u, const ScalarField& V, double t,
                                               const Point& x, const McOptions& opts,
                                               std::span<const int> step_counts) {
  if (step_counts.empty()) return {};
  const int fine = *std::max_element(step_counts.begin(), step_counts.end());
  for (int m : step_counts)
    if (m < 1 || fine % m != 0) throw DomainError("feynman_kac_refinement: step counts must divide the finest");
  McOptions fine_opts = opts;
  fine_opts.steps = fine;
  validate(t, fine_opts);
  const std::size_t levels = step_counts.size();
  std::vector<std::vector<cd>> values(levels, std::vector<cd>(static_cast<std::size_t>(opts.n_paths)));
  const double dt = t / fine;
  detail::parallel_for(opts.n_paths, opts.workers, [&](std::int64_t p) {
    PhiloxStream rng(opts.seed, static_cast<std::uint64_t>(p));
    std::vector<Point> positions{x};
    Point pos = x;
    for (int k = 0; k < fine; ++k) {
      step(pos, dt, rng);
      positions.push_back(pos);
    }
    for (std::size_t l = 0; l < levels; ++l) {
      const int m = step_counts[l], stride = fine / m;
      double action = 0.0;
      for (int k = 0; k < m; ++k) action += V(positions[static_cast<std::size_t>(k * stride)]) * (t / m);
      values[l][static_cast<std::size_t>(p)] = u(positions.back()) * std::exp(-action);
    }
  });
  std::vector<MCEstimate> out;
  for (std::size_t l = 0; l < levels; ++l) {
    MCEstimate est = summarize(values[l]);
    est.steps = step_counts[l];
    est.seed = opts.seed;
    out.push_back(est);
  }
  return out;
}

DiamagneticReport diamagnetic_mc_check(const ScalarField& u, const ScalarField& V,
                                       const VectorPotentialField& A, double t, const Point& x,
                                       const McOptions& opts) {
  validate(t, opts);
  const auto start = std::chrono::steady_clock::now();
  const double dt = t / opts.steps;
  std::vector<cd> magnetic(static_cast<std::size_t>(opts.n_paths));
  std::vector<cd> free(static_cast<std::size_t>(opts.n_paths));
  detail::parallel_for(opts.n_paths, opts.workers, [&](std::int64_t p) {
    PhiloxStream rng(opts.seed, static_cast<std::uint64_t>(p));
    Point pos = x;
    double action = 0.0, phase = 0.0;
    for (int k = 0; k < opts.steps; ++k) {
      action += V(pos) * dt;
      const Point prev = pos;
      step(pos, dt, rng);
      phase += (pos - prev).dot(circulation(A, prev, pos));
    }
    const double weight = std::exp(-action);
    const double end = u(pos);
    magnetic[static_cast<std::size_t>(p)] = end * weight * std::polar(1.0, -phase);
    free[static_cast<std::size_t>(p)] = std::abs(end) * weight;
  });
  DiamagneticReport r;
  r.magnetic = summarize(magnetic);
  r.free = summarize(free);
  for (MCEstimate* e : {&r.magnetic, &r.free}) {
    e->steps = opts.steps;
    e->seed = opts.seed;
    e->wall_time = seconds_since(start);
  }
  for (std::size_t i = 0; i < magnetic.size(); ++i)
    r.max_pathwise_excess = std::max(r.max_pathwise_excess, std::abs(magnetic[i]) - free[i].real());
  r.margin = r.free.mean.real() - std::abs(r.magnetic.mean);
  const double combined = std::hypot(r.magnetic.stderr_, r.free.stderr_);
  r.holds = std::abs(r.magnetic.mean) <= r.free.mean.real() + 3.0 * combined &&
            r.max_pathwise_excess <= 1e-12;
  return r;
}

MCEstimate empirical_characteristic(const Point& xi, double delta, const McOptions& opts) {
  if (!(delta > 0.0)) throw DomainError("empirical_characteristic: delta must be > 0");
  const auto values = run_paths(opts, [&](PhiloxStream& rng) {
    Point pos = Point::Zero(xi.size());
    step(pos, delta, rng);
    return std::polar(1.0, xi.dot(pos));
  });
  MCEstimate est = summarize(values);
  est.steps = 1;
  est.seed = opts.seed;
  return est;
}

double increment_ks_distance(double delta, const McOptions& opts) {
  if (!(delta > 0.0)) throw DomainError("increment_ks_distance: delta must be > 0");
  const auto values = run_paths(opts, [&](PhiloxStream& rng) {
    Point pos = Point::Zero(1);
    step(pos, delta, rng);
    return cd(pos[0]);
  });
  std::vector<double> samples;
  samples.reserve(values.size());
  for (const cd& v : values) samples.push_back(v.real());
  std::sort(samples.begin(), samples.end());

  // G(r) = int_0^r p_delta, accumulated over the sorted |x|
  std::vector<double> radii;
  radii.reserve(samples.size());
  for (double s : samples) radii.push_back(std::abs(s));
  std::sort(radii.begin(), radii.end());
  std::vector<double> cumulative(radii.size());
  auto density = [delta](double r) { return kernel::free_kernel_radial(delta, r, 1); };
  double acc = 0.0, prev = 0.0;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (radii[i] > prev) acc += quad::integrate(density, prev, radii[i]).value;
    prev = radii[i];
    cumulative[i] = acc;
  }
  auto cdf = [&](double x) {
    const double r = std::abs(x);
    const auto it = std::lower_bound(radii.begin(), radii.end(), r);
    const double g = cumulative[static_cast<std::size_t>(it - radii.begin())];
    return x < 0.0 ? 0.5 - g : 0.5 + g;
  };
  const double n = static_cast<double>(samples.size());
  double ks = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    ks = std::max({ks, (i + 1) / n - f, f - i / n});
  }
  return ks;
}

namespace {

template <typename U>
void put_le(std::ostream& os, U value) {
  for (std::size_t i = 0; i < sizeof(U); ++i) os.put(static_cast<char>((value >> (8 * i)) & 0xFF));
}

template <typename U>
U get_le(std::istream& is) {
  U value = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) {
    const int c = is.get();
    if (c == EOF) throw std::runtime_error("path dump: truncated file");
    value |= static_cast<U>(static_cast<unsigned char>(c)) << (8 * i);
  }
  return value;
}

void put_f64(std::ostream& os, double v) { put_le<std::uint64_t>(os, std::bit_cast<std::uint64_t>(v)); }
double get_f64(std::istream& is) { return std::bit_cast<double>(get_le<std::uint64_t>(is)); }

}  // namespace

void write_path_dump(const std::filesystem::path& file, std::span<const PathSample> paths) {
  std::ofstream os(file, std::ios::binary);
  if (!os) throw std::runtime_error("path dump: cannot open " + file.string());
  const std::uint32_t d = paths.empty() ? 0 : static_cast<std::uint32_t>(paths[0].positions[0].size());
  const std::uint32_t m = paths.empty() ? 0 : static_cast<std::uint32_t>(paths[0].subordinator.size());
  os.write("CLRPATH1", 8);
  put_le<std::uint32_t>(os, d);
  put_le<std::uint32_t>(os, m);
  put_le<std::uint64_t>(os, paths.size());
  for (const PathSample& p : paths) {
    if (p.subordinator.size() != m || p.positions.size() != m + 1u)
      throw std::invalid_argument("path dump: paths must share the step count");
    put_le<std::uint64_t>(os, p.stream);
    for (const Point& x : p.positions)
      for (Eigen::Index a = 0; a < x.size(); ++a) put_f64(os, x[a]);
    for (double s : p.subordinator) put_f64(os, s);
  }
}

std::vector<PathSample> read_path_dump(const std::filesystem::path& file) {
  std::ifstream is(file, std::ios::binary);
  if (!is) throw std::runtime_error("path dump: cannot open " + file.string());
  char magic[8];
  is.read(magic, 8);
  if (!is || std::string(magic, 8) != "CLRPATH1") throw std::runtime_error("path dump: bad magic");
  const auto d = get_le<std::uint32_t>(is);
  const auto m = get_le<std::uint32_t>(is);
  const auto count = get_le<std::uint64_t>(is);
  std::vector<PathSample> out(count);
  for (PathSample& p : out) {
    p.stream = get_le<std::uint64_t>(is);
    for (std::uint32_t k = 0; k <= m; ++k) {
      Point x(d);
      for (std::uint32_t a = 0; a < d; ++a) x[a] = get_f64(is);
      p.positions.push_back(x);
    }
    for (std::uint32_t k = 0; k < m; ++k) p.subordinator.push_back(get_f64(is));
  }
  return out;
}

}  // namespace clrlab::levy
