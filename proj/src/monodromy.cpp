#include "charvar/monodromy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "charvar/parallel.hpp"

namespace charvar {

double cone_theta(int order) {
  if (order == Signature::kCusp) return 1.0;
  if (order < 2) throw InputError("marked point order must be >= 2 or a cusp, got " + std::to_string(order));
  return 1.0 - 1.0 / (static_cast<double>(order) * order);
}

// ---------------------------------------------------------------------------
// SphereData

std::vector<Complex> SphereData::accessory() const {
  return std::vector<Complex>(residues.begin() + std::min<std::ptrdiff_t>(2, std::ssize(residues)), residues.end());
}

Complex SphereData::q(Complex z) const {
  Complex s{0.0};
  for (std::size_t j = 0; j < points.size(); ++j) {
    const Complex w = 1.0 / (z - points[j]);
    s += (0.5 * theta(j) * w + residues[j]) * w;
  }
  return s;
}

std::array<double, 2> SphereData::moment_residuals() const {
  Complex s0{0.0}, s1{0.0};
  double th = 0.0;
  for (std::size_t j = 0; j < points.size(); ++j) {
    s0 += residues[j];
    s1 += residues[j] * points[j];
    th += theta(j);
  }
  return {std::abs(s0), std::abs(s1 - 0.5 * (theta_infinity() - th))};
}

double SphereData::min_gap() const {
  double g = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j) g = std::min(g, std::abs(points[i] - points[j]));
  return g;
}

SphereData build_potential(std::vector<Complex> points, std::vector<int> orders, int order_infinity,
                           const std::vector<Complex>& accessory, std::optional<Complex> base_point) {
  const std::size_t k = points.size();
  if (k < 2) throw InputError("need at least two finite marked points besides infinity");
  if (orders.size() != k) throw InputError("one order per finite point is required");
  if (accessory.size() != k - 2)
    throw InputError("expected " + std::to_string(k - 2) + " accessory values, got " + std::to_string(accessory.size()));
  SphereData d;
  d.points = std::move(points);
  d.orders = std::move(orders);
  d.order_infinity = order_infinity;
  d.base_point = base_point;
  cone_theta(order_infinity);
  const double gap = d.min_gap();
  if (!(gap > 0.0)) throw InputError("marked points must be distinct");

  d.residues.assign(k, 0.0);
  Complex s0{0.0}, s1{0.0};
  double th = 0.0;
  for (std::size_t j = 0; j < k; ++j) th += d.theta(j);
  for (std::size_t j = 2; j < k; ++j) {
    d.residues[j] = accessory[j - 2];
    s0 += accessory[j - 2];
    s1 += accessory[j - 2] * d.points[j];
  }
  const Complex target = 0.5 * (d.theta_infinity() - th);
  const Complex p1 = d.points[0], p2 = d.points[1];
  if (std::abs(p2 - p1) <= 1e-14 * std::max(1.0, std::abs(p1)))
    throw InputError("dependent residue system is singular");
  // m1 + m2 = -s0, m1 p1 + m2 p2 = target - s1
  d.residues[1] = (target - s1 + s0 * p1) / (p2 - p1);
  d.residues[0] = -s0 - d.residues[1];
  return d;
}

// ---------------------------------------------------------------------------
// Paths

namespace {

double segment_distance(Complex a, Complex b, Complex p) {
  const Complex ab = b - a;
  const double len2 = std::norm(ab);
  double t = len2 > 0.0 ? std::real((p - a) * std::conj(ab)) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::abs(a + t * ab - p);
}

double nearest(Complex z, const std::vector<Complex>& pts) {
  double m = std::numeric_limits<double>::infinity();
  for (const Complex& p : pts) m = std::min(m, std::abs(z - p));
  return m;
}

}  // namespace

double path_clearance(const LoopPath& path, const std::vector<Complex>& points) {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < path.vertices.size(); ++i)
    for (const Complex& p : points) m = std::min(m, segment_distance(path.vertices[i], path.vertices[i + 1], p));
  return m;
}

std::vector<int> LassoSystem::marked_order_list(const SphereData& data) const {
  std::vector<int> out;
  for (const LoopPath& l : loops)
    out.push_back(l.encircled == static_cast<int>(data.size()) ? data.order_infinity
                                                               : data.orders.at(static_cast<std::size_t>(l.encircled)));
  return out;
}

Signature LassoSystem::signature(const SphereData& data) const {
  return Signature::with_marked_orders(0, marked_order_list(data));
}

void LassoSystem::check_clearance(const SphereData& data) const {
  if (loops.size() != data.size() + 1)
    throw ClearanceError("lasso system has " + std::to_string(loops.size()) + " loops for " +
                         std::to_string(data.size() + 1) + " marked points");
  for (const LoopPath& l : loops) {
    const double c = path_clearance(l, data.points);
    if (c < clearance)
      throw ClearanceError("loop around marked point " + std::to_string(l.encircled) + " has clearance " +
                           std::to_string(c) + " < " + std::to_string(clearance));
  }
}

namespace {

LassoSystem lassos_from_base(const SphereData& data, Complex b, const LassoOptions& opt) {
  const std::size_t k = data.size();
  Complex c0{0.0};
  for (const Complex& p : data.points) c0 += p;
  c0 /= static_cast<double>(k);
  double spread = data.min_gap();
  for (const Complex& p : data.points) spread = std::max(spread, std::abs(p - c0));

  LassoSystem sys;
  sys.base = b;
  sys.clearance = opt.clearance_fraction * data.min_gap();
  sys.infinity_direction = std::abs(b - c0) > 1e-12 * spread ? std::arg(b - c0) : -0.5 * std::numbers::pi;
  const Complex dir = std::polar(1.0, sys.infinity_direction);

  std::vector<std::pair<double, int>> angles;
  for (std::size_t j = 0; j < k; ++j) {
    double a = std::arg((data.points[j] - b) / dir);
    if (a <= 0.0) a += 2.0 * std::numbers::pi;
    angles.emplace_back(a, static_cast<int>(j));
  }
  std::sort(angles.begin(), angles.end());

  const int n = opt.circle_vertices;
  for (const auto& [a, j] : angles) {
    const Complex p = data.points[static_cast<std::size_t>(j)];
    double gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < k; ++i)
      if (static_cast<int>(i) != j) gap = std::min(gap, std::abs(p - data.points[i]));
    const double r = opt.radius_fraction * gap;
    const double t0 = std::arg(b - p);
    LoopPath loop{{b}, j};
    for (int v = 0; v <= n; ++v) loop.vertices.push_back(p + std::polar(r, t0 + 2.0 * std::numbers::pi * v / n));
    loop.vertices.push_back(b);
    sys.loops.push_back(std::move(loop));
  }

  const double R = std::max({3.0 * spread, std::abs(b - c0) + 2.0 * spread, 1.0});
  LoopPath inf{{b}, static_cast<int>(k)};
  const int m = opt.infinity_vertices;
  for (int v = 0; v <= m; ++v)
    inf.vertices.push_back(c0 + std::polar(R, sys.infinity_direction - 2.0 * std::numbers::pi * v / m));
  inf.vertices.push_back(b);
  sys.loops.push_back(std::move(inf));
  return sys;
}

double system_clearance(const LassoSystem& sys, const SphereData& data) {
  double m = std::numeric_limits<double>::infinity();
  for (const LoopPath& l : sys.loops) m = std::min(m, path_clearance(l, data.points));
  return m;
}

}  // namespace

LassoSystem standard_lassos(const SphereData& data, const LassoOptions& opt) {
  if (data.size() < 2) throw InputError("need at least two finite marked points");
  if (data.base_point) {
    LassoSystem sys = lassos_from_base(data, *data.base_point, opt);
    sys.check_clearance(data);
    return sys;
  }
  Complex c0{0.0};
  double ymin = std::numeric_limits<double>::infinity();
  for (const Complex& p : data.points) {
    c0 += p;
    ymin = std::min(ymin, p.imag());
  }
  c0 /= static_cast<double>(data.size());
  const double gap = data.min_gap();
  double spread = gap;
  for (const Complex& p : data.points) spread = std::max(spread, std::abs(p - c0));

  std::optional<LassoSystem> best;
  double best_clearance = -1.0;
  for (double beta : {0.6, 1.0, 1.6}) {
    for (double alpha : {0.0, -0.3, 0.3, -0.6, 0.6, -0.9, 0.9}) {
      // Small irrational shifts keep the base point off symmetry lines.
      const Complex b(c0.real() + (alpha + 0.0137) * spread, ymin - beta * std::max(gap, 0.5 * spread) - 0.0071 * gap);
      LassoSystem sys = lassos_from_base(data, b, opt);
      const double c = system_clearance(sys, data);
      if (c > best_clearance + 1e-12 * gap) {
        best_clearance = c;
        best = std::move(sys);
      }
    }
  }
  best->check_clearance(data);
  return *best;
}

// ---------------------------------------------------------------------------
// Integration

namespace {

using State = std::array<Complex, 4>;  // Phi = (y0 y1; y2 y3), rows (value, derivative)

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200, e6 = 22.0 / 525,
                 e7 = -1.0 / 40;

State axpy(const State& y, std::initializer_list<std::pair<double, const State*>> terms, double h) {
  State out = y;
  for (const auto& [c, k] : terms)
    for (std::size_t i = 0; i < 4; ++i) out[i] += h * c * (*k)[i];
  return out;
}

double max_abs(const State& y) {
  double m = 0.0;
  for (const Complex& v : y) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

Transport integrate_fundamental(const std::function<Complex(Complex)>& q, const std::vector<Complex>& singularities,
                                const std::vector<Complex>& path, const IntegratorOptions& opt) {
  if (path.size() < 2) throw InputError("integration path needs at least two vertices");
  State y{1.0, 0.0, 0.0, 1.0};
  Transport out;
  for (std::size_t seg = 0; seg + 1 < path.size(); ++seg) {
    const Complex za = path[seg], zb = path[seg + 1];
    const double L = std::abs(zb - za);
    if (L == 0.0) continue;
    const Complex u = (zb - za) / L;
    auto rhs = [&](double s, const State& v) {
      const Complex z = za + s * u;
      const Complex hq = -0.5 * q(z);
      return State{u * v[2], u * v[3], u * hq * v[0], u * hq * v[1]};
    };
    auto hmax_at = [&](double s) {
      if (singularities.empty()) return L;
      const double d = nearest(za + s * u, singularities);
      if (d <= 0.0) throw IntegrationError("integration path hits a singular point");
      return std::min(L, opt.max_step_fraction * d);
    };
    double s = 0.0;
    double h = hmax_at(0.0);
    State k1 = rhs(0.0, y);
    while (s < L) {
      if (++out.steps > opt.max_steps) throw IntegrationError("integrator exceeded the step budget");
      h = std::min({h, hmax_at(s), L - s});
      if (h <= 1e-14 * L) throw IntegrationError("step size underflow");
      const State k2 = rhs(s + c2 * h, axpy(y, {{a21, &k1}}, h));
      const State k3 = rhs(s + c3 * h, axpy(y, {{a31, &k1}, {a32, &k2}}, h));
      const State k4 = rhs(s + c4 * h, axpy(y, {{a41, &k1}, {a42, &k2}, {a43, &k3}}, h));
      const State k5 = rhs(s + c5 * h, axpy(y, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}, h));
      const State k6 = rhs(s + h, axpy(y, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}, h));
      const State y5 = axpy(y, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}}, h);
      const State k7 = rhs(s + h, y5);
      State err{};
      for (std::size_t i = 0; i < 4; ++i)
        err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      const double ratio = max_abs(err) / (opt.tol * (1.0 + std::max(max_abs(y), max_abs(y5))));
      if (ratio <= 1.0) {
        s = (L - s - h <= 1e-15 * L) ? L : s + h;
        y = y5;
        k1 = k7;
      }
      const double factor = ratio == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(ratio, -0.2), 0.2, 5.0);
      h *= factor;
    }
  }
  out.matrix = Mat2{y[0], y[2], y[1], y[3]};
  out.wronskian_drift = std::abs(out.matrix.det() - 1.0);
  return out;
}

Transport integrate_fundamental(const SphereData& data, const std::vector<Complex>& path, const IntegratorOptions& opt) {
  return integrate_fundamental([&](Complex z) { return data.q(z); }, data.points, path, opt);
}

MoebiusMap loop_monodromy(const SphereData& data, int j, const IntegratorOptions& opt) {
  const LassoSystem sys = standard_lassos(data);
  for (const LoopPath& l : sys.loops)
    if (l.encircled == j) return MoebiusMap(integrate_fundamental(data, l.vertices, opt).matrix);
  throw InputError("no marked point with index " + std::to_string(j));
}

MonodromyResult monodromy_representation(const SphereData& data, const LassoSystem& lassos,
                                         const IntegratorOptions& opt) {
  const auto mom = data.moment_residuals();
  double scale = 1.0;
  for (std::size_t j = 0; j < data.size(); ++j) scale = std::max(scale, std::abs(data.residues[j] * data.points[j]));
  if (std::max(mom[0], mom[1]) > 1e-10 * scale) throw InputError("residues violate the moment conditions");
  lassos.check_clearance(data);

  MonodromyResult out;
  out.lassos = lassos;
  std::map<Generator, MoebiusMap> images;
  for (std::size_t i = 0; i < lassos.loops.size(); ++i) {
    const Transport t = integrate_fundamental(data, lassos.loops[i].vertices, opt);
    out.max_wronskian_drift = std::max(out.max_wronskian_drift, t.wronskian_drift);
    images.emplace(Generator::c(static_cast<int>(i) + 1), MoebiusMap(t.matrix));
  }
  out.rep = Representation(lassos.signature(data), std::move(images));
  out.check = out.rep.check();
  out.relation_residual = out.check.relator_residual;
  if (out.relation_residual > kRelationTolerance)
    throw MonodromyError("ordering/clearance failure: relation residual " + std::to_string(out.relation_residual));
  return out;
}

MonodromyResult monodromy_representation(const SphereData& data, const IntegratorOptions& opt) {
  return monodromy_representation(data, standard_lassos(data), opt);
}

// ---------------------------------------------------------------------------
// Pullback experiment

namespace {

SphereData shifted(const SphereData& base, const std::vector<Complex>& dp, const std::vector<Complex>& dc) {
  std::vector<Complex> pts = base.points;
  std::vector<Complex> acc = base.accessory();
  for (std::size_t j = 0; j < dp.size() && j < pts.size(); ++j) pts[j] += dp[j];
  for (std::size_t j = 0; j < dc.size() && j < acc.size(); ++j) acc[j] += dc[j];
  return build_potential(std::move(pts), base.orders, base.order_infinity, acc, base.base_point);
}

KawaiGridResult run_grid_point(const KawaiConfig& cfg, const GridOffset& off, int fd_threads) {
  const SphereData centre = shifted(cfg.base, off.dp, off.dc);
  const LassoSystem lassos = standard_lassos(centre);
  const int r = centre.accessory_dimension();
  const int s = static_cast<int>(cfg.t_directions.size());
  const std::size_t k = centre.size();

  std::vector<RepresentationFamily> families;
  for (int a = 0; a < r; ++a) {
    families.push_back([&, a](double eps) {
      std::vector<Complex> dc(static_cast<std::size_t>(r), 0.0);
      dc[static_cast<std::size_t>(a)] = eps;
      return monodromy_representation(shifted(centre, {}, dc), lassos, cfg.integrator).rep;
    });
  }
  for (int b = 0; b < s; ++b) {
    const auto& v = cfg.t_directions[static_cast<std::size_t>(b)];
    if (v.size() != k) throw InputError("t direction must give a velocity for each finite point");
    families.push_back([&, v](double eps) {
      std::vector<Complex> dp(v.size());
      for (std::size_t j = 0; j < v.size(); ++j) dp[j] = eps * v[j];
      return monodromy_representation(shifted(centre, dp, {}), lassos, cfg.integrator).rep;
    });
  }

  KawaiGridResult res;
  res.offset = off;
  const MonodromyResult m0 = monodromy_representation(centre, lassos, cfg.integrator);
  res.relation_residual = m0.relation_residual;
  res.max_wronskian_drift = m0.max_wronskian_drift;

  FiniteDifferenceOptions fd = cfg.fd;
  fd.threads = fd_threads;
  std::vector<Cocycle> chis;
  for (const auto& fam : families) {
    const FiniteDifferenceResult f = finite_difference_cocycle_report(fam, 0.0, fd);
    res.max_fd_agreement = std::max(res.max_fd_agreement, f.agreement);
    const CocycleResidualReport cr = verify_cocycle(f.cocycle.base(), f.cocycle);
    res.max_local_residual = std::max(res.max_local_residual, cr.max_local_residual());
    res.max_relator_residual = std::max(res.max_relator_residual, cr.relator_residual);
    chis.push_back(f.cocycle);
  }

  const std::size_t n = chis.size();
  res.omega.assign(n, std::vector<Complex>(n, 0.0));
  res.scale.assign(n, std::vector<double>(n, 0.0));
  const Representation& rho = chis.front().base();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const PairingReport p = goldman_orbifold(rho, chis[i], chis[j]);
      res.omega[i][j] = p.value;
      res.scale[i][j] = p.scale;
    }

  double fiber = 0.0, mixed = 0.0;
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < r; ++j)
      if (i != j) fiber = std::max(fiber, std::abs(res.omega[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]));
    for (int j = r; j < r + s; ++j)
      mixed = std::max(mixed, std::abs(res.omega[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]));
  }
  res.fiber_isotropy = mixed > 0.0 ? fiber / mixed : (fiber > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double sc = std::max({res.scale[i][j], res.scale[j][i], 1e-300});
      res.antisymmetry = std::max(res.antisymmetry, std::abs(res.omega[i][j] + res.omega[j][i]) / sc);
    }
  return res;
}

bool same_offsets(const std::vector<Complex>& x, const std::vector<Complex>& y) {
  const std::size_t n = std::max(x.size(), y.size());
  for (std::size_t i = 0; i < n; ++i) {
    const Complex a = i < x.size() ? x[i] : 0.0, b = i < y.size() ? y[i] : 0.0;
    if (a != b) return false;
  }
  return true;
}

}  // namespace

KawaiReport kawai_experiment(const KawaiConfig& cfg) {
  KawaiReport rep;
  rep.num_c = cfg.base.accessory_dimension();
  rep.num_t = static_cast<int>(cfg.t_directions.size());
  for (int a = 1; a <= rep.num_c; ++a) rep.labels.push_back("c" + std::to_string(a));
  for (int b = 1; b <= rep.num_t; ++b) rep.labels.push_back("t" + std::to_string(b));
  if (cfg.grid.empty()) throw InputError("experiment grid is empty");

  const int workers = worker_count(cfg.threads);
  const bool outer = workers > 1 && cfg.grid.size() > 1;
  rep.grid.resize(cfg.grid.size());
  parallel_for(
      cfg.grid.size(),
      [&](std::size_t g) {
        try {
          rep.grid[g] = run_grid_point(cfg, cfg.grid[g], outer ? 1 : cfg.threads);
        } catch (const std::exception& e) {
          throw MonodromyError("grid point " + std::to_string(g) + ": " + e.what());
        }
      },
      outer ? workers : 1);

  for (const auto& g : rep.grid) {
    rep.fiber_isotropy = std::max(rep.fiber_isotropy, g.fiber_isotropy);
    rep.antisymmetry = std::max(rep.antisymmetry, g.antisymmetry);
  }
  std::vector<bool> done(rep.grid.size(), false);
  for (std::size_t g = 0; g < rep.grid.size(); ++g) {
    if (done[g]) continue;
    std::vector<std::size_t> group;
    for (std::size_t h = g; h < rep.grid.size(); ++h)
      if (!done[h] && same_offsets(rep.grid[g].offset.dp, rep.grid[h].offset.dp)) {
        group.push_back(h);
        done[h] = true;
      }
    if (group.size() < 2) continue;
    for (int i = 0; i < rep.num_c; ++i)
      for (int j = rep.num_c; j < rep.num_c + rep.num_t; ++j) {
        Complex mean{0.0};
        for (std::size_t h : group)
          mean += rep.grid[h].omega[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        mean /= static_cast<double>(group.size());
        double dev = 0.0;
        for (std::size_t h : group)
          dev = std::max(dev, std::abs(rep.grid[h].omega[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] - mean));
        rep.c_spread = std::max(rep.c_spread, std::abs(mean) > 0.0 ? dev / std::abs(mean) : (dev > 0.0 ? 1.0 : 0.0));
      }
  }
  return rep;
}

}  // namespace charvar
