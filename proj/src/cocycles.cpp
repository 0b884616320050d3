#include "charvar/cocycles.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <optional>

#include "charvar/parallel.hpp"

namespace charvar {

double RepresentationCheck::max_trace_residual() const {
  double m = 0.0;
  for (const auto& t : traces) m = std::max(m, t.residual);
  return m;
}

bool RepresentationCheck::ok(double relator_tol, double trace_tol) const {
  return relator_residual <= relator_tol && max_trace_residual() <= trace_tol;
}

double marked_trace_residual(Complex trace, int order) {
  const double t = std::abs(trace);
  if (order == Signature::kCusp) return std::abs(t - 2.0);
  double best = std::numeric_limits<double>::infinity();
  for (int k = 1; k < order; ++k) {
    if (std::gcd(k, order) != 1) continue;
    best = std::min(best, std::abs(t - std::abs(2.0 * std::cos(std::numbers::pi * k / order))));
  }
  return best;
}

// ---------------------------------------------------------------------------
// Representation

Representation::Representation(Signature sig, std::map<Generator, MoebiusMap> images)
    : sig_(std::move(sig)), images_(std::move(images)) {
  for (Generator g : sig_.generators())
    if (!images_.count(g)) throw InputError("representation is missing generator " + g.name());
  for (const auto& [g, m] : images_)
    if (!sig_.contains(g)) throw InputError("generator " + g.name() + " not in signature " + sig_.str());
}

const MoebiusMap& Representation::image(Generator g) const {
  auto it = images_.find(g);
  if (it == images_.end()) throw InputError("no image for generator " + g.name());
  return it->second;
}

MoebiusMap Representation::evaluate(const FreeWord& w) const {
  Mat2 m = Mat2::identity();
  for (const Letter& l : w.letters()) {
    const Mat2& x = image(l.gen).matrix();
    m = m * (l.exp > 0 ? x : x.adjugate());
  }
  return MoebiusMap(m);
}

RepresentationCheck Representation::check() const {
  RepresentationCheck c;
  c.relator_residual = psl_distance(evaluate(relator(sig_)), MoebiusMap::identity());
  for (int i = 1; i <= sig_.num_marked(); ++i) {
    const Generator g = Generator::c(i);
    const int order = sig_.marked_order(i);
    c.traces.push_back({g, order, marked_trace_residual(image(g).trace(), order)});
  }
  return c;
}

Representation Representation::conjugated(const MoebiusMap& g) const {
  std::map<Generator, MoebiusMap> out;
  const MoebiusMap ginv = g.inverse();
  for (const auto& [x, m] : images_) out.emplace(x, g * m * ginv);
  return Representation(sig_, std::move(out));
}

namespace {

// Eigenvectors of a 2x2 matrix as homogeneous points; empty for +-identity.
std::vector<std::array<Complex, 2>> fixed_points(const Mat2& m, double tol) {
  if (psl_distance(m, Mat2::identity()) <= tol) return {};
  const Complex tr = m.trace();
  const Complex disc = std::sqrt(tr * tr - 4.0 * m.det());
  std::vector<std::array<Complex, 2>> pts;
  for (Complex lambda : {0.5 * (tr + disc), 0.5 * (tr - disc)}) {
    // (m - lambda) v = 0
    const Complex r0 = m.a - lambda, r1 = m.b;
    std::array<Complex, 2> v;
    if (std::abs(r0) + std::abs(r1) > std::abs(m.c) + std::abs(m.d - lambda))
      v = {-r1, r0};
    else
      v = {m.d - lambda, -m.c};
    pts.push_back(v);
  }
  return pts;
}

bool fixes(const Mat2& m, const std::array<Complex, 2>& v, double tol) {
  const Complex w0 = m.a * v[0] + m.b * v[1];
  const Complex w1 = m.c * v[0] + m.d * v[1];
  const double nv = std::hypot(std::abs(v[0]), std::abs(v[1]));
  const double nw = std::hypot(std::abs(w0), std::abs(w1));
  return std::abs(w0 * v[1] - w1 * v[0]) <= tol * nv * nw;
}

}  // namespace

bool Representation::visibly_reducible(double tol) const {
  std::optional<std::vector<std::array<Complex, 2>>> candidates;
  for (const auto& [g, m] : images_) {
    auto pts = fixed_points(m.matrix(), tol);
    if (pts.empty()) continue;
    if (!candidates) {
      candidates = pts;
      continue;
    }
    std::vector<std::array<Complex, 2>> keep;
    for (const auto& v : *candidates)
      if (fixes(m.matrix(), v, tol)) keep.push_back(v);
    candidates = keep;
    if (candidates->empty()) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Cocycle

Cocycle::Cocycle(RepresentationPtr base, std::map<Generator, QuadPoly> values)
    : base_(std::move(base)), values_(std::move(values)) {
  if (!base_) throw std::invalid_argument("cocycle needs a base representation");
  for (Generator g : base_->signature().generators())
    if (!values_.count(g)) throw InputError("cocycle is missing generator " + g.name());
  for (const auto& [g, p] : values_)
    if (!base_->signature().contains(g)) throw InputError("cocycle generator " + g.name() + " not in signature");
}

const QuadPoly& Cocycle::value(Generator g) const {
  auto it = values_.find(g);
  if (it == values_.end()) throw InputError("cocycle has no value at " + g.name());
  return it->second;
}

namespace {

void require_same_base(const Cocycle& x, const Cocycle& y) {
  if (x.base_ptr() == y.base_ptr()) return;
  for (const auto& [g, m] : x.base().images())
    if (!(m.matrix() == y.base().image(g).matrix()))
      throw std::invalid_argument("cocycles over different representations");
}

}  // namespace

Cocycle Cocycle::operator+(const Cocycle& other) const {
  require_same_base(*this, other);
  auto v = values_;
  for (auto& [g, p] : v) p += other.value(g);
  return Cocycle(base_, std::move(v));
}

Cocycle Cocycle::operator-(const Cocycle& other) const { return *this + other * Complex(-1.0); }

Cocycle Cocycle::operator*(Complex s) const {
  auto v = values_;
  for (auto& [g, p] : v) p = p * s;
  return Cocycle(base_, std::move(v));
}

Cocycle Cocycle::transported(const MoebiusMap& g, RepresentationPtr conjugated_base) const {
  std::map<Generator, QuadPoly> v;
  for (const auto& [x, p] : values_) v.emplace(x, adjoint_action(g, p));
  return Cocycle(std::move(conjugated_base), std::move(v));
}

WordEvaluation evaluate_on_word_scaled(const Cocycle& chi, const FreeWord& w) {
  const Representation& rho = chi.base();
  WordEvaluation out;
  MoebiusMap prefix = MoebiusMap::identity();
  for (const Letter& l : w.letters()) {
    const MoebiusMap& x = rho.image(l.gen);
    QuadPoly term;
    if (l.exp > 0) {
      term = adjoint_action(prefix, chi.value(l.gen));
      prefix = prefix * x;
    } else {
      prefix = prefix * x.inverse();
      term = -adjoint_action(prefix, chi.value(l.gen));
    }
    out.value += term;
    out.scale += term.norm();
  }
  return out;
}

QuadPoly evaluate_on_word(const Cocycle& chi, const FreeWord& w) { return evaluate_on_word_scaled(chi, w).value; }

QuadPoly evaluate_on_ring_element(const Cocycle& chi, const GroupRingElement& x) {
  QuadPoly out;
  for (const auto& [w, n] : x.terms()) out += evaluate_on_word(chi, w) * static_cast<double>(n);
  return out;
}

Cocycle coboundary(const RepresentationPtr& rho, const QuadPoly& P) {
  std::map<Generator, QuadPoly> v;
  for (const auto& [g, m] : rho->images()) v.emplace(g, adjoint_action(m, P) - P);
  return Cocycle(rho, std::move(v));
}

// ---------------------------------------------------------------------------
// Local coboundary solves

LocalSolve solve_local_coboundary(const MoebiusMap& g, const QuadPoly& value, double tol) {
  using Mat3 = Eigen::Matrix<std::complex<double>, 3, 3>;
  using Vec3 = Eigen::Matrix<std::complex<double>, 3, 1>;
  const auto ad = adjoint_matrix(g);
  Mat3 A;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      A(i, j) = ad[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] - (i == j ? 1.0 : 0.0);
  const auto bc = value.coeffs();
  const Vec3 b(bc[0], bc[1], bc[2]);

  Eigen::JacobiSVD<Mat3> svd(A, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double cutoff = 1e-9 * std::max(sv(0), 1e-300);

  LocalSolve out;
  Vec3 x = Vec3::Zero();
  for (int i = 0; i < 3; ++i) {
    const Vec3 v = svd.matrixV().col(i);
    if (sv(i) > cutoff) {
      x += v * (svd.matrixU().col(i).adjoint() * b)(0) / sv(i);
    } else {
      ++out.kernel_dim;
      out.kernel.push_back({v(0), v(1), v(2)});
    }
  }
  out.solution = {x(0), x(1), x(2)};
  out.residual = (A * x - b).norm() / std::max(1.0, b.norm());
  if (out.residual > tol)
    throw NotParabolicError("cocycle not parabolic at generator (local residual " + std::to_string(out.residual) +
                                ")",
                            out.residual);
  return out;
}

LocalSolve solve_local_coboundary(const Representation& rho, const Cocycle& chi, const FreeWord& gamma, double tol) {
  return solve_local_coboundary(rho.evaluate(gamma), evaluate_on_word(chi, gamma), tol);
}

double CocycleResidualReport::max_local_residual() const {
  double m = 0.0;
  for (const auto& l : local) m = std::max(m, l.residual);
  return m;
}

CocycleResidualReport verify_cocycle(const Representation& rho, const Cocycle& chi) {
  CocycleResidualReport rep;
  const WordEvaluation r = evaluate_on_word_scaled(chi, relator(rho.signature()));
  rep.relator_scale = r.scale;
  const double n = r.value.norm();
  rep.relator_residual = n == 0.0 ? 0.0 : n / std::max(r.scale, 1e-300);
  for (int i = 1; i <= rho.signature().num_marked(); ++i) {
    const Generator g = Generator::c(i);
    LocalResidual lr{g, 0.0, 0, false};
    try {
      const LocalSolve s = solve_local_coboundary(rho, chi, FreeWord::generator(g));
      lr = {g, s.residual, s.kernel_dim, true};
    } catch (const NotParabolicError& e) {
      lr = {g, e.residual(), 0, false};
    }
    rep.local.push_back(lr);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Finite differences

namespace {

QuadPoly log_derivative_poly(const Mat2& deriv, const Mat2& m) {
  Mat2 x = deriv * m.inverse();
  const Complex half_tr = 0.5 * x.trace();
  x.a -= half_tr;
  x.d -= half_tr;
  return matrix_to_poly(x);
}

}  // namespace

FiniteDifferenceResult finite_difference_cocycle_report(const RepresentationFamily& family, double s0,
                                                        const FiniteDifferenceOptions& opt) {
  const double h = opt.h;
  if (!(h > 0.0)) throw std::invalid_argument("finite difference step must be positive");
  // Offsets in units of h, ordered along the parameter line.
  std::vector<double> offsets = opt.richardson ? std::vector<double>{-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0}
                                               : std::vector<double>{-2.0, -1.0, 0.0, 1.0, 2.0};
  const std::size_t centre = offsets.size() / 2;
  std::vector<Representation> reps(offsets.size());
  parallel_for(offsets.size(), [&](std::size_t i) { reps[i] = family(s0 + offsets[i] * h); }, opt.threads);
  auto base = std::make_shared<const Representation>(reps[centre]);

  std::map<Generator, QuadPoly> coarse, fine;
  // Stencil roundoff: differences of O(|M|) entries divided by h.
  std::map<Generator, double> noise;
  double agreement = 0.0;
  for (Generator g : base->signature().generators()) {
    const Mat2& m0 = base->image(g).matrix();
    std::vector<Mat2> lifts(offsets.size());
    for (std::size_t i = 0; i < offsets.size(); ++i) {
      const Mat2& m = reps[i].image(g).matrix();
      lifts[i] = (m - m0).norm() <= (m + m0).norm() ? m : -m;
    }
    for (std::size_t i = 1; i < lifts.size(); ++i) {
      const double jump = (lifts[i] - lifts[i - 1]).norm() / std::max(1.0, m0.norm());
      if (jump > opt.branch_jump)
        throw BranchJumpError("branch jump at generator " + g.name() + " (lift distance " + std::to_string(jump) + ")");
    }
    auto at = [&](double off) -> const Mat2& {
      for (std::size_t i = 0; i < offsets.size(); ++i)
        if (offsets[i] == off) return lifts[i];
      throw std::logic_error("missing stencil point");
    };
    noise[g] = 16.0 * std::numeric_limits<double>::epsilon() * m0.norm() * m0.inverse().norm() / h;
    const Mat2 d_h = (at(-2.0) - at(-1.0) * 8.0 + at(1.0) * 8.0 - at(2.0)) * (1.0 / (12.0 * h));
    coarse[g] = log_derivative_poly(d_h, m0);
    if (opt.richardson) {
      const Mat2 d_h2 = (at(-1.0) - at(-0.5) * 8.0 + at(0.5) * 8.0 - at(1.0)) * (1.0 / (6.0 * h));
      fine[g] = log_derivative_poly(d_h2, m0);
    }
  }

  if (!opt.richardson) return {Cocycle(base, std::move(coarse)), 0.0};

  double scale = 0.0;
  for (const auto& [g, p] : coarse) scale = std::max(scale, p.norm());
  std::map<Generator, QuadPoly> extrapolated;
  for (const auto& [g, p] : coarse) {
    const QuadPoly& q = fine.at(g);
    const double diff = (p - q).norm() - noise.at(g);
    if (diff > 0.0) agreement = std::max(agreement, diff / std::max({p.norm(), q.norm(), 1e-8 * scale}));
    extrapolated[g] = (q * 16.0 - p) * (1.0 / 15.0);
  }
  if (agreement > opt.agreement_tol)
    throw FiniteDifferenceError("finite differences at h and h/2 disagree (relative " + std::to_string(agreement) +
                                ")");
  return {Cocycle(base, std::move(extrapolated)), agreement};
}

Cocycle finite_difference_cocycle(const RepresentationFamily& family, double s0, const FiniteDifferenceOptions& opt) {
  return finite_difference_cocycle_report(family, s0, opt).cocycle;
}

}  // namespace charvar
