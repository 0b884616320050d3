#include "charvar/schwarzian_lab.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <random>

#include "charvar/group_algebra.hpp"

namespace charvar {

Jet schwarzian(const Jet& f) {
  if (f.order() < 3) throw JetError("schwarzian needs a jet of order >= 3");
  const Jet fp = f.derivative();
  if (fp.value() == Complex{0.0}) throw JetError("schwarzian at a critical point");
  const Jet r = fp.reciprocal();
  const Jet f2 = fp.derivative();
  const Jet a = f2.derivative() * r;
  const Jet b = f2 * r;
  return a - 1.5 * (b * b);
}

Jet lambda_apply(const Jet& q, const Jet& F) {
  if (F.order() < 3 || q.order() < 1) throw JetError("insufficient jet order for the Lambda operator");
  const Jet F1 = F.derivative();
  const Jet F3 = F1.derivative().derivative();
  return F3 + 2.0 * (q * F1) + q.derivative() * F;
}

Jet b_apply(const Jet& q, const Jet& F, const Jet& G) {
  if (F.order() < 2 || G.order() < 2) throw JetError("insufficient jet order for the bilinear form");
  const Jet F1 = F.derivative(), G1 = G.derivative();
  return F1.derivative() * G + F * G1.derivative() - F1 * G1 + 2.0 * (q * F * G);
}

Jet moebius_jet(const MoebiusMap& g, Complex z0, int order) {
  const Mat2& m = g.matrix();
  const Jet z = Jet::variable(z0, order);
  const Jet den = z * m.c + m.d;
  if (std::abs(den.value()) <= 1e-300) throw JetError("Moebius jet taken at a pole");
  return (z * m.a + m.b) * den.reciprocal();
}

int elliptic_order(const MoebiusMap& g, int max_order) {
  MoebiusMap p = g;
  for (int n = 1; n <= max_order; ++n) {
    if (psl_distance(p, MoebiusMap::identity()) <= 1e-9) return n;
    p = p * g;
  }
  throw InputError("transformation has no finite order up to " + std::to_string(max_order));
}

JetProvider polynomial_provider(std::vector<Complex> coeffs) {
  return [c = std::move(coeffs)](Complex z, int order) { return Jet::polynomial(z, c, order); };
}

JetProvider exp_provider() {
  return [](Complex z, int order) { return Jet::variable(z, order).exp(); };
}

// ---------------------------------------------------------------------------

namespace {

double residual(const Jet& lhs, const Jet& rhs, double extra_scale = 0.0) {
  const int n = std::min(lhs.order(), rhs.order());
  double diff = 0.0;
  for (int k = 0; k <= n; ++k) diff = std::max(diff, std::abs(lhs[k] - rhs[k]));
  return diff / std::max({1.0, lhs.truncated(n).scale(), rhs.truncated(n).scale(), extra_scale});
}

double lambda_terms_scale(const Jet& q, const Jet& F) {
  const Jet F1 = F.derivative();
  return std::max({F1.derivative().derivative().scale(), (2.0 * (q * F1)).scale(), (q.derivative() * F).scale()});
}

// Largest of the four summands of B_q[F, G]; the sum can cancel far below them.
double b_terms_scale(const Jet& q, const Jet& F, const Jet& G) {
  const Jet F1 = F.derivative(), G1 = G.derivative();
  return std::max({(F1.derivative() * G).scale(), (F * G1.derivative()).scale(), (F1 * G1).scale(),
                   (2.0 * (q * F * G)).scale()});
}

struct Orbit {
  std::vector<MoebiusMap> powers;  // gamma^0 .. gamma^(n-1)
};

Orbit orbit_of(const MoebiusMap& gamma) {
  const int n = elliptic_order(gamma);
  Orbit o;
  MoebiusMap p = MoebiusMap::identity();
  for (int k = 0; k < n; ++k) {
    o.powers.push_back(p);
    p = p * gamma;
  }
  return o;
}

// q = mean over k of S(f) o gamma^k ((gamma^k)')^2, invariant under gamma.
Jet symmetrized_q(const IdentityInputs& in, const Orbit& orb, Complex z) {
  const double n = static_cast<double>(orb.powers.size());
  Jet sum;
  bool first = true;
  for (const MoebiusMap& g : orb.powers) {
    const Jet gj = moebius_jet(g, z, in.order);
    const Jet gp = gj.derivative();
    const Jet term = schwarzian(in.f(gj.value(), in.order)).compose(gj) * gp * gp;
    sum = first ? term : sum + term;
    first = false;
  }
  return sum * (1.0 / n);
}

// F = mean over k of (F0 o gamma^k) conj((gamma^k)') / (gamma^k)', as a z-jet at z.
Jet symmetrized_F(const IdentityInputs& in, const Orbit& orb, Complex z) {
  const double n = static_cast<double>(orb.powers.size());
  Jet sum;
  bool first = true;
  for (const MoebiusMap& g : orb.powers) {
    const Jet gj = moebius_jet(g, z, in.order);
    const Jet gp = gj.derivative();
    const Complex w = gj.value();
    const Jet term = in.F0(w, w, in.order).compose(gj) * std::conj(gp.value()) * gp.reciprocal();
    sum = first ? term : sum + term;
    first = false;
  }
  return sum * (1.0 / n);
}

// (J o g) / g' for a jet J of a weight -1 object at g(z).
Jet pull_back(const Jet& J_at_gz, const Jet& gj) { return J_at_gz.compose(gj) * gj.derivative().reciprocal(); }

}  // namespace

double LambdaIdentityReport::max_residual() const {
  double m = 0.0;
  for (const auto& [k, v] : residuals) m = std::max(m, v);
  return m;
}

LambdaIdentityReport check_identities(const IdentityInputs& in) {
  const int N = in.order;
  const Orbit orb = orbit_of(in.gamma);
  LambdaIdentityReport rep;
  rep.group_order = static_cast<int>(orb.powers.size());
  rep.samples = in.samples.size();
  for (const char* key : {"lambda1", "lambda2", "lambda3", "lambda5", "b1", "b2", "b3"}) rep.residuals[key] = 0.0;
  auto record = [&](const char* key, double r) { rep.residuals[key] = std::max(rep.residuals[key], r); };
  const std::vector<Complex> P{in.P.p0, in.P.p1, in.P.p2};

  for (const Complex z : in.samples) {
    const Jet fj = in.f(z, N);
    const Jet fp = fj.derivative();
    const Jet q = schwarzian(fj);

    {  // (P o f) / f' is annihilated by Lambda_{S(f)}
      const Jet F = pull_back(Jet::polynomial(fj.value(), P, N), fj);
      const Jet L = lambda_apply(q, F);
      record("lambda1", residual(L, Jet::constant(z, 0.0, L.order()), lambda_terms_scale(q, F)));
    }
    {  // transfer of Lambda_0 through f
      const Jet hj = in.h(fj.value(), N);
      const Jet H = pull_back(hj, fj);
      const Jet lhs = lambda_apply(q, H);
      const Jet rhs = hj.derivative().derivative().derivative().compose(fj) * fp * fp;
      record("lambda2", residual(lhs, rhs, lambda_terms_scale(q, H)));
    }
    {  // product rule
      const Jet F = in.F(z, N), G = in.G(z, N);
      const Jet lhs = lambda_apply(q, F) * G + F * lambda_apply(q, G);
      const Jet rhs = b_apply(q, F, G).derivative();
      record("lambda5", residual(lhs, rhs));
    }
    {  // composition law for B
      const Jet f2j = in.f2(z, N);
      const Complex w = f2j.value();
      const Jet f1w = in.f(w, N);
      const Jet q1 = schwarzian(f1w), q12 = schwarzian(f1w.compose(f2j));
      const Jet Fp = pull_back(in.F(w, N), f2j), Gp = pull_back(in.G(w, N), f2j);
      const Jet lhs = b_apply(q1, in.F(w, N), in.G(w, N)).compose(f2j);
      const Jet rhs = b_apply(q12, Fp, Gp);
      record("b1", residual(lhs, rhs, std::max(b_terms_scale(q1, in.F(w, N), in.G(w, N)), b_terms_scale(q12, Fp, Gp))));
    }

    const Jet gj = moebius_jet(in.gamma, z, N);
    const Complex gz = gj.value();
    const Jet qz = symmetrized_q(in, orb, z);
    const Jet qgz = symmetrized_q(in, orb, gz);
    {  // equivariance of Lambda
      const Jet lhs = lambda_apply(qz, pull_back(in.F(gz, N), gj));
      const Jet gp = gj.derivative();
      const Jet rhs = lambda_apply(qgz, in.F(gz, N)).compose(gj) * gp * gp;
      record("lambda3", residual(lhs, rhs));
    }
    {  // equivariance of B
      const Jet Fp = pull_back(in.F(gz, N), gj), Gp = pull_back(in.G(gz, N), gj);
      const Jet lhs = b_apply(qgz, in.F(gz, N), in.G(gz, N)).compose(gj);
      const Jet rhs = b_apply(qz, Fp, Gp);
      record("b2", residual(lhs, rhs, std::max(b_terms_scale(qgz, in.F(gz, N), in.G(gz, N)), b_terms_scale(qz, Fp, Gp))));
    }
    {  // twisted equivariance with a non-holomorphic F
      const Jet Fz = symmetrized_F(in, orb, z);
      const Jet Fgz = symmetrized_F(in, orb, gz);
      const Jet Gz = in.G(z, N);
      const Jet H = Gz - pull_back(in.G(gz, N), gj);
      const Complex conj_gp = std::conj(gj.derivative().value());
      const Jet lhs = b_apply(qz, Fz, Gz) - b_apply(qgz, Fgz, in.G(gz, N)).compose(gj) * conj_gp;
      const Jet rhs = b_apply(qz, Fz, H);
      record("b3", residual(lhs, rhs));
    }
  }
  return rep;
}

IdentityInputs default_identity_inputs(std::uint64_t seed, int num_samples) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto rc = [&](double s) { return Complex(s * u(rng), s * u(rng)); };
  auto poly = [&](int degree, double s) {
    std::vector<Complex> c;
    for (int k = 0; k <= degree; ++k) c.push_back(rc(s / (k + 1)));
    return c;
  };

  IdentityInputs in;
  std::vector<Complex> f = poly(5, 0.3), f2 = poly(5, 0.3);
  f[1] = 1.0 + rc(0.1);
  f2[1] = 1.0 + rc(0.1);
  in.f = polynomial_provider(f);
  in.f2 = polynomial_provider(f2);
  in.h = polynomial_provider(poly(4, 1.0));
  in.F = polynomial_provider(poly(4, 1.0));
  in.G = polynomial_provider(poly(4, 1.0));
  std::array<std::vector<Complex>, 3> seedF{poly(3, 1.0), poly(3, 1.0), poly(3, 1.0)};
  in.F0 = [seedF](Complex z, Complex w, int order) {
    const Complex wb = std::conj(w);
    return Jet::polynomial(z, seedF[0], order) + Jet::polynomial(z, seedF[1], order) * wb +
           Jet::polynomial(z, seedF[2], order) * (wb * wb);
  };
  in.P = {rc(1.0), rc(1.0), rc(1.0)};
  in.gamma = MoebiusMap(0.0, -1.0, 1.0, 0.0);

  // Keep f', f2' and (f o f2)' away from zero at the sample and its image.
  auto fprime = [&](const std::vector<Complex>& c, Complex z) { return Jet::polynomial(z, c, 1)[1]; };
  auto fval = [&](const std::vector<Complex>& c, Complex z) { return Jet::polynomial(z, c, 0).value(); };
  std::uniform_real_distribution<double> radius(0.7, 1.4), angle(0.0, 2.0 * 3.141592653589793);
  while (static_cast<int>(in.samples.size()) < num_samples) {
    const Complex z = std::polar(radius(rng), angle(rng));
    const Complex gz = in.gamma(z);
    const double m = std::min({std::abs(fprime(f, z)), std::abs(fprime(f, gz)), std::abs(fprime(f2, z)),
                               std::abs(fprime(f, fval(f2, z)))});
    if (m >= 0.2) in.samples.push_back(z);
  }
  return in;
}

// ---------------------------------------------------------------------------

LambdaSolution solve_lambda(const JetProvider& f, const JetProvider& Q, Complex z0, Complex z1,
                            const std::array<Complex, 3>& abc, int order, const QuadratureOptions& opt) {
  using Rule = boost::math::quadrature::gauss<double, 32>;
  const auto& x = Rule::abscissa();
  const auto& wts = Rule::weights();
  const Complex dz = z1 - z0;

  auto integrate = [&](int level) {
    std::array<Complex, 3> I{};
    const int segs = 1 << level;
    const double len = 1.0 / segs;
    for (int s = 0; s < segs; ++s) {
      const double mid = (s + 0.5) * len;
      for (std::size_t i = 0; i < x.size(); ++i) {
        for (double sign : {-1.0, 1.0}) {
          if (x[i] == 0.0 && sign > 0.0) continue;
          const double t = mid + sign * x[i] * 0.5 * len;
          const Complex uz = z0 + t * dz;
          const Jet fj = f(uz, 1);
          const Complex fu = fj.value(), fpu = fj[1];
          if (std::abs(fpu) <= 1e-14 * std::max(1.0, std::abs(fu)))
            throw QuadratureError("critical point of f on the integration path");
          const Complex base = Q(uz, 0).value() / fpu * (wts[i] * 0.5 * len) * dz;
          I[0] += base;
          I[1] += base * fu;
          I[2] += base * fu * fu;
        }
      }
    }
    return I;
  };

  LambdaSolution out;
  std::array<Complex, 3> prev = integrate(0), cur{};
  bool converged = false;
  for (int level = 1; level <= opt.max_levels; ++level) {
    cur = integrate(level);
    double diff = 0.0, scale = 0.0;
    for (int k = 0; k < 3; ++k) {
      diff = std::max(diff, std::abs(cur[static_cast<std::size_t>(k)] - prev[static_cast<std::size_t>(k)]));
      scale = std::max(scale, std::abs(cur[static_cast<std::size_t>(k)]));
    }
    out.levels = level;
    if (diff == 0.0 || diff <= opt.tol * scale) {
      converged = true;
      break;
    }
    prev = cur;
  }
  if (!converged) throw QuadratureError("quadrature did not converge");

  const Jet fj = f(z1, order);
  const Jet fp = fj.derivative();
  const Jet r = fp.reciprocal();
  const Jet Qj = Q(z1, order);
  const Jet base = Qj * r;
  const Jet I0 = base.antiderivative() + cur[0];
  const Jet I1 = (base * fj).antiderivative() + cur[1];
  const Jet I2 = (base * fj * fj).antiderivative() + cur[2];
  const Jet G = (0.5 * (fj * fj * I0) - fj * I1 + 0.5 * I2 + abc[0] * (fj * fj) + abc[1] * fj + abc[2]) * r;
  out.jet = G;
  out.value = G.value();
  out.residual = jet_residual(lambda_apply(schwarzian(fj), G), Qj);
  return out;
}

}  // namespace charvar
