#include "charvar/sl2_poly.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace charvar {

Mat2 Mat2::inverse() const {
  const Complex dt = det();
  if (dt == Complex{0.0}) throw std::invalid_argument("singular 2x2 matrix");
  return adjugate() * (1.0 / dt);
}

double Mat2::norm() const { return std::sqrt(std::norm(a) + std::norm(b) + std::norm(c) + std::norm(d)); }

QuadPoly QuadPoly::monomial(int k) {
  switch (k) {
    case 0: return {1.0, 0.0, 0.0};
    case 1: return {0.0, 1.0, 0.0};
    case 2: return {0.0, 0.0, 1.0};
    default: throw std::out_of_range("QuadPoly::monomial degree must be 0, 1 or 2");
  }
}

double QuadPoly::norm() const { return std::sqrt(std::norm(p0) + std::norm(p1) + std::norm(p2)); }

MoebiusMap::MoebiusMap(const Mat2& m) {
  const Complex dt = m.det();
  const double scale = std::max(1.0, m.norm() * m.norm());
  if (std::abs(dt) <= 1e-300 || std::abs(dt) < 1e-14 * scale)
    throw std::invalid_argument("Moebius map from a singular matrix");
  m_ = m * (1.0 / std::sqrt(dt));
  det_residual_ = std::abs(m_.det() - 1.0) / std::max(1.0, m_.norm() * m_.norm());
}

MoebiusMap MoebiusMap::inverse() const {
  MoebiusMap g;
  g.m_ = m_.adjugate();
  g.det_residual_ = det_residual_;
  return g;
}

MoebiusMap MoebiusMap::operator*(const MoebiusMap& g) const { return MoebiusMap(m_ * g.m_); }

MoebiusMap MoebiusMap::operator-() const {
  MoebiusMap g = *this;
  g.m_ = -m_;
  return g;
}

Complex MoebiusMap::operator()(Complex z) const { return (m_.a * z + m_.b) / (m_.c * z + m_.d); }

Complex MoebiusMap::derivative(Complex z) const {
  const Complex den = m_.c * z + m_.d;
  return m_.det() / (den * den);
}

double psl_distance(const Mat2& g, const Mat2& h) { return std::min((g - h).norm(), (g + h).norm()); }

double psl_distance(const MoebiusMap& g, const MoebiusMap& h) { return psl_distance(g.matrix(), h.matrix()); }

QuadPoly matrix_to_poly(const Mat2& X) {
  if (std::abs(X.trace()) > 1e-10 * X.norm())
    throw std::invalid_argument("matrix_to_poly: input is not traceless");
  const Complex a = 0.5 * (X.a - X.d);
  return {-X.b, -2.0 * a, X.c};
}

Mat2 poly_to_matrix(const QuadPoly& P) {
  const Complex a = -0.5 * P.p1;
  return {a, -P.p0, P.p2, -a};
}

QuadPoly adjoint_action(const MoebiusMap& g, const QuadPoly& P) {
  const Mat2& m = g.matrix();
  const Mat2 conj = m * poly_to_matrix(P) * m.adjugate() * (1.0 / m.det());
  // Strip the O(eps) trace left by rounding before converting back.
  const Complex half_tr = 0.5 * conj.trace();
  return matrix_to_poly({conj.a - half_tr, conj.b, conj.c, conj.d - half_tr});
}

QuadPoly adjoint_action_pullback(const MoebiusMap& g, const QuadPoly& P) {
  // g^-1 = (d, -b; -c, a): P((dz - b)/(a - cz)) (a - cz)^2 / det.
  const Mat2& m = g.matrix();
  const Complex a = m.a, b = m.b, c = m.c, d = m.d;
  const Complex inv_det = 1.0 / m.det();
  const Complex q0 = P.p0 * a * a - P.p1 * a * b + P.p2 * b * b;
  const Complex q1 = -2.0 * a * c * P.p0 + (a * d + b * c) * P.p1 - 2.0 * b * d * P.p2;
  const Complex q2 = c * c * P.p0 - c * d * P.p1 + d * d * P.p2;
  return QuadPoly{q0, q1, q2} * inv_det;
}

std::array<std::array<Complex, 3>, 3> adjoint_matrix(const MoebiusMap& g) {
  std::array<std::array<Complex, 3>, 3> out{};
  for (int j = 0; j < 3; ++j) {
    const auto col = adjoint_action(g, QuadPoly::monomial(j)).coeffs();
    for (int i = 0; i < 3; ++i) out[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = col[static_cast<std::size_t>(i)];
  }
  return out;
}

Complex killing(const QuadPoly& x, const QuadPoly& y) {
  const auto u = x.coeffs();
  const auto v = y.coeffs();
  Complex s{0.0};
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      if (kKillingMatrix[i][j] != 0.0) s += u[i] * kKillingMatrix[i][j] * v[j];
  return s;
}

std::array<Complex, 5> b0_bracket_coefficients(const QuadPoly& x, const QuadPoly& y) {
  using Poly = std::array<Complex, 5>;
  auto mul = [](const Poly& u, const Poly& v) {
    Poly w{};
    for (std::size_t i = 0; i < 5; ++i)
      for (std::size_t j = 0; i + j < 5; ++j) w[i + j] += u[i] * v[j];
    return w;
  };
  auto deriv = [](const Poly& u) {
    Poly w{};
    for (std::size_t i = 1; i < 5; ++i) w[i - 1] = static_cast<double>(i) * u[i];
    return w;
  };
  const Poly f{x.p0, x.p1, x.p2, 0.0, 0.0};
  const Poly g{y.p0, y.p1, y.p2, 0.0, 0.0};
  const Poly fz = deriv(f), gz = deriv(g);
  const Poly a = mul(deriv(fz), g), b = mul(f, deriv(gz)), c = mul(fz, gz);
  Poly out{};
  for (std::size_t i = 0; i < 5; ++i) out[i] = a[i] + b[i] - c[i];
  return out;
}

Complex b0_bracket(const QuadPoly& x, const QuadPoly& y) { return b0_bracket_coefficients(x, y)[0]; }

}  // namespace charvar
