#pragma once

// sl(2,C) realized as quadratic vector fields P(z) d/dz, PSL(2,C) as
// normalized 2x2 matrices, the adjoint action and the Killing pairing.

#include <array>
#include <complex>

namespace charvar {

using Complex = std::complex<double>;

struct Mat2 {
  Complex a{1.0}, b{0.0}, c{0.0}, d{1.0};

  static Mat2 identity() { return {}; }
  static Mat2 zero() { return {0.0, 0.0, 0.0, 0.0}; }

  Complex det() const { return a * d - b * c; }
  Complex trace() const { return a + d; }
  Mat2 adjugate() const { return {d, -b, -c, a}; }
  Mat2 inverse() const;
  double norm() const;  // Frobenius

  Mat2 operator*(const Mat2& m) const {
    return {a * m.a + b * m.c, a * m.b + b * m.d, c * m.a + d * m.c, c * m.b + d * m.d};
  }
  Mat2 operator+(const Mat2& m) const { return {a + m.a, b + m.b, c + m.c, d + m.d}; }
  Mat2 operator-(const Mat2& m) const { return {a - m.a, b - m.b, c - m.c, d - m.d}; }
  Mat2 operator-() const { return {-a, -b, -c, -d}; }
  Mat2 operator*(Complex s) const { return {a * s, b * s, c * s, d * s}; }
  friend Mat2 operator*(Complex s, const Mat2& m) { return m * s; }
  friend bool operator==(const Mat2&, const Mat2&) = default;
};

// P(z) = p0 + p1 z + p2 z^2
struct QuadPoly {
  Complex p0{0.0}, p1{0.0}, p2{0.0};

  static QuadPoly constant(Complex c) { return {c, 0.0, 0.0}; }
  static QuadPoly monomial(int k);

  std::array<Complex, 3> coeffs() const { return {p0, p1, p2}; }
  static QuadPoly from_coeffs(const std::array<Complex, 3>& v) { return {v[0], v[1], v[2]}; }

  Complex operator()(Complex z) const { return p0 + z * (p1 + z * p2); }
  double norm() const;

  QuadPoly operator+(const QuadPoly& q) const { return {p0 + q.p0, p1 + q.p1, p2 + q.p2}; }
  QuadPoly operator-(const QuadPoly& q) const { return {p0 - q.p0, p1 - q.p1, p2 - q.p2}; }
  QuadPoly operator-() const { return {-p0, -p1, -p2}; }
  QuadPoly operator*(Complex s) const { return {p0 * s, p1 * s, p2 * s}; }
  friend QuadPoly operator*(Complex s, const QuadPoly& q) { return q * s; }
  QuadPoly& operator+=(const QuadPoly& q) { return *this = *this + q; }
  QuadPoly& operator-=(const QuadPoly& q) { return *this = *this - q; }
  friend bool operator==(const QuadPoly&, const QuadPoly&) = default;
};

// Element of PSL(2,C): a determinant-one representative, compared modulo sign.
class MoebiusMap {
 public:
  MoebiusMap() = default;
  // Divides by a square root of det; throws std::invalid_argument if singular.
  explicit MoebiusMap(const Mat2& m);
  MoebiusMap(Complex a, Complex b, Complex c, Complex d) : MoebiusMap(Mat2{a, b, c, d}) {}

  static MoebiusMap identity() { return MoebiusMap(); }

  const Mat2& matrix() const { return m_; }
  // |det - 1| left after normalization, relative to max(1, |entries|^2).
  double det_residual() const { return det_residual_; }
  Complex trace() const { return m_.trace(); }

  MoebiusMap inverse() const;
  MoebiusMap operator*(const MoebiusMap& g) const;
  MoebiusMap operator-() const;

  Complex operator()(Complex z) const;
  Complex derivative(Complex z) const;

 private:
  Mat2 m_;
  double det_residual_ = 0.0;
};

// min(|A - B|, |A + B|) in Frobenius norm.
double psl_distance(const MoebiusMap& g, const MoebiusMap& h);
double psl_distance(const Mat2& g, const Mat2& h);

// (a, b; c, -a) |-> c z^2 - 2 a z - b. Rejects |trace| > 1e-10 * |X|.
QuadPoly matrix_to_poly(const Mat2& X);
Mat2 poly_to_matrix(const QuadPoly& P);

// g . P through matrix conjugation g X g^-1.
QuadPoly adjoint_action(const MoebiusMap& g, const QuadPoly& P);
// g . P = P(g^-1 z) / (g^-1)'(z), expanded in z.
QuadPoly adjoint_action_pullback(const MoebiusMap& g, const QuadPoly& P);
// Matrix of P |-> g . P in the basis {1, z, z^2}; column j is g . z^j.
std::array<std::array<Complex, 3>, 3> adjoint_matrix(const MoebiusMap& g);

// C_ij = <z^(i-1), z^(j-1)>.
constexpr std::array<std::array<double, 3>, 3> kKillingMatrix{{{0.0, 0.0, -1.0}, {0.0, 0.5, 0.0}, {-1.0, 0.0, 0.0}}};

Complex killing(const QuadPoly& x, const QuadPoly& y);
// B0[F, G] = F'' G + F G'' - F' G' (independent of z on quadratics).
Complex b0_bracket(const QuadPoly& x, const QuadPoly& y);
// Coefficients of B0[F, G](z) in {1, z, ..., z^4} by polynomial arithmetic;
// everything past the constant term vanishes on quadratics.
std::array<Complex, 5> b0_bracket_coefficients(const QuadPoly& x, const QuadPoly& y);

}  // namespace charvar
