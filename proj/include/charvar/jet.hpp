#pragma once

// Truncated Taylor series sum_{k<=N} c_k (z - z0)^k. Binary operations require a
// common base point and truncate to the smaller order.

#include <complex>
#include <stdexcept>
#include <vector>

namespace charvar {

using Complex = std::complex<double>;

class JetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Jet {
 public:
  static constexpr int kDefaultOrder = 8;

  Jet() = default;
  Jet(Complex z0, std::vector<Complex> coeffs);

  static Jet constant(Complex z0, Complex value, int order = kDefaultOrder);
  static Jet variable(Complex z0, int order = kDefaultOrder);  // z itself
  // Jet at z0 of the polynomial sum_k p[k] z^k.
  static Jet polynomial(Complex z0, const std::vector<Complex>& p, int order = kDefaultOrder);

  Complex base() const { return z0_; }
  int order() const { return static_cast<int>(c_.size()) - 1; }
  const std::vector<Complex>& coeffs() const { return c_; }
  Complex operator[](int k) const { return c_.at(static_cast<std::size_t>(k)); }
  Complex value() const { return c_.front(); }
  // k-th derivative at the base point: k! c_k.
  Complex derivative_value(int k) const;
  // Truncated series evaluated at z.
  Complex evaluate(Complex z) const;
  double scale() const;  // max |c_k|

  Jet truncated(int order) const;
  Jet derivative() const;      // order drops by one
  Jet antiderivative() const;  // zero at the base point; order rises by one
  Jet reciprocal() const;      // needs c0 != 0
  Jet exp() const;
  // (*this) o inner; inner's value must equal this jet's base point.
  Jet compose(const Jet& inner) const;

  Jet operator+(const Jet& o) const;
  Jet operator-(const Jet& o) const;
  Jet operator*(const Jet& o) const;
  Jet operator/(const Jet& o) const { return *this * o.reciprocal(); }
  Jet operator-() const;
  Jet operator+(Complex s) const;
  Jet operator-(Complex s) const { return *this + (-s); }
  Jet operator*(Complex s) const;
  friend Jet operator*(Complex s, const Jet& j) { return j * s; }
  friend Jet operator+(Complex s, const Jet& j) { return j + s; }

 private:
  Complex z0_{0.0};
  std::vector<Complex> c_{Complex{0.0}};
};

// max_k |a_k - b_k| over common orders, divided by max(1, scale(a), scale(b)).
double jet_residual(const Jet& a, const Jet& b);

}  // namespace charvar
