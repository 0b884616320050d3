#include "charvar/jet.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace charvar {

namespace {

void same_base(const Jet& a, const Jet& b) {
  const double tol = 1e-12 * std::max({1.0, std::abs(a.base()), std::abs(b.base())});
  if (std::abs(a.base() - b.base()) > tol) throw JetError("jets at different base points");
}

}  // namespace

Jet::Jet(Complex z0, std::vector<Complex> coeffs) : z0_(z0), c_(std::move(coeffs)) {
  if (c_.empty()) throw JetError("jet needs at least one coefficient");
}

Jet Jet::constant(Complex z0, Complex value, int order) {
  std::vector<Complex> c(static_cast<std::size_t>(order + 1), 0.0);
  c[0] = value;
  return Jet(z0, std::move(c));
}

Jet Jet::variable(Complex z0, int order) {
  std::vector<Complex> c(static_cast<std::size_t>(order + 1), 0.0);
  c[0] = z0;
  if (order >= 1) c[1] = 1.0;
  return Jet(z0, std::move(c));
}

Jet Jet::polynomial(Complex z0, const std::vector<Complex>& p, int order) {
  const Jet z = variable(z0, order);
  Jet out = constant(z0, 0.0, order);
  for (auto it = p.rbegin(); it != p.rend(); ++it) out = out * z + *it;
  return out;
}

Complex Jet::derivative_value(int k) const {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return (*this)[k] * f;
}

Complex Jet::evaluate(Complex z) const {
  Complex s{0.0};
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) s = s * (z - z0_) + *it;
  return s;
}

double Jet::scale() const {
  double m = 0.0;
  for (const Complex& v : c_) m = std::max(m, std::abs(v));
  return m;
}

Jet Jet::truncated(int order) const {
  if (order > this->order()) throw JetError("cannot raise jet order by truncation");
  return Jet(z0_, std::vector<Complex>(c_.begin(), c_.begin() + order + 1));
}

Jet Jet::derivative() const {
  if (order() < 1) throw JetError("insufficient jet order for derivative");
  std::vector<Complex> d(c_.size() - 1);
  for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = static_cast<double>(k) * c_[k];
  return Jet(z0_, std::move(d));
}

Jet Jet::antiderivative() const {
  std::vector<Complex> a(c_.size() + 1, 0.0);
  for (std::size_t k = 0; k < c_.size(); ++k) a[k + 1] = c_[k] / static_cast<double>(k + 1);
  return Jet(z0_, std::move(a));
}

Jet Jet::reciprocal() const {
  if (c_[0] == Complex{0.0}) throw JetError("reciprocal of a jet vanishing at its base point");
  std::vector<Complex> r(c_.size(), 0.0);
  r[0] = 1.0 / c_[0];
  for (std::size_t k = 1; k < c_.size(); ++k) {
    Complex s{0.0};
    for (std::size_t j = 1; j <= k; ++j) s += c_[j] * r[k - j];
    r[k] = -s * r[0];
  }
  return Jet(z0_, std::move(r));
}

Jet Jet::exp() const {
  std::vector<Complex> e(c_.size(), 0.0);
  e[0] = std::exp(c_[0]);
  for (std::size_t k = 1; k < c_.size(); ++k) {
    Complex s{0.0};
    for (std::size_t j = 1; j <= k; ++j) s += static_cast<double>(j) * c_[j] * e[k - j];
    e[k] = s / static_cast<double>(k);
  }
  return Jet(z0_, std::move(e));
}

Jet Jet::compose(const Jet& inner) const {
  const double tol = 1e-12 * std::max(1.0, std::abs(z0_));
  if (std::abs(inner.value() - z0_) > tol)
    throw JetError("composition: inner value does not match the outer base point");
  const int n = std::min(order(), inner.order());
  Jet t = inner.truncated(n);
  t.c_[0] = 0.0;
  Jet out = constant(inner.base(), c_[static_cast<std::size_t>(n)], n);
  for (int k = n - 1; k >= 0; --k) out = out * t + c_[static_cast<std::size_t>(k)];
  return out;
}

Jet Jet::operator+(const Jet& o) const {
  same_base(*this, o);
  const std::size_t n = std::min(c_.size(), o.c_.size());
  std::vector<Complex> s(n);
  for (std::size_t k = 0; k < n; ++k) s[k] = c_[k] + o.c_[k];
  return Jet(z0_, std::move(s));
}

Jet Jet::operator-(const Jet& o) const { return *this + (-o); }

Jet Jet::operator*(const Jet& o) const {
  same_base(*this, o);
  const std::size_t n = std::min(c_.size(), o.c_.size());
  std::vector<Complex> p(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; i + j < n; ++j) p[i + j] += c_[i] * o.c_[j];
  return Jet(z0_, std::move(p));
}

Jet Jet::operator-() const { return *this * Complex(-1.0); }

Jet Jet::operator+(Complex s) const {
  Jet out = *this;
  out.c_[0] += s;
  return out;
}

Jet Jet::operator*(Complex s) const {
  Jet out = *this;
  for (auto& v : out.c_) v *= s;
  return out;
}

double jet_residual(const Jet& a, const Jet& b) {
  const int n = std::min(a.order(), b.order());
  double diff = 0.0, scale = 1.0;
  for (int k = 0; k <= n; ++k) {
    diff = std::max(diff, std::abs(a[k] - b[k]));
    scale = std::max({scale, std::abs(a[k]), std::abs(b[k])});
  }
  return diff / scale;
}

}  // namespace charvar
