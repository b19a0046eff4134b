#include "cpsurf/rational.hpp"

#include <algorithm>
#include <cmath>

namespace cpsurf {

namespace {

// magnitude of the graded-lex leading coefficient (real scale so real
// denominators stay real)
Real lead_scale(const BivarPoly& p) {
  const BivarPoly::Key* best = nullptr;
  const Complex* c = nullptr;
  for (const auto& [k, v] : p.terms()) {
    if (!best || (k.first + k.second > best->first + best->second) ||
        (k.first + k.second == best->first + best->second &&
         k.first > best->first)) {
      best = &k;
      c = &v;
    }
  }
  return c ? std::abs(*c) : Real(0);
}

Complex checked_den_value(const BivarPoly& den, Complex z) {
  const Complex d = den.eval(z);
  if (std::abs(d) < kSingularDen)
    throw singular_point_error("denominator vanishes near sample point");
  return d;
}

}  // namespace

RationalScalar::RationalScalar(BivarPoly n, BivarPoly d)
    : num(std::move(n)), den(std::move(d)) {
  normalize();
}

RationalScalar RationalScalar::from_poly(BivarPoly p) {
  RationalScalar r;
  r.num = std::move(p);
  return r;
}

RationalScalar RationalScalar::constant(Complex c) {
  return from_poly(BivarPoly::constant(c));
}

void RationalScalar::normalize() {
  if (den.is_zero()) throw consistency_error("rational with zero denominator");
  if (!den.is_real_valued(1e-6L))
    throw consistency_error("denominator is not a real polynomial");
  den = den.symmetrized();
  const Real g = lead_scale(den);
  num = num * Complex(1 / g);
  den = den * Complex(1 / g);
}

RationalScalar RationalScalar::operator+(const RationalScalar& o) const {
  return RationalScalar(num * o.den + o.num * den, den * o.den);
}

RationalScalar RationalScalar::operator-(const RationalScalar& o) const {
  return RationalScalar(num * o.den - o.num * den, den * o.den);
}

RationalScalar RationalScalar::operator*(const RationalScalar& o) const {
  return RationalScalar(num * o.num, den * o.den);
}

RationalScalar RationalScalar::operator*(Complex s) const {
  RationalScalar r = *this;
  r.num = r.num * s;
  return r;
}

RationalScalar RationalScalar::operator/(const RationalScalar& o) const {
  if (o.num.is_zero()) throw consistency_error("division by zero rational");
  if (o.num.is_real_valued(1e-9L))
    return RationalScalar(num * o.den, den * o.num.symmetrized());
  const BivarPoly nc = o.num.conj();
  return RationalScalar(num * o.den * nc, den * (o.num * nc));
}

Complex RationalScalar::eval(Complex z) const {
  return num.eval(z) / checked_den_value(den, z);
}

Real RationalScalar::eval_real(Complex z) const {
  const Complex v = eval(z);
  if (std::abs(v.imag()) > 1e-8L * std::max(Real(1), std::abs(v.real())))
    throw consistency_error("expected real value has imaginary part");
  return v.real();
}

bool RationalScalar::is_real_valued(Real rel_tol) const {
  return num.is_real_valued(rel_tol) && den.is_real_valued(rel_tol);
}

std::optional<Complex> RationalScalar::try_constant(Real rel_tol,
                                                    Real* residual) const {
  if (num.is_zero()) {
    if (residual) *residual = 0;
    return Complex(0);
  }
  // match against the denominator's largest coefficient
  BivarPoly::Key key{0, 0};
  Real best = -1;
  for (const auto& [k, c] : den.terms())
    if (std::abs(c) > best) {
      best = std::abs(c);
      key = k;
    }
  auto it = num.terms().find(key);
  if (it == num.terms().end()) return std::nullopt;
  const Complex c = it->second / den.terms().at(key);
  const BivarPoly diff = num - den * c;
  const Real scale = std::max(num.max_abs(), std::abs(c) * den.max_abs());
  const Real res = scale == 0 ? 0 : diff.max_abs() / scale;
  if (residual) *residual = res;
  if (res > rel_tol) return std::nullopt;
  return c;
}

RationalVector::RationalVector(std::vector<BivarPoly> n, BivarPoly d)
    : num(std::move(n)), den(std::move(d)) {
  normalize();
}

void RationalVector::normalize() {
  if (den.is_zero()) throw consistency_error("rational with zero denominator");
  if (!den.is_real_valued(1e-6L))
    throw consistency_error("denominator is not a real polynomial");
  den = den.symmetrized();
  const Real g = lead_scale(den);
  const Complex inv(1 / g);
  for (auto& p : num) p = p * inv;
  den = den * inv;
}

bool RationalVector::is_zero() const {
  Real num_max = 0;
  for (const auto& p : num) num_max = std::max(num_max, p.max_abs());
  const Real scale = std::max(num_max, den.max_abs());
  return scale == 0 || num_max < kZeroLevelRel * scale;
}

std::vector<Complex> RationalVector::eval(Complex z) const {
  const Complex d = checked_den_value(den, z);
  std::vector<Complex> r(num.size());
  for (std::size_t i = 0; i < num.size(); ++i) r[i] = num[i].eval(z) / d;
  return r;
}

RationalScalar hermitian_norm_sq(const RationalVector& v) {
  BivarPoly n;
  for (const auto& p : v.num) n = n + p.conj() * p;
  return RationalScalar(n.symmetrized(), v.den * v.den);
}

RationalScalar hermitian_inner(const RationalVector& u,
                               const RationalVector& v) {
  if (u.dim() != v.dim())
    throw std::invalid_argument("hermitian_inner: dimension mismatch");
  BivarPoly n;
  for (int i = 0; i < u.dim(); ++i) n = n + u.num[i].conj() * v.num[i];
  return RationalScalar(n, u.den * v.den);
}

VectorJet::VectorJet(const RationalVector& v)
    : f_(v.num), g_(v.den), gz_(v.den.d()), gb_(v.den.dbar()),
      gzb_(v.den.d().dbar()) {
  fz_.reserve(f_.size());
  fb_.reserve(f_.size());
  fzb_.reserve(f_.size());
  for (const auto& p : f_) {
    fz_.push_back(p.d());
    fb_.push_back(p.dbar());
    fzb_.push_back(p.d().dbar());
  }
}

VectorJet::Point VectorJet::at(Complex z) const {
  Point pt;
  const Complex g = g_.eval(z);
  if (std::abs(g) < kSingularDen)
    throw singular_point_error("denominator vanishes near sample point");
  const Complex gz = gz_.eval(z), gb = gb_.eval(z), gzb = gzb_.eval(z);
  const Complex g2 = g * g, g3 = g2 * g;
  const int n = dim();
  pt.v.resize(n);
  pt.dv.resize(n);
  pt.dbv.resize(n);
  pt.ddbv.resize(n);
  pt.den = g;
  for (int i = 0; i < n; ++i) {
    const Complex f = f_[i].eval(z), fz = fz_[i].eval(z), fb = fb_[i].eval(z),
                  fzb = fzb_[i].eval(z);
    pt.v[i] = f / g;
    pt.dv[i] = (g * fz - f * gz) / g2;
    pt.dbv[i] = (g * fb - f * gb) / g2;
    pt.ddbv[i] =
        fzb / g - (fb * gz + fz * gb + f * gzb) / g2 + Real(2) * f * gz * gb / g3;
  }
  return pt;
}

}  // namespace cpsurf
