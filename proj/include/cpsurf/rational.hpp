#pragma once

#include <vector>

#include "cpsurf/bivar_poly.hpp"

namespace cpsurf {

// num/den with a real denominator. Fractions are never reduced by GCD; the
// representation is normalized by a real constant so the denominator's
// leading graded-lex coefficient has unit magnitude.
struct RationalScalar {
  BivarPoly num;
  BivarPoly den = BivarPoly::constant(Complex(1));

  RationalScalar() = default;
  RationalScalar(BivarPoly n, BivarPoly d);
  static RationalScalar from_poly(BivarPoly p);
  static RationalScalar constant(Complex c);

  bool is_zero() const { return num.is_zero(); }

  RationalScalar operator+(const RationalScalar& o) const;
  RationalScalar operator-(const RationalScalar& o) const;
  RationalScalar operator*(const RationalScalar& o) const;
  RationalScalar operator/(const RationalScalar& o) const;
  RationalScalar operator*(Complex s) const;

  // Evaluate at z (zb = conj z); throws singular_point_error when the
  // normalized denominator value is below kSingularDen.
  Complex eval(Complex z) const;
  Real eval_real(Complex z) const;  // eval + checked real part

  bool is_real_valued(Real rel_tol = 1e-9L) const;
  // If num = c * den for a constant c (within rel_tol coefficientwise),
  // returns c; the residual is written to *residual when given.
  std::optional<Complex> try_constant(Real rel_tol = 1e-9L,
                                      Real* residual = nullptr) const;

  void normalize();  // scale num and den by the same real constant
};

// Vector of numerators over one shared real denominator.
struct RationalVector {
  std::vector<BivarPoly> num;
  BivarPoly den = BivarPoly::constant(Complex(1));

  RationalVector() = default;
  RationalVector(std::vector<BivarPoly> n, BivarPoly d);

  int dim() const { return int(num.size()); }
  bool is_zero() const;

  std::vector<Complex> eval(Complex z) const;  // singular-checked
  void normalize();
};

// sum_i conj(num_i) num_i / den^2; numerator symmetrized real.
RationalScalar hermitian_norm_sq(const RationalVector& v);
// sum_i conj(u.num_i) v.num_i / (u.den v.den); throws on dimension mismatch.
RationalScalar hermitian_inner(const RationalVector& u,
                               const RationalVector& v);

// Precomputed symbolic derivatives of a rational vector; evaluates the
// quotient rule numerically per point so no large symbolic products are
// formed. Values: v, dv, dbv (first Wirtinger derivatives), ddbv (mixed).
class VectorJet {
 public:
  explicit VectorJet(const RationalVector& v);

  struct Point {
    std::vector<Complex> v, dv, dbv, ddbv;
    Complex den;  // denominator value at the point
  };
  // throws singular_point_error near denominator zeros
  Point at(Complex z) const;
  int dim() const { return int(fz_.size()); }

 private:
  std::vector<BivarPoly> f_, fz_, fb_, fzb_;
  BivarPoly g_, gz_, gb_, gzb_;
};

}  // namespace cpsurf
