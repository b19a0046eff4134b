#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cpsurf/scalars.hpp"

namespace cpsurf {

// Sparse polynomial in the two formal variables z and zb (the conjugate
// coordinate treated as independent for Wirtinger calculus). Immutable in
// spirit: all operations return new values. Coefficients below kPruneRel of
// the largest magnitude are dropped after arithmetic.
class BivarPoly {
 public:
  using Key = std::pair<int, int>;  // (degree in z, degree in zb)
  using TermMap = std::map<Key, Complex>;

  BivarPoly() = default;

  static BivarPoly constant(Complex c);
  static BivarPoly monomial(int dz, int dzb, Complex c);
  static BivarPoly var_z();
  static BivarPoly var_zb();
  // Univariate polynomial in z from ascending coefficients.
  static BivarPoly from_coeffs(const std::vector<Complex>& ascending);

  bool is_zero() const { return terms_.empty(); }
  int deg_z() const;    // -1 for the zero polynomial
  int deg_zb() const;
  Real max_abs() const;  // largest coefficient magnitude, 0 for zero
  std::size_t term_count() const { return terms_.size(); }
  const TermMap& terms() const { return terms_; }

  BivarPoly operator+(const BivarPoly& o) const;
  BivarPoly operator-(const BivarPoly& o) const;
  BivarPoly operator*(const BivarPoly& o) const;
  BivarPoly operator-() const;
  BivarPoly operator*(Complex s) const;
  BivarPoly operator/(Complex s) const { return *this * (Complex(1) / s); }

  // Complex conjugate of the function: conjugate coefficients, swap z <-> zb.
  BivarPoly conj() const;
  BivarPoly d() const;     // formal d/dz
  BivarPoly dbar() const;  // formal d/dzb

  // Evaluate at z with zb = conj(z); Horner per variable.
  Complex eval(Complex z) const { return eval2(z, std::conj(z)); }
  // Formal evaluation with independent zb (finite-difference oracles).
  Complex eval2(Complex z, Complex zb) const;

  // True when the polynomial is a real-valued function: supp symmetric and
  // coefficient(j,i) = conj(coefficient(i,j)) within tol * max_abs.
  bool is_real_valued(Real rel_tol = 1e-9L) const;
  // Average with the mirrored conjugate; exact projection onto real-valued
  // polynomials, used to strip floating dust off norm squares.
  BivarPoly symmetrized() const;

  // max |coeff difference| between two polynomials (absolute).
  static Real distance(const BivarPoly& a, const BivarPoly& b);

  std::string str() const;  // debugging / report aid

 private:
  friend std::optional<BivarPoly> try_divide_exact(const BivarPoly&,
                                                   const BivarPoly&, Real);
  void prune_and_check();
  TermMap terms_;
};

inline BivarPoly operator*(Complex s, const BivarPoly& p) { return p * s; }

// Exact polynomial division p / q by a KNOWN divisor: multivariate long
// division under graded-lex order; succeeds when the remainder is below
// rel_tol * max_abs(p). This is divisibility testing against an explicit
// divisor, not a GCD computation.
std::optional<BivarPoly> try_divide_exact(const BivarPoly& p,
                                          const BivarPoly& q,
                                          Real rel_tol = kDivideRel);

}  // namespace cpsurf
