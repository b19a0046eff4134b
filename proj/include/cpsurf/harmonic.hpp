#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "cpsurf/rational.hpp"

namespace cpsurf {

using CMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>;
using CVector = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;

// Polynomial map C -> C^N with components holomorphic in z.
struct HolomorphicSeed {
  std::vector<BivarPoly> components;

  int dim() const { return int(components.size()); }
  // ascending-degree coefficient lists, one per component
  static HolomorphicSeed from_coeffs(
      const std::vector<std::vector<Complex>>& coeffs);
  void validate() const;  // throws std::invalid_argument
  std::string str() const;
};

// One raising step: P+ v = dv - v (v^dag dv)/|v|^2, assembled over a common
// real denominator by the quotient rule (the input denominator cancels
// exactly and is not expanded). When the numerators and denominator are
// exactly divisible by den^2 — which is the Gram structure of every harmonic
// sequence step — the division is performed to keep degrees bounded; this is
// trial division by a known divisor, never a GCD. Returns a vector whose
// is_zero() is true when the formula vanishes identically.
RationalVector p_plus(const RationalVector& v);

// The sequence f, P+ f, P+^2 f, ... of a holomorphic seed.
struct Tower {
  int n = 0;                          // ambient dimension N
  std::vector<RationalVector> levels; // nonzero levels; levels[0] = seed / 1
  std::vector<BivarPoly> norm_num;    // n_k = sum_i |num_i|^2 per level
  std::vector<BivarPoly> gram;        // denominator chain G_0..G_len
  bool reduced_chain = true;          // every step reduced exactly
  bool terminated = false;            // level after the last one vanishes
  Real top_residual = 0;              // relative size of that vanishing level

  int length() const { return int(levels.size()); }
  bool full() const { return length() == n; }
  // |f_k|^2 as a rational scalar (norm numerator over den^2)
  RationalScalar norm_sq(int k) const;
  // |f_k|^2 / |f_{k-1}|^2 for 1 <= k <= length(); k == length() gives 0.
  // Uses the reduced Gram form when available, else the honest quotient.
  RationalScalar norm_ratio(int k) const;
};

Tower build_tower(const HolomorphicSeed& seed);

// Rank-one hermitian projector v v^dag / |v|^2; entries share one real
// denominator (the norm-square numerator; the vector denominator cancels).
struct ProjectorMatrix {
  int n = 0;
  std::vector<BivarPoly> num;  // n*n row-major
  BivarPoly den = BivarPoly::constant(Complex(1));
  std::string source;

  const BivarPoly& at(int i, int j) const { return num[std::size_t(i) * n + j]; }
  CMatrix eval(Complex z) const;  // singular-checked
};

ProjectorMatrix projector(const RationalVector& v);

struct IdentityCheck {
  std::string name;
  Real max_residual = 0;
  Real tolerance = 0;
  bool passed = false;
  int points_used = 0;
  int points_skipped = 0;
};

struct TowerReport {
  std::string seed_desc;
  std::vector<IdentityCheck> checks;
  std::vector<Complex> points;
  std::string cp2_modulus_note;  // filled by the CP^2 closed-form resolution

  bool all_passed() const;
  const IdentityCheck* find(const std::string& name) const;
};

// Pointwise residual sweep of the tower identities: pairwise orthogonality,
// the conjugate-derivative descent relation, the normalized-ascent relation,
// projector algebra (hermitian / idempotent / trace), completeness when the
// tower is full, the Euler-Lagrange equation on every level, and the
// vanishing of the level past the top.
TowerReport verify_tower_identities(const Tower& t,
                                    const std::vector<Complex>& pts,
                                    Real tol = 1e-8L);

// Normalized Euler-Lagrange residual of an arbitrary rational vector;
// max and mean over the sample points.
struct ElResidual {
  Real max = 0;
  Real mean = 0;
  int used = 0;
  int skipped = 0;
};
ElResidual verify_el_equation(const RationalVector& v,
                              const std::vector<Complex>& pts);

struct CompletenessResult {
  bool full = false;
  Real residual = 0;  // max entrywise |sum_k P_k - I| over the points
};
CompletenessResult completeness_check(const Tower& t,
                                      const std::vector<Complex>& pts);

// Energy integrand at z: (|P+ v|^2 + |P- v|^2)/|v|^2 with the covariant
// (projected) derivative combinations; invariant under rescaling of v.
Real lagrangian_density(const RationalVector& v, Complex z);

std::string format_report(const TowerReport& r);

}  // namespace cpsurf
