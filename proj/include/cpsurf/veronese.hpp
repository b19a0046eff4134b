#pragma once

#include <vector>

#include "cpsurf/surface.hpp"

namespace cpsurf {

// Rational-normal (Veronese) seed: component j is sqrt(C(N-1, j)) zeta^j,
// so |f|^2 = (1 + |zeta|^2)^{N-1} and every tower norm is a power of the
// same conformal factor.
HolomorphicSeed veronese_seed(int n);  // throws std::invalid_argument, n < 2

// Constant alpha of the pure level-k surface: (k+1)(N-1-k) + k(N-k).
Real veronese_alpha(int n, int k);

struct AlphaResult {
  // Combination treating the per-level contributions linearly (the printed
  // closed form; exact for every pure level).
  Real alpha_linear = 0;
  // Combination with the adjacent-level cross terms kept, coefficient
  // (alpha_k - alpha_{k-1})^2 per ratio: the constant the surface's induced
  // metric actually has. Equal to alpha_linear on pure levels.
  Real alpha_induced = 0;
  // rho_k (1 + |zeta|^2)^2 for k = 1..N-1 (index k-1).
  std::vector<Real> ratio_constants;
  bool symbolic = false;  // constants certified as constant polynomials
  Real spread = 0;        // worst nonconstancy residual observed
};

// alpha such that g_{+-} = alpha / (1 + |zeta|^2)^2 for the dimension-n
// rational-normal tower under the given weights. Towers up to n = 6 are
// certified symbolically; beyond that the ratios are measured pointwise
// from Gram determinants. A nonconstant product throws consistency_error.
AlphaResult alpha_of_mixture(int n, const MixtureWeights& w);

// rho_k(z) from Gram determinants of the derivative vectors f, f', ...:
// D_{k+1} D_{k-1} / D_k^2. Independent of the symbolic tower machinery;
// works for any holomorphic seed.
Real norm_ratio_gram_at(const HolomorphicSeed& seed, int k, Complex z);

// Pointwise Gaussian curvature of the metric sum_k c_k rho_k(z) for a seed
// whose tower is full, computed entirely from Gram determinants: first
// log-derivatives of each D_k by a trace identity, second mixed
// log-derivatives by the ladder relation d db ln D_k = D_{k+1}D_{k-1}/D_k^2.
// ratio_coeffs holds c_1..c_{N-1} at index k-1 (the induced-metric
// coefficients (alpha_k - alpha_{k-1})^2 for a mixture of levels). No
// symbolic degree limit; the independent cross-check for the tower route.
Real mixture_curvature_gram_at(const HolomorphicSeed& seed,
                               const std::vector<Real>& ratio_coeffs,
                               Complex z);

struct FixtureReport {
  ProjectorMatrix p0, p1;
  Real p0_residual = 0, p1_residual = 0;
  int points = 0;
  bool passed = false;
};

// The two printed projector matrices of the dimension-3 rational-normal
// map, compared entrywise against the tower at 50 random points. The first
// one's printed denominator exponent is corrected to the value forced by
// the unit trace (see README); the second is reproduced exactly as printed.
FixtureReport cp2_fixture_projectors();

struct FiveDimReport {
  int rank = 0;  // singular values above 1e-8 x largest after centering
  std::vector<Real> singular_values;   // descending
  Real parametrization_residual = 0;   // worst relative least-squares misfit
  bool checked_parametrization = false;
};

// Rank of the mean-centered coordinate cloud. With check_parametrization
// set (the level-1, dimension-3 rational-normal surface), also verifies
// that the five explicit components
//   2x(1-r^2)/(1+r^2)^2, 2y(1-r^2)/(1+r^2)^2, 2(x^2-y^2)/(1+r^2)^2,
//   4xy/(1+r^2)^2, sqrt(3)(1-r^2)^2/(1+r^2)^2        (zeta = x + iy)
// lie in the affine span of the sampled coordinates (the documented
// change of basis is found by least squares, not fixed symbolically).
FiveDimReport five_dim_rank_check(const std::vector<SurfaceSample>& samples,
                                  bool check_parametrization);

}  // namespace cpsurf
