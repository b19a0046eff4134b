#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cpsurf/harmonic.hpp"

namespace cpsurf {

// Weights alpha_0..alpha_{N-2} of the projector mixture; the top level
// N-1 never enters the mixture.
struct MixtureWeights {
  std::vector<Real> alphas;

  static MixtureWeights pure(int n, int k);  // alpha_k = 1, rest 0
  int max_index() const;                     // highest nonzero index, -1 if none
  Real sum() const;
  void validate(int n) const;  // size n-1, at least one nonzero
  std::string str() const;
};

enum class DiagonalMode { GellMannGeneralized, Cp2Family };

struct DiagonalChoice {
  DiagonalMode mode = DiagonalMode::GellMannGeneralized;
  Real angle = 0;  // Cp2Family only
  int sign = +1;   // Cp2Family only: +1 upper branch, -1 lower

  static DiagonalChoice gellmann();
  static DiagonalChoice cp2_family(Real angle, int sign);
  // "gellmann" or "cp2family:<angle>:<+|->"
  static DiagonalChoice parse(const std::string& text);
  std::string str() const;
  void validate(int n) const;  // Cp2Family requires n == 3
};

// Weighted sum of the tower's rank-one projectors over one common real
// denominator (the product of the denominator chain across the used span).
ProjectorMatrix mixed_projector(const Tower& t, const MixtureWeights& w);

// Real coordinates built from the mixed projector: all symmetric
// off-diagonal parts p_ij + p_ji (row-major i<j), then the antisymmetric
// parts i(p_ji - p_ij) (same order), then the N-1 diagonal combinations of
// the chosen convention. Every component is a real-valued rational function
// sharing the projector denominator.
struct ImmersionField {
  int n = 0;
  std::vector<BivarPoly> num;  // N^2-1 real-valued numerators
  BivarPoly den;
  std::vector<std::string> labels;

  int dim() const { return int(num.size()); }
  std::vector<Real> eval(Complex z) const;  // singular-checked

  struct Jet {
    std::vector<Real> x;
    std::vector<Complex> dx, dbx;
  };
  Jet jet(Complex z) const;

 private:
  friend ImmersionField immersion(const ProjectorMatrix&, const DiagonalChoice&);
  std::vector<BivarPoly> num_d_, num_db_;
  BivarPoly den_d_, den_db_;
};

ImmersionField immersion(const ProjectorMatrix& p, const DiagonalChoice& c);

// Induced metric of the immersion. The trace forms tr(dP dbP) and
// tr(dP dP) are evaluated pointwise from the projector entries; the closed
// form sum_k (alpha_{k-1}+alpha_k) |f_k|^2/|f_{k-1}|^2 is kept as a list of
// small rationals (always evaluable) and additionally assembled into one
// symbolic rational when the degree cap allows.
class MetricField {
 public:
  MetricField() = default;
  MetricField(const Tower& t, const MixtureWeights& w);

  int n() const { return n_; }
  bool has_closed_symbolic() const { return has_closed_.has_value(); }
  const RationalScalar& g_pm() const;  // throws if not assembled

  struct EntryJet {
    CMatrix p, dp, dbp;
  };
  EntryJet entry_jet(Complex z) const;

  Real g_pm_trace_at(Complex z) const;   // tr(dP dbP), real part checked
  Complex g_pp_at(Complex z) const;      // tr(dP dP), must vanish
  Real g_pm_closed_at(Complex z) const;  // sum of ratio terms
  // max over pts of |trace - closed| / max(|closed|, 1); throws
  // consistency_error beyond tol
  Real cross_check(const std::vector<Complex>& pts, Real tol = 1e-8L) const;

  const ProjectorMatrix& projector_matrix() const { return p_; }
  // closed-form term list (coefficient, ratio) for curvature evaluation
  struct RatioTerm {
    Real coeff;
    RationalScalar ratio;
  };
  const std::vector<RatioTerm>& terms() const { return terms_; }

 private:
  int n_ = 0;
  ProjectorMatrix p_;
  std::vector<BivarPoly> num_d_, num_db_;
  BivarPoly den_d_, den_db_;
  std::vector<RatioTerm> terms_;
  std::optional<RationalScalar> has_closed_;
};

MetricField metric(const Tower& t, const MixtureWeights& w);

// K = -4/g d db ln g, evaluated from the closed-form metric terms; the
// symbolic ratio K_num/K_den is assembled only when its degrees fit the cap.
class CurvatureField {
 public:
  CurvatureField() = default;
  explicit CurvatureField(const MetricField& m);

  bool has_symbolic() const { return k_num_.has_value(); }
  const BivarPoly& K_num() const;
  const BivarPoly& K_den() const;

  Real at(Complex z) const;    // throws singular_point_error where g vanishes
  Real g_at(Complex z) const;  // the metric value used by the evaluator

  struct Stats {
    Real min = 0, max = 0, mean = 0, spread = 0;
    int used = 0, skipped = 0;
    bool constant = false;
    Real constant_value = 0;
  };
  // constant means spread < 1e-7 (1 + |mean|)
  Stats scan(const std::vector<Complex>& pts) const;

 private:
  struct TermJet {
    Real coeff;
    VectorJet jet;  // one-component jet of the ratio
  };
  std::vector<TermJet> terms_;
  std::optional<BivarPoly> k_num_, k_den_;
};

CurvatureField curvature(const MetricField& m);

// Five-point finite-difference curvature from the same metric values;
// the oracle for the analytic evaluator.
Real curvature_fd(const CurvatureField& c, Complex z, Real step = 1e-4L);

// Closed-form CP^2 curvature of the holomorphic projector P_0:
// K = 4 (2 - |P+^2 f|^2 |f|^2 / |P+ f|^4). Handles the embedded-CP^1
// degenerate tower (second ratio identically zero -> K = 8).
class Cp2HolomorphicCurvature {
 public:
  explicit Cp2HolomorphicCurvature(const Tower& t);  // requires n == 3
  Real at(Complex z) const;

 private:
  RationalScalar rho1_, rho2_;
  bool top_zero_ = false;
};

// Closed-form CP^2 curvature of P_1, with the sign/exponent reading of the
// modulus term fixed by cross-validation (see resolve_cp2_modulus):
// K = 4 [2(rho1^3 + rho2^3) - rho1 rho2 |d ln(rho2/rho1)|^2] / (rho1+rho2)^3.
class Cp2P1Curvature {
 public:
  // sign: +1 or -1 multiplying the modulus term; exponent: 1 or 2
  explicit Cp2P1Curvature(const Tower& t, int sign = -1, int exponent = 2);
  Real at(Complex z) const;

 private:
  RationalScalar rho1_, rho2_;
  std::optional<VectorJet> u_jet_;  // jet of u = rho2/rho1
  int sign_ = -1, exponent_ = 2;
};

struct ModulusResolution {
  int sign = 0, exponent = 0;  // winning variant
  Real best_residual = 0;      // max |variant - generic| / (1+|generic|)
  Real runner_up_residual = 0;
  std::string note;            // human-readable outcome line
};
// Try all four (sign, exponent) readings of the printed modulus term
// against the generic curvature of P_1 and report the winner.
ModulusResolution resolve_cp2_modulus(const Tower& t,
                                      const std::vector<Complex>& pts);

// One evaluated surface point (doubles: export precision).
struct SurfaceSample {
  Complex zeta;
  std::vector<double> X;
  double g = 0;
  double K = 0;
  bool x_ok = false;  // immersion evaluated (denominator nonzero)
  bool k_ok = false;  // curvature evaluated (metric nonzero)
};

// max over samples of |X1'^2 + X2'^2 + (X3'-1/2)^2 - 1/4| in the
// sphere-chart convention X1' = X[0]/2, X2' = X[1]/2, X3' = (X[2]+1)/2
// (the stored components are twice the chart's, and the diagonal one is
// shifted; see README). N == 2 samples only.
Real sphere_residual(const std::vector<SurfaceSample>& samples);

// Energy-matching residuals at one point (both are relative):
// diagonal X components against 2 sum_i dP_ii dbP_ii, and the full
// component sum against 2 tr(dP dbP).
Real energy_diag_residual(const ImmersionField& X, const MetricField& m,
                          Complex z);
Real energy_total_residual(const ImmersionField& X, const MetricField& m,
                           Complex z);

// Everything needed to sample one surface.
struct Surface {
  int n = 0;
  Tower tower;
  MixtureWeights weights;
  DiagonalChoice diag;
  ProjectorMatrix p;
  ImmersionField imm;
  MetricField met;
  CurvatureField curv;
};

Surface make_surface(const HolomorphicSeed& seed, const MixtureWeights& w,
                     const DiagonalChoice& c);

}  // namespace cpsurf
