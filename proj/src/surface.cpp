#include "cpsurf/surface.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace cpsurf {

namespace {

Real checked_real(Complex v, Real scale, const char* what) {
  if (std::abs(v.imag()) > 1e-9L * std::max(scale, Real(1))) {
    throw consistency_error(std::string(what) +
                            ": imaginary part exceeds rounding tolerance");
  }
  return v.real();
}

std::string fmt_real(Real v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.17Lg", v);
  return buf;
}

}  // namespace

// ---------------------------------------------------------------------------
// MixtureWeights

MixtureWeights MixtureWeights::pure(int n, int k) {
  if (n < 2) throw std::invalid_argument("mixture needs dimension >= 2");
  if (k < 0 || k > n - 2) {
    throw std::invalid_argument("pure mixture level must be in [0, N-2]");
  }
  MixtureWeights w;
  w.alphas.assign(std::size_t(n - 1), Real(0));
  w.alphas[std::size_t(k)] = 1;
  return w;
}

int MixtureWeights::max_index() const {
  for (int i = int(alphas.size()) - 1; i >= 0; --i) {
    if (alphas[std::size_t(i)] != 0) return i;
  }
  return -1;
}

Real MixtureWeights::sum() const {
  Real s = 0;
  for (Real a : alphas) s += a;
  return s;
}

void MixtureWeights::validate(int n) const {
  if (int(alphas.size()) != n - 1) {
    throw std::invalid_argument("mixture needs exactly N-1 weights");
  }
  for (Real a : alphas) {
    if (!std::isfinite(double(a))) {
      throw std::invalid_argument("mixture weight is not finite");
    }
  }
  if (max_index() < 0) {
    throw std::invalid_argument("mixture needs at least one nonzero weight");
  }
}

std::string MixtureWeights::str() const {
  std::string s = "(";
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    if (i) s += ", ";
    s += fmt_real(alphas[i]);
  }
  return s + ")";
}

// ---------------------------------------------------------------------------
// DiagonalChoice

DiagonalChoice DiagonalChoice::gellmann() { return DiagonalChoice{}; }

DiagonalChoice DiagonalChoice::cp2_family(Real angle, int sign) {
  if (sign != 1 && sign != -1) {
    throw std::invalid_argument("family branch sign must be +1 or -1");
  }
  DiagonalChoice c;
  c.mode = DiagonalMode::Cp2Family;
  c.angle = angle;
  c.sign = sign;
  return c;
}

DiagonalChoice DiagonalChoice::parse(const std::string& text) {
  if (text == "gellmann") return gellmann();
  const std::string prefix = "cp2family:";
  if (text.rfind(prefix, 0) == 0) {
    std::string rest = text.substr(prefix.size());
    auto colon = rest.rfind(':');
    if (colon == std::string::npos || colon + 2 != rest.size()) {
      throw std::invalid_argument(
          "diagonal choice must look like cp2family:<angle>:<+|->");
    }
    char sc = rest[colon + 1];
    if (sc != '+' && sc != '-') {
      throw std::invalid_argument("family branch must be '+' or '-'");
    }
    std::string num = rest.substr(0, colon);
    Real angle;
    try {
      std::size_t used = 0;
      angle = std::stold(num, &used);
      if (used != num.size()) throw std::invalid_argument("trailing chars");
    } catch (const std::exception&) {
      throw std::invalid_argument("family angle '" + num +
                                  "' is not a number");
    }
    return cp2_family(angle, sc == '+' ? +1 : -1);
  }
  throw std::invalid_argument("unknown diagonal choice '" + text +
                              "' (want gellmann or cp2family:<angle>:<+|->)");
}

std::string DiagonalChoice::str() const {
  if (mode == DiagonalMode::GellMannGeneralized) return "gellmann";
  return "cp2family:" + fmt_real(angle) + (sign > 0 ? ":+" : ":-");
}

void DiagonalChoice::validate(int n) const {
  if (mode == DiagonalMode::Cp2Family && n != 3) {
    throw std::invalid_argument(
        "the one-parameter diagonal family is defined for N == 3 only");
  }
}

// ---------------------------------------------------------------------------
// mixed_projector

ProjectorMatrix mixed_projector(const Tower& t, const MixtureWeights& w) {
  w.validate(t.n);
  const int n = t.n;
  const int len = t.length();
  const int top = w.max_index();
  if (top >= len) {
    throw std::invalid_argument(
        "mixture weight set on a level the tower does not reach");
  }

  // Preferred construction: every rank-one term P_k = u_k u_k^dag / n_k with
  // n_k = sigma_k G_k G_{k+1} (the reduced denominator chain), placed over
  // the single common denominator D = prod_{m=0}^{top+1} G_m.
  bool reduced = t.reduced_chain;
  std::vector<BivarPoly> G(std::size_t(top) + 2);
  std::vector<BivarPoly> q(std::size_t(top) + 1);
  std::vector<Real> inv_sigma(std::size_t(top) + 1, Real(1));
  if (reduced) {
    for (int m = 0; m <= top + 1; ++m) G[std::size_t(m)] = t.gram[std::size_t(m)];
    for (int k = 0; k <= top && reduced; ++k) {
      auto qk = try_divide_exact(t.norm_num[std::size_t(k)],
                                 t.gram[std::size_t(k)]);
      if (!qk) {
        reduced = false;
        break;
      }
      q[std::size_t(k)] = *qk;
      RationalScalar ratio(*qk, G[std::size_t(k) + 1]);
      Real resid = 0;
      auto c = ratio.try_constant(1e-9L, &resid);
      if (!c || std::abs(c->imag()) > 1e-12L * std::abs(c->real()) ||
          c->real() <= 0) {
        reduced = false;
        break;
      }
      inv_sigma[std::size_t(k)] = Real(1) / c->real();
    }
  }

  ProjectorMatrix p;
  p.n = n;
  p.source = "mixture";
  p.num.assign(std::size_t(n) * std::size_t(n), BivarPoly());

  if (reduced) {
    BivarPoly den = BivarPoly::constant(Complex(1));
    for (int m = 0; m <= top + 1; ++m) den = den * G[std::size_t(m)];
    for (int k = 0; k <= top; ++k) {
      Real a = w.alphas[std::size_t(k)];
      if (a == 0) continue;
      BivarPoly other = BivarPoly::constant(Complex(1));
      for (int m = 0; m <= top + 1; ++m) {
        if (m == k || m == k + 1) continue;
        other = other * G[std::size_t(m)];
      }
      other = other * Complex(a * inv_sigma[std::size_t(k)], 0);
      const auto& u = t.levels[std::size_t(k)].num;
      for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
          BivarPoly term = u[std::size_t(i)] * u[std::size_t(j)].conj() * other;
          p.num[std::size_t(i) * n + j] = p.num[std::size_t(i) * n + j] + term;
        }
      }
    }
    p.den = den;
  } else {
    // Honest fallback: cross-multiplied norm denominators.
    BivarPoly den = BivarPoly::constant(Complex(1));
    for (int k = 0; k <= top; ++k) {
      if (w.alphas[std::size_t(k)] == 0) continue;
      den = den * t.norm_num[std::size_t(k)];
    }
    for (int k = 0; k <= top; ++k) {
      Real a = w.alphas[std::size_t(k)];
      if (a == 0) continue;
      BivarPoly other = BivarPoly::constant(Complex(a, 0));
      for (int m = 0; m <= top; ++m) {
        if (m == k || w.alphas[std::size_t(m)] == 0) continue;
        other = other * t.norm_num[std::size_t(m)];
      }
      const auto& u = t.levels[std::size_t(k)].num;
      for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
          BivarPoly term = u[std::size_t(i)] * u[std::size_t(j)].conj() * other;
          p.num[std::size_t(i) * n + j] = p.num[std::size_t(i) * n + j] + term;
        }
      }
    }
    p.den = den;
  }

  // Exact hermiticity: mirror the upper triangle, symmetrize the diagonal.
  for (int i = 0; i < n; ++i) {
    p.num[std::size_t(i) * n + i] = p.num[std::size_t(i) * n + i].symmetrized();
    for (int j = i + 1; j < n; ++j) {
      p.num[std::size_t(j) * n + i] = p.num[std::size_t(i) * n + j].conj();
    }
  }

  // Conditioning: scale the shared denominator to unit magnitude.
  Real scale = p.den.max_abs();
  if (scale > 0) {
    Complex inv(Real(1) / scale, 0);
    p.den = p.den * inv;
    for (auto& e : p.num) e = e * inv;
  }

  // Postcondition: trace == sum of weights (projectors have unit trace).
  BivarPoly trace;
  for (int i = 0; i < n; ++i) trace = trace + p.num[std::size_t(i) * n + i];
  BivarPoly expect = p.den * Complex(w.sum(), 0);
  Real tol = 1e-9L * std::max({trace.max_abs(), expect.max_abs(), Real(1)});
  if (BivarPoly::distance(trace, expect) > tol) {
    throw consistency_error("mixture trace does not equal the weight sum");
  }
  return p;
}

// ---------------------------------------------------------------------------
// immersion

ImmersionField immersion(const ProjectorMatrix& p, const DiagonalChoice& c) {
  c.validate(p.n);
  const int n = p.n;
  ImmersionField X;
  X.n = n;
  X.den = p.den;

  auto push = [&X](BivarPoly num, std::string label) {
    if (!num.is_real_valued(1e-9L)) {
      throw consistency_error("immersion component " + label +
                              " is not real-valued");
    }
    X.num.push_back(num.symmetrized());
    X.labels.push_back(std::move(label));
  };

  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      std::ostringstream name;
      name << "sym(" << i + 1 << "," << j + 1 << ")";
      push(p.at(i, j) + p.at(j, i), name.str());
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      std::ostringstream name;
      name << "asym(" << i + 1 << "," << j + 1 << ")";
      push((p.at(j, i) - p.at(i, j)) * Complex(0, 1), name.str());
    }
  }

  if (c.mode == DiagonalMode::GellMannGeneralized) {
    // X_m = sqrt(2/(m(m+1))) (sum_{a<m} P_aa - m P_mm), m = 1..N-1; satisfies
    // sum_m dX_m dbX_m = 2 sum_i dP_ii dbP_ii identically.
    for (int m = 1; m < n; ++m) {
      BivarPoly acc;
      for (int a = 0; a < m; ++a) acc = acc + p.at(a, a);
      acc = acc - p.at(m, m) * Complex(Real(m), 0);
      Real coef = std::sqrt(Real(2) / (Real(m) * Real(m + 1)));
      std::ostringstream name;
      name << "diag(" << m << ")";
      push(acc * Complex(coef, 0), name.str());
    }
  } else {
    // One-parameter alternative for N == 3: P_11 = 1/3 + a X1 + b X2,
    // P_22 = 1/3 + c X1 + d X2, solved for (X1, X2) and scaled by 2 so the
    // same diagonal energy normalization as above holds for every angle.
    const Real ca = std::cos(c.angle), sa = std::sin(c.angle);
    const Real rt3 = std::sqrt(Real(3));
    const Real a = 2 / rt3 * ca;
    const Real b = 2 / rt3 * sa;
    const Real cc = -Real(c.sign) * sa - ca / rt3;
    const Real d = -sa / rt3 + Real(c.sign) * ca;
    const Real det = a * d - b * cc;  // = sign * 2/sqrt(3)
    BivarPoly p11c = p.at(0, 0) - p.den * Complex(Real(1) / 3, 0);
    BivarPoly p22c = p.at(1, 1) - p.den * Complex(Real(1) / 3, 0);
    push(p11c * Complex(2 * d / det, 0) - p22c * Complex(2 * b / det, 0),
         "fam(1)");
    push(p22c * Complex(2 * a / det, 0) - p11c * Complex(2 * cc / det, 0),
         "fam(2)");
  }

  for (const auto& e : X.num) {
    X.num_d_.push_back(e.d());
    X.num_db_.push_back(e.dbar());
  }
  X.den_d_ = X.den.d();
  X.den_db_ = X.den.dbar();
  return X;
}

std::vector<Real> ImmersionField::eval(Complex z) const {
  Complex d = den.eval(z);
  if (std::abs(d) < kSingularDen) {
    throw singular_point_error("immersion denominator vanishes");
  }
  std::vector<Real> out;
  out.reserve(num.size());
  for (const auto& e : num) {
    Complex v = e.eval(z) / d;
    out.push_back(checked_real(v, std::abs(v), "immersion component"));
  }
  return out;
}

ImmersionField::Jet ImmersionField::jet(Complex z) const {
  Complex d = den.eval(z);
  if (std::abs(d) < kSingularDen) {
    throw singular_point_error("immersion denominator vanishes");
  }
  Complex dd = den_d_.eval(z), dbd = den_db_.eval(z);
  Jet j;
  j.x.reserve(num.size());
  j.dx.reserve(num.size());
  j.dbx.reserve(num.size());
  for (std::size_t l = 0; l < num.size(); ++l) {
    Complex v = num[l].eval(z);
    Complex dv = num_d_[l].eval(z), dbv = num_db_[l].eval(z);
    Complex x = v / d;
    j.x.push_back(checked_real(x, std::abs(x), "immersion component"));
    j.dx.push_back((dv * d - v * dd) / (d * d));
    j.dbx.push_back((dbv * d - v * dbd) / (d * d));
  }
  return j;
}

// ---------------------------------------------------------------------------
// MetricField

MetricField::MetricField(const Tower& t, const MixtureWeights& w) {
  n_ = t.n;
  p_ = mixed_projector(t, w);
  for (const auto& e : p_.num) {
    num_d_.push_back(e.d());
    num_db_.push_back(e.dbar());
  }
  den_d_ = p_.den.d();
  den_db_ = p_.den.dbar();

  // Closed form of tr(dP dbP): expanding dP_k = f_{k+1} f_k^dag / h_k -
  // f_k f_{k-1}^dag / h_{k-1} and using orthogonality, the ratio rho_k
  // carries the coefficient (alpha_k - alpha_{k-1})^2 (indices outside the
  // weight list count as zero; the adjacent-level cross terms matter).
  auto alpha = [&w](int j) {
    return (j >= 0 && j < int(w.alphas.size())) ? w.alphas[std::size_t(j)]
                                                : Real(0);
  };
  for (int k = 1; k <= t.length(); ++k) {
    Real diff = alpha(k) - alpha(k - 1);
    Real c = diff * diff;
    if (c == 0) continue;
    RationalScalar rho = t.norm_ratio(k);
    if (rho.is_zero()) continue;
    terms_.push_back(RatioTerm{c, std::move(rho)});
  }

  try {
    RationalScalar g = RationalScalar::constant(Complex(0));
    for (const auto& term : terms_) {
      g = g + term.ratio * Complex(term.coeff, 0);
    }
    if (!g.is_zero()) has_closed_ = std::move(g);
  } catch (const degree_cap_error&) {
    // pointwise term list remains available
  }
}

const RationalScalar& MetricField::g_pm() const {
  if (!has_closed_) {
    throw std::logic_error("symbolic metric was not assembled (degree cap)");
  }
  return *has_closed_;
}

MetricField::EntryJet MetricField::entry_jet(Complex z) const {
  Complex d = p_.den.eval(z);
  if (std::abs(d) < kSingularDen) {
    throw singular_point_error("projector denominator vanishes");
  }
  Complex dd = den_d_.eval(z), dbd = den_db_.eval(z);
  EntryJet j;
  j.p.resize(n_, n_);
  j.dp.resize(n_, n_);
  j.dbp.resize(n_, n_);
  Complex d2 = d * d;
  for (int i = 0; i < n_; ++i) {
    for (int k = 0; k < n_; ++k) {
      std::size_t e = std::size_t(i) * n_ + k;
      Complex v = p_.num[e].eval(z);
      j.p(i, k) = v / d;
      j.dp(i, k) = (num_d_[e].eval(z) * d - v * dd) / d2;
      j.dbp(i, k) = (num_db_[e].eval(z) * d - v * dbd) / d2;
    }
  }
  return j;
}

Real MetricField::g_pm_trace_at(Complex z) const {
  EntryJet j = entry_jet(z);
  Complex acc(0);
  Real scale = 0;
  for (int i = 0; i < n_; ++i) {
    for (int k = 0; k < n_; ++k) {
      Complex term = j.dp(i, k) * j.dbp(k, i);
      acc += term;
      scale += std::abs(term);
    }
  }
  return checked_real(acc, scale, "metric trace form");
}

Complex MetricField::g_pp_at(Complex z) const {
  EntryJet j = entry_jet(z);
  Complex acc(0);
  for (int i = 0; i < n_; ++i) {
    for (int k = 0; k < n_; ++k) acc += j.dp(i, k) * j.dp(k, i);
  }
  return acc;
}

Real MetricField::g_pm_closed_at(Complex z) const {
  Real acc = 0;
  for (const auto& term : terms_) {
    acc += term.coeff * term.ratio.eval_real(z);
  }
  return acc;
}

Real MetricField::cross_check(const std::vector<Complex>& pts, Real tol) const {
  Real worst = 0;
  int used = 0;
  for (Complex z : pts) {
    try {
      Real tr = g_pm_trace_at(z);
      Real cl = g_pm_closed_at(z);
      worst = std::max(worst, std::abs(tr - cl) / std::max(std::abs(cl), Real(1)));
      ++used;
    } catch (const singular_point_error&) {
    }
  }
  if (used == 0) {
    throw std::invalid_argument("metric cross-check had no usable points");
  }
  if (worst > tol) {
    throw consistency_error(
        "trace-form and closed-form metric disagree: residual " +
        fmt_real(worst));
  }
  return worst;
}

MetricField metric(const Tower& t, const MixtureWeights& w) {
  return MetricField(t, w);
}

// ---------------------------------------------------------------------------
// CurvatureField

CurvatureField::CurvatureField(const MetricField& m) {
  for (const auto& term : m.terms()) {
    RationalVector one({term.ratio.num}, term.ratio.den);
    terms_.push_back(TermJet{term.coeff, VectorJet(one)});
  }
  // The expanded numerator A gd^2 - C gn^2 of a cross-multiplied multi-term
  // metric cancels catastrophically in coefficient space, so the symbolic
  // form is assembled only for single-ratio metrics (every two-component
  // map); multi-term metrics keep the well-conditioned pointwise evaluator.
  if (m.has_closed_symbolic() && m.terms().size() == 1) {
    try {
      const BivarPoly& gn = m.g_pm().num;
      const BivarPoly& gd = m.g_pm().den;
      BivarPoly A = gn * gn.d().dbar() - gn.d() * gn.dbar();
      BivarPoly C = gd * gd.d().dbar() - gd.d() * gd.dbar();
      BivarPoly num = (A * gd * gd - C * gn * gn) * Complex(-4, 0);
      BivarPoly den = gn * gn * gn * gd;
      Real scale = den.max_abs();
      if (scale > 0) {
        Complex inv(Real(1) / scale, 0);
        num = num * inv;
        den = den * inv;
      }
      k_num_ = std::move(num);
      k_den_ = std::move(den);
    } catch (const degree_cap_error&) {
      // pointwise evaluation remains available
    }
  }
}

const BivarPoly& CurvatureField::K_num() const {
  if (!k_num_) throw std::logic_error("symbolic curvature was not assembled");
  return *k_num_;
}

const BivarPoly& CurvatureField::K_den() const {
  if (!k_den_) throw std::logic_error("symbolic curvature was not assembled");
  return *k_den_;
}

Real CurvatureField::g_at(Complex z) const {
  if (terms_.empty()) throw std::logic_error("curvature field is empty");
  Complex g(0);
  Real scale = 0;
  for (const auto& t : terms_) {
    auto pt = t.jet.at(z);
    Complex v = pt.v[0] * Real(t.coeff);
    g += v;
    scale += std::abs(v);
  }
  Real gr = checked_real(g, scale, "metric value");
  if (gr <= 0 || gr < 1e-12L * (1 + scale)) {
    throw singular_point_error("metric vanishes at the sample point");
  }
  return gr;
}

Real CurvatureField::at(Complex z) const {
  if (terms_.empty()) throw std::logic_error("curvature field is empty");
  Complex g(0), dg(0), dbg(0), ddbg(0);
  Real scale = 0;
  for (const auto& t : terms_) {
    auto pt = t.jet.at(z);
    Real c = t.coeff;
    g += pt.v[0] * c;
    dg += pt.dv[0] * c;
    dbg += pt.dbv[0] * c;
    ddbg += pt.ddbv[0] * c;
    scale += std::abs(pt.v[0] * c);
  }
  Real gr = checked_real(g, scale, "metric value");
  if (gr <= 0 || gr < 1e-12L * (1 + scale)) {
    throw singular_point_error("metric vanishes at the sample point");
  }
  // d db ln g = (g d db g - dg db g) / g^2; K = -4 (d db ln g) / g
  Complex lnmix = (g * ddbg - dg * dbg) / (g * g);
  Complex K = Real(-4) * lnmix / gr;
  return checked_real(K, std::abs(K), "curvature value");
}

CurvatureField::Stats CurvatureField::scan(const std::vector<Complex>& pts) const {
  Stats s;
  bool first = true;
  long double sum = 0;
  for (Complex z : pts) {
    Real k;
    try {
      k = at(z);
    } catch (const singular_point_error&) {
      ++s.skipped;
      continue;
    }
    if (first) {
      s.min = s.max = k;
      first = false;
    } else {
      s.min = std::min(s.min, k);
      s.max = std::max(s.max, k);
    }
    sum += k;
    ++s.used;
  }
  if (s.used > 0) {
    s.mean = sum / s.used;
    s.spread = s.max - s.min;
    s.constant = s.spread < 1e-7L * (1 + std::abs(s.mean));
    s.constant_value = s.mean;
  }
  return s;
}

CurvatureField curvature(const MetricField& m) { return CurvatureField(m); }

Real curvature_fd(const CurvatureField& c, Complex z, Real step) {
  const Complex h(step, 0), ih(0, step);
  Real lpp = std::log(c.g_at(z + h));
  Real lpm = std::log(c.g_at(z - h));
  Real lqp = std::log(c.g_at(z + ih));
  Real lqm = std::log(c.g_at(z - ih));
  Real l0 = std::log(c.g_at(z));
  Real ddb = (lpp + lpm + lqp + lqm - 4 * l0) / (4 * step * step);
  return -4 * ddb / c.g_at(z);
}

// ---------------------------------------------------------------------------
// CP^2 closed forms

Cp2HolomorphicCurvature::Cp2HolomorphicCurvature(const Tower& t) {
  if (t.n != 3) {
    throw std::invalid_argument("holomorphic closed form needs N == 3");
  }
  rho1_ = t.norm_ratio(1);
  if (rho1_.is_zero()) {
    throw std::invalid_argument(
        "holomorphic closed form needs a non-constant seed");
  }
  top_zero_ = t.length() < 3;
  if (!top_zero_) rho2_ = t.norm_ratio(2);
}

Real Cp2HolomorphicCurvature::at(Complex z) const {
  if (top_zero_) return 8;  // embedded two-component case: ratio term dies
  Real r1 = rho1_.eval_real(z);
  Real r2 = rho2_.eval_real(z);
  if (r1 < 1e-12L * std::max(Real(1), r2)) {
    throw singular_point_error("first norm ratio vanishes (branch point)");
  }
  return 4 * (2 - r2 / r1);
}

Cp2P1Curvature::Cp2P1Curvature(const Tower& t, int sign, int exponent)
    : sign_(sign), exponent_(exponent) {
  if (t.n != 3 || !t.full()) {
    throw std::invalid_argument("the P1 closed form needs the full N == 3 tower");
  }
  if ((sign != 1 && sign != -1) || (exponent != 1 && exponent != 2)) {
    throw std::invalid_argument("modulus variant: sign +-1, exponent 1 or 2");
  }
  rho1_ = t.norm_ratio(1);
  rho2_ = t.norm_ratio(2);
  RationalScalar u = rho2_ / rho1_;
  u_jet_ = VectorJet(RationalVector({u.num}, u.den));
}

Real Cp2P1Curvature::at(Complex z) const {
  Real r1 = rho1_.eval_real(z);
  Real r2 = rho2_.eval_real(z);
  Real tot = r1 + r2;
  if (tot < 1e-12L || r1 < 1e-12L * std::max(Real(1), r2)) {
    throw singular_point_error("norm ratios degenerate at the sample point");
  }
  auto pt = u_jet_->at(z);
  if (std::abs(pt.v[0]) < 1e-14L) {
    throw singular_point_error("ratio quotient vanishes at the sample point");
  }
  Real mod = std::abs(pt.dv[0] / pt.v[0]);  // |d ln u|
  if (exponent_ == 2) mod *= mod;
  Real num = 2 * (r1 * r1 * r1 + r2 * r2 * r2) + Real(sign_) * r1 * r2 * mod;
  return 4 * num / (tot * tot * tot);
}

ModulusResolution resolve_cp2_modulus(const Tower& t,
                                      const std::vector<Complex>& pts) {
  MetricField m(t, MixtureWeights::pure(t.n, 1));
  CurvatureField generic(m);

  ModulusResolution out;
  Real best = -1, second = -1;
  for (int sign : {-1, +1}) {
    for (int expo : {2, 1}) {
      Cp2P1Curvature cand(t, sign, expo);
      Real worst = 0;
      int used = 0;
      for (Complex z : pts) {
        try {
          Real kg = generic.at(z);
          Real kc = cand.at(z);
          worst = std::max(worst,
                           std::abs(kc - kg) / (1 + std::abs(kg)));
          ++used;
        } catch (const singular_point_error&) {
        }
      }
      if (used == 0) continue;
      if (best < 0 || worst < best) {
        second = best;
        best = worst;
        out.sign = sign;
        out.exponent = expo;
      } else if (second < 0 || worst < second) {
        second = worst;
      }
    }
  }
  if (best < 0) {
    throw std::invalid_argument("modulus resolution had no usable points");
  }
  out.best_residual = best;
  out.runner_up_residual = second;
  std::ostringstream note;
  note << "modulus term resolved as " << (out.sign > 0 ? "+" : "-")
       << "rho1*rho2*|d ln u|^" << out.exponent << " (residual "
       << fmt_real(best) << ", next-best variant " << fmt_real(second) << ")";
  out.note = note.str();
  return out;
}

// ---------------------------------------------------------------------------
// sample-level checks

Real sphere_residual(const std::vector<SurfaceSample>& samples) {
  Real worst = 0;
  int used = 0;
  for (const auto& s : samples) {
    if (!s.x_ok) continue;
    if (s.X.size() != 3) {
      throw std::invalid_argument("sphere residual needs N == 2 samples");
    }
    long double x1 = s.X[0] / 2;
    long double x2 = s.X[1] / 2;
    long double x3 = (s.X[2] + 1) / 2;
    long double r = std::abs(x1 * x1 + x2 * x2 + (x3 - 0.5L) * (x3 - 0.5L) -
                             0.25L);
    worst = std::max(worst, Real(r));
    ++used;
  }
  if (used == 0) {
    throw std::invalid_argument("sphere residual had no usable samples");
  }
  return worst;
}

Real energy_diag_residual(const ImmersionField& X, const MetricField& m,
                          Complex z) {
  auto pj = m.entry_jet(z);
  Complex want(0);
  for (int i = 0; i < m.n(); ++i) want += pj.dp(i, i) * pj.dbp(i, i);
  want *= Real(2);
  auto xj = X.jet(z);
  Complex got(0);
  std::size_t start = xj.dx.size() - std::size_t(m.n() - 1);
  for (std::size_t l = start; l < xj.dx.size(); ++l) {
    got += xj.dx[l] * xj.dbx[l];
  }
  return std::abs(got - want) / std::max(std::abs(want), Real(1));
}

Real energy_total_residual(const ImmersionField& X, const MetricField& m,
                           Complex z) {
  Complex want(2 * m.g_pm_trace_at(z), 0);
  auto xj = X.jet(z);
  Complex got(0);
  for (std::size_t l = 0; l < xj.dx.size(); ++l) got += xj.dx[l] * xj.dbx[l];
  return std::abs(got - want) / std::max(std::abs(want), Real(1));
}

Surface make_surface(const HolomorphicSeed& seed, const MixtureWeights& w,
                     const DiagonalChoice& c) {
  Surface s;
  s.tower = build_tower(seed);
  s.n = s.tower.n;
  s.weights = w;
  s.diag = c;
  s.met = MetricField(s.tower, w);
  s.p = s.met.projector_matrix();
  s.imm = immersion(s.p, c);
  s.curv = CurvatureField(s.met);
  return s;
}

}  // namespace cpsurf
