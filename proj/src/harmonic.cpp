#include "cpsurf/harmonic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace cpsurf {

namespace {

Real norm2(const std::vector<Complex>& a) {
  Real s = 0;
  for (const Complex& c : a) s += std::norm(c);
  return s;
}

Complex inner(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  Complex s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

Real vnorm(const std::vector<Complex>& a) { return std::sqrt(norm2(a)); }

// Relative size of a vector that is expected to vanish identically.
Real zero_residual(const RationalVector& v) {
  Real num_max = 0;
  for (const BivarPoly& p : v.num) num_max = std::max(num_max, p.max_abs());
  Real scale = std::max(num_max, v.den.max_abs());
  return scale > 0 ? num_max / scale : Real(0);
}

BivarPoly norm_numerator(const RationalVector& v) {
  BivarPoly n;
  for (const BivarPoly& p : v.num) n = n + p.conj() * p;
  return n.symmetrized();
}

// Normalized Euler-Lagrange residual at one point. The equation is
//   (I - v v^dag/|v|^2) [ ddb v - dv (v^dag db v)/|v|^2 - db v (v^dag d v)/|v|^2 ] = 0.
Real el_residual_at(const VectorJet& jet, Complex z) {
  VectorJet::Point p = jet.at(z);
  Real n2 = norm2(p.v);
  if (n2 <= 0) throw singular_point_error("vanishing vector in EL residual");
  const int n = int(p.v.size());
  Complex ip_db = inner(p.v, p.dbv) / n2;
  Complex ip_d = inner(p.v, p.dv) / n2;
  std::vector<Complex> a = p.ddbv, b(n), c(n), w(n);
  for (int i = 0; i < n; ++i) {
    b[i] = p.dv[i] * ip_db;
    c[i] = p.dbv[i] * ip_d;
    w[i] = a[i] - b[i] - c[i];
  }
  Complex ip_w = inner(p.v, w) / n2;
  std::vector<Complex> r(n);
  for (int i = 0; i < n; ++i) r[i] = w[i] - p.v[i] * ip_w;
  Real scale = std::max({vnorm(a), vnorm(b), vnorm(c), Real(1)});
  return vnorm(r) / scale;
}

std::string fmt_real(Real x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3Le", static_cast<long double>(x));
  return buf;
}

}  // namespace

HolomorphicSeed HolomorphicSeed::from_coeffs(
    const std::vector<std::vector<Complex>>& coeffs) {
  HolomorphicSeed s;
  s.components.reserve(coeffs.size());
  for (const auto& c : coeffs) s.components.push_back(BivarPoly::from_coeffs(c));
  s.validate();
  return s;
}

void HolomorphicSeed::validate() const {
  if (components.size() < 2)
    throw std::invalid_argument("seed needs at least two components");
  bool any = false;
  for (const BivarPoly& p : components) {
    if (p.deg_zb() > 0)
      throw std::invalid_argument("seed component is not holomorphic");
    if (!p.is_zero()) any = true;
  }
  if (!any) throw std::invalid_argument("seed is identically zero");
}

std::string HolomorphicSeed::str() const {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < components.size(); ++i) {
    if (i) os << ", ";
    os << components[i].str();
  }
  os << ")";
  return os.str();
}

RationalVector p_plus(const RationalVector& v) {
  if (v.dim() == 0) throw std::invalid_argument("p_plus: empty vector");
  if (v.is_zero()) throw std::invalid_argument("p_plus: zero input vector");
  const int n = v.dim();
  const BivarPoly& d = v.den;

  BivarPoly nn, bb;
  std::vector<BivarPoly> du(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    du[std::size_t(i)] = v.num[std::size_t(i)].d();
    nn = nn + v.num[std::size_t(i)].conj() * v.num[std::size_t(i)];
    bb = bb + v.num[std::size_t(i)].conj() * du[std::size_t(i)];
  }
  nn = nn.symmetrized();

  std::vector<BivarPoly> raw(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    raw[std::size_t(i)] = nn * du[std::size_t(i)] - v.num[std::size_t(i)] * bb;
  BivarPoly den_raw = d * nn;

  // Gram-structure reduction: each step of a harmonic sequence is exactly
  // divisible by the square of the incoming denominator.
  if (d.deg_z() > 0 || d.deg_zb() > 0) {
    BivarPoly d2 = d * d;
    std::vector<BivarPoly> red(static_cast<std::size_t>(n));
    bool ok = true;
    for (int i = 0; ok && i < n; ++i) {
      auto q = try_divide_exact(raw[std::size_t(i)], d2);
      if (q)
        red[std::size_t(i)] = *q;
      else
        ok = false;
    }
    if (ok) {
      auto qd = try_divide_exact(den_raw, d2);
      if (qd) {
        raw = std::move(red);
        den_raw = *qd;
      }
    }
  }
  return RationalVector(std::move(raw), std::move(den_raw));
}

Tower build_tower(const HolomorphicSeed& seed) {
  seed.validate();
  Tower t;
  t.n = seed.dim();
  t.levels.emplace_back(seed.components, BivarPoly::constant(Complex(1)));

  while (t.length() < t.n) {
    RationalVector nxt = p_plus(t.levels.back());
    if (nxt.is_zero()) {
      t.terminated = true;
      t.top_residual = zero_residual(nxt);
      break;
    }
    t.levels.push_back(std::move(nxt));
  }
  if (!t.terminated && t.full()) {
    RationalVector top = p_plus(t.levels.back());
    t.top_residual = zero_residual(top);
    t.terminated = top.is_zero();
  }

  // Cache norm numerators and the denominator chain together with the
  // quotients n_k / G_k used by the reduced norm-ratio form. The quotient
  // absorbs the per-level normalization scale, so the ratio form is exact.
  const int len = t.length();
  t.norm_num.resize(std::size_t(len));
  t.gram.resize(std::size_t(len) + 1);
  for (int k = 0; k < len; ++k) {
    t.norm_num[std::size_t(k)] = norm_numerator(t.levels[std::size_t(k)]);
    t.gram[std::size_t(k)] = t.levels[std::size_t(k)].den;
  }
  // gram[len] holds n_{len-1}/G_{len-1} (a positive multiple of the next
  // Gram determinant), so ratios touching the top level stay in reduced form.
  for (int k = 0; k < len; ++k) {
    auto q = try_divide_exact(t.norm_num[std::size_t(k)], t.gram[std::size_t(k)]);
    if (!q) {
      t.reduced_chain = false;
      break;
    }
    if (k == len - 1) t.gram[std::size_t(len)] = *q;
  }
  return t;
}

RationalScalar Tower::norm_sq(int k) const {
  if (k < 0 || k >= length()) throw std::out_of_range("norm_sq level");
  return RationalScalar(norm_num[std::size_t(k)],
                        gram[std::size_t(k)] * gram[std::size_t(k)]);
}

RationalScalar Tower::norm_ratio(int k) const {
  if (k == 0 || k == length())
    return RationalScalar::constant(Complex(0));  // no level below / zero above
  if (k < 0 || k > length()) throw std::out_of_range("norm_ratio level");
  if (reduced_chain) {
    // |f_k|^2/|f_{k-1}|^2 = (n_k/G_k) G_{k-1} / ((n_{k-1}/G_{k-1}) G_k)
    auto qk = try_divide_exact(norm_num[std::size_t(k)], gram[std::size_t(k)]);
    auto qk1 =
        try_divide_exact(norm_num[std::size_t(k) - 1], gram[std::size_t(k) - 1]);
    if (qk && qk1)
      return RationalScalar(*qk * gram[std::size_t(k) - 1],
                            *qk1 * gram[std::size_t(k)]);
  }
  RationalScalar hk = norm_sq(k), hk1 = norm_sq(k - 1);
  return hk / hk1;
}

ProjectorMatrix projector(const RationalVector& v) {
  if (v.dim() == 0 || v.is_zero())
    throw std::invalid_argument("projector: zero vector");
  const int n = v.dim();
  ProjectorMatrix P;
  P.n = n;
  P.den = norm_numerator(v);
  P.num.resize(std::size_t(n) * std::size_t(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      P.num[std::size_t(i) * std::size_t(n) + std::size_t(j)] =
          v.num[std::size_t(i)] * v.num[std::size_t(j)].conj();
  Real r = P.den.max_abs();
  if (r > 0) {
    P.den = P.den / Complex(r);
    for (BivarPoly& p : P.num) p = p / Complex(r);
  }
  return P;
}

CMatrix ProjectorMatrix::eval(Complex z) const {
  Complex dz = den.eval(z);
  if (std::abs(dz) < kSingularDen)
    throw singular_point_error("projector denominator vanishes");
  CMatrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      m(i, j) = num[std::size_t(i) * std::size_t(n) + std::size_t(j)].eval(z) / dz;
  return m;
}

bool TowerReport::all_passed() const {
  for (const IdentityCheck& c : checks)
    if (!c.passed) return false;
  return true;
}

const IdentityCheck* TowerReport::find(const std::string& name) const {
  for (const IdentityCheck& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

TowerReport verify_tower_identities(const Tower& t,
                                    const std::vector<Complex>& pts, Real tol) {
  TowerReport rep;
  rep.points = pts;
  const int len = t.length();

  std::vector<VectorJet> jets;
  jets.reserve(std::size_t(len));
  for (const RationalVector& lvl : t.levels) jets.emplace_back(lvl);
  std::vector<RationalScalar> norms;
  norms.reserve(std::size_t(len));
  for (int k = 0; k < len; ++k) norms.push_back(t.norm_sq(k));
  std::vector<ProjectorMatrix> projs;
  projs.reserve(std::size_t(len));
  for (const RationalVector& lvl : t.levels) projs.push_back(projector(lvl));

  auto run = [&](const std::string& name, Real tolerance, auto&& fn) {
    IdentityCheck c;
    c.name = name;
    c.tolerance = tolerance;
    for (Complex z : pts) {
      try {
        c.max_residual = std::max(c.max_residual, Real(fn(z)));
        ++c.points_used;
      } catch (const singular_point_error&) {
        ++c.points_skipped;
      }
    }
    c.passed = c.points_used > 0 && c.max_residual <= c.tolerance;
    rep.checks.push_back(c);
  };

  std::vector<RationalScalar> inners;  // pairs i<j, row-major
  for (int i = 0; i < len; ++i)
    for (int j = i + 1; j < len; ++j)
      inners.push_back(
          hermitian_inner(t.levels[std::size_t(i)], t.levels[std::size_t(j)]));

  run("orthogonality", tol, [&](Complex z) {
    Real worst = 0;
    std::vector<Real> h(static_cast<std::size_t>(len), Real(0));
    for (int k = 0; k < len; ++k) {
      h[std::size_t(k)] = norms[std::size_t(k)].eval_real(z);
      if (h[std::size_t(k)] <= 0)
        throw singular_point_error("vanishing norm");
    }
    std::size_t idx = 0;
    for (int i = 0; i < len; ++i)
      for (int j = i + 1; j < len; ++j, ++idx) {
        Real r = std::abs(inners[idx].eval(z)) /
                 std::sqrt(h[std::size_t(i)] * h[std::size_t(j)]);
        worst = std::max(worst, r);
      }
    return worst;
  });

  run("descent", tol, [&](Complex z) {
    Real worst = 0;
    for (int k = 1; k < len; ++k) {
      VectorJet::Point pk = jets[std::size_t(k)].at(z);
      VectorJet::Point pk1 = jets[std::size_t(k) - 1].at(z);
      Real hk = norms[std::size_t(k)].eval_real(z);
      Real hk1 = norms[std::size_t(k) - 1].eval_real(z);
      if (hk1 <= 0) throw singular_point_error("vanishing norm");
      Real ratio = hk / hk1;
      std::vector<Complex> rhs(pk.v.size()), diff(pk.v.size());
      for (std::size_t i = 0; i < pk.v.size(); ++i) {
        rhs[i] = -pk1.v[i] * ratio;
        diff[i] = pk.dbv[i] - rhs[i];
      }
      Real scale = std::max({vnorm(pk.dbv), vnorm(rhs), Real(1)});
      worst = std::max(worst, vnorm(diff) / scale);
    }
    return worst;
  });

  run("ascent", tol, [&](Complex z) {
    Real worst = 0;
    for (int k = 1; k < len; ++k) {
      // w = f_{k-1}/|f_{k-1}|^2 has d w = f_k/|f_{k-1}|^2.
      const RationalVector& lo = t.levels[std::size_t(k) - 1];
      std::vector<BivarPoly> wn;
      wn.reserve(lo.num.size());
      for (const BivarPoly& p : lo.num) wn.push_back(p * lo.den);
      RationalVector w(std::move(wn), t.norm_num[std::size_t(k) - 1]);
      VectorJet jw(w);
      VectorJet::Point pw = jw.at(z);
      VectorJet::Point pk = jets[std::size_t(k)].at(z);
      Real hk1 = norms[std::size_t(k) - 1].eval_real(z);
      if (hk1 <= 0) throw singular_point_error("vanishing norm");
      std::vector<Complex> rhs(pk.v.size()), diff(pk.v.size());
      for (std::size_t i = 0; i < pk.v.size(); ++i) {
        rhs[i] = pk.v[i] / hk1;
        diff[i] = pw.dv[i] - rhs[i];
      }
      Real scale = std::max({vnorm(pw.dv), vnorm(rhs), Real(1)});
      worst = std::max(worst, vnorm(diff) / scale);
    }
    return worst;
  });

  run("projector_hermitian", tol, [&](Complex z) {
    Real worst = 0;
    for (const ProjectorMatrix& P : projs) {
      CMatrix m = P.eval(z);
      worst = std::max(worst, Real((m - m.adjoint().eval()).cwiseAbs().maxCoeff()));
    }
    return worst;
  });

  run("projector_idempotent", tol, [&](Complex z) {
    Real worst = 0;
    for (const ProjectorMatrix& P : projs) {
      CMatrix m = P.eval(z);
      worst = std::max(worst, Real((m * m - m).cwiseAbs().maxCoeff()));
    }
    return worst;
  });

  run("projector_trace", tol, [&](Complex z) {
    Real worst = 0;
    for (const ProjectorMatrix& P : projs) {
      CMatrix m = P.eval(z);
      worst = std::max(worst, Real(std::abs(m.trace() - Complex(1))));
    }
    return worst;
  });

  if (t.full()) {
    run("completeness", tol, [&](Complex z) {
      CMatrix s = CMatrix::Zero(t.n, t.n);
      for (const ProjectorMatrix& P : projs) s += P.eval(z);
      return Real((s - CMatrix::Identity(t.n, t.n)).cwiseAbs().maxCoeff());
    });
  }

  run("euler_lagrange", tol, [&](Complex z) {
    Real worst = 0;
    for (int k = 0; k < len; ++k)
      worst = std::max(worst, el_residual_at(jets[std::size_t(k)], z));
    return worst;
  });

  {
    IdentityCheck c;
    c.name = "top_level_zero";
    c.tolerance = kZeroLevelRel;
    c.max_residual = t.top_residual;
    c.points_used = 1;
    c.passed = t.terminated && c.max_residual <= c.tolerance;
    rep.checks.push_back(c);
  }

  return rep;
}

ElResidual verify_el_equation(const RationalVector& v,
                              const std::vector<Complex>& pts) {
  VectorJet jet(v);
  ElResidual r;
  Real sum = 0;
  for (Complex z : pts) {
    try {
      Real e = el_residual_at(jet, z);
      r.max = std::max(r.max, e);
      sum += e;
      ++r.used;
    } catch (const singular_point_error&) {
      ++r.skipped;
    }
  }
  r.mean = r.used ? sum / Real(r.used) : Real(0);
  return r;
}

CompletenessResult completeness_check(const Tower& t,
                                      const std::vector<Complex>& pts) {
  CompletenessResult res;
  res.full = t.full();
  std::vector<ProjectorMatrix> projs;
  for (const RationalVector& lvl : t.levels) projs.push_back(projector(lvl));
  for (Complex z : pts) {
    try {
      CMatrix s = CMatrix::Zero(t.n, t.n);
      for (const ProjectorMatrix& P : projs) s += P.eval(z);
      res.residual = std::max(
          res.residual,
          Real((s - CMatrix::Identity(t.n, t.n)).cwiseAbs().maxCoeff()));
    } catch (const singular_point_error&) {
    }
  }
  return res;
}

Real lagrangian_density(const RationalVector& v, Complex z) {
  VectorJet jet(v);
  VectorJet::Point p = jet.at(z);
  Real n2 = norm2(p.v);
  if (n2 <= 0) throw singular_point_error("vanishing vector in density");
  Complex ip_d = inner(p.v, p.dv) / n2;
  Complex ip_db = inner(p.v, p.dbv) / n2;
  Real plus = 0, minus = 0;
  for (std::size_t i = 0; i < p.v.size(); ++i) {
    plus += std::norm(p.dv[i] - p.v[i] * ip_d);
    minus += std::norm(p.dbv[i] - p.v[i] * ip_db);
  }
  return (plus + minus) / n2;
}

std::string format_report(const TowerReport& r) {
  std::ostringstream os;
  for (const IdentityCheck& c : r.checks) {
    os << "  [" << (c.passed ? "PASS" : "FAIL") << "] ";
    os << c.name;
    for (std::size_t i = c.name.size(); i < 22; ++i) os << ' ';
    os << " max_residual=" << fmt_real(c.max_residual)
       << "  tol=" << fmt_real(c.tolerance) << "  points=" << c.points_used;
    if (c.points_skipped) os << " (+" << c.points_skipped << " skipped)";
    os << "\n";
  }
  if (!r.cp2_modulus_note.empty()) os << "  " << r.cp2_modulus_note << "\n";
  return os.str();
}

}  // namespace cpsurf
