#include "cpsurf/bivar_poly.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cpsurf {

namespace {

// graded-lex: total degree first, then degree in z.
bool grlex_less(const BivarPoly::Key& a, const BivarPoly::Key& b) {
  const int ta = a.first + a.second, tb = b.first + b.second;
  if (ta != tb) return ta < tb;
  return a.first < b.first;
}

Complex pow_gap(Complex base, int e) {
  Complex r(1);
  while (e-- > 0) r *= base;
  return r;
}

}  // namespace

BivarPoly BivarPoly::constant(Complex c) { return monomial(0, 0, c); }

BivarPoly BivarPoly::monomial(int dz, int dzb, Complex c) {
  BivarPoly p;
  if (c != Complex(0)) p.terms_[{dz, dzb}] = c;
  p.prune_and_check();
  return p;
}

BivarPoly BivarPoly::var_z() { return monomial(1, 0, Complex(1)); }
BivarPoly BivarPoly::var_zb() { return monomial(0, 1, Complex(1)); }

BivarPoly BivarPoly::from_coeffs(const std::vector<Complex>& ascending) {
  BivarPoly p;
  for (std::size_t k = 0; k < ascending.size(); ++k)
    if (ascending[k] != Complex(0)) p.terms_[{int(k), 0}] = ascending[k];
  p.prune_and_check();
  return p;
}

int BivarPoly::deg_z() const {
  int d = -1;
  for (const auto& [k, c] : terms_) d = std::max(d, k.first);
  return d;
}

int BivarPoly::deg_zb() const {
  int d = -1;
  for (const auto& [k, c] : terms_) d = std::max(d, k.second);
  return d;
}

Real BivarPoly::max_abs() const {
  Real m = 0;
  for (const auto& [k, c] : terms_) m = std::max(m, std::abs(c));
  return m;
}

void BivarPoly::prune_and_check() {
  const Real m = max_abs();
  if (m == 0) {
    terms_.clear();
    return;
  }
  const Real cut = kPruneRel * m;
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (std::abs(it->second) < cut)
      it = terms_.erase(it);
    else
      ++it;
  }
  for (const auto& [k, c] : terms_) {
    if (k.first > kDegreeCap || k.second > kDegreeCap)
      throw degree_cap_error("polynomial degree exceeds cap " +
                             std::to_string(kDegreeCap) + " (term z^" +
                             std::to_string(k.first) + " zb^" +
                             std::to_string(k.second) + ")");
  }
}

BivarPoly BivarPoly::operator+(const BivarPoly& o) const {
  BivarPoly r = *this;
  for (const auto& [k, c] : o.terms_) {
    auto [it, fresh] = r.terms_.try_emplace(k, c);
    if (!fresh) it->second += c;
  }
  r.prune_and_check();
  return r;
}

BivarPoly BivarPoly::operator-(const BivarPoly& o) const {
  BivarPoly r = *this;
  for (const auto& [k, c] : o.terms_) {
    auto [it, fresh] = r.terms_.try_emplace(k, -c);
    if (!fresh) it->second -= c;
  }
  r.prune_and_check();
  return r;
}

BivarPoly BivarPoly::operator-() const {
  BivarPoly r = *this;
  for (auto& [k, c] : r.terms_) c = -c;
  return r;
}

BivarPoly BivarPoly::operator*(Complex s) const {
  BivarPoly r;
  if (s == Complex(0)) return r;
  r = *this;
  for (auto& [k, c] : r.terms_) c *= s;
  r.prune_and_check();
  return r;
}

BivarPoly BivarPoly::operator*(const BivarPoly& o) const {
  BivarPoly r;
  if (is_zero() || o.is_zero()) return r;
  const int az = deg_z(), ab = deg_zb(), bz = o.deg_z(), bb = o.deg_zb();
  if (az + bz > kDegreeCap || ab + bb > kDegreeCap)
    throw degree_cap_error("product degree (" + std::to_string(az + bz) + "," +
                           std::to_string(ab + bb) + ") exceeds cap " +
                           std::to_string(kDegreeCap));
  // dense accumulation buffer; the cap keeps it small
  const int nz = az + bz + 1, nb = ab + bb + 1;
  std::vector<Complex> buf(std::size_t(nz) * nb, Complex(0));
  for (const auto& [ka, ca] : terms_)
    for (const auto& [kb, cb] : o.terms_)
      buf[std::size_t(ka.first + kb.first) * nb + (ka.second + kb.second)] +=
          ca * cb;
  for (int i = 0; i < nz; ++i)
    for (int j = 0; j < nb; ++j) {
      const Complex c = buf[std::size_t(i) * nb + j];
      if (c != Complex(0)) r.terms_[{i, j}] = c;
    }
  r.prune_and_check();
  return r;
}

BivarPoly BivarPoly::conj() const {
  BivarPoly r;
  for (const auto& [k, c] : terms_)
    r.terms_[{k.second, k.first}] = std::conj(c);
  return r;
}

BivarPoly BivarPoly::d() const {
  BivarPoly r;
  for (const auto& [k, c] : terms_)
    if (k.first > 0) r.terms_[{k.first - 1, k.second}] = c * Real(k.first);
  r.prune_and_check();
  return r;
}

BivarPoly BivarPoly::dbar() const {
  BivarPoly r;
  for (const auto& [k, c] : terms_)
    if (k.second > 0) r.terms_[{k.first, k.second - 1}] = c * Real(k.second);
  r.prune_and_check();
  return r;
}

Complex BivarPoly::eval2(Complex z, Complex zb) const {
  if (terms_.empty()) return Complex(0);
  // group terms by z-degree (map order is ascending (i,j))
  std::vector<std::pair<int, std::vector<std::pair<int, Complex>>>> groups;
  for (const auto& [k, c] : terms_) {
    if (groups.empty() || groups.back().first != k.first)
      groups.push_back({k.first, {}});
    groups.back().second.push_back({k.second, c});
  }
  // inner Horner in zb, outer Horner in z, both descending with gap powers
  Complex acc(0);
  int prev_i = -1;
  for (auto git = groups.rbegin(); git != groups.rend(); ++git) {
    Complex inner(0);
    int prev_j = -1;
    const auto& row = git->second;
    for (auto rit = row.rbegin(); rit != row.rend(); ++rit) {
      if (prev_j >= 0) inner *= pow_gap(zb, prev_j - rit->first);
      inner += rit->second;
      prev_j = rit->first;
    }
    inner *= pow_gap(zb, prev_j);
    if (prev_i >= 0) acc *= pow_gap(z, prev_i - git->first);
    acc += inner;
    prev_i = git->first;
  }
  acc *= pow_gap(z, prev_i);
  return acc;
}

bool BivarPoly::is_real_valued(Real rel_tol) const {
  const Real m = max_abs();
  if (m == 0) return true;
  for (const auto& [k, c] : terms_) {
    auto it = terms_.find({k.second, k.first});
    const Complex mirror = (it == terms_.end()) ? Complex(0) : it->second;
    if (std::abs(c - std::conj(mirror)) > rel_tol * m) return false;
  }
  return true;
}

BivarPoly BivarPoly::symmetrized() const {
  BivarPoly r = (*this + conj()) * Complex(0.5L);
  return r;
}

Real BivarPoly::distance(const BivarPoly& a, const BivarPoly& b) {
  Real m = 0;
  for (const auto& [k, c] : a.terms_) {
    auto it = b.terms_.find(k);
    const Complex o = (it == b.terms_.end()) ? Complex(0) : it->second;
    m = std::max(m, std::abs(c - o));
  }
  for (const auto& [k, c] : b.terms_)
    if (!a.terms_.count(k)) m = std::max(m, std::abs(c));
  return m;
}

std::string BivarPoly::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  os.precision(6);
  bool first = true;
  for (const auto& [k, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << double(c.real()) << (c.imag() < 0 ? "" : "+")
       << double(c.imag()) << "i)";
    if (k.first) os << " z^" << k.first;
    if (k.second) os << " zb^" << k.second;
  }
  return os.str();
}

std::optional<BivarPoly> try_divide_exact(const BivarPoly& p,
                                          const BivarPoly& q, Real rel_tol) {
  if (q.is_zero()) return std::nullopt;
  if (p.is_zero()) return BivarPoly();
  // leading term of q under graded-lex
  auto q_lead = q.terms_.begin();
  for (auto it = q.terms_.begin(); it != q.terms_.end(); ++it)
    if (grlex_less(q_lead->first, it->first)) q_lead = it;
  const BivarPoly::Key qk = q_lead->first;
  const Complex qc = q_lead->second;

  const Real scale = p.max_abs();
  const Real dust = 1e-14L * scale;  // drop cancellation residue mid-division
  BivarPoly rem = p, quo, sink;      // sink collects non-divisible terms
  for (int guard = 0; !rem.terms_.empty(); ++guard) {
    if (guard > 200000) return std::nullopt;
    auto r_lead = rem.terms_.begin();
    for (auto it = rem.terms_.begin(); it != rem.terms_.end(); ++it)
      if (grlex_less(r_lead->first, it->first)) r_lead = it;
    if (std::abs(r_lead->second) < dust) {
      rem.terms_.erase(r_lead);
      continue;
    }
    const int di = r_lead->first.first - qk.first;
    const int dj = r_lead->first.second - qk.second;
    if (di < 0 || dj < 0) {
      sink.terms_.insert(*r_lead);
      rem.terms_.erase(r_lead);
      continue;
    }
    const BivarPoly t = BivarPoly::monomial(di, dj, r_lead->second / qc);
    quo.terms_[{di, dj}] += r_lead->second / qc;
    rem = rem - t * q;
  }
  if (sink.max_abs() > rel_tol * scale) return std::nullopt;
  quo.prune_and_check();
  return quo;
}

}  // namespace cpsurf
