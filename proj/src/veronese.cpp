#include "cpsurf/veronese.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace cpsurf {

namespace {

Real binom(int n, int k) {
  Real r = 1;
  for (int i = 1; i <= k; ++i) r = r * Real(n - k + i) / Real(i);
  return r;
}

// deterministic sample disk for the fixture and fallback paths
std::vector<Complex> fixed_disk_points(int count, Real radius,
                                       unsigned long long seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> d{-1.0, 1.0};
  std::vector<Complex> pts;
  pts.reserve(std::size_t(count));
  while (int(pts.size()) < count) {
    Complex c(Real(d(gen)), Real(d(gen)));
    if (std::norm(c) <= 1) pts.push_back(c * radius);
  }
  return pts;
}

}  // namespace

HolomorphicSeed veronese_seed(int n) {
  if (n < 2) {
    throw std::invalid_argument("rational-normal seed needs dimension >= 2");
  }
  std::vector<std::vector<Complex>> coeffs(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    coeffs[std::size_t(j)].assign(std::size_t(j) + 1, Complex(0));
    coeffs[std::size_t(j)][std::size_t(j)] =
        Complex(std::sqrt(binom(n - 1, j)), 0);
  }
  return HolomorphicSeed::from_coeffs(coeffs);
}

Real veronese_alpha(int n, int k) {
  if (n < 2 || k < 0 || k > n - 2) {
    throw std::invalid_argument("pure level must have 0 <= k <= N-2");
  }
  return Real((k + 1) * (n - 1 - k) + k * (n - k));
}

Real norm_ratio_gram_at(const HolomorphicSeed& seed, int k, Complex z) {
  const int n = seed.dim();
  if (k < 1 || k > n - 1) {
    throw std::invalid_argument("ratio index must be in [1, N-1]");
  }
  CMatrix M(n, k + 1);
  for (int i = 0; i < n; ++i) {
    BivarPoly p = seed.components[std::size_t(i)];
    for (int j = 0; j <= k; ++j) {
      M(i, j) = p.eval(z);
      p = p.d();
    }
  }
  CMatrix G = M.adjoint() * M;
  auto gram_det = [&G](int j) -> Real {
    if (j == 0) return 1;
    CMatrix sub = G.topLeftCorner(j, j);
    return sub.determinant().real();
  };
  Real dk = gram_det(k);
  Real dk1 = gram_det(k + 1);
  Real dkm = gram_det(k - 1);
  if (!(dk > 0) || dk < 1e-280L) {
    throw singular_point_error("derivative vectors degenerate at the point");
  }
  return dk1 * dkm / (dk * dk);
}

Real mixture_curvature_gram_at(const HolomorphicSeed& seed,
                               const std::vector<Real>& ratio_coeffs,
                               Complex z) {
  const int n = seed.dim();
  if (int(ratio_coeffs.size()) != n - 1) {
    throw std::invalid_argument("need one coefficient per ratio, c_1..c_{N-1}");
  }

  // columns f, f', ..., f^{(n)} evaluated at the point
  CMatrix m(n, n + 1);
  for (int i = 0; i < n; ++i) {
    BivarPoly p = seed.components[std::size_t(i)];
    for (int j = 0; j <= n; ++j) {
      m(i, j) = p.eval(z);
      p = p.d();
    }
  }
  CMatrix gram = m.adjoint() * m;

  // leading minors D_0..D_n and their z log-derivatives: with S_j the j x j
  // block of the Gram matrix shifted one column right, d ln D_j is the trace
  // of G_j^{-1} S_j (each Gram column differentiates into its right neighbor)
  std::vector<Real> det(std::size_t(n) + 1, 1);
  std::vector<Complex> dlog_det(std::size_t(n) + 1, Complex(0));
  for (int j = 1; j <= n; ++j) {
    CMatrix gj = gram.topLeftCorner(j, j);
    auto lu = gj.partialPivLu();
    det[std::size_t(j)] = lu.determinant().real();
    if (j < n && !(det[std::size_t(j)] > 0)) {
      throw singular_point_error("derivative vectors degenerate at the point");
    }
    CMatrix sj = gram.block(0, 1, j, j);
    dlog_det[std::size_t(j)] = lu.solve(sj).trace();
  }

  // rho_j and its log-derivatives via the determinant ladder:
  //   rho_j        = D_{j+1} D_{j-1} / D_j^2        (rho_0 = rho_n = 0)
  //   d ln rho_j   = d ln D_{j+1} + d ln D_{j-1} - 2 d ln D_j
  //   d db ln D_j  = rho_j, hence d db ln rho_j = rho_{j+1}+rho_{j-1}-2rho_j
  std::vector<Real> rho(std::size_t(n) + 1, 0);
  std::vector<Complex> dlog_rho(std::size_t(n) + 1, Complex(0));
  for (int j = 1; j <= n - 1; ++j) {
    rho[std::size_t(j)] = det[std::size_t(j + 1)] * det[std::size_t(j - 1)] /
                          (det[std::size_t(j)] * det[std::size_t(j)]);
    dlog_rho[std::size_t(j)] = dlog_det[std::size_t(j + 1)] +
                               dlog_det[std::size_t(j - 1)] -
                               Real(2) * dlog_det[std::size_t(j)];
  }

  Real g = 0, ddbg = 0;
  Complex dg(0, 0);
  for (int j = 1; j <= n - 1; ++j) {
    Real c = ratio_coeffs[std::size_t(j - 1)];
    if (c == 0) continue;
    Real r = rho[std::size_t(j)];
    Complex dl = dlog_rho[std::size_t(j)];
    g += c * r;
    dg += c * r * dl;
    Real ddb_log = rho[std::size_t(j + 1)] + rho[std::size_t(j - 1)] - 2 * r;
    ddbg += c * r * (ddb_log + std::norm(dl));
  }
  if (!(g > 0) || g < 1e-280L) {
    throw singular_point_error("metric vanished at the sample point");
  }
  return -4 * (g * ddbg - std::norm(dg)) / (g * g * g);
}

AlphaResult alpha_of_mixture(int n, const MixtureWeights& w) {
  w.validate(n);
  AlphaResult out;
  out.ratio_constants.assign(std::size_t(n - 1), Real(0));

  if (n <= 6) {
    Tower t = build_tower(veronese_seed(n));
    BivarPoly conf = BivarPoly::constant(Complex(1)) +
                     BivarPoly::var_z() * BivarPoly::var_zb();
    RationalScalar conf2 = RationalScalar::from_poly(conf * conf);
    out.symbolic = true;
    for (int k = 1; k <= n - 1; ++k) {
      RationalScalar scaled = t.norm_ratio(k) * conf2;
      Real resid = 0;
      auto c = scaled.try_constant(1e-9L, &resid);
      if (!c) {
        throw consistency_error(
            "norm ratio times the conformal factor is not constant");
      }
      out.ratio_constants[std::size_t(k - 1)] = c->real();
      out.spread = std::max(out.spread, resid);
    }
  } else {
    // beyond the symbolic degree budget: measure the ratios pointwise
    HolomorphicSeed seed = veronese_seed(n);
    auto pts = fixed_disk_points(160, Real(2), 75521u);
    for (int k = 1; k <= n - 1; ++k) {
      Real lo = 0, hi = 0, sum = 0;
      bool first = true;
      for (Complex z : pts) {
        Real v = norm_ratio_gram_at(seed, k, z);
        Real s = std::norm(z);
        Real c = v * (1 + s) * (1 + s);
        if (first) {
          lo = hi = c;
          first = false;
        } else {
          lo = std::min(lo, c);
          hi = std::max(hi, c);
        }
        sum += c;
      }
      Real mean = sum / Real(pts.size());
      Real spread = (hi - lo) / (1 + std::abs(mean));
      if (spread > 1e-8L) {
        throw consistency_error(
            "norm ratio times the conformal factor is not constant");
      }
      out.ratio_constants[std::size_t(k - 1)] = mean;
      out.spread = std::max(out.spread, spread);
    }
  }

  auto alpha = [&w](int j) {
    return (j >= 0 && j < int(w.alphas.size())) ? w.alphas[std::size_t(j)]
                                                : Real(0);
  };
  for (int k = 1; k <= n - 1; ++k) {
    Real c = out.ratio_constants[std::size_t(k - 1)];
    out.alpha_linear += (alpha(k - 1) + alpha(k)) * c;
    Real diff = alpha(k) - alpha(k - 1);
    out.alpha_induced += diff * diff * c;
  }
  return out;
}

FixtureReport cp2_fixture_projectors() {
  Tower t = build_tower(veronese_seed(3));
  FixtureReport r;
  r.p0 = projector(t.levels[0]);
  r.p1 = projector(t.levels[1]);

  const Real rt2 = std::sqrt(Real(2));
  auto pts = fixed_disk_points(50, Real(2), 911003u);
  for (Complex z : pts) {
    Complex zb = std::conj(z);
    Real s = std::norm(z);
    Real den = (1 + s) * (1 + s);

    CMatrix want0(3, 3);
    want0 << Complex(1), rt2 * zb, zb * zb,                    //
        rt2 * z, Complex(2 * s), rt2 * zb * s,                 //
        z * z, rt2 * z * s, Complex(s * s);
    want0 /= den;

    Real u = 1 - s;
    CMatrix want1(3, 3);
    want1 << Complex(2 * s), -rt2 * zb * u, Real(-2) * zb * zb,  //
        -rt2 * z * u, Complex(u * u), rt2 * zb * u,              //
        Real(-2) * z * z, rt2 * z * u, Complex(2 * s);
    want1 /= den;

    r.p0_residual = std::max(
        r.p0_residual, Real((r.p0.eval(z) - want0).cwiseAbs().maxCoeff()));
    r.p1_residual = std::max(
        r.p1_residual, Real((r.p1.eval(z) - want1).cwiseAbs().maxCoeff()));
    ++r.points;
  }
  r.passed = r.p0_residual < 1e-10L && r.p1_residual < 1e-10L;
  return r;
}

FiveDimReport five_dim_rank_check(const std::vector<SurfaceSample>& samples,
                                  bool check_parametrization) {
  using RMatrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
  using RVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

  std::vector<const SurfaceSample*> ok;
  for (const auto& s : samples) {
    if (s.x_ok) ok.push_back(&s);
  }
  if (int(ok.size()) < 50) {
    throw std::invalid_argument(
        "subspace rank check needs at least 50 valid samples");
  }
  const int rows = int(ok.size());
  const int dim = int(ok.front()->X.size());

  RMatrix A(rows, dim);
  for (int i = 0; i < rows; ++i) {
    if (int(ok[std::size_t(i)]->X.size()) != dim) {
      throw std::invalid_argument("samples have inconsistent dimensions");
    }
    for (int j = 0; j < dim; ++j) {
      A(i, j) = Real(ok[std::size_t(i)]->X[std::size_t(j)]);
    }
  }
  RMatrix centered = A.rowwise() - A.colwise().mean();

  Eigen::JacobiSVD<RMatrix> svd(centered, Eigen::ComputeThinV);
  FiveDimReport rep;
  rep.singular_values.assign(svd.singularValues().data(),
                             svd.singularValues().data() +
                                 svd.singularValues().size());
  Real top = rep.singular_values.empty() ? Real(0) : rep.singular_values[0];
  if (top > 0) {
    for (Real sv : rep.singular_values) {
      if (sv >= 1e-8L * top) ++rep.rank;
    }
  }

  if (check_parametrization) {
    // affine span: the sampled coordinates plus a constant column
    RMatrix B(rows, dim + 1);
    B.leftCols(dim) = A;
    B.col(dim).setOnes();
    Eigen::ColPivHouseholderQR<RMatrix> qr(B);
    const Real rt3 = std::sqrt(Real(3));
    for (int target = 0; target < 5; ++target) {
      RVector y(rows);
      for (int i = 0; i < rows; ++i) {
        Complex z = ok[std::size_t(i)]->zeta;
        Real x = z.real(), yy = z.imag();
        Real r2 = x * x + yy * yy;
        Real c2 = (1 + r2) * (1 + r2);
        switch (target) {
          case 0: y(i) = 2 * x * (1 - r2) / c2; break;
          case 1: y(i) = 2 * yy * (1 - r2) / c2; break;
          case 2: y(i) = 2 * (x * x - yy * yy) / c2; break;
          case 3: y(i) = 4 * x * yy / c2; break;
          default: y(i) = rt3 * (1 - r2) * (1 - r2) / c2; break;
        }
      }
      RVector coef = qr.solve(y);
      Real misfit = (B * coef - y).norm() / std::max(y.norm(), Real(1e-30));
      rep.parametrization_residual =
          std::max(rep.parametrization_residual, misfit);
    }
    rep.checked_parametrization = true;
  }
  return rep;
}

}  // namespace cpsurf
