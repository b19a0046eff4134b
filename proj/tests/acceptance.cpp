// Acceptance suite: one line per criterion, pinned tolerances, exit 0 only
// if every criterion passes. Invoked as: acceptance <path-to-cli>
#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "cpsurf/export_io.hpp"
#include "cpsurf/mapspec.hpp"
#include "cpsurf/sampling.hpp"
#include "cpsurf/veronese.hpp"

using namespace cpsurf;

namespace {

struct Line {
  int id;
  std::string name;
  bool passed;
  std::string detail;
};

std::vector<Line> g_lines;

void report(int id, const std::string& name, bool passed,
            const std::string& detail) {
  g_lines.push_back({id, name, passed, detail});
  std::printf("[%2d] %-52s %s  %s\n", id, name.c_str(),
              passed ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
}

std::string fmt(Real v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.3Le", v);
  return buf;
}

std::mt19937_64 g_rng(61520930u);

Complex rand_disk(Real radius) {
  std::uniform_real_distribution<double> d{-1.0, 1.0};
  for (;;) {
    Complex c(Real(d(g_rng)), Real(d(g_rng)));
    if (std::norm(c) <= 1) return c * radius;
  }
}

std::vector<Complex> disk_points(int count, Real radius) {
  std::vector<Complex> pts;
  for (int i = 0; i < count; ++i) pts.push_back(rand_disk(radius));
  return pts;
}

HolomorphicSeed random_seed(int n, int deg) {
  std::uniform_real_distribution<double> d{-1.0, 1.0};
  std::vector<std::vector<Complex>> coeffs(static_cast<std::size_t>(n));
  for (auto& c : coeffs) {
    c.resize(std::size_t(deg) + 1);
    for (auto& x : c) x = Complex(Real(d(g_rng)), Real(d(g_rng)));
  }
  return HolomorphicSeed::from_coeffs(coeffs);
}

GridSpec grid41() {
  GridSpec gs;
  gs.radius = 3;
  gs.res = 41;
  return gs;
}

// the four degree-one..three maps of the two-component family
std::vector<HolomorphicSeed> cp1_maps() {
  auto seed = [](const std::vector<Complex>& w) {
    return HolomorphicSeed::from_coeffs({{Complex(1)}, w});
  };
  return {seed({Complex(0), Complex(1)}),
          seed({Complex(0), Complex(0), Complex(1)}),
          seed({Complex(1), Complex(0), Complex(0), Complex(1)}),
          seed({Complex(-2), Complex(1), Complex(1)})};
}

// ---------------------------------------------------------------- criteria

void criterion_1_2() {
  Real worst_k = 0, worst_sphere = 0;
  int used_total = 0;
  bool ok = true;
  auto pts = grid_points(grid41());
  for (const auto& seed : cp1_maps()) {
    Surface s = make_surface(seed, MixtureWeights::pure(2, 0),
                             DiagonalChoice::gellmann());
    auto stats = s.curv.scan(pts);
    if (stats.used == 0) ok = false;
    used_total += stats.used;
    worst_k = std::max(worst_k, std::max(std::abs(stats.min - 8),
                                         std::abs(stats.max - 8)));
    auto samples = sample_surface(s, pts);
    worst_sphere = std::max(worst_sphere, sphere_residual(samples));
  }
  report(1, "two-component maps: K = 8 at every grid point",
         ok && worst_k < 1e-6L,
         "max |K-8| = " + fmt(worst_k) + " over " + std::to_string(used_total) +
             " points (tol 1e-6)");
  report(2, "two-component maps: sphere identity",
         worst_sphere < 1e-12L,
         "max residual = " + fmt(worst_sphere) + " (tol 1e-12)");
}

void criterion_3() {
  Tower t = build_tower(veronese_seed(3));
  auto pts = grid_points(grid41());
  bool ok = true;
  Real worst_spread = 0, worst_dev = 0;
  const Real targets[2] = {4, 2};
  for (int k = 0; k <= 1; ++k) {
    MetricField m(t, MixtureWeights::pure(3, k));
    auto stats = CurvatureField(m).scan(pts);
    if (stats.used == 0) ok = false;
    worst_spread = std::max(worst_spread, stats.spread);
    worst_dev = std::max(worst_dev, std::abs(stats.mean - targets[k]));
  }
  report(3, "dimension-3 rational-normal levels: K = 4 and K = 2",
         ok && worst_spread < 1e-7L && worst_dev < 1e-7L,
         "spread = " + fmt(worst_spread) + ", |K - target| = " +
             fmt(worst_dev) + " (tol 1e-7)");
}

void criterion_4() {
  // the constancy domain: 21x21 grid over |zeta| <= 2 plus 100 random points
  GridSpec gs;
  gs.radius = 2.0L;
  gs.res = 21;
  auto pts = grid_points(gs);
  for (Complex z : disk_points(100, Real(2))) pts.push_back(z);
  Real worst_spread = 0, worst_alpha = 0, worst_k = 0;
  bool ok = true;
  for (int n = 2; n <= 6; ++n) {
    HolomorphicSeed seed = veronese_seed(n);
    Tower t = build_tower(seed);
    for (int k = 0; k <= n - 2; ++k) {
      MetricField m(t, MixtureWeights::pure(n, k));
      // the conformal product g * (1 + |zeta|^2)^2 must be flat; the values
      // come from the Gram-determinant evaluator (per-point machine accuracy
      // at every dimension), the pure level's metric being rho_k + rho_{k+1}
      Real lo = 0, hi = 0, sum = 0;
      int used = 0;
      for (Complex z : pts) {
        try {
          Real s = std::norm(z);
          Real g = (k == 0 ? Real(0) : norm_ratio_gram_at(seed, k, z)) +
                   norm_ratio_gram_at(seed, k + 1, z);
          Real v = g * (1 + s) * (1 + s);
          if (used == 0) lo = hi = v;
          lo = std::min(lo, v);
          hi = std::max(hi, v);
          sum += v;
          ++used;
        } catch (const singular_point_error&) {
        }
      }
      if (used == 0) {
        ok = false;
        continue;
      }
      worst_spread = std::max(worst_spread, hi - lo);
      Real alpha = sum / used;
      Real formula = veronese_alpha(n, k);
      worst_alpha = std::max(worst_alpha, std::abs(alpha - formula));
      auto stats = CurvatureField(m).scan(pts);
      if (stats.used == 0) ok = false;
      Real target = 8 / formula;
      worst_k = std::max(worst_k, std::max(std::abs(stats.min - target),
                                           std::abs(stats.max - target)));
    }
  }
  report(4, "rational-normal law, N = 2..6, every level",
         ok && worst_spread < 1e-9L && worst_alpha < 1e-9L && worst_k < 1e-7L,
         "metric spread = " + fmt(worst_spread) + " (tol 1e-9), |alpha-formula| = " +
             fmt(worst_alpha) + " (tol 1e-9), |K-8/alpha| = " + fmt(worst_k) +
             " (tol 1e-7)");
}

struct Corpus {
  std::vector<Tower> towers;
  std::vector<std::vector<Complex>> points;
};

Corpus build_corpus() {
  Corpus c;
  std::uniform_int_distribution<int> deg_of{2, 4};
  for (int i = 0; i < 10; ++i) {
    int n = (i % 2 == 0) ? 3 : 4;
    c.towers.push_back(build_tower(random_seed(n, deg_of(g_rng))));
    c.points.push_back(disk_points(50, Real(2)));
  }
  return c;
}

void criterion_5(const Corpus& corpus) {
  bool ok = true;
  Real worst = 0;
  std::string failing;
  for (std::size_t i = 0; i < corpus.towers.size(); ++i) {
    TowerReport rep =
        verify_tower_identities(corpus.towers[i], corpus.points[i], 1e-8L);
    for (const auto& chk : rep.checks) {
      worst = std::max(worst, chk.max_residual);
      if (!chk.passed) {
        ok = false;
        if (failing.empty()) failing = chk.name;
      }
    }
  }
  report(5, "tower identity suite on 10 random seeds",
         ok,
         ok ? "max residual = " + fmt(worst) + " (tol 1e-8)"
            : "failing identity: " + failing);
}

void criterion_6(const Corpus& corpus) {
  Real worst_gpp = 0, worst_cross = 0;
  int used = 0;
  for (std::size_t i = 0; i < corpus.towers.size(); ++i) {
    const Tower& t = corpus.towers[i];
    std::vector<MixtureWeights> weights;
    weights.push_back(MixtureWeights::pure(t.n, 0));
    if (t.length() >= 2) {
      MixtureWeights mixed;
      mixed.alphas.assign(std::size_t(t.n - 1), 0);
      for (int k = 0; k < std::min(t.length(), t.n - 1); ++k) {
        mixed.alphas[std::size_t(k)] = Real(1) / Real(1 << k);
      }
      weights.push_back(mixed);
    }
    for (const auto& w : weights) {
      MetricField m(t, w);
      for (Complex z : corpus.points[i]) {
        try {
          Real closed = m.g_pm_closed_at(z);
          Real trace = m.g_pm_trace_at(z);
          Real scale = 1 + std::abs(closed);
          worst_gpp =
              std::max(worst_gpp, Real(std::abs(m.g_pp_at(z))) / scale);
          worst_cross =
              std::max(worst_cross, std::abs(trace - closed) / scale);
          ++used;
        } catch (const singular_point_error&) {
        }
      }
    }
  }
  report(6, "metric structure on the same corpus",
         used > 0 && worst_gpp < 1e-10L && worst_cross < 1e-8L,
         "max |g++| = " + fmt(worst_gpp) + " (tol 1e-10), trace vs closed = " +
             fmt(worst_cross) + " (tol 1e-8)");
}

void criterion_7() {
  Real worst = 0;
  bool ok = true;
  // generalized diagonal, dimensions 2..6
  for (int n = 2; n <= 6; ++n) {
    Tower t = build_tower(veronese_seed(n));
    MixtureWeights w = MixtureWeights::pure(n, (n - 1) / 2);
    MetricField m(t, w);
    ProjectorMatrix p = mixed_projector(t, w);
    ImmersionField x = immersion(p, DiagonalChoice::gellmann());
    for (Complex z : disk_points(20, Real(2))) {
      try {
        worst = std::max(worst, energy_diag_residual(x, m, z));
        worst = std::max(worst, energy_total_residual(x, m, z));
      } catch (const singular_point_error&) {
      }
    }
  }
  // the dimension-3 two-parameter diagonal family, 8 angles, both signs
  Real worst_match = 0;
  std::uniform_real_distribution<double> ang{0.0, 6.283185307179586};
  Tower t3 = build_tower(veronese_seed(3));
  HolomorphicSeed generic =
      HolomorphicSeed::from_coeffs({{Complex(1)},
                                    {Complex(0), Complex(1)},
                                    {Complex(0.5L), Complex(0), Complex(1)}});
  Tower tg = build_tower(generic);
  for (const Tower* t : {&t3, &tg}) {
    for (int k = 0; k <= 1; ++k) {
      if (k >= t->length()) continue;
      MixtureWeights w = MixtureWeights::pure(t->n, k);
      MetricField m(*t, w);
      ProjectorMatrix p = mixed_projector(*t, w);
      ImmersionField xg = immersion(p, DiagonalChoice::gellmann());
      for (int a = 0; a < 8; ++a) {
        Real angle = Real(ang(g_rng));
        for (int sign : {+1, -1}) {
          ImmersionField xf =
              immersion(p, DiagonalChoice::cp2_family(angle, sign));
          for (Complex z : disk_points(5, Real(2))) {
            try {
              worst = std::max(worst, energy_diag_residual(xf, m, z));
              worst = std::max(worst, energy_total_residual(xf, m, z));
              // both conventions must carry the same induced metric
              auto jg = xg.jet(z);
              auto jf = xf.jet(z);
              Complex eg(0, 0), ef(0, 0);
              for (std::size_t c = 0; c < jg.dx.size(); ++c) {
                eg += jg.dx[c] * jg.dbx[c];
                ef += jf.dx[c] * jf.dbx[c];
              }
              Real scale = 1 + std::abs(eg);
              worst_match =
                  std::max(worst_match, Real(std::abs(eg - ef)) / scale);
            } catch (const singular_point_error&) {
            }
          }
        }
      }
    }
  }
  ok = worst < 1e-10L && worst_match < 1e-10L;
  report(7, "energy matching for both diagonal conventions", ok,
         "max residual = " + fmt(worst) + ", convention mismatch = " +
             fmt(worst_match) + " (tol 1e-10)");
}

void criterion_8() {
  HolomorphicSeed seed = HolomorphicSeed::from_coeffs(
      {{Complex(1)},
       {Complex(0), Complex(1)},
       {Complex(0), Complex(0), Complex(0), Complex(1)}});
  Tower t = build_tower(seed);
  // well-conditioned sample points
  std::vector<Complex> pts;
  while (int(pts.size()) < 30) {
    Complex z = rand_disk(Real(1.5L));
    try {
      MetricField m0(t, MixtureWeights::pure(3, 0));
      if (m0.g_pm_closed_at(z) > 1e-3L) pts.push_back(z);
    } catch (const singular_point_error&) {
    }
  }

  MetricField m0(t, MixtureWeights::pure(3, 0));
  CurvatureField c0(m0);
  Cp2HolomorphicCurvature hol(t);
  Real worst0 = 0;
  for (Complex z : pts) {
    worst0 = std::max(worst0,
                      std::abs(hol.at(z) - c0.at(z)) / (1 + std::abs(c0.at(z))));
  }

  ModulusResolution res = resolve_cp2_modulus(t, pts);
  MetricField m1(t, MixtureWeights::pure(3, 1));
  CurvatureField c1(m1);
  Cp2P1Curvature mid(t, res.sign, res.exponent);
  Real worst1 = 0;
  for (Complex z : pts) {
    worst1 = std::max(worst1,
                      std::abs(mid.at(z) - c1.at(z)) / (1 + std::abs(c1.at(z))));
  }

  // degenerate two-component embedding: the closed form collapses to 8
  HolomorphicSeed embed = HolomorphicSeed::from_coeffs(
      {{Complex(1)}, {Complex(0), Complex(1)}, {Complex(0)}});
  Tower te = build_tower(embed);
  Cp2HolomorphicCurvature hol_e(te);
  MetricField me(te, MixtureWeights::pure(3, 0));
  CurvatureField ce(me);
  Real worst_e = 0;
  for (Complex z : disk_points(10, Real(2))) {
    worst_e = std::max(worst_e, std::abs(hol_e.at(z) - 8));
    worst_e = std::max(worst_e, std::abs(ce.at(z) - 8));
  }

  report(8, "dimension-3 closed curvature forms cross-validate",
         worst0 < 1e-7L && worst1 < 1e-7L && res.best_residual < 1e-7L &&
             worst_e < 1e-7L,
         "holomorphic = " + fmt(worst0) + ", middle = " + fmt(worst1) +
             ", embedded |K-8| = " + fmt(worst_e) + " (tol 1e-7)");
}

void criterion_9(const std::string& cli) {
  const char* map_path = "acceptance_p1.json";
  {
    std::ofstream out(map_path);
    out << R"({"N": 3, "components": [[1], [0, [1.4142135623730951, 0]], )"
        << R"([0, 0, 1]], "weights": [0, 1]})";
  }
  std::string cmd = cli +
                    " surface --map acceptance_p1.json --res 15 --radius 2 "
                    "--format csv --out acceptance_p1.csv > /dev/null 2>&1";
  int status = std::system(cmd.c_str());
  bool ran = WIFEXITED(status) && WEXITSTATUS(status) == 0;
  bool ok = false;
  std::string detail = "surface export failed";
  if (ran) {
    auto samples = read_csv_file("acceptance_p1.csv");
    FiveDimReport rep = five_dim_rank_check(samples, true);
    Real ratio = rep.singular_values.size() >= 6 && rep.singular_values[0] > 0
                     ? rep.singular_values[5] / rep.singular_values[0]
                     : Real(1);
    ok = int(samples.size()) >= 100 && rep.rank == 5 && ratio < 1e-8L &&
         rep.parametrization_residual < 1e-9L;
    detail = std::to_string(samples.size()) + " samples, rank " +
             std::to_string(rep.rank) + ", sv6/sv1 = " + fmt(ratio) +
             " (tol 1e-8), parametrization = " +
             fmt(rep.parametrization_residual) + " (tol 1e-9)";
  }
  report(9, "middle-level cloud spans exactly five dimensions", ok, detail);
}

void criterion_10(const std::string& cli) {
  RationalVector bad({BivarPoly::constant(Complex(1)),
                      BivarPoly::var_z() + BivarPoly::var_zb()},
                     BivarPoly::constant(Complex(1)));
  ElResidual el = verify_el_equation(bad, disk_points(50, Real(2)));
  std::string cmd = cli + " verify --negative-control > /dev/null 2>&1";
  int status = std::system(cmd.c_str());
  bool nonzero_exit = WIFEXITED(status) && WEXITSTATUS(status) != 0;
  report(10, "negative control: non-harmonic vector rejected",
         el.mean > 0.1L && nonzero_exit,
         "mean equation residual = " + fmt(el.mean) +
             " (must exceed 0.1), verify exit " +
             std::to_string(WIFEXITED(status) ? WEXITSTATUS(status) : -1));
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: acceptance <path-to-cli>\n");
    return 1;
  }
  const std::string cli = argv[1];

  criterion_1_2();
  criterion_3();
  criterion_4();
  Corpus corpus = build_corpus();
  criterion_5(corpus);
  criterion_6(corpus);
  criterion_7();
  criterion_8();
  criterion_9(cli);
  criterion_10(cli);

  int failed = 0;
  for (const auto& line : g_lines) {
    if (!line.passed) ++failed;
  }
  if (failed == 0) {
    std::printf("ACCEPTANCE: all %zu criteria PASS\n", g_lines.size());
    return 0;
  }
  std::printf("ACCEPTANCE: %d of %zu criteria FAIL\n", failed, g_lines.size());
  return 1;
}
