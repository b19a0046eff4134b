// Command-line front end: load a seed map, verify the construction, evaluate
// curvature, export surface samples, and run the rational-normal checks.
//
// Exit codes: 0 all checks pass, 1 numerical/identity failure (the failing
// check is named), 2 input error.
#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cpsurf/export_io.hpp"
#include "cpsurf/mapspec.hpp"
#include "cpsurf/sampling.hpp"
#include "cpsurf/veronese.hpp"

namespace {

using namespace cpsurf;

std::string fmt_k(Real v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6Lf", v);
  return buf;
}

std::string fmt_res(Real v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.3Le", v);
  return buf;
}

struct CommonOpts {
  std::string map_path;
  double radius = 3.0;
  int res = 41;
  int samples = 100;
  unsigned long long seed = 20260816ULL;
  std::string weights_csv;
  std::string diag_text;
};

void add_grid_flags(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--radius", o.radius, "chart half-width R (grid over [-R,R]^2)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--res", o.res, "grid resolution per axis (>= 3)");
  cmd->add_option("--samples", o.samples, "random sample count");
  cmd->add_option("--seed", o.seed, "random sample seed");
}

void add_map_flags(CLI::App* cmd, CommonOpts& o, bool required) {
  auto* opt = cmd->add_option("--map", o.map_path, "map description file (JSON)");
  if (required) opt->required();
  cmd->add_option("--weights", o.weights_csv,
                  "mixture weights a0,a1,... (overrides the map file)");
  cmd->add_option("--diag", o.diag_text,
                  "diagonal convention: gellmann | cp2family:<angle>:<sign>");
}

GridSpec grid_of(const CommonOpts& o) {
  GridSpec gs;
  gs.radius = Real(o.radius);
  gs.res = o.res;
  gs.random_count = o.samples;
  gs.seed = o.seed;
  gs.validate();
  return gs;
}

std::vector<Real> parse_weight_list(const std::string& text) {
  std::vector<Real> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    std::string cell = text.substr(
        pos, comma == std::string::npos ? std::string::npos : comma - pos);
    try {
      std::size_t used = 0;
      out.push_back(std::stold(cell, &used));
      if (used != cell.size()) throw std::invalid_argument(cell);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad weight entry: \"" + cell + "\"");
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

MapSpec load_spec(const CommonOpts& o) {
  MapSpec spec = MapSpec::from_file(o.map_path);
  if (!o.weights_csv.empty()) {
    spec.weights.alphas = parse_weight_list(o.weights_csv);
    spec.weights.validate(spec.n);
  }
  if (!o.diag_text.empty()) {
    spec.diag = DiagonalChoice::parse(o.diag_text);
    spec.diag.validate(spec.n);
  }
  return spec;
}

struct CheckLine {
  std::string name;
  Real residual = 0;
  Real tol = 0;
  bool passed = false;
};

void print_check(const CheckLine& c) {
  std::printf("  %-38s max residual %s  (tol %s)  %s\n", c.name.c_str(),
              fmt_res(c.residual).c_str(), fmt_res(c.tol).c_str(),
              c.passed ? "PASS" : "FAIL");
}

int finish(const std::vector<CheckLine>& checks, const char* label) {
  for (const auto& c : checks) {
    if (!c.passed) {
      std::printf("%s: FAIL (%s)\n", label, c.name.c_str());
      return 1;
    }
  }
  std::printf("%s: PASS\n", label);
  return 0;
}

// ------------------------------------------------------------------ verify

int run_verify(const CommonOpts& o, bool negative_control) {
  GridSpec gs = grid_of(o);
  auto pts = random_points(gs);

  if (negative_control) {
    // deliberately non-harmonic vector (1, z + zb): the Euler-Lagrange
    // equation must fail loudly, proving the residual is not trivially zero
    RationalVector bad({BivarPoly::constant(Complex(1)),
                        BivarPoly::var_z() + BivarPoly::var_zb()},
                       BivarPoly::constant(Complex(1)));
    ElResidual el = verify_el_equation(bad, pts);
    std::printf("negative control (1, z + zb): Euler-Lagrange residual max %s mean %s over %d points\n",
                fmt_res(el.max).c_str(), fmt_res(el.mean).c_str(), el.used);
    CheckLine c{"euler-lagrange (negative control)", el.max, 1e-8L,
                el.max < 1e-8L};
    print_check(c);
    return finish({c}, "VERIFY");
  }

  MapSpec spec = load_spec(o);
  std::printf("map: %s\n", spec.str().c_str());
  Surface surf = make_surface(spec);
  const Tower& t = surf.tower;
  std::printf("tower length %d of %d%s\n", t.length(), t.n,
              t.full() ? " (full)" : "");

  std::vector<CheckLine> checks;
  TowerReport rep = verify_tower_identities(t, pts, 1e-8L);
  for (const auto& c : rep.checks) {
    checks.push_back({c.name, c.max_residual, c.tolerance, c.passed});
  }

  // metric structure of the chosen mixture
  Real gpp = 0, cross = 0, energy = 0;
  int used = 0;
  for (Complex z : pts) {
    try {
      Real closed = surf.met.g_pm_closed_at(z);
      Real trace = surf.met.g_pm_trace_at(z);
      Real scale = 1 + std::abs(closed);
      gpp = std::max(gpp, Real(std::abs(surf.met.g_pp_at(z))) / scale);
      cross = std::max(cross, std::abs(trace - closed) / scale);
      energy = std::max(energy, energy_diag_residual(surf.imm, surf.met, z));
      energy = std::max(energy, energy_total_residual(surf.imm, surf.met, z));
      ++used;
    } catch (const singular_point_error&) {
    }
  }
  if (used == 0) {
    std::printf("VERIFY: FAIL (all sample points singular)\n");
    return 1;
  }
  checks.push_back({"metric g++ = g-- = 0", gpp, 1e-10L, gpp < 1e-10L});
  checks.push_back({"metric trace vs closed form", cross, 1e-8L, cross < 1e-8L});
  checks.push_back({"energy matching of the immersion", energy, 1e-10L,
                    energy < 1e-10L});

  if (surf.n == 2) {
    auto samples = sample_surface(surf, grid_points(gs));
    Real sphere = sphere_residual(samples);
    checks.push_back({"sphere identity", sphere, 1e-12L, sphere < 1e-12L});
  }

  for (const auto& c : checks) print_check(c);
  return finish(checks, "VERIFY");
}

// --------------------------------------------------------------- curvature

int run_curvature(const CommonOpts& o) {
  GridSpec gs = grid_of(o);
  MapSpec spec = load_spec(o);
  std::printf("map: %s\n", spec.str().c_str());
  Surface surf = make_surface(spec);

  auto stats = surf.curv.scan(grid_points(gs));
  if (stats.used == 0) {
    std::printf("CURVATURE: FAIL (all grid points singular)\n");
    return 1;
  }
  std::printf("grid %dx%d over |Re|,|Im| <= %s: %d points used, %d singular\n",
              gs.res, gs.res, fmt_k(gs.radius).c_str(), stats.used,
              stats.skipped);
  std::printf("K min %s  max %s  mean %s  spread %s\n",
              fmt_res(stats.min).c_str(), fmt_res(stats.max).c_str(),
              fmt_res(stats.mean).c_str(), fmt_res(stats.spread).c_str());
  if (stats.constant) {
    std::printf("K constant = %s\n", fmt_k(stats.constant_value).c_str());
  } else {
    std::printf("K non-constant (range %s to %s)\n", fmt_res(stats.min).c_str(),
                fmt_res(stats.max).c_str());
  }

  std::vector<CheckLine> checks;

  // closed-form cross-checks, available for three-component maps with all
  // weight on a single unit level
  const auto& w = surf.weights.alphas;
  bool pure0 = surf.n == 3 && w.size() == 2 && w[0] == 1 && w[1] == 0;
  bool pure1 = surf.n == 3 && w.size() == 2 && w[0] == 0 && w[1] == 1;
  GridSpec rs = gs;
  rs.random_count = std::max(30, gs.random_count);
  auto pts = random_points(rs);

  if (pure0) {
    Cp2HolomorphicCurvature closed(surf.tower);
    Real worst = 0;
    int used = 0;
    for (Complex z : pts) {
      try {
        Real a = closed.at(z);
        Real b = surf.curv.at(z);
        worst = std::max(worst, std::abs(a - b) / (1 + std::abs(b)));
        ++used;
      } catch (const singular_point_error&) {
      }
    }
    if (used > 0) {
      checks.push_back({"closed form (holomorphic level)", worst, 1e-7L,
                        worst < 1e-7L});
    }
  }
  if (pure1 && surf.tower.full()) {
    ModulusResolution res = resolve_cp2_modulus(surf.tower, pts);
    std::printf("%s\n", res.note.c_str());
    checks.push_back({"closed form (middle level)", res.best_residual, 1e-7L,
                      res.best_residual < 1e-7L});
  }

  for (const auto& c : checks) print_check(c);
  return finish(checks, "CURVATURE");
}

// ----------------------------------------------------------------- surface

int run_surface(const CommonOpts& o, const std::string& format,
                const std::string& out_path, const std::string& basis_text) {
  GridSpec gs = grid_of(o);
  MapSpec spec = load_spec(o);
  std::printf("map: %s\n", spec.str().c_str());
  Surface surf = make_surface(spec);
  auto samples = sample_surface(surf, grid_points(gs));
  const int dim = surf.imm.dim();

  if (format == "csv") {
    CsvResult r = write_csv_file(out_path, samples, dim);
    std::printf("wrote %d rows (%d singular points skipped) to %s\n", r.written,
                r.skipped, out_path.c_str());
  } else if (format == "ply") {
    PlyBasis basis;
    if (basis_text == "first3") {
      basis = PlyBasis::FirstThree;
    } else if (basis_text == "pca") {
      basis = PlyBasis::Pca;
    } else {
      throw std::invalid_argument("--ply-basis must be first3 or pca");
    }
    PlyResult r = write_ply_file(out_path, samples, gs.res, dim, basis);
    std::printf("wrote %d vertices, %d faces (%d singular points skipped) to %s\n",
                r.vertices, r.faces, r.skipped, out_path.c_str());
  } else {
    throw std::invalid_argument("--format must be csv or ply");
  }
  return 0;
}

// ---------------------------------------------------------------- veronese

int run_veronese(int n, std::optional<int> k_opt, const std::string& weights_csv,
                 const CommonOpts& o) {
  if (n < 2 || n > 8) {
    throw std::invalid_argument("veronese check supports 2 <= N <= 8");
  }
  GridSpec gs = grid_of(o);

  MixtureWeights w;
  std::optional<int> pure_level;
  if (!weights_csv.empty()) {
    if (k_opt) throw std::invalid_argument("give either --k or --weights");
    w.alphas = parse_weight_list(weights_csv);
    w.validate(n);
    int nonzero = 0;
    for (std::size_t i = 0; i < w.alphas.size(); ++i) {
      if (w.alphas[i] != 0) {
        ++nonzero;
        if (w.alphas[i] == 1) pure_level = int(i);
      }
    }
    if (nonzero != 1) pure_level.reset();
  } else {
    int k = k_opt.value_or(0);
    if (k < 0 || k > n - 2) {
      throw std::invalid_argument("level must satisfy 0 <= k <= N-2");
    }
    w = MixtureWeights::pure(n, k);
    pure_level = k;
  }
  std::printf("rational-normal map, N=%d, weights %s\n", n, w.str().c_str());

  AlphaResult a = alpha_of_mixture(n, w);
  std::vector<CheckLine> checks;
  std::printf("norm-ratio constants (1+|zeta|^2)^2 * rho_k:");
  for (Real c : a.ratio_constants) std::printf(" %s", fmt_k(c).c_str());
  std::printf("  [%s, spread %s]\n",
              a.symbolic ? "symbolic" : "pointwise",
              fmt_res(a.spread).c_str());

  if (std::abs(a.alpha_linear - a.alpha_induced) >
      1e-12L * (1 + std::abs(a.alpha_linear))) {
    std::printf("alpha (adjacent-pair reading) = %s\n",
                fmt_k(a.alpha_linear).c_str());
    std::printf("alpha (induced metric)        = %s\n",
                fmt_k(a.alpha_induced).c_str());
  } else {
    std::printf("alpha = %s\n", fmt_k(a.alpha_induced).c_str());
  }

  if (pure_level) {
    Real formula = veronese_alpha(n, *pure_level);
    Real err = std::abs(a.alpha_induced - formula);
    Real tol = a.symbolic ? 1e-9L : 1e-7L;
    std::printf("closed-formula alpha for level %d = %s\n", *pure_level,
                fmt_k(formula).c_str());
    checks.push_back({"alpha matches the closed formula", err, tol, err < tol});
  }

  const Real predicted = 8 / a.alpha_induced;
  std::printf("predicted K = 8/alpha = %s\n", fmt_k(predicted).c_str());

  Real measured = 0, spread = 0, tol = 0;
  if (n <= 6) {
    Surface surf = make_surface(veronese_seed(n), w, DiagonalChoice::gellmann());
    auto stats = surf.curv.scan(grid_points(gs));
    if (stats.used == 0) {
      std::printf("VERONESE: FAIL (all grid points singular)\n");
      return 1;
    }
    measured = stats.mean;
    spread = stats.spread;
    tol = 1e-7L;
    checks.push_back({"K constant over the grid", stats.spread,
                      1e-7L * (1 + std::abs(stats.mean)), stats.constant});
  } else {
    // past the symbolic-degree range: exact pointwise curvature from the
    // Gram-determinant ladder
    std::vector<Real> coeff(std::size_t(n - 1), 0);
    auto alpha = [&](int j) {
      return (j >= 0 && j < int(w.alphas.size())) ? w.alphas[std::size_t(j)]
                                                  : Real(0);
    };
    for (int k = 1; k <= n - 1; ++k) {
      Real diff = alpha(k) - alpha(k - 1);
      coeff[std::size_t(k - 1)] = diff * diff;
    }
    GridSpec rs = gs;
    rs.random_count = std::max(20, std::min(gs.random_count, 60));
    rs.radius = std::min(gs.radius, Real(2));
    auto pts = random_points(rs);
    HolomorphicSeed seed = veronese_seed(n);
    Real lo = 0, hi = 0, sum = 0;
    int used = 0;
    for (Complex z : pts) {
      try {
        Real kv = mixture_curvature_gram_at(seed, coeff, z);
        if (used == 0) lo = hi = kv;
        lo = std::min(lo, kv);
        hi = std::max(hi, kv);
        sum += kv;
        ++used;
      } catch (const singular_point_error&) {
      }
    }
    if (used == 0) {
      std::printf("VERONESE: FAIL (all sample points singular)\n");
      return 1;
    }
    measured = sum / used;
    spread = hi - lo;
    tol = 1e-7L;
    checks.push_back({"K constant over the samples", spread,
                      1e-7L * (1 + std::abs(measured)),
                      spread < 1e-7L * (1 + std::abs(measured))});
  }

  std::printf("measured K mean = %s (spread %s)\n", fmt_k(measured).c_str(),
              fmt_res(spread).c_str());
  Real err = std::abs(measured - predicted);
  checks.push_back({"K = 8/alpha", err, tol, err < tol});

  for (const auto& c : checks) print_check(c);
  return finish(checks, "VERONESE");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"surfaces from harmonic sequences of projectors"};
  app.require_subcommand(1);

  CommonOpts o;
  bool negative_control = false;
  std::string format = "csv";
  std::string out_path;
  std::string basis_text = "first3";
  int veronese_n = 0;
  std::optional<int> veronese_k;
  std::string veronese_weights;

  CLI::App* verify = app.add_subcommand(
      "verify", "run the identity suite on a map (or the negative control)");
  add_map_flags(verify, o, false);
  add_grid_flags(verify, o);
  verify->add_flag("--negative-control", negative_control,
                   "check a deliberately non-harmonic vector instead");

  CLI::App* curvature =
      app.add_subcommand("curvature", "Gaussian curvature statistics on a grid");
  add_map_flags(curvature, o, true);
  add_grid_flags(curvature, o);

  CLI::App* surface =
      app.add_subcommand("surface", "export sampled surface points");
  add_map_flags(surface, o, true);
  add_grid_flags(surface, o);
  surface->add_option("--format", format, "csv | ply")
      ->check(CLI::IsMember({"csv", "ply"}));
  surface->add_option("--out", out_path, "output path")->required();
  surface->add_option("--ply-basis", basis_text,
                      "vertex positions: first3 | pca")
      ->check(CLI::IsMember({"first3", "pca"}));

  CLI::App* veronese = app.add_subcommand(
      "veronese", "curvature law of the rational-normal maps");
  veronese->add_option("--N", veronese_n, "ambient dimension, 2..8")->required();
  veronese->add_option("--k", veronese_k, "pure level, 0..N-2 (default 0)");
  veronese->add_option("--weights", veronese_weights,
                       "mixture weights a0,a1,... (instead of --k)");
  add_grid_flags(veronese, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (verify->parsed()) {
      if (!negative_control && o.map_path.empty()) {
        throw std::invalid_argument("verify needs --map (or --negative-control)");
      }
      return run_verify(o, negative_control);
    }
    if (curvature->parsed()) return run_curvature(o);
    if (surface->parsed()) {
      return run_surface(o, format, out_path, basis_text);
    }
    if (veronese->parsed()) {
      return run_veronese(veronese_n, veronese_k, veronese_weights, o);
    }
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "input error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "failure: %s\n", e.what());
    return 1;
  }
  return 2;
}
