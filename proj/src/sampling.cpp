#include "cpsurf/sampling.hpp"

#include <exception>
#include <random>
#include <stdexcept>

namespace cpsurf {

void GridSpec::validate() const {
  if (!(radius > 0)) {
    throw std::invalid_argument("grid radius must be positive");
  }
  if (res < 3) {
    throw std::invalid_argument("grid resolution must be at least 3");
  }
  if (random_count < 0) {
    throw std::invalid_argument("random sample count must be non-negative");
  }
}

std::vector<Complex> grid_points(const GridSpec& spec) {
  spec.validate();
  std::vector<Complex> pts;
  pts.reserve(std::size_t(spec.res) * std::size_t(spec.res));
  for (int iy = 0; iy < spec.res; ++iy) {
    Real y = -spec.radius + 2 * spec.radius * Real(iy) / Real(spec.res - 1);
    for (int ix = 0; ix < spec.res; ++ix) {
      Real x = -spec.radius + 2 * spec.radius * Real(ix) / Real(spec.res - 1);
      pts.emplace_back(x, y);
    }
  }
  return pts;
}

std::vector<Complex> random_points(const GridSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> d{-1.0, 1.0};
  std::vector<Complex> pts;
  pts.reserve(std::size_t(spec.random_count));
  while (int(pts.size()) < spec.random_count) {
    Real x = Real(d(rng));
    Real y = Real(d(rng));
    if (x * x + y * y <= 1) {
      pts.emplace_back(x * spec.radius, y * spec.radius);
    }
  }
  return pts;
}

namespace {

SurfaceSample sample_one(const Surface& surf, Complex z) {
  SurfaceSample s;
  s.zeta = z;
  try {
    auto x = surf.imm.eval(z);
    s.X.assign(x.begin(), x.end());
    s.x_ok = true;
  } catch (const singular_point_error&) {
    s.x_ok = false;
  }
  try {
    s.g = double(surf.curv.g_at(z));
    s.K = double(surf.curv.at(z));
    s.k_ok = true;
  } catch (const singular_point_error&) {
    s.k_ok = false;
  }
  return s;
}

}  // namespace

std::vector<SurfaceSample> sample_surface(const Surface& surf,
                                          const std::vector<Complex>& pts,
                                          Exec exec) {
  std::vector<SurfaceSample> out(pts.size());
  if (exec == Exec::Serial) {
    for (std::size_t i = 0; i < pts.size(); ++i) {
      out[i] = sample_one(surf, pts[i]);
    }
    return out;
  }

  // exceptions other than the per-point singularities must not cross the
  // parallel region; stash the first one and rethrow afterwards
  std::exception_ptr first_error = nullptr;
  const long count = long(pts.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < count; ++i) {
    try {
      out[std::size_t(i)] = sample_one(surf, pts[std::size_t(i)]);
    } catch (...) {
#pragma omp critical
      {
        if (!first_error) first_error = std::current_exception();
      }
    }
  }
  if (first_error) std::rethrow_exception(first_error);
  return out;
}

}  // namespace cpsurf
