#pragma once

#include <vector>

#include "cpsurf/surface.hpp"

namespace cpsurf {

// Sampling plan over a single chart |zeta| <= radius.
struct GridSpec {
  Real radius = 3.0L;            // half-width of the square grid
  int res = 41;                  // points per axis, >= 3
  int random_count = 100;        // extra uniform samples on the disk
  unsigned long long seed = 20260816ULL;

  void validate() const;  // throws std::invalid_argument
};

// Row-major grid over [-R, R]^2: index iy*res + ix, x varying fastest.
std::vector<Complex> grid_points(const GridSpec& spec);

// Uniform samples on the closed disk of radius R (seeded, reproducible).
std::vector<Complex> random_points(const GridSpec& spec);

enum class Exec { Serial, Parallel };

// Evaluate the immersion, metric and curvature at each point. Points where a
// denominator vanishes are flagged (x_ok / k_ok), never dropped, so the
// output size and order always match the input. The parallel path writes
// into preassigned slots and is bit-identical to the serial one.
std::vector<SurfaceSample> sample_surface(const Surface& surf,
                                          const std::vector<Complex>& pts,
                                          Exec exec = Exec::Parallel);

}  // namespace cpsurf
