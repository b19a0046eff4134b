#pragma once

#include <string>

#include "cpsurf/surface.hpp"

namespace cpsurf {

// Parsed input file describing a surface: seed polynomials plus optional
// mixture weights and diagonal convention. All parse and validation problems
// throw std::invalid_argument so the front end can map them to an input-error
// exit, distinct from numerical failures.
struct MapSpec {
  int n = 0;
  HolomorphicSeed seed;
  MixtureWeights weights;  // defaults to all weight on level 0
  DiagonalChoice diag = DiagonalChoice::gellmann();

  // JSON object with fields:
  //   "N":          integer >= 2
  //   "components": N coefficient lists, ascending degree; each coefficient a
  //                 real number or an [re, im] pair
  //   "weights":    optional list of N-1 reals (default [1, 0, ..., 0])
  //   "diagonal":   optional string, "gellmann" or "cp2family:<angle>:<sign>"
  static MapSpec from_json_text(const std::string& text);
  static MapSpec from_file(const std::string& path);

  std::string str() const;
};

Surface make_surface(const MapSpec& spec);

}  // namespace cpsurf
