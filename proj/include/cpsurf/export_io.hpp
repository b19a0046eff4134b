#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "cpsurf/sampling.hpp"

namespace cpsurf {

struct CsvResult {
  int written = 0;  // data rows emitted
  int skipped = 0;  // samples dropped because a denominator vanished
};

// Header "zeta_re,zeta_im,X1,...,X{dim},g,K"; one row per fully evaluated
// sample, every number printed with %.17g so doubles round-trip exactly and
// output is byte-deterministic for identical input.
CsvResult write_csv(std::ostream& out, const std::vector<SurfaceSample>& samples,
                    int dim);
CsvResult write_csv_file(const std::string& path,
                         const std::vector<SurfaceSample>& samples, int dim);

// Reads a file produced by write_csv; every returned sample is fully valid.
// Throws std::invalid_argument on malformed content.
std::vector<SurfaceSample> read_csv_file(const std::string& path,
                                         int* dim_out = nullptr);

enum class PlyBasis {
  FirstThree,  // positions = (X1, X2, X3)
  Pca,         // positions = projection onto the top-variance 3-plane
};

struct PlyResult {
  int vertices = 0;
  int faces = 0;
  int skipped = 0;  // grid points dropped (faces touching them removed)
};

// Ascii PLY of a row-major res x res grid cloud: each grid cell becomes two
// triangles, vertices where evaluation failed are dropped and the faces
// touching them removed, indices reassigned. Vertex properties carry the
// chart coordinates, g and K; in FirstThree mode the X components beyond the
// first three ride along as extra properties.
PlyResult write_ply_file(const std::string& path,
                         const std::vector<SurfaceSample>& samples, int res,
                         int dim, PlyBasis basis);

}  // namespace cpsurf
