#include "cpsurf/export_io.hpp"

#include <Eigen/Dense>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace cpsurf {

namespace {

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_f32(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.9g", double(float(v)));
  return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

double parse_double(const std::string& s) {
  const char* begin = s.c_str();
  char* end = nullptr;
  double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0') {
    throw std::invalid_argument("csv: not a number: \"" + s + "\"");
  }
  return v;
}

}  // namespace

CsvResult write_csv(std::ostream& out, const std::vector<SurfaceSample>& samples,
                    int dim) {
  if (dim < 3) throw std::invalid_argument("csv: dimension must be >= 3");
  out << "zeta_re,zeta_im";
  for (int i = 1; i <= dim; ++i) out << ",X" << i;
  out << ",g,K\n";

  CsvResult res;
  for (const auto& s : samples) {
    if (!s.x_ok || !s.k_ok || int(s.X.size()) != dim) {
      ++res.skipped;
      continue;
    }
    out << fmt17(double(s.zeta.real())) << ',' << fmt17(double(s.zeta.imag()));
    for (double x : s.X) out << ',' << fmt17(x);
    out << ',' << fmt17(s.g) << ',' << fmt17(s.K) << '\n';
    ++res.written;
  }
  return res;
}

CsvResult write_csv_file(const std::string& path,
                         const std::vector<SurfaceSample>& samples, int dim) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  CsvResult res = write_csv(out, samples, dim);
  out.flush();
  if (!out) throw std::runtime_error("failed writing output file: " + path);
  return res;
}

std::vector<SurfaceSample> read_csv_file(const std::string& path,
                                         int* dim_out) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open csv file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("csv: empty file");
  auto header = split_csv_line(line);
  if (header.size() < 7 || header[0] != "zeta_re" || header[1] != "zeta_im" ||
      header[header.size() - 2] != "g" || header.back() != "K") {
    throw std::invalid_argument("csv: unrecognized header");
  }
  const int dim = int(header.size()) - 4;
  for (int i = 1; i <= dim; ++i) {
    if (header[std::size_t(i) + 1] != "X" + std::to_string(i)) {
      throw std::invalid_argument("csv: unrecognized header");
    }
  }

  std::vector<SurfaceSample> samples;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto cells = split_csv_line(line);
    if (cells.size() != header.size()) {
      throw std::invalid_argument("csv: row width does not match header");
    }
    SurfaceSample s;
    s.zeta = Complex(Real(parse_double(cells[0])), Real(parse_double(cells[1])));
    s.X.resize(std::size_t(dim));
    for (int i = 0; i < dim; ++i) {
      s.X[std::size_t(i)] = parse_double(cells[std::size_t(i) + 2]);
    }
    s.g = parse_double(cells[cells.size() - 2]);
    s.K = parse_double(cells.back());
    s.x_ok = s.k_ok = true;
    samples.push_back(std::move(s));
  }
  if (dim_out) *dim_out = dim;
  return samples;
}

PlyResult write_ply_file(const std::string& path,
                         const std::vector<SurfaceSample>& samples, int res,
                         int dim, PlyBasis basis) {
  if (res < 3) throw std::invalid_argument("ply: grid resolution must be >= 3");
  if (dim < 3) throw std::invalid_argument("ply: dimension must be >= 3");
  if (int(samples.size()) != res * res) {
    throw std::invalid_argument("ply: sample count must equal res*res");
  }

  std::vector<int> index(samples.size(), -1);
  std::vector<const SurfaceSample*> kept;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    if (s.x_ok && s.k_ok && int(s.X.size()) == dim) {
      index[i] = int(kept.size());
      kept.push_back(&s);
    }
  }

  // positions: raw leading components, or the top-variance orthogonal frame
  using DMatrix = Eigen::MatrixXd;
  DMatrix pos(kept.size(), 3);
  if (basis == PlyBasis::FirstThree) {
    for (std::size_t r = 0; r < kept.size(); ++r) {
      for (int c = 0; c < 3; ++c) pos(Eigen::Index(r), c) = kept[r]->X[std::size_t(c)];
    }
  } else {
    DMatrix cloud(kept.size(), dim);
    for (std::size_t r = 0; r < kept.size(); ++r) {
      for (int c = 0; c < dim; ++c) {
        cloud(Eigen::Index(r), c) = kept[r]->X[std::size_t(c)];
      }
    }
    if (kept.size() >= 2) {
      Eigen::RowVectorXd mean = cloud.colwise().mean();
      DMatrix centered = cloud.rowwise() - mean;
      Eigen::JacobiSVD<DMatrix> svd(centered, Eigen::ComputeThinV);
      DMatrix v = svd.matrixV().leftCols(3 <= dim ? 3 : dim);
      // canonical signs: the largest entry of each axis points up
      for (int c = 0; c < v.cols(); ++c) {
        Eigen::Index arg = 0;
        v.col(c).cwiseAbs().maxCoeff(&arg);
        if (v(arg, c) < 0) v.col(c) = -v.col(c);
      }
      pos = centered * v;
    } else {
      pos.setZero();
    }
  }

  std::ostringstream body;
  for (std::size_t r = 0; r < kept.size(); ++r) {
    const auto& s = *kept[r];
    body << fmt_f32(pos(Eigen::Index(r), 0)) << ' '
         << fmt_f32(pos(Eigen::Index(r), 1)) << ' '
         << fmt_f32(pos(Eigen::Index(r), 2));
    body << ' ' << fmt_f32(double(s.zeta.real())) << ' '
         << fmt_f32(double(s.zeta.imag()));
    if (basis == PlyBasis::FirstThree) {
      for (int c = 3; c < dim; ++c) body << ' ' << fmt_f32(s.X[std::size_t(c)]);
    }
    body << ' ' << fmt_f32(s.g) << ' ' << fmt_f32(s.K) << '\n';
  }

  int faces = 0;
  std::ostringstream face_body;
  auto emit = [&](int a, int b, int c) {
    if (index[std::size_t(a)] >= 0 && index[std::size_t(b)] >= 0 &&
        index[std::size_t(c)] >= 0) {
      face_body << "3 " << index[std::size_t(a)] << ' '
                << index[std::size_t(b)] << ' ' << index[std::size_t(c)]
                << '\n';
      ++faces;
    }
  };
  for (int iy = 0; iy + 1 < res; ++iy) {
    for (int ix = 0; ix + 1 < res; ++ix) {
      int a = iy * res + ix;
      int b = a + 1;
      int c = a + res;
      int d = c + 1;
      emit(a, b, d);
      emit(a, d, c);
    }
  }

  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << "ply\nformat ascii 1.0\n";
  out << "comment immersion samples over the chart |zeta| <= R\n";
  out << "element vertex " << kept.size() << '\n';
  out << "property float x\nproperty float y\nproperty float z\n";
  out << "property float zeta_re\nproperty float zeta_im\n";
  if (basis == PlyBasis::FirstThree) {
    for (int c = 4; c <= dim; ++c) out << "property float X" << c << '\n';
  }
  out << "property float g\nproperty float K\n";
  out << "element face " << faces << '\n';
  out << "property list uchar int vertex_indices\n";
  out << "end_header\n";
  out << body.str() << face_body.str();
  out.flush();
  if (!out) throw std::runtime_error("failed writing output file: " + path);

  PlyResult r;
  r.vertices = int(kept.size());
  r.faces = faces;
  r.skipped = int(samples.size()) - int(kept.size());
  return r;
}

}  // namespace cpsurf
