#include "cpsurf/mapspec.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "json.hpp"

namespace cpsurf {

namespace {

using nlohmann::json;

Complex parse_coefficient(const json& c) {
  if (c.is_number()) return Complex(Real(c.get<double>()), 0);
  if (c.is_array() && c.size() == 2 && c[0].is_number() && c[1].is_number()) {
    return Complex(Real(c[0].get<double>()), Real(c[1].get<double>()));
  }
  throw std::invalid_argument(
      "coefficient must be a number or an [re, im] pair");
}

MapSpec parse_object(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("map file must hold an object");
  if (!j.contains("N") || !j["N"].is_number_integer()) {
    throw std::invalid_argument("map file needs an integer field \"N\"");
  }
  MapSpec spec;
  spec.n = j["N"].get<int>();
  if (spec.n < 2) throw std::invalid_argument("N must be at least 2");

  if (!j.contains("components") || !j["components"].is_array()) {
    throw std::invalid_argument("map file needs an array field \"components\"");
  }
  const json& comps = j["components"];
  if (int(comps.size()) != spec.n) {
    throw std::invalid_argument("\"components\" must list exactly N polynomials");
  }
  std::vector<std::vector<Complex>> coeffs;
  for (const json& poly : comps) {
    if (!poly.is_array() || poly.empty()) {
      throw std::invalid_argument(
          "each component must be a non-empty coefficient list");
    }
    std::vector<Complex> c;
    for (const json& entry : poly) c.push_back(parse_coefficient(entry));
    coeffs.push_back(std::move(c));
  }
  spec.seed = HolomorphicSeed::from_coeffs(coeffs);
  spec.seed.validate();

  if (j.contains("weights")) {
    const json& w = j["weights"];
    if (!w.is_array()) throw std::invalid_argument("\"weights\" must be an array");
    spec.weights.alphas.clear();
    for (const json& entry : w) {
      if (!entry.is_number()) {
        throw std::invalid_argument("weights must be real numbers");
      }
      spec.weights.alphas.push_back(Real(entry.get<double>()));
    }
  } else {
    spec.weights = MixtureWeights::pure(spec.n, 0);
  }
  spec.weights.validate(spec.n);

  if (j.contains("diagonal")) {
    if (!j["diagonal"].is_string()) {
      throw std::invalid_argument("\"diagonal\" must be a string");
    }
    spec.diag = DiagonalChoice::parse(j["diagonal"].get<std::string>());
  }
  spec.diag.validate(spec.n);
  return spec;
}

}  // namespace

MapSpec MapSpec::from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    throw std::invalid_argument(std::string("map file is not valid JSON: ") +
                                e.what());
  }
  return parse_object(j);
}

MapSpec MapSpec::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open map file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json_text(buf.str());
}

std::string MapSpec::str() const {
  std::ostringstream out;
  out << "N=" << n << " f=" << seed.str() << " weights=" << weights.str()
      << " diagonal=" << diag.str();
  return out.str();
}

Surface make_surface(const MapSpec& spec) {
  return make_surface(spec.seed, spec.weights, spec.diag);
}

}  // namespace cpsurf
