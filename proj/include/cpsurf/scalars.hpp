#pragma once

#include <complex>
#include <stdexcept>

namespace cpsurf {

// Coefficient field: complex floating point at the widest native precision.
using Real = long double;
using Complex = std::complex<Real>;

// Central tolerances / limits. All coefficient thresholds are relative to the
// largest coefficient magnitude of the polynomial they apply to.
inline constexpr int kDegreeCap = 64;        // max degree per variable, hard error
inline constexpr Real kPruneRel = 1e-13L;    // coefficient pruning after add/mul
inline constexpr Real kZeroLevelRel = 1e-10L; // tower level counts as zero below this
inline constexpr Real kDivideRel = 1e-10L;   // exact-division remainder bound
inline constexpr Real kSingularDen = 1e-8L;  // |den(z)| below this (den normalized) = singular

// Raised when an operation would push a polynomial past kDegreeCap.
struct degree_cap_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised when evaluating at a point too close to a denominator zero.
struct singular_point_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised when two internal computation routes disagree beyond tolerance.
struct consistency_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace cpsurf
