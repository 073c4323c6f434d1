#pragma once

#include <stdexcept>
#include <string>

namespace kswall {

// Charge cannot be expressed in the scene basis (or the expression is
// ambiguous and the central charge depends on the choice).
struct BasisError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Path through a singularity, coincident scene data, and similar
// chart-geometry degeneracies.
struct GeometryError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Z vanishes where a phase or a flow direction is needed.
struct DegenerateChargeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Query point sits on an active wall; carries the wall identity in what().
struct WallAmbiguityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Operation requested for a charge class it does not support
// (zero boundary, non-primitive where primitive is required, ...).
struct UnsupportedClassError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed wall data (non-unit constant term, inconsistent anchors, ...).
struct InvalidWallError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace kswall
