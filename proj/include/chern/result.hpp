#pragma once

#include <cmath>
#include <limits>

#include "chern/types.hpp"

namespace chern {

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Invariant {
  double value = kNaN;
  double rounded = kNaN;  // nearest quantized value (integer, or half-integer
                          // for the combined spin quantities)
  double gap = kNaN;
  double flatness = kNaN;
  double min_singular = kNaN;
  double max_unitarity_dev = kNaN;
  double residue = kNaN;  // size of the imaginary part dropped from a trace
};

// per-plaquette loop phases over the twist torus; the total is 2 pi times the
// invariant
struct CurvatureField {
  int nx = 0, ny = 0;
  RMat flux;

  double spacing_x() const { return 2.0 * kPi / nx; }
  double spacing_y() const { return 2.0 * kPi / ny; }
  double curvature(int a, int b) const { return flux(a, b) / (spacing_x() * spacing_y()); }
  double flatness() const {
    return flux.maxCoeff() / (spacing_x() * spacing_y()) -
           flux.minCoeff() / (spacing_x() * spacing_y());
  }
  double max_abs_flux() const { return flux.cwiseAbs().maxCoeff(); }
};

}  // namespace chern
