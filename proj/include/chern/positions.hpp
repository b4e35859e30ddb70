#pragma once

#include <vector>

#include "chern/lattice.hpp"

namespace chern {

// diagonal position data for the real-space invariants. a positive margin
// drops a frame of cells near an open boundary: those sites leave the traces
// and get unit phase in the twist unitaries, and the effective lengths shrink
// accordingly.
struct Positions {
  RVec rx, ry;               // cell coordinates per site
  std::vector<char> window;  // 1 = kept site
  int lx = 0, ly = 0;
  int lx_eff = 0, ly_eff = 0;
  int margin = 0;

  // coordinates with the dropped sites zeroed
  RVec windowed_x() const;
  RVec windowed_y() const;
};

Positions make_positions(const Lattice& lat, int margin = 0);

// e^{2 pi i r / L_eff} along dir 0 = x or 1 = y; unit phase off the window
CVec twist_unitary(const Positions& pos, int dir);

// e^{i g theta} elementwise for a diagonal generator
CVec phase_diag(const RVec& gen, double theta);

}  // namespace chern
