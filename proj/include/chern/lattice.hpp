#pragma once

#include <vector>

#include "chern/types.hpp"

namespace chern {

// Honeycomb lattice on an lx x ly grid of two-site cells, optionally doubled
// by spin. Orbital index o = (cy*lx + cx)*2 + sub with sub 0 = A, 1 = B; site
// index = o*S + spin with S the spin multiplicity. Cartesian frame (used only
// for bond directions): a1 = (sqrt3, 0), a2 = (sqrt3/2, 3/2), B offset
// (sqrt3/2, 1/2).
struct Bond {
  int i = 0, j = 0;      // orbital endpoints, stored once per pair, i -> j
  int wx = 0, wy = 0;    // +-1 when the hop wraps around the cell grid
  int dx = 0, dy = 0;    // cell displacement of the hop before wrapping
  double ex = 0, ey = 0; // unit vector along the bond (nearest neighbours only)
  int nu = 0;            // orientation sign of the second-neighbour path, 0 for NN
};

struct Lattice {
  int lx = 0, ly = 0;
  bool spinful = false;
  std::vector<Bond> nn;   // 3 per cell, A(c) -> B(c + d)
  std::vector<Bond> nnn;  // 6 per cell, sublattice-preserving
  RVec cell_x, cell_y;    // cell coordinate of each site
  RVec stagger;           // +1 on A sites, -1 on B sites
  RVec sz;                // +1 spin up, -1 down (all +1 when spinless)

  int spin_count() const { return spinful ? 2 : 1; }
  int num_cells() const { return lx * ly; }
  int num_orbitals() const { return 2 * lx * ly; }
  int num_sites() const { return num_orbitals() * spin_count(); }
  int orbital(int cx, int cy, int sub) const { return (cy * lx + cx) * 2 + sub; }
  int site(int o, int spin) const { return o * spin_count() + spin; }
};

Lattice make_lattice(int lx, int ly, bool spinful = false);

}  // namespace chern
