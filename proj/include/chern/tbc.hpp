#pragma once

#include <functional>
#include <vector>

#include "chern/models.hpp"
#include "chern/result.hpp"
#include "chern/spectra.hpp"

namespace chern {

// hamiltonian family over the twist torus. tr_x/tr_y hold per-site transport
// generators (empty = none): eigenframes are rotated by e^{-i(tx g_x + ty g_y)}
// so families built in the uniform gauge become exactly 2 pi periodic and give
// the same curvature field as the boundary gauge, not just the same total
struct TwistFamily {
  std::function<CMat(double, double)> build;
  RVec tr_x, tr_y;
  int dim = 0;
};

TwistFamily haldane_twist_family(const Lattice& lat, const HaldaneParams& p,
                                 Boundary::Kind gauge, const Disorder* dis = nullptr);
TwistFamily kane_mele_twist_family(const Lattice& lat, const KaneMeleParams& p,
                                   Boundary::Kind gauge, bool spin_twist_x = false,
                                   const Disorder* dis = nullptr);

struct LinkChern {
  Invariant inv;
  CurvatureField field;
};

// overlap-determinant loops composed around every plaquette of an nx x ny
// twist grid; the total winding is an exact integer for any admissible grid
LinkChern chern_link_variable(const TwistFamily& fam, const Filling& f, int nx, int ny);

// first-order projector differences on the same grid; approximate, with the
// deviation shrinking as the grid refines. field.flux holds the integrated
// curvature per cell just like the link version.
LinkChern chern_finite_difference(const TwistFamily& fam, const Filling& f, int nx, int ny);

struct WilsonLoop {
  std::vector<double> phase;  // principal-branch loop phase at each theta_x node
  double winding = 0.0;       // accumulated winding over the closed cycle / 2 pi
};

// berry phase of the kept frame around the full theta_y cycle, transported
// along theta_x; u_y is the 2 pi twist unitary along y
WilsonLoop wilson_loop(const TwistFamily& fam, const Filling& f, const CVec& u_y, int nx);

// momentum-space reference for the clean periodic model, lower band on an
// nk x nk grid
Invariant momentum_chern_oracle(const HaldaneParams& p, int nk = 24);

}  // namespace chern
