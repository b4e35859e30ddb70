#pragma once

#include "chern/positions.hpp"
#include "chern/result.hpp"
#include "chern/spectra.hpp"

namespace chern {

struct FdCoefficients {
  int q = 1;
  RVec c;
};

// weights for the symmetric conjugation ladder: the first moment is 1 and the
// odd moments through order 2q-1 vanish, so longer steps cancel the leading
// periodization error
FdCoefficients fd_coefficients(int q);

// Tr(P [[gx, P], [gy, P]]) where the commutator entries carry the generator
// differences wrapped to the nearest image of the given periods (pass 0 to
// keep raw differences). an optional window restricts the trace.
cdouble commutator_chern_trace(const CMat& p, const RVec& gx, double period_x,
                               const RVec& gy, double period_y,
                               const std::vector<char>* window = nullptr);

// real-space chern number from the occupied projector. on a torus (margin 0)
// displacements are wrapped to the shortest image; with a margin the raw
// displacements are kept and the trace runs over the kept window, normalized
// by the window size.
Invariant noncommutative_chern(const CMat& p, const Positions& pos);

// conjugation-ladder refinement of the same quantity driven by the twist
// unitaries; q = 1 is the plain single-conjugation form
Invariant noncommutative_chern_higher_order(const CMat& p, const CVec& ux, const CVec& uy,
                                            const FdCoefficients& fc);

struct BottOptions {
  bool alternate_order = false;    // x y x' y' product instead of y' x y x'
  double min_singular = 0.1;       // error below this; <= 0 disables the check
};

struct BottPhases {
  double phase_sum = 0.0;  // sum of principal eigenphases of the loop product
  double min_singular = 0.0;
  double max_unitarity_dev = 0.0;
};

// polar-unitarized projected twist loop; shared by the plain and the
// spin-resolved indices
BottPhases bott_loop_phases(const CMat& psi, const CVec& ux, const CVec& uy,
                            const BottOptions& opt);

Invariant bott_index(const CMat& psi, const CVec& ux, const CVec& uy,
                     const BottOptions& opt = {});

}  // namespace chern
