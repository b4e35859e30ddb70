#pragma once

#include "chern/realspace.hpp"
#include "chern/tbc.hpp"

namespace chern {

// occupied frame split by the sign of the projected spin matrix
struct SpinSectors {
  CMat psi_plus, psi_minus;
  double sigma_gap = 0.0;  // smallest |eigenvalue| of the projected spin
};

SpinSectors split_spin_sectors(const CMat& psi, const RVec& sz);

enum class SectorMethod { noncomm, bott };

struct SpinChern {
  Invariant inv;  // inv.value is the spin chern number
  double c_plus = kNaN, c_minus = kNaN;
};

// half the difference of the per-sector invariants
SpinChern spin_chern_split(const CMat& psi, const Lattice& lat, const Positions& pos,
                           SectorMethod method);

// single calculation against the spin-weighted x generator; no sector split
SpinChern spin_chern_generalized(const CMat& psi, const Lattice& lat, const Positions& pos,
                                 SectorMethod method);

// spin-resolved 2x2 decomposition over per-spin position generators
struct ChernMatrix {
  double up_up = kNaN, up_dn = kNaN, dn_up = kNaN, dn_dn = kNaN;
  double spin_chern() const { return 0.5 * (up_up + up_dn - dn_up - dn_dn); }
};

ChernMatrix chern_number_matrix(const CMat& psi, const Lattice& lat, const Positions& pos,
                                SectorMethod method);

// integration reference: opposite-spin boundary twists swept over the torus;
// quantized in half-integer steps independent of system size
SpinChern spin_chern_tbc_oracle(const Lattice& lat, const KaneMeleParams& p,
                                const Filling& f, int nx, int ny);

}  // namespace chern
