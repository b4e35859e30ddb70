#pragma once

#include <cstdint>

#include "chern/lattice.hpp"

namespace chern {

struct HaldaneParams {
  double t1 = 1.0;
  double t2 = 0.2;
  double phi = 0.5 * kPi;
  double delta = 0.0;  // sublattice staggering, on-site energy +-delta/2
};

struct KaneMeleParams {
  double t = 1.0;
  double lso = 0.06;  // spin-orbit second-neighbour coupling
  double lr = 0.0;    // in-plane spin-flip coupling on NN bonds
  double delta = 0.0;
};

// staggering where the clean gap closes: 6 sqrt(3) t2 |sin phi|
double haldane_critical_delta(double t2, double phi);

struct Boundary {
  enum class Kind { pbc, tbc_boundary, tbc_uniform, obc };
  Kind kind = Kind::pbc;
  double tx = 0.0, ty = 0.0;
  // give the two spin species opposite-sign twists along x (spinful models,
  // boundary placement only)
  bool spin_twist_x = false;

  static Boundary pbc() { return {}; }
  static Boundary obc();
  static Boundary boundary(double tx, double ty, bool spin_twist = false);
  static Boundary uniform(double tx, double ty);
};

// quenched on-site energies, one per orbital (shared by both spins)
struct Disorder {
  double w = 0.0;  // eps drawn uniformly from [-w/2, w/2]
  std::vector<double> eps;
};

// stable per-realization seed from (base, disorder strength index, realization
// index); two splitmix64 finalizer rounds
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t w_index,
                          std::uint64_t realization);

// mt19937_64 stream, top 53 bits mapped to [-1/2, 1/2) and scaled by w; one
// draw per orbital in index order
Disorder make_disorder(const Lattice& lat, double w, std::uint64_t seed);

CMat haldane_hamiltonian(const Lattice& lat, const HaldaneParams& p,
                         const Boundary& bc = {}, const Disorder* dis = nullptr);
CMat kane_mele_hamiltonian(const Lattice& lat, const KaneMeleParams& p,
                           const Boundary& bc = {}, const Disorder* dis = nullptr);

// 2x2 momentum-space block of the clean periodic model; k measured against the
// cell index axes, so the Brillouin zone is [0, 2pi)^2
CMat haldane_bloch(const HaldaneParams& p, double kx, double ky);

}  // namespace chern
