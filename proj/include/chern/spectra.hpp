#pragma once

#include "chern/types.hpp"

namespace chern {

struct EigenSystem {
  RVec evals;  // ascending
  CMat evecs;  // columns matching evals
};

// dense hermitian eigendecomposition (divide and conquer). BLAS is pinned to a
// single thread the first time this runs so results do not depend on the
// machine's core count.
EigenSystem eigendecompose(const CMat& h);

struct Filling {
  enum class Kind { lowest_n, below_energy };
  Kind kind = Kind::lowest_n;
  int n = 0;
  double energy = 0.0;

  static Filling lowest(int n) { return {Kind::lowest_n, n, 0.0}; }
  static Filling below(double e) { return {Kind::below_energy, 0, e}; }
};

struct StateSet {
  CMat psi;          // orthonormal columns spanning the kept states
  double gap = 0.0;  // first excluded minus last kept eigenvalue
  int count = 0;
};

// keep the lowest n states, or all states strictly below the given energy.
// an eigenvalue within 1e-9 of the dividing energy means the filling is
// ambiguous and raises a numerical_error.
StateSet select_states(const EigenSystem& es, const Filling& f);

CMat projector(const StateSet& s);

}  // namespace chern
