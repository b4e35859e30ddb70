#include "chern/spectra.hpp"

#include <cmath>
#include <limits>
#include <lapacke.h>

extern "C" void openblas_set_num_threads(int);

namespace chern {

EigenSystem eigendecompose(const CMat& h) {
  static const bool single_thread = [] {
    openblas_set_num_threads(1);
    return true;
  }();
  (void)single_thread;

  const int n = int(h.rows());
  if (n == 0 || h.cols() != n) throw config_error("eigendecompose needs a square matrix");
  EigenSystem es;
  es.evecs = h;
  es.evals.resize(n);
  const int info = LAPACKE_zheevd(
      LAPACK_COL_MAJOR, 'V', 'L', n,
      reinterpret_cast<lapack_complex_double*>(es.evecs.data()), n, es.evals.data());
  if (info != 0)
    throw numerical_error("eigensolver failed with info=" + std::to_string(info));
  return es;
}

StateSet select_states(const EigenSystem& es, const Filling& f) {
  const int n = int(es.evals.size());
  int count = 0;
  switch (f.kind) {
    case Filling::Kind::lowest_n:
      if (f.n < 1 || f.n > n)
        throw config_error("state count must lie in [1, dim]");
      count = f.n;
      break;
    case Filling::Kind::below_energy:
      for (int i = 0; i < n; ++i) {
        if (std::abs(es.evals[i] - f.energy) <= 1e-9)
          throw numerical_error("an eigenvalue sits on the dividing energy");
        if (es.evals[i] < f.energy) ++count;
      }
      if (count == 0) throw numerical_error("no states below the dividing energy");
      if (count == n) throw numerical_error("all states below the dividing energy");
      break;
  }
  StateSet s;
  s.count = count;
  s.gap = count < n ? es.evals[count] - es.evals[count - 1]
                    : std::numeric_limits<double>::infinity();
  s.psi = es.evecs.leftCols(count);
  return s;
}

CMat projector(const StateSet& s) { return s.psi * s.psi.adjoint(); }

}  // namespace chern
