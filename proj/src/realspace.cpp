#include "chern/realspace.hpp"

#include <cmath>

namespace chern {

FdCoefficients fd_coefficients(int q) {
  if (q < 1 || q > 12) throw config_error("refinement depth must lie in [1, 12]");
  RMat v(q, q);
  for (int m = 1; m <= q; ++m)
    for (int n = 1; n <= q; ++n) v(m - 1, n - 1) = std::pow(double(n), 2 * m - 1);
  RVec e = RVec::Zero(q);
  e[0] = 1.0;
  FdCoefficients fc;
  fc.q = q;
  fc.c = v.partialPivLu().solve(e);
  return fc;
}

namespace {

double wrap_min_image(double d, double period) {
  if (period <= 0) return d;
  d = std::fmod(d + 0.5 * period, period);
  if (d < 0) d += period;
  d -= 0.5 * period;
  // exactly half a period is equidistant from both images; averaging them
  // keeps the weight antisymmetric, so the commutator stays anti-hermitian
  // and the trace stays imaginary even with disorder
  if (std::abs(d + 0.5 * period) < 1e-12) return 0.0;
  return d;
}

// [g, P] with the displacement factor g_a - g_b wrapped per entry
CMat weighted_commutator(const CMat& p, const RVec& g, double period) {
  CMat m(p.rows(), p.cols());
  for (int b = 0; b < p.cols(); ++b)
    for (int a = 0; a < p.rows(); ++a)
      m(a, b) = wrap_min_image(g[a] - g[b], period) * p(a, b);
  return m;
}

}  // namespace

cdouble commutator_chern_trace(const CMat& p, const RVec& gx, double period_x,
                               const RVec& gy, double period_y,
                               const std::vector<char>* window) {
  const CMat a = weighted_commutator(p, gx, period_x);
  const CMat b = weighted_commutator(p, gy, period_y);
  const CMat m = a * b - b * a;
  if (!window) return (p.array() * m.transpose().array()).sum();
  cdouble tr = 0.0;
  for (int i = 0; i < p.rows(); ++i)
    if ((*window)[i]) tr += (p.row(i) * m.col(i)).value();
  return tr;
}

Invariant noncommutative_chern(const CMat& p, const Positions& pos) {
  const bool open = pos.margin > 0;
  const cdouble tr = commutator_chern_trace(p, pos.rx, open ? 0.0 : double(pos.lx),
                                            pos.ry, open ? 0.0 : double(pos.ly),
                                            open ? &pos.window : nullptr);
  const cdouble val = cdouble(0.0, 2.0 * kPi) / double(pos.lx_eff * pos.ly_eff) * tr;
  Invariant inv;
  inv.value = val.real();
  inv.rounded = std::round(inv.value);
  inv.residue = std::abs(val.imag());
  if (inv.residue >= 1e-9)
    throw numerical_error("commutator trace failed to stay real");
  return inv;
}

Invariant noncommutative_chern_higher_order(const CMat& p, const CVec& ux, const CVec& uy,
                                            const FdCoefficients& fc) {
  const int n = int(p.rows());
  if (ux.size() != n || uy.size() != n)
    throw config_error("twist unitaries do not match the projector");

  // D = sum_n c_n/2 (U^n P U^-n - U^-n P U^n), diagonal U given elementwise
  auto ladder = [&](const CVec& u) {
    CMat d = CMat::Zero(n, n);
    CVec un = CVec::Ones(n);
    for (int k = 1; k <= fc.q; ++k) {
      un = un.cwiseProduct(u);
      const CMat up = un.asDiagonal() * p * un.conjugate().asDiagonal();
      const CMat down = un.conjugate().asDiagonal() * p * un.asDiagonal();
      d += (0.5 * fc.c[k - 1]) * (up - down);
    }
    return d;
  };
  const CMat dx = ladder(ux);
  const CMat dy = ladder(uy);
  const CMat m = dx * dy - dy * dx;
  const cdouble tr = (p.array() * m.transpose().array()).sum();
  const cdouble val = tr / cdouble(0.0, 2.0 * kPi);
  Invariant inv;
  inv.value = val.real();
  inv.rounded = std::round(inv.value);
  inv.residue = std::abs(val.imag());
  if (inv.residue >= 1e-9)
    throw numerical_error("conjugation-ladder trace failed to stay real");
  return inv;
}

BottPhases bott_loop_phases(const CMat& psi, const CVec& ux, const CVec& uy,
                            const BottOptions& opt) {
  const CMat px = psi.adjoint() * (ux.asDiagonal() * psi);
  const CMat py = psi.adjoint() * (uy.asDiagonal() * psi);

  BottPhases out;
  out.min_singular = std::numeric_limits<double>::infinity();
  auto unitarize = [&](const CMat& m) {
    Eigen::BDCSVD<CMat> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const RVec& s = svd.singularValues();
    out.min_singular = std::min(out.min_singular, s[s.size() - 1]);
    out.max_unitarity_dev =
        std::max(out.max_unitarity_dev, (s.array() - 1.0).abs().maxCoeff());
    return CMat(svd.matrixU() * svd.matrixV().adjoint());
  };
  const CMat vx = unitarize(px);
  const CMat vy = unitarize(py);
  if (opt.min_singular > 0 && out.min_singular <= opt.min_singular)
    throw numerical_error("projected twist lost injectivity; gap or localization too weak");

  const CMat loop = opt.alternate_order ? CMat(vx * vy * vx.adjoint() * vy.adjoint())
                                        : CMat(vy.adjoint() * vx * vy * vx.adjoint());
  Eigen::ComplexEigenSolver<CMat> es(loop, false);
  double sum = 0.0;
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    const double ph = std::arg(es.eigenvalues()[i]);
    if (std::abs(std::abs(ph) - kPi) < 1e-6)
      throw numerical_error("loop eigenphase landed on the branch cut");
    sum += ph;
  }
  out.phase_sum = sum;
  return out;
}

Invariant bott_index(const CMat& psi, const CVec& ux, const CVec& uy,
                     const BottOptions& opt) {
  const BottPhases ph = bott_loop_phases(psi, ux, uy, opt);
  Invariant inv;
  inv.value = ph.phase_sum / (2.0 * kPi);
  inv.rounded = std::round(inv.value);
  inv.min_singular = ph.min_singular;
  inv.max_unitarity_dev = ph.max_unitarity_dev;
  if (std::abs(inv.value - inv.rounded) > 1e-8)
    throw numerical_error("loop phase sum failed to quantize");
  return inv;
}

}  // namespace chern
