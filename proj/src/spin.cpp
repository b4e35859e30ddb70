#include "chern/spin.hpp"

#include <cmath>

namespace chern {

namespace {

double round_half(double v) { return std::round(2.0 * v) / 2.0; }

RVec masked(const RVec& r, const RVec& sz, double keep) {
  RVec g = r;
  for (int i = 0; i < g.size(); ++i)
    if (sz[i] != keep) g[i] = 0.0;
  return g;
}

}  // namespace

SpinSectors split_spin_sectors(const CMat& psi, const RVec& sz) {
  if (psi.rows() != sz.size()) throw config_error("spin diagonal does not match the frame");
  const CMat m = psi.adjoint() * (sz.asDiagonal() * psi);
  Eigen::SelfAdjointEigenSolver<CMat> es(m);
  const RVec& w = es.eigenvalues();
  SpinSectors out;
  out.sigma_gap = w.cwiseAbs().minCoeff();
  if (out.sigma_gap < 1e-6)
    throw numerical_error("projected spin spectrum touched zero; sectors are not separable");
  int n_minus = 0;
  while (n_minus < w.size() && w[n_minus] < 0) ++n_minus;
  out.psi_minus = psi * es.eigenvectors().leftCols(n_minus);
  out.psi_plus = psi * es.eigenvectors().rightCols(w.size() - n_minus);
  return out;
}

SpinChern spin_chern_split(const CMat& psi, const Lattice& lat, const Positions& pos,
                           SectorMethod method) {
  if (!lat.spinful) throw config_error("spin sector split needs a spinful lattice");
  const SpinSectors sec = split_spin_sectors(psi, lat.sz);
  SpinChern out;
  if (method == SectorMethod::noncomm) {
    const CMat pp = sec.psi_plus * sec.psi_plus.adjoint();
    const CMat pm = sec.psi_minus * sec.psi_minus.adjoint();
    const Invariant ip = noncommutative_chern(pp, pos);
    const Invariant im = noncommutative_chern(pm, pos);
    out.c_plus = ip.value;
    out.c_minus = im.value;
    out.inv.residue = std::max(ip.residue, im.residue);
  } else {
    const CVec ux = twist_unitary(pos, 0);
    const CVec uy = twist_unitary(pos, 1);
    const Invariant ip = bott_index(sec.psi_plus, ux, uy);
    const Invariant im = bott_index(sec.psi_minus, ux, uy);
    out.c_plus = ip.value;
    out.c_minus = im.value;
    out.inv.min_singular = std::min(ip.min_singular, im.min_singular);
    out.inv.max_unitarity_dev = std::max(ip.max_unitarity_dev, im.max_unitarity_dev);
  }
  out.inv.value = 0.5 * (out.c_plus - out.c_minus);
  out.inv.rounded = round_half(out.inv.value);
  return out;
}

SpinChern spin_chern_generalized(const CMat& psi, const Lattice& lat, const Positions& pos,
                                 SectorMethod method) {
  if (!lat.spinful) throw config_error("the spin-weighted twist needs a spinful lattice");
  SpinChern out;
  if (method == SectorMethod::noncomm) {
    const CMat p = psi * psi.adjoint();
    const RVec gx = pos.rx.cwiseProduct(lat.sz);
    const cdouble tr = commutator_chern_trace(p, gx, pos.lx, pos.ry, pos.ly,
                                              pos.margin > 0 ? &pos.window : nullptr);
    const cdouble val = cdouble(0.0, kPi) / double(pos.lx_eff * pos.ly_eff) * tr;
    out.inv.value = val.real();
    out.inv.residue = std::abs(val.imag());
    if (out.inv.residue >= 1e-9)
      throw numerical_error("spin-weighted commutator trace failed to stay real");
    out.inv.rounded = round_half(out.inv.value);
  } else {
    const RVec gx = pos.windowed_x().cwiseProduct(lat.sz);
    const CVec ux = phase_diag(gx, 2.0 * kPi / pos.lx_eff);
    const CVec uy = twist_unitary(pos, 1);
    const BottPhases ph = bott_loop_phases(psi, ux, uy, {});
    out.inv.value = ph.phase_sum / (4.0 * kPi);
    out.inv.rounded = round_half(out.inv.value);
    out.inv.min_singular = ph.min_singular;
    out.inv.max_unitarity_dev = ph.max_unitarity_dev;
    if (std::abs(out.inv.value - out.inv.rounded) > 1e-8)
      throw numerical_error("spin-weighted loop failed to quantize in half-integers");
  }
  return out;
}

ChernMatrix chern_number_matrix(const CMat& psi, const Lattice& lat, const Positions& pos,
                                SectorMethod method) {
  if (!lat.spinful) throw config_error("the spin-resolved matrix needs a spinful lattice");
  ChernMatrix cm;
  double* slots[2][2] = {{&cm.up_up, &cm.up_dn}, {&cm.dn_up, &cm.dn_dn}};
  const double signs[2] = {1.0, -1.0};

  if (method == SectorMethod::noncomm) {
    const CMat p = psi * psi.adjoint();
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        const RVec gx = masked(pos.rx, lat.sz, signs[a]);
        const RVec gy = masked(pos.ry, lat.sz, signs[b]);
        const cdouble tr = commutator_chern_trace(p, gx, pos.lx, gy, pos.ly,
                                                  pos.margin > 0 ? &pos.window : nullptr);
        const cdouble val = cdouble(0.0, 2.0 * kPi) / double(pos.lx_eff * pos.ly_eff) * tr;
        if (std::abs(val.imag()) >= 1e-9)
          throw numerical_error("spin-resolved commutator trace failed to stay real");
        *slots[a][b] = val.real();
      }
    return cm;
  }

  // per-spin projected twists, unitarized once and combined across sectors
  CMat vx[2], vy[2];
  for (int s = 0; s < 2; ++s) {
    const CVec ux = phase_diag(masked(pos.windowed_x(), lat.sz, signs[s]), 2.0 * kPi / pos.lx_eff);
    const CVec uy = phase_diag(masked(pos.windowed_y(), lat.sz, signs[s]), 2.0 * kPi / pos.ly_eff);
    auto unitarize = [&](const CMat& m) {
      Eigen::BDCSVD<CMat> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
      if (svd.singularValues().minCoeff() <= 0.1)
        throw numerical_error("projected twist lost injectivity; gap or localization too weak");
      return CMat(svd.matrixU() * svd.matrixV().adjoint());
    };
    vx[s] = unitarize(psi.adjoint() * (ux.asDiagonal() * psi));
    vy[s] = unitarize(psi.adjoint() * (uy.asDiagonal() * psi));
  }
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      const CMat loop = vy[b].adjoint() * vx[a] * vy[b] * vx[a].adjoint();
      Eigen::ComplexEigenSolver<CMat> es(loop, false);
      double sum = 0.0;
      for (int i = 0; i < es.eigenvalues().size(); ++i) {
        const double ph = std::arg(es.eigenvalues()[i]);
        if (std::abs(std::abs(ph) - kPi) < 1e-6)
          throw numerical_error("loop eigenphase landed on the branch cut");
        sum += ph;
      }
      *slots[a][b] = sum / (2.0 * kPi);
    }
  return cm;
}

SpinChern spin_chern_tbc_oracle(const Lattice& lat, const KaneMeleParams& p,
                                const Filling& f, int nx, int ny) {
  if (!lat.spinful) throw config_error("the twist-sweep reference needs a spinful lattice");
  const TwistFamily fam =
      kane_mele_twist_family(lat, p, Boundary::Kind::tbc_boundary, true);
  const LinkChern link = chern_link_variable(fam, f, nx, ny);
  SpinChern out;
  out.inv = link.inv;
  out.inv.value = 0.5 * link.inv.value;
  out.inv.rounded = round_half(out.inv.value);
  out.inv.flatness = kNaN;
  return out;
}

}  // namespace chern
