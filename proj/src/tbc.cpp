#include "chern/tbc.hpp"

#include <cmath>

namespace chern {

namespace {

void check_tbc_gauge(Boundary::Kind gauge) {
  if (gauge != Boundary::Kind::tbc_boundary && gauge != Boundary::Kind::tbc_uniform)
    throw config_error("twist families need a boundary or uniform gauge");
}

RVec cell_fraction(const Lattice& lat, int dir) {
  const RVec& r = dir == 0 ? lat.cell_x : lat.cell_y;
  return r / double(dir == 0 ? lat.lx : lat.ly);
}

// eigenframe with the kept column count pinned so a filling change across the
// twist grid is caught instead of silently changing the bundle rank
StateSet frame_at(const TwistFamily& fam, const Filling& f, double tx, double ty,
                  int expect_count, double* min_gap) {
  StateSet s = select_states(eigendecompose(fam.build(tx, ty)), f);
  if (expect_count > 0 && s.count != expect_count)
    throw numerical_error("kept state count changed across the twist grid");
  if (s.gap <= 1e-10)
    throw numerical_error("spectral gap closed on the twist grid");
  if (min_gap) *min_gap = std::min(*min_gap, s.gap);
  if (fam.tr_x.size() > 0) {
    CVec ph(fam.tr_x.size());
    for (int i = 0; i < ph.size(); ++i)
      ph[i] = std::exp(cdouble(0.0, -(tx * fam.tr_x[i] + ty * fam.tr_y[i])));
    s.psi = ph.asDiagonal() * s.psi;
  }
  return s;
}

cdouble overlap_det(const CMat& a, const CMat& b) {
  const cdouble d = (a.adjoint() * b).determinant();
  if (std::abs(d) < 1e-12)
    throw numerical_error("overlap determinant collapsed; refine the twist grid");
  return d;
}

double principal(double x) { return std::remainder(x, 2.0 * kPi); }

}  // namespace

TwistFamily haldane_twist_family(const Lattice& lat, const HaldaneParams& p,
                                 Boundary::Kind gauge, const Disorder* dis) {
  check_tbc_gauge(gauge);
  TwistFamily fam;
  fam.dim = lat.num_sites();
  if (gauge == Boundary::Kind::tbc_uniform) {
    fam.tr_x = cell_fraction(lat, 0);
    fam.tr_y = cell_fraction(lat, 1);
  }
  if (dis) {
    Disorder d = *dis;
    fam.build = [lat, p, gauge, d](double tx, double ty) {
      Boundary bc;
      bc.kind = gauge;
      bc.tx = tx;
      bc.ty = ty;
      return haldane_hamiltonian(lat, p, bc, &d);
    };
  } else {
    fam.build = [lat, p, gauge](double tx, double ty) {
      Boundary bc;
      bc.kind = gauge;
      bc.tx = tx;
      bc.ty = ty;
      return haldane_hamiltonian(lat, p, bc);
    };
  }
  return fam;
}

TwistFamily kane_mele_twist_family(const Lattice& lat, const KaneMeleParams& p,
                                   Boundary::Kind gauge, bool spin_twist_x,
                                   const Disorder* dis) {
  check_tbc_gauge(gauge);
  if (spin_twist_x && gauge != Boundary::Kind::tbc_boundary)
    throw config_error("the spin twist is only defined for boundary placement");
  TwistFamily fam;
  fam.dim = lat.num_sites();
  if (gauge == Boundary::Kind::tbc_uniform) {
    fam.tr_x = cell_fraction(lat, 0);
    fam.tr_y = cell_fraction(lat, 1);
  }
  Disorder d;
  const bool has_dis = dis != nullptr;
  if (has_dis) d = *dis;
  fam.build = [lat, p, gauge, spin_twist_x, d, has_dis](double tx, double ty) {
    Boundary bc;
    bc.kind = gauge;
    bc.tx = tx;
    bc.ty = ty;
    bc.spin_twist_x = spin_twist_x;
    return kane_mele_hamiltonian(lat, p, bc, has_dis ? &d : nullptr);
  };
  return fam;
}

LinkChern chern_link_variable(const TwistFamily& fam, const Filling& f, int nx, int ny) {
  if (nx < 2 || ny < 2) throw config_error("twist grid needs at least 2x2 cells");

  double min_gap = std::numeric_limits<double>::infinity();
  auto theta_x = [nx](int a) { return 2.0 * kPi * a / nx; };
  auto theta_y = [ny](int b) { return 2.0 * kPi * b / ny; };

  auto make_row = [&](int a, int expect) {
    std::vector<CMat> row(ny);
    for (int b = 0; b < ny; ++b)
      row[b] = frame_at(fam, f, theta_x(a), theta_y(b), expect, &min_gap).psi;
    return row;
  };

  // transported frames are periodic, so links close cyclically on both axes
  auto ylinks = [&](const std::vector<CMat>& row) {
    std::vector<double> yl(ny);
    for (int b = 0; b < ny; ++b) yl[b] = std::arg(overlap_det(row[b], row[(b + 1) % ny]));
    return yl;
  };

  std::vector<CMat> row0 = make_row(0, 0);
  const int count = int(row0[0].cols());
  std::vector<double> yl0 = ylinks(row0);

  CurvatureField field;
  field.nx = nx;
  field.ny = ny;
  field.flux.setZero(nx, ny);

  std::vector<CMat> row = row0;
  std::vector<double> yl = yl0;
  for (int a = 0; a < nx; ++a) {
    std::vector<CMat> next_row;
    std::vector<double> yl_next;
    const bool seam = a + 1 >= nx;
    if (seam) {
      next_row = row0;
      yl_next = yl0;
    } else {
      next_row = make_row(a + 1, count);
      yl_next = ylinks(next_row);
    }
    std::vector<double> xl(ny);
    for (int b = 0; b < ny; ++b) xl[b] = std::arg(overlap_det(row[b], next_row[b]));
    for (int b = 0; b < ny; ++b) {
      const double flux = principal(xl[b] + yl_next[b] - xl[(b + 1) % ny] - yl[b]);
      if (std::abs(flux) > kPi - 1e-6)
        throw numerical_error("plaquette flux reached the branch cut; refine the twist grid");
      field.flux(a, b) = flux;
    }
    row = std::move(next_row);
    yl = std::move(yl_next);
  }

  LinkChern out;
  out.field = std::move(field);
  out.inv.value = out.field.flux.sum() / (2.0 * kPi);
  out.inv.rounded = std::round(out.inv.value);
  if (std::abs(out.inv.value - out.inv.rounded) > 1e-8)
    throw numerical_error("link-variable total failed to quantize");
  out.inv.gap = min_gap;
  out.inv.flatness = out.field.flatness();
  return out;
}

LinkChern chern_finite_difference(const TwistFamily& fam, const Filling& f, int nx, int ny) {
  if (nx < 2 || ny < 2) throw config_error("twist grid needs at least 2x2 cells");

  double min_gap = std::numeric_limits<double>::infinity();
  const double dx = 2.0 * kPi / nx;
  const double dy = 2.0 * kPi / ny;

  int count = 0;
  auto make_row = [&](int a) {
    std::vector<CMat> row(ny + 1);
    for (int b = 0; b <= ny; ++b) {
      const StateSet s = frame_at(fam, f, dx * a, dy * b, count, &min_gap);
      if (count == 0) count = s.count;
      row[b] = projector(s);
    }
    return row;
  };

  CurvatureField field;
  field.nx = nx;
  field.ny = ny;
  field.flux.setZero(nx, ny);
  double residue = 0.0;

  std::vector<CMat> row = make_row(0);
  for (int a = 0; a < nx; ++a) {
    std::vector<CMat> next = make_row(a + 1);
    for (int b = 0; b < ny; ++b) {
      const CMat dpx = (next[b] - row[b]) / dx;
      const CMat dpy = (row[b + 1] - row[b]) / dy;
      const CMat m1 = dpx * dpy;
      const CMat m2 = dpy * dpx;
      const cdouble z1 = (row[b].array() * m1.transpose().array()).sum();
      const cdouble z2 = (row[b].array() * m2.transpose().array()).sum();
      const cdouble tf = (z1 - z2) / cdouble(0.0, 1.0);
      residue = std::max(residue, std::abs(tf.imag()));
      if (std::abs(tf.imag()) >= 1e-9)
        throw numerical_error("projector curvature trace failed to stay real");
      field.flux(a, b) = tf.real() * dx * dy;
    }
    row = std::move(next);
  }

  LinkChern out;
  out.field = std::move(field);
  out.inv.value = out.field.flux.sum() / (2.0 * kPi);
  out.inv.rounded = std::round(out.inv.value);
  out.inv.gap = min_gap;
  out.inv.flatness = out.field.flatness();
  out.inv.residue = residue;
  return out;
}

WilsonLoop wilson_loop(const TwistFamily& fam, const Filling& f, const CVec& u_y, int nx) {
  if (nx < 4) throw config_error("wilson loop needs at least 4 nodes");
  WilsonLoop w;
  w.phase.resize(nx);
  int count = 0;
  for (int k = 0; k < nx; ++k) {
    const StateSet s = frame_at(fam, f, 2.0 * kPi * k / nx, 0.0, count, nullptr);
    count = s.count;
    const cdouble det = (s.psi.adjoint() * (u_y.asDiagonal() * s.psi)).determinant();
    if (std::abs(det) < 1e-12)
      throw numerical_error("loop overlap determinant collapsed");
    w.phase[k] = std::arg(det);
  }
  double total = 0.0;
  for (int k = 0; k < nx; ++k)
    total += principal(w.phase[(k + 1) % nx] - w.phase[k]);
  w.winding = total / (2.0 * kPi);
  return w;
}

Invariant momentum_chern_oracle(const HaldaneParams& p, int nk) {
  if (nk < 4) throw config_error("momentum grid needs at least 4 points");
  std::vector<Eigen::Vector2cd> v(nk * nk);
  double min_gap = std::numeric_limits<double>::infinity();
  for (int a = 0; a < nk; ++a)
    for (int b = 0; b < nk; ++b) {
      const CMat h = haldane_bloch(p, 2.0 * kPi * a / nk, 2.0 * kPi * b / nk);
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(h);
      min_gap = std::min(min_gap, es.eigenvalues()[1] - es.eigenvalues()[0]);
      if (es.eigenvalues()[1] - es.eigenvalues()[0] <= 1e-10)
        throw numerical_error("momentum-space gap closed");
      v[a * nk + b] = es.eigenvectors().col(0);
    }
  auto link = [&](int i, int j) {
    const cdouble d = v[i].dot(v[j]);  // conjugates the left argument
    if (std::abs(d) < 1e-12)
      throw numerical_error("momentum link collapsed; refine the grid");
    return std::arg(d);
  };
  double total = 0.0;
  for (int a = 0; a < nk; ++a)
    for (int b = 0; b < nk; ++b) {
      const int a2 = (a + 1) % nk, b2 = (b + 1) % nk;
      const double s = link(a * nk + b, a2 * nk + b) + link(a2 * nk + b, a2 * nk + b2) +
                       link(a2 * nk + b2, a * nk + b2) + link(a * nk + b2, a * nk + b);
      total += principal(s);
    }
  Invariant inv;
  inv.value = total / (2.0 * kPi);
  inv.rounded = std::round(inv.value);
  if (std::abs(inv.value - inv.rounded) > 1e-8)
    throw numerical_error("momentum-space total failed to quantize");
  inv.gap = min_gap;
  return inv;
}

}  // namespace chern
