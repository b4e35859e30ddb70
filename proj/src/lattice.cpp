#include "chern/lattice.hpp"

#include <cmath>

namespace chern {

namespace {

constexpr int kNnDisp[3][2] = {{0, 0}, {-1, 0}, {0, -1}};
constexpr int kNnnDisp[3][2] = {{1, 0}, {-1, 1}, {0, -1}};

int wrap_sign(int c, int l) { return c < 0 ? -1 : (c >= l ? 1 : 0); }

}  // namespace

Lattice make_lattice(int lx, int ly, bool spinful) {
  if (lx < 2 || ly < 2) throw config_error("lattice needs lx, ly >= 2");
  Lattice lat;
  lat.lx = lx;
  lat.ly = ly;
  lat.spinful = spinful;

  const double s32 = std::sqrt(3.0) / 2.0;
  const double nn_vec[3][2] = {{s32, 0.5}, {-s32, 0.5}, {0.0, -1.0}};

  lat.nn.reserve(3 * lx * ly);
  lat.nnn.reserve(6 * lx * ly);
  for (int cy = 0; cy < ly; ++cy) {
    for (int cx = 0; cx < lx; ++cx) {
      const int oa = lat.orbital(cx, cy, 0);
      for (int k = 0; k < 3; ++k) {
        const int dx = kNnDisp[k][0], dy = kNnDisp[k][1];
        const int tx = cx + dx, ty = cy + dy;
        Bond b;
        b.i = oa;
        b.j = lat.orbital((tx % lx + lx) % lx, (ty % ly + ly) % ly, 1);
        b.wx = wrap_sign(tx, lx);
        b.wy = wrap_sign(ty, ly);
        b.dx = dx;
        b.dy = dy;
        b.ex = nn_vec[k][0];
        b.ey = nn_vec[k][1];
        lat.nn.push_back(b);
      }
      for (int sub = 0; sub < 2; ++sub) {
        const int o = lat.orbital(cx, cy, sub);
        for (int k = 0; k < 3; ++k) {
          const int dx = kNnnDisp[k][0], dy = kNnnDisp[k][1];
          const int tx = cx + dx, ty = cy + dy;
          Bond b;
          b.i = o;
          b.j = lat.orbital((tx % lx + lx) % lx, (ty % ly + ly) % ly, sub);
          b.wx = wrap_sign(tx, lx);
          b.wy = wrap_sign(ty, ly);
          b.dx = dx;
          b.dy = dy;
          b.nu = sub == 0 ? 1 : -1;
          lat.nnn.push_back(b);
        }
      }
    }
  }

  const int n = lat.num_sites();
  const int s = lat.spin_count();
  lat.cell_x.resize(n);
  lat.cell_y.resize(n);
  lat.stagger.resize(n);
  lat.sz.setOnes(n);
  for (int o = 0; o < lat.num_orbitals(); ++o) {
    const int cell = o / 2;
    for (int sp = 0; sp < s; ++sp) {
      const int site = lat.site(o, sp);
      lat.cell_x[site] = cell % lx;
      lat.cell_y[site] = cell / lx;
      lat.stagger[site] = o % 2 == 0 ? 1.0 : -1.0;
      if (spinful) lat.sz[site] = sp == 0 ? 1.0 : -1.0;
    }
  }
  return lat;
}

}  // namespace chern
