#include "chern/positions.hpp"

#include <cmath>

namespace chern {

RVec Positions::windowed_x() const {
  RVec r = rx;
  for (int i = 0; i < r.size(); ++i)
    if (!window[i]) r[i] = 0.0;
  return r;
}

RVec Positions::windowed_y() const {
  RVec r = ry;
  for (int i = 0; i < r.size(); ++i)
    if (!window[i]) r[i] = 0.0;
  return r;
}

Positions make_positions(const Lattice& lat, int margin) {
  if (margin < 0) throw config_error("margin must be >= 0");
  if (2 * margin >= std::min(lat.lx, lat.ly))
    throw config_error("margin leaves no cells in the window");
  Positions p;
  p.rx = lat.cell_x;
  p.ry = lat.cell_y;
  p.lx = lat.lx;
  p.ly = lat.ly;
  p.margin = margin;
  p.lx_eff = lat.lx - 2 * margin;
  p.ly_eff = lat.ly - 2 * margin;
  p.window.assign(lat.num_sites(), 1);
  if (margin > 0) {
    for (int i = 0; i < lat.num_sites(); ++i) {
      const double x = p.rx[i], y = p.ry[i];
      if (x < margin || x >= lat.lx - margin || y < margin || y >= lat.ly - margin)
        p.window[i] = 0;
    }
  }
  return p;
}

CVec twist_unitary(const Positions& pos, int dir) {
  const RVec r = dir == 0 ? pos.windowed_x() : pos.windowed_y();
  const int l = dir == 0 ? pos.lx_eff : pos.ly_eff;
  return phase_diag(r, 2.0 * kPi / l);
}

CVec phase_diag(const RVec& gen, double theta) {
  CVec u(gen.size());
  for (int i = 0; i < gen.size(); ++i) u[i] = std::exp(cdouble(0.0, theta * gen[i]));
  return u;
}

}  // namespace chern
