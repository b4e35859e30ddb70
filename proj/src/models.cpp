#include "chern/models.hpp"

#include <cmath>
#include <random>

namespace chern {

double haldane_critical_delta(double t2, double phi) {
  return 6.0 * std::sqrt(3.0) * t2 * std::abs(std::sin(phi));
}

Boundary Boundary::obc() {
  Boundary b;
  b.kind = Kind::obc;
  return b;
}

Boundary Boundary::boundary(double tx, double ty, bool spin_twist) {
  Boundary b;
  b.kind = Kind::tbc_boundary;
  b.tx = tx;
  b.ty = ty;
  b.spin_twist_x = spin_twist;
  return b;
}

Boundary Boundary::uniform(double tx, double ty) {
  Boundary b;
  b.kind = Kind::tbc_uniform;
  b.tx = tx;
  b.ty = ty;
  return b;
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t w_index,
                          std::uint64_t realization) {
  auto mix = [](std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  };
  std::uint64_t s = base;
  s = mix(s + 0x9e3779b97f4a7c15ull * (w_index + 1));
  s = mix(s + 0x9e3779b97f4a7c15ull * (realization + 1));
  return s;
}

Disorder make_disorder(const Lattice& lat, double w, std::uint64_t seed) {
  if (w < 0) throw config_error("disorder strength must be >= 0");
  Disorder d;
  d.w = w;
  d.eps.resize(lat.num_orbitals());
  std::mt19937_64 rng(seed);
  for (auto& e : d.eps) {
    const double u = double(rng() >> 11) * 0x1.0p-53;  // [0, 1)
    e = w * (u - 0.5);
  }
  return d;
}

namespace {

bool drops(const Boundary& bc, const Bond& b) {
  return bc.kind == Boundary::Kind::obc && (b.wx != 0 || b.wy != 0);
}

// phase picked up by the i -> j hop
cdouble hop_phase(const Boundary& bc, const Bond& b, int lx, int ly) {
  switch (bc.kind) {
    case Boundary::Kind::pbc:
    case Boundary::Kind::obc:
      return {1.0, 0.0};
    case Boundary::Kind::tbc_boundary:
      return std::exp(cdouble(0.0, bc.tx * b.wx + bc.ty * b.wy));
    case Boundary::Kind::tbc_uniform:
      return std::exp(cdouble(0.0, bc.tx * b.dx / lx + bc.ty * b.dy / ly));
  }
  return {1.0, 0.0};
}

}  // namespace

CMat haldane_hamiltonian(const Lattice& lat, const HaldaneParams& p,
                         const Boundary& bc, const Disorder* dis) {
  if (lat.spinful) throw config_error("haldane model expects a spinless lattice");
  if (bc.spin_twist_x) throw config_error("spin twist needs a spinful model");
  if (dis && int(dis->eps.size()) != lat.num_orbitals())
    throw config_error("disorder size does not match the lattice");

  const int n = lat.num_sites();
  CMat h = CMat::Zero(n, n);
  for (int o = 0; o < n; ++o) {
    double e = 0.5 * p.delta * lat.stagger[o];
    if (dis) e += dis->eps[o];
    h(o, o) = e;
  }
  for (const auto& b : lat.nn) {
    if (drops(bc, b)) continue;
    const cdouble a = -p.t1 * hop_phase(bc, b, lat.lx, lat.ly);
    h(b.j, b.i) += a;
    h(b.i, b.j) += std::conj(a);
  }
  for (const auto& b : lat.nnn) {
    if (drops(bc, b)) continue;
    const cdouble a =
        -p.t2 * std::exp(cdouble(0.0, b.nu * p.phi)) * hop_phase(bc, b, lat.lx, lat.ly);
    h(b.j, b.i) += a;
    h(b.i, b.j) += std::conj(a);
  }
  return h;
}

CMat kane_mele_hamiltonian(const Lattice& lat, const KaneMeleParams& p,
                           const Boundary& bc, const Disorder* dis) {
  if (!lat.spinful) throw config_error("kane-mele model expects a spinful lattice");
  if (bc.spin_twist_x && bc.kind != Boundary::Kind::tbc_boundary)
    throw config_error("the spin twist is only defined for boundary placement");
  if (dis && int(dis->eps.size()) != lat.num_orbitals())
    throw config_error("disorder size does not match the lattice");

  const int n = lat.num_sites();
  CMat h = CMat::Zero(n, n);
  for (int o = 0; o < lat.num_orbitals(); ++o) {
    double e = 0.5 * p.delta * (o % 2 == 0 ? 1.0 : -1.0);
    if (dis) e += dis->eps[o];
    h(lat.site(o, 0), lat.site(o, 0)) = e;
    h(lat.site(o, 1), lat.site(o, 1)) = e;
  }

  // adds the 2x2 spin block t (rows: target spin, cols: source spin) for the
  // hop i -> j plus its conjugate
  auto add_block = [&](const Bond& b, const Eigen::Matrix2cd& t) {
    Eigen::Matrix2cd blk = t;
    if (bc.spin_twist_x && b.wx != 0) {
      // opposite-sign boundary twist per source spin replaces the scalar
      // e^{i tx wx}; the y factor stays scalar
      blk *= std::exp(cdouble(0.0, bc.ty * b.wy));
      blk.col(0) *= std::exp(cdouble(0.0, bc.tx * b.wx));
      blk.col(1) *= std::exp(cdouble(0.0, -bc.tx * b.wx));
    } else {
      blk *= hop_phase(bc, b, lat.lx, lat.ly);
    }
    for (int sr = 0; sr < 2; ++sr)
      for (int sc = 0; sc < 2; ++sc) {
        h(lat.site(b.j, sr), lat.site(b.i, sc)) += blk(sr, sc);
        h(lat.site(b.i, sc), lat.site(b.j, sr)) += std::conj(blk(sr, sc));
      }
  };

  const cdouble I(0.0, 1.0);
  for (const auto& b : lat.nn) {
    if (drops(bc, b)) continue;
    // (sigma x e)_z for the bond direction, entering the stored hop with a
    // minus sign so that the reversed hop carries the +i lr form
    Eigen::Matrix2cd t;
    t << -p.t, -I * p.lr * cdouble(b.ey, b.ex),
        -I * p.lr * cdouble(b.ey, -b.ex), -p.t;
    add_block(b, t);
  }
  for (const auto& b : lat.nnn) {
    if (drops(bc, b)) continue;
    Eigen::Matrix2cd t;
    t << -I * double(b.nu) * p.lso, 0.0, 0.0, I * double(b.nu) * p.lso;
    add_block(b, t);
  }
  return h;
}

CMat haldane_bloch(const HaldaneParams& p, double kx, double ky) {
  constexpr int nn_disp[3][2] = {{0, 0}, {-1, 0}, {0, -1}};
  constexpr int nnn_disp[3][2] = {{1, 0}, {-1, 1}, {0, -1}};
  CMat h = CMat::Zero(2, 2);
  h(0, 0) = 0.5 * p.delta;
  h(1, 1) = -0.5 * p.delta;
  for (const auto& d : nn_disp) {
    const cdouble a = -p.t1 * std::exp(cdouble(0.0, kx * d[0] + ky * d[1]));
    h(1, 0) += a;
    h(0, 1) += std::conj(a);
  }
  for (int sub = 0; sub < 2; ++sub) {
    const int nu = sub == 0 ? 1 : -1;
    for (const auto& d : nnn_disp) {
      const cdouble a = -p.t2 * std::exp(cdouble(0.0, nu * p.phi)) *
                        std::exp(cdouble(0.0, kx * d[0] + ky * d[1]));
      h(sub, sub) += a + std::conj(a);  // stored hop plus its reverse
    }
  }
  return h;
}

}  // namespace chern
