#include <gtest/gtest.h>

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "chern/models.hpp"
#include "chern/positions.hpp"
#include "chern/realspace.hpp"
#include "chern/runner.hpp"
#include "chern/spectra.hpp"
#include "chern/spin.hpp"
#include "chern/tbc.hpp"

#ifndef CHERN_CLI_PATH
#error "CHERN_CLI_PATH must point at the command line binary"
#endif

namespace {

using namespace chern;

// prints one verdict line per criterion after the test body finishes, with
// uncaught exceptions already recorded as failures by then
class Acceptance : public ::testing::Test {
 protected:
  void criterion(int n, const char* what) {
    n_ = n;
    what_ = what;
  }
  void TearDown() override {
    std::printf("[ACCEPT] criterion %d: %s - %s\n", n_,
                ::testing::Test::HasFailure() ? "FAIL" : "PASS", what_);
    std::fflush(stdout);
  }

 private:
  int n_ = 0;
  const char* what_ = "";
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

StateSet haldane_states(const Lattice& lat, const HaldaneParams& p, const Boundary& bc,
                        const Filling& f) {
  return select_states(eigendecompose(haldane_hamiltonian(lat, p, bc)), f);
}

HaldaneParams reference_point() {
  HaldaneParams p;
  p.t2 = 0.5;
  return p;
}

int run_cli(const std::string& args, std::string* out = nullptr) {
  const std::string cmd = std::string(CHERN_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return -1;
  char buf[4096];
  std::size_t got = 0;
  std::string text;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) text.append(buf, got);
  const int status = pclose(pipe);
  if (out) *out = text;
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST_F(Acceptance, Criterion1QuantizationAtTheReferencePoint) {
  criterion(1, "twist-grid winding and projected-twist index both read 1 at the clean reference point");
  const Lattice lat = make_lattice(11, 11, false);
  const HaldaneParams p = reference_point();
  const Filling f = Filling::lowest(lat.num_cells());

  auto t0 = std::chrono::steady_clock::now();
  const TwistFamily fam = haldane_twist_family(lat, p, Boundary::Kind::tbc_boundary);
  const LinkChern lc = chern_link_variable(fam, f, 30, 30);
  const double link_secs = seconds_since(t0);
  EXPECT_NEAR(lc.inv.value, 1.0, 1e-8);
  EXPECT_EQ(lc.inv.rounded, 1.0);
  EXPECT_LT(link_secs, 300.0);

  t0 = std::chrono::steady_clock::now();
  const StateSet s = haldane_states(lat, p, Boundary::pbc(), f);
  const Positions pos = make_positions(lat);
  const Invariant bott = bott_index(s.psi, twist_unitary(pos, 0), twist_unitary(pos, 1));
  EXPECT_NEAR(bott.value, 1.0, 1e-8);
  EXPECT_LT(seconds_since(t0), 5.0);
}

TEST_F(Acceptance, Criterion2FiniteDifferenceGridRefinement) {
  criterion(2, "finite-difference curvature lands near 1 and improves when the twist grid doubles");
  const Lattice lat = make_lattice(11, 11, false);
  const TwistFamily fam =
      haldane_twist_family(lat, reference_point(), Boundary::Kind::tbc_boundary);
  const Filling f = Filling::lowest(lat.num_cells());
  const double dev30 = std::abs(chern_finite_difference(fam, f, 30, 30).inv.value - 1.0);
  EXPECT_LE(dev30, 0.05);
  const double dev60 = std::abs(chern_finite_difference(fam, f, 60, 60).inv.value - 1.0);
  EXPECT_LT(dev60, dev30);
}

TEST_F(Acceptance, Criterion3CurvatureFlatnessScalingAndTransitionPeak) {
  criterion(3, "curvature flatness falls with system size and peaks at the staggering transition");
  const HaldaneParams ref = reference_point();
  double prev = 1e9;
  for (int l : {6, 8, 10, 12}) {
    const Lattice lat = make_lattice(l, l, false);
    const TwistFamily fam = haldane_twist_family(lat, ref, Boundary::Kind::tbc_boundary);
    const LinkChern lc = chern_link_variable(fam, Filling::lowest(lat.num_cells()), 12, 12);
    EXPECT_LT(lc.inv.flatness, prev) << "L=" << l;
    prev = lc.inv.flatness;
  }

  const Lattice lat = make_lattice(11, 11, false);
  const Filling f = Filling::lowest(lat.num_cells());
  double best_delta = 0.0, best_flatness = -1.0;
  for (const double d : {1.0, 1.4, 1.8, 2.0, 2.1, 2.2, 2.6, 3.0}) {
    HaldaneParams p;  // t2 = 0.2
    p.delta = d;
    const TwistFamily fam = haldane_twist_family(lat, p, Boundary::Kind::tbc_boundary);
    const LinkChern lc = chern_link_variable(fam, f, 15, 15);
    if (lc.inv.flatness > best_flatness) {
      best_flatness = lc.inv.flatness;
      best_delta = d;
    }
  }
  EXPECT_GE(best_delta, 1.8);
  EXPECT_LE(best_delta, 2.3);
}

TEST_F(Acceptance, Criterion4TwistPlacementGaugeEquivalence) {
  criterion(4, "boundary and distributed twist placement give the same integers and curvature fields");
  std::mt19937_64 rng(20240817);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const Lattice lat = make_lattice(5, 5, false);
  const Filling f = Filling::lowest(lat.num_cells());
  // indirect gap at half filling over the whole zone; large t2 at small phi can
  // push the band extrema past each other even when the direct gap stays open
  const auto indirect_gap = [](const HaldaneParams& p) {
    double lower_max = -1e300, upper_min = 1e300;
    for (int i = 0; i < 48; ++i)
      for (int j = 0; j < 48; ++j) {
        Eigen::SelfAdjointEigenSolver<CMat> es(
            haldane_bloch(p, 2.0 * kPi * i / 48, 2.0 * kPi * j / 48));
        lower_max = std::max(lower_max, es.eigenvalues()(0));
        upper_min = std::min(upper_min, es.eigenvalues()(1));
      }
    return upper_min - lower_max;
  };
  int accepted = 0;
  while (accepted < 10) {
    HaldaneParams p;
    p.t2 = 0.2 + 0.4 * u(rng);
    p.phi = 0.3 + (kPi - 0.6) * u(rng);
    const double crit = haldane_critical_delta(p.t2, p.phi);
    p.delta = 1.3 * crit * u(rng);
    if (std::abs(p.delta - crit) < 0.25 * crit) continue;  // keep a healthy direct gap
    if (indirect_gap(p) < 0.2) continue;                   // and an actual insulator
    ++accepted;
    try {
      const LinkChern a = chern_link_variable(
          haldane_twist_family(lat, p, Boundary::Kind::tbc_boundary), f, 7, 7);
      const LinkChern b = chern_link_variable(
          haldane_twist_family(lat, p, Boundary::Kind::tbc_uniform), f, 7, 7);
      EXPECT_EQ(a.inv.rounded, b.inv.rounded);
      const double field_gap = (a.field.flux - b.field.flux).cwiseAbs().maxCoeff();
      EXPECT_LE(field_gap, 1e-8) << "t2=" << p.t2 << " phi=" << p.phi << " delta=" << p.delta;
    } catch (const std::exception& e) {
      ADD_FAILURE() << "point " << accepted << " (t2=" << p.t2 << " phi=" << p.phi
                    << " delta=" << p.delta << " crit=" << crit << "): " << e.what();
    }
  }
}

TEST_F(Acceptance, Criterion5ThreeMethodsAgreeAcrossThePhaseDiagram) {
  criterion(5, "projected-twist, conjugation-ladder and momentum results agree over the phase diagram");
  const Lattice lat = make_lattice(11, 11, false);
  const Filling f = Filling::lowest(lat.num_cells());
  const Positions pos = make_positions(lat);
  const CVec ux = twist_unitary(pos, 0);
  const CVec uy = twist_unitary(pos, 1);
  const auto fc = fd_coefficients(3);

  int kept = 0, agree = 0;
  double invariant_at[9][9];
  bool have[9][9] = {};
  for (int i = 0; i < 9; ++i) {
    for (int j = 0; j < 9; ++j) {
      HaldaneParams p;  // t2 = 0.2
      p.phi = -kPi + 2.0 * kPi * i / 8.0;
      p.delta = -3.0 + 6.0 * j / 8.0;
      const double crit = haldane_critical_delta(p.t2, p.phi);
      if (std::abs(std::abs(p.delta) - crit) < 0.1) continue;  // too close to the boundary
      ++kept;
      const double oracle = momentum_chern_oracle(p, 24).rounded;
      const StateSet s = haldane_states(lat, p, Boundary::pbc(), f);
      const double bott = bott_index(s.psi, ux, uy).rounded;
      const double ladder =
          noncommutative_chern_higher_order(projector(s), ux, uy, fc).rounded;
      if (bott == oracle && ladder == oracle) ++agree;
      invariant_at[i][j] = oracle;
      have[i][j] = true;
    }
  }
  EXPECT_EQ(kept, 70);
  EXPECT_EQ(agree, kept);

  // reversing the flux phase flips every invariant
  for (int i = 0; i < 9; ++i)
    for (int j = 0; j < 9; ++j)
      if (have[i][j] && have[8 - i][j])
        EXPECT_EQ(invariant_at[i][j], -invariant_at[8 - i][j]);
}

TEST_F(Acceptance, Criterion6RealSpaceSizeScaling) {
  criterion(6, "the real-space marker closes on 1 with system size and the projected-twist index is 1 throughout");
  const HaldaneParams p = reference_point();
  double prev = 1e9;
  for (int l : {6, 9, 12}) {
    const Lattice lat = make_lattice(l, l, false);
    const StateSet s = haldane_states(lat, p, Boundary::pbc(), Filling::lowest(lat.num_cells()));
    const Invariant inv = noncommutative_chern(projector(s), make_positions(lat));
    const double dev = std::abs(inv.value - 1.0);
    EXPECT_LT(dev, prev) << "L=" << l;
    if (l == 12) EXPECT_LE(dev, 0.1);
    prev = dev;
  }
  for (int l : {4, 6, 9, 12}) {
    const Lattice lat = make_lattice(l, l, false);
    const StateSet s = haldane_states(lat, p, Boundary::pbc(), Filling::lowest(lat.num_cells()));
    const Positions pos = make_positions(lat);
    const Invariant inv =
        bott_index(s.psi, twist_unitary(pos, 0), twist_unitary(pos, 1));
    EXPECT_EQ(inv.rounded, 1.0) << "L=" << l;
  }
}

TEST_F(Acceptance, Criterion7DisorderEnsembleStatistics) {
  criterion(7, "the index survives weak disorder exactly and collapses under strong disorder");
  RunConfig cfg;
  cfg.method = "bott";
  cfg.lx = cfg.ly = 20;
  cfg.hal.t2 = 0.5;
  cfg.disorder_w = {1.0, 12.0};
  cfg.realizations = 20;
  cfg.seed = 1;
  cfg.workers = 2;
  const auto recs = run(cfg);
  ASSERT_EQ(recs.size(), 44u);

  double weak_mean = kNaN, weak_std = kNaN, strong_mean = kNaN;
  for (const auto& r : recs) {
    if (r.status == "ok") {
      // every successful realization carries an exactly quantized index
      EXPECT_NEAR(r.inv.value, r.inv.rounded, 1e-8);
      if (r.axis[0] == 1.0) EXPECT_EQ(r.inv.rounded, 1.0);
    } else if (r.status == "mean") {
      (r.axis[0] == 1.0 ? weak_mean : strong_mean) = r.inv.value;
    } else if (r.status == "std") {
      if (r.axis[0] == 1.0) weak_std = r.inv.value;
    } else {
      ADD_FAILURE() << "unexpected record status: " << r.status;
    }
  }
  EXPECT_DOUBLE_EQ(weak_mean, 1.0);
  EXPECT_DOUBLE_EQ(weak_std, 0.0);
  EXPECT_LT(strong_mean, 0.5);
}

TEST_F(Acceptance, Criterion8OpenBoundaryTransition) {
  criterion(8, "open-boundary markers with a trimmed frame cross from 1 to 0 at the staggering transition");
  const Lattice lat = make_lattice(16, 16, false);
  const Positions pos = make_positions(lat, 3);
  const CVec ux = twist_unitary(pos, 0);
  const CVec uy = twist_unitary(pos, 1);
  BottOptions open_opts;
  open_opts.min_singular = 0.0;  // edge states legitimately shrink the singular values

  double expected = 1.0;
  for (const double d : {1.6, 2.4}) {
    HaldaneParams p;  // t2 = 0.2, transition near delta 2.08
    p.delta = d;
    const StateSet s = haldane_states(lat, p, Boundary::obc(), Filling::below(0.0));
    const Invariant marker = noncommutative_chern(projector(s), pos);
    EXPECT_EQ(marker.rounded, expected) << "delta=" << d;
    const Invariant bott = bott_index(s.psi, ux, uy, open_opts);
    EXPECT_EQ(bott.rounded, expected) << "delta=" << d;
    expected = 0.0;
  }
}

TEST_F(Acceptance, Criterion9SpinResolvedInvariants) {
  criterion(9, "all four spin-resolved routes read 1 in the spin Hall phase, 0 outside, and match the decoupled limit");
  auto round_half = [](double v) { return std::round(2.0 * v) / 2.0; };

  const Lattice lat = make_lattice(20, 20, true);
  const Positions pos = make_positions(lat);
  KaneMeleParams kp;  // lso = 0.06
  kp.lr = 0.015;
  double expected = 1.0;
  for (const double d : {0.0, 1.5}) {
    kp.delta = d;
    const StateSet s = select_states(eigendecompose(kane_mele_hamiltonian(lat, kp)),
                                     Filling::lowest(2 * lat.num_cells()));
    EXPECT_EQ(spin_chern_split(s.psi, lat, pos, SectorMethod::noncomm).inv.rounded, expected);
    EXPECT_EQ(spin_chern_generalized(s.psi, lat, pos, SectorMethod::noncomm).inv.rounded,
              expected);
    const ChernMatrix cm = chern_number_matrix(s.psi, lat, pos, SectorMethod::noncomm);
    EXPECT_EQ(round_half(cm.spin_chern()), expected);
    expected = 0.0;
  }

  // the twist-sweep reference stays quantized at a smaller size
  const Lattice small = make_lattice(12, 12, true);
  const Filling sf = Filling::lowest(2 * small.num_cells());
  kp.delta = 0.0;
  EXPECT_EQ(spin_chern_tbc_oracle(small, kp, sf, 6, 6).inv.rounded, 1.0);
  kp.delta = 1.5;
  EXPECT_EQ(spin_chern_tbc_oracle(small, kp, sf, 6, 6).inv.rounded, 0.0);

  // without spin mixing the sectors are literal copies of the spinless model
  KaneMeleParams decoupled;  // lr = 0
  const StateSet ds = select_states(eigendecompose(kane_mele_hamiltonian(small, decoupled)),
                                    sf);
  const Positions spos = make_positions(small);
  const SpinChern split = spin_chern_split(ds.psi, small, spos, SectorMethod::noncomm);
  EXPECT_EQ(std::round(split.c_plus), 1.0);
  EXPECT_EQ(std::round(split.c_minus), -1.0);

  const Lattice hal = make_lattice(12, 12, false);
  HaldaneParams hp;
  hp.t2 = decoupled.lso;
  const StateSet hs = haldane_states(hal, hp, Boundary::pbc(), Filling::lowest(hal.num_cells()));
  const Invariant spinless = noncommutative_chern(projector(hs), make_positions(hal));
  EXPECT_NEAR(split.c_plus, spinless.value, 1e-10);
  const SpinChern gen = spin_chern_generalized(ds.psi, small, spos, SectorMethod::noncomm);
  EXPECT_NEAR(gen.inv.value, split.inv.value, 1e-9);
}

TEST_F(Acceptance, Criterion10PropertySuitesAndReproducibility) {
  criterion(10, "structural properties hold and every command line run is byte-identical on rerun");
  const HaldaneParams ref = reference_point();

  {  // projector structure
    const Lattice lat = make_lattice(6, 6, false);
    const StateSet s = haldane_states(lat, ref, Boundary::pbc(), Filling::lowest(36));
    const CMat p = projector(s);
    EXPECT_LT((p * p - p).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_NEAR(p.trace().real(), 36.0, 1e-10);
    EXPECT_LT(std::abs(p.trace().imag()), 1e-12);
  }

  {  // the two cyclic orderings of the projected twist loop agree
    const Lattice lat = make_lattice(9, 9, false);
    const StateSet s = haldane_states(lat, ref, Boundary::pbc(), Filling::lowest(81));
    const Positions pos = make_positions(lat);
    const CVec ux = twist_unitary(pos, 0);
    const CVec uy = twist_unitary(pos, 1);
    BottOptions opt;
    const Invariant a = bott_index(s.psi, ux, uy, opt);
    opt.alternate_order = true;
    const Invariant b = bott_index(s.psi, ux, uy, opt);
    EXPECT_NEAR(a.value, b.value, 1e-9);
  }

  {  // plaquette fluxes stay clear of the branch cut
    const Lattice lat = make_lattice(6, 6, false);
    const TwistFamily fam = haldane_twist_family(lat, ref, Boundary::Kind::tbc_boundary);
    const LinkChern lc = chern_link_variable(fam, Filling::lowest(36), 12, 12);
    EXPECT_LT(lc.field.max_abs_flux(), kPi - 1e-6);
  }

  {  // projected twists drift toward exact unitarity with size
    double prev = 1.0;
    for (int l : {6, 9, 12}) {
      const Lattice lat = make_lattice(l, l, false);
      const StateSet s =
          haldane_states(lat, ref, Boundary::pbc(), Filling::lowest(lat.num_cells()));
      const Positions pos = make_positions(lat);
      const Invariant inv =
          bott_index(s.psi, twist_unitary(pos, 0), twist_unitary(pos, 1));
      EXPECT_LT(inv.max_unitarity_dev, prev) << "L=" << l;
      prev = inv.max_unitarity_dev;
    }
  }

  {  // the transported loop phase winds exactly as often as the twist-grid integer
    const Lattice lat = make_lattice(6, 6, false);
    const Filling f = Filling::lowest(36);
    const Positions pos = make_positions(lat);
    const CVec uy = twist_unitary(pos, 1);
    for (const double d : {0.0, 6.5}) {
      HaldaneParams p = ref;
      p.delta = d;
      const TwistFamily fam = haldane_twist_family(lat, p, Boundary::Kind::tbc_boundary);
      const double winding = wilson_loop(fam, f, uy, 12).winding;
      const double integer = chern_link_variable(fam, f, 8, 8).inv.rounded;
      EXPECT_NEAR(winding, integer, 1e-9) << "delta=" << d;
    }
  }

  // byte-identical reruns across every method and output shape
  const std::vector<std::string> battery = {
      "haldane --method tbc-link --lx 5 --ly 5 --grid 6",
      "haldane --method tbc-fd --lx 4 --ly 4 --grid 8",
      "haldane --method flatness --lx 5 --ly 5 --grid 6",
      "haldane --method noncomm --lx 6 --ly 6 --t2 0.5",
      "haldane --method noncomm-hi --q 2 --lx 6 --ly 6 --t2 0.5",
      "haldane --method bott --lx 6 --ly 6 --t2 0.5",
      "haldane --method bott --lx 8 --ly 8 --obc --margin 2 --t2 0.5",
      "haldane --method oracle --grid 24",
      "haldane --method noncomm --lx 6 --ly 6 --t2 0.5 --disorder-w 0.8,2 --realizations 3 --seed 7",
      "haldane --method tbc-link --lx 4 --ly 4 --grid 6 --sweep delta=0:4:3 --workers 3",
      "haldane --method noncomm --lx 6 --ly 6 --t2 0.5 --format json",
      "kane-mele --method spin-split --lx 6 --ly 6",
      "kane-mele --method spin-generalized --variant bott --lx 6 --ly 6",
      "kane-mele --method chern-matrix --lx 6 --ly 6",
      "kane-mele --method oracle --lx 4 --ly 4 --grid 4",
  };
  for (const auto& args : battery) {
    std::string first, second;
    const int c1 = run_cli(args, &first);
    const int c2 = run_cli(args, &second);
    EXPECT_EQ(c1, c2) << args;
    EXPECT_EQ(first, second) << args;
    EXPECT_FALSE(first.empty()) << args;
  }
}

}  // namespace
