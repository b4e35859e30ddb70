#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "chern/runner.hpp"

namespace chern {

namespace {

double axis_num(const std::string& s, const char* what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw config_error(std::string("bad ") + what + " in sweep spec: " + s);
  }
}

SweepAxis parse_sweep(const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos || eq == 0)
    throw config_error("sweep wants name=start:stop:count, got: " + spec);
  SweepAxis ax;
  ax.name = spec.substr(0, eq);
  const std::string rest = spec.substr(eq + 1);
  const auto c1 = rest.find(':');
  const auto c2 = c1 == std::string::npos ? std::string::npos : rest.find(':', c1 + 1);
  if (c2 == std::string::npos || rest.find(':', c2 + 1) != std::string::npos)
    throw config_error("sweep wants name=start:stop:count, got: " + spec);
  ax.start = axis_num(rest.substr(0, c1), "start");
  ax.stop = axis_num(rest.substr(c1 + 1, c2 - c1 - 1), "stop");
  const double n = axis_num(rest.substr(c2 + 1), "count");
  ax.count = int(std::lround(n));
  if (ax.count < 1 || double(ax.count) != n)
    throw config_error("sweep count must be a positive integer: " + spec);
  return ax;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
  RunConfig cfg;
  std::string sweep1, sweep2;
  std::vector<int> grid;
  double delta = 0.0;

  CLI::App app{"topological invariants of finite honeycomb tight-binding models"};
  app.set_config("--config", "", "read options from a key=value file");
  app.allow_config_extras(false);

  app.add_option("model", cfg.model, "haldane or kane-mele")->required();
  app.add_option("--method", cfg.method,
                 "tbc-link | tbc-fd | flatness | noncomm | noncomm-hi | bott | "
                 "spin-split | spin-generalized | chern-matrix | oracle");
  app.add_option("--lx", cfg.lx, "cells along the first lattice direction");
  app.add_option("--ly", cfg.ly, "cells along the second lattice direction");
  app.add_option("--t1", cfg.hal.t1, "nearest-neighbor hopping (haldane)");
  app.add_option("--t2", cfg.hal.t2, "complex next-neighbor hopping magnitude (haldane)");
  app.add_option("--phi", cfg.hal.phi, "next-neighbor hopping phase (haldane)");
  app.add_option("--delta", delta, "staggered sublattice potential");
  app.add_option("--t", cfg.km.t, "nearest-neighbor hopping (kane-mele)");
  app.add_option("--lso", cfg.km.lso, "spin-orbit coupling (kane-mele)");
  app.add_option("--lr", cfg.km.lr, "rashba coupling (kane-mele)");
  app.add_option("--gauge", cfg.gauge, "twist insertion: boundary or uniform");
  app.add_option("--variant", cfg.variant,
                 "sector evaluator for spin methods: noncomm or bott");
  app.add_option("--grid", grid, "twist/momentum grid, one or two integers")
      ->expected(1, 2);
  app.add_option("--q", cfg.q, "difference order for noncomm-hi");
  app.add_option("--filling", cfg.filling, "auto | half | n:<count> | ef:<energy>");
  app.add_flag("--obc", cfg.obc, "open boundaries instead of a torus");
  app.add_option("--margin", cfg.margin, "edge cells excluded from open-boundary traces");
  app.add_option("--disorder-w", cfg.disorder_w, "onsite disorder strengths")
      ->delimiter(',');
  app.add_option("--realizations", cfg.realizations, "disorder samples per strength");
  app.add_option("--seed", cfg.seed, "base seed for the disorder stream");
  app.add_option("--sweep", sweep1, "first sweep axis, name=start:stop:count");
  app.add_option("--sweep2", sweep2, "second sweep axis, name=start:stop:count");
  app.add_option("--out", cfg.out, "output path (stdout when empty)");
  app.add_option("--format", cfg.format, "csv or json");
  app.add_option("--workers", cfg.workers, "threads across sweep/ensemble points");
  app.add_flag("--timing", cfg.timing, "report wall time per point (off keeps reruns byte-identical)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (app.count("--delta")) cfg.hal.delta = cfg.km.delta = delta;
    if (!grid.empty()) {
      cfg.grid_x = grid[0];
      cfg.grid_y = grid.size() > 1 ? grid[1] : grid[0];
    }
    if (!sweep1.empty()) cfg.sweep.push_back(parse_sweep(sweep1));
    if (!sweep2.empty()) {
      if (sweep1.empty()) throw config_error("--sweep2 without --sweep");
      cfg.sweep.push_back(parse_sweep(sweep2));
    }
    const bool km = cfg.model == "kane-mele";
    for (const char* o : {"--t1", "--t2", "--phi"})
      if (km && app.count(o)) throw config_error(std::string(o) + " is not a kane-mele parameter");
    for (const char* o : {"--t", "--lso", "--lr"})
      if (!km && app.count(o)) throw config_error(std::string(o) + " is not a haldane parameter");

    const std::vector<ResultRecord> recs = run(cfg);
    const std::string text =
        cfg.format == "json" ? to_json_text(cfg, recs) : to_csv(cfg, recs);
    if (cfg.out.empty()) {
      std::cout << text;
    } else {
      std::ofstream f(cfg.out, std::ios::binary);
      if (!f) throw config_error("cannot open output path: " + cfg.out);
      f << text;
    }
    return status_exit_code(recs);
  } catch (const config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace chern
