#include "chern/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>

#include <json.hpp>

#include "chern/parallel.hpp"
#include "chern/positions.hpp"
#include "chern/realspace.hpp"
#include "chern/spectra.hpp"
#include "chern/spin.hpp"
#include "chern/tbc.hpp"

namespace chern {

namespace {

using nlohmann::json;

const char* const kMethods[] = {"tbc-link", "tbc-fd",     "flatness",
                                "noncomm",  "noncomm-hi", "bott",
                                "spin-split", "spin-generalized", "chern-matrix",
                                "oracle"};

bool is_spin_method(const std::string& m) {
  return m == "spin-split" || m == "spin-generalized" || m == "chern-matrix";
}

bool is_twist_method(const std::string& m) {
  return m == "tbc-link" || m == "tbc-fd" || m == "flatness";
}

bool spinful_model(const RunConfig& cfg) { return cfg.model == "kane-mele"; }

double parse_num(const std::string& s) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw config_error("trailing characters in number: " + s);
    return v;
  } catch (const config_error&) {
    throw;
  } catch (const std::exception&) {
    throw config_error("not a number: " + s);
  }
}

Filling resolve_filling(const RunConfig& cfg, int num_sites) {
  std::string f = cfg.filling;
  if (f == "auto") f = cfg.obc ? "ef:0" : "half";
  if (f == "half") return Filling::lowest(num_sites / 2);
  if (f.rfind("n:", 0) == 0) return Filling::lowest(int(std::lround(parse_num(f.substr(2)))));
  if (f.rfind("ef:", 0) == 0) return Filling::below(parse_num(f.substr(3)));
  throw config_error("unknown filling: " + f);
}

void apply_axis(RunConfig& cfg, const std::string& name, double v) {
  auto as_size = [](double x) {
    const int i = int(std::lround(x));
    if (i < 2) throw config_error("size axis values must be >= 2");
    return i;
  };
  if (name == "lx")
    cfg.lx = as_size(v);
  else if (name == "ly")
    cfg.ly = as_size(v);
  else if (name == "l")
    cfg.lx = cfg.ly = as_size(v);
  else if (name == "delta")
    cfg.hal.delta = cfg.km.delta = v;
  else if (cfg.model == "haldane" && name == "t1")
    cfg.hal.t1 = v;
  else if (cfg.model == "haldane" && name == "t2")
    cfg.hal.t2 = v;
  else if (cfg.model == "haldane" && name == "phi")
    cfg.hal.phi = v;
  else if (cfg.model == "kane-mele" && name == "t")
    cfg.km.t = v;
  else if (cfg.model == "kane-mele" && name == "lso")
    cfg.km.lso = v;
  else if (cfg.model == "kane-mele" && name == "lr")
    cfg.km.lr = v;
  else
    throw config_error("unknown sweep axis for this model: " + name);
}

void validate(const RunConfig& cfg) {
  if (cfg.model != "haldane" && cfg.model != "kane-mele")
    throw config_error("unknown model: " + cfg.model);
  if (std::find(std::begin(kMethods), std::end(kMethods), cfg.method) == std::end(kMethods))
    throw config_error("unknown method: " + cfg.method);
  if (is_spin_method(cfg.method) && !spinful_model(cfg))
    throw config_error(cfg.method + " needs the kane-mele model");
  if (cfg.variant != "noncomm" && cfg.variant != "bott")
    throw config_error("variant must be noncomm or bott");
  if (cfg.gauge != "boundary" && cfg.gauge != "uniform")
    throw config_error("gauge must be boundary or uniform");
  if (cfg.format != "csv" && cfg.format != "json")
    throw config_error("format must be csv or json");
  if (cfg.lx < 2 || cfg.ly < 2) throw config_error("lattice needs lx, ly >= 2");
  if (cfg.grid_x < 2 || cfg.grid_y < 2) throw config_error("grid needs at least 2 per axis");
  if (cfg.q < 1 || cfg.q > 12) throw config_error("q must lie in [1, 12]");
  if (cfg.workers < 1) throw config_error("workers must be >= 1");
  if (cfg.obc && (is_twist_method(cfg.method) || cfg.method == "oracle"))
    throw config_error(cfg.method + " is incompatible with open boundaries");
  if (cfg.obc && cfg.margin < 1) throw config_error("open boundaries need margin >= 1");
  if (!cfg.disorder_w.empty() && cfg.realizations < 1)
    throw config_error("disorder ensembles need realizations >= 1");
  if (cfg.disorder_w.empty() && cfg.realizations > 0)
    throw config_error("realizations given without disorder strengths");
  if (!cfg.disorder_w.empty() && cfg.method == "oracle")
    throw config_error("the reference method is defined for clean systems only");
  if (!cfg.disorder_w.empty() && !cfg.sweep.empty())
    throw config_error("disorder ensembles cannot be combined with sweeps");
  for (const double w : cfg.disorder_w)
    if (w < 0) throw config_error("disorder strengths must be >= 0");
  if (cfg.sweep.size() > 2) throw config_error("at most two sweep axes");
  for (const auto& ax : cfg.sweep) {
    if (ax.count < 1) throw config_error("sweep axes need count >= 1");
    RunConfig probe = cfg;
    apply_axis(probe, ax.name, ax.start);  // surfaces unknown names up front
  }
  resolve_filling(cfg, 2 * cfg.lx * cfg.ly * (spinful_model(cfg) ? 2 : 1));
}

Invariant evaluate(const RunConfig& cfg, const Disorder* dis) {
  const Lattice lat = make_lattice(cfg.lx, cfg.ly, spinful_model(cfg));
  const Filling fill = resolve_filling(cfg, lat.num_sites());
  const auto gauge = cfg.gauge == "uniform" ? Boundary::Kind::tbc_uniform
                                            : Boundary::Kind::tbc_boundary;

  if (is_twist_method(cfg.method)) {
    const TwistFamily fam = spinful_model(cfg)
                                ? kane_mele_twist_family(lat, cfg.km, gauge, false, dis)
                                : haldane_twist_family(lat, cfg.hal, gauge, dis);
    const LinkChern lc = cfg.method == "tbc-fd"
                             ? chern_finite_difference(fam, fill, cfg.grid_x, cfg.grid_y)
                             : chern_link_variable(fam, fill, cfg.grid_x, cfg.grid_y);
    return lc.inv;
  }
  if (cfg.method == "oracle") {
    if (spinful_model(cfg))
      return spin_chern_tbc_oracle(lat, cfg.km, fill, cfg.grid_x, cfg.grid_y).inv;
    return momentum_chern_oracle(cfg.hal, cfg.grid_x);
  }

  const Boundary bc = cfg.obc ? Boundary::obc() : Boundary::pbc();
  const CMat h = spinful_model(cfg) ? kane_mele_hamiltonian(lat, cfg.km, bc, dis)
                                    : haldane_hamiltonian(lat, cfg.hal, bc, dis);
  const StateSet st = select_states(eigendecompose(h), fill);
  const Positions pos = make_positions(lat, cfg.obc ? cfg.margin : 0);

  Invariant inv;
  if (cfg.method == "noncomm") {
    inv = noncommutative_chern(projector(st), pos);
  } else if (cfg.method == "noncomm-hi") {
    inv = noncommutative_chern_higher_order(projector(st), twist_unitary(pos, 0),
                                            twist_unitary(pos, 1), fd_coefficients(cfg.q));
  } else if (cfg.method == "bott") {
    BottOptions opt;
    // one singular value collapses with an open edge while the index stays
    // exact, so the strict guard only applies on the torus
    if (cfg.obc) opt.min_singular = 0.0;
    inv = bott_index(st.psi, twist_unitary(pos, 0), twist_unitary(pos, 1), opt);
  } else {
    const auto sm = cfg.variant == "bott" ? SectorMethod::bott : SectorMethod::noncomm;
    if (cfg.method == "spin-split") {
      inv = spin_chern_split(st.psi, lat, pos, sm).inv;
    } else if (cfg.method == "spin-generalized") {
      inv = spin_chern_generalized(st.psi, lat, pos, sm).inv;
    } else {
      const ChernMatrix m = chern_number_matrix(st.psi, lat, pos, sm);
      inv.value = m.spin_chern();
      inv.rounded = std::round(2.0 * inv.value) / 2.0;
    }
  }
  inv.gap = st.gap;
  return inv;
}

void run_point(const RunConfig& cfg, const Disorder* dis, ResultRecord& r) {
  const auto t0 = std::chrono::steady_clock::now();
  try {
    r.inv = evaluate(cfg, dis);
  } catch (const std::exception& e) {
    r.inv = Invariant{};
    r.status = e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<ResultRecord> run_sweep_grid(const RunConfig& cfg) {
  const int n1 = cfg.sweep.empty() ? 1 : cfg.sweep[0].count;
  const int n2 = cfg.sweep.size() < 2 ? 1 : cfg.sweep[1].count;
  std::vector<ResultRecord> recs(n1 * n2);
  parallel_for(n1 * n2, cfg.workers, [&](int idx) {
    ResultRecord& r = recs[idx];
    if (!cfg.sweep.empty()) r.axis.push_back(cfg.sweep[0].at(idx / n2));
    if (cfg.sweep.size() > 1) r.axis.push_back(cfg.sweep[1].at(idx % n2));
    try {
      RunConfig local = cfg;
      for (std::size_t k = 0; k < cfg.sweep.size(); ++k)
        apply_axis(local, cfg.sweep[k].name, r.axis[k]);
      run_point(local, nullptr, r);
    } catch (const std::exception& e) {
      r.inv = Invariant{};
      r.status = e.what();
    }
  });
  return recs;
}

std::vector<ResultRecord> run_disorder_ensemble(const RunConfig& cfg) {
  const Lattice lat = make_lattice(cfg.lx, cfg.ly, spinful_model(cfg));
  const int nw = int(cfg.disorder_w.size());
  const int nr = cfg.realizations;
  std::vector<ResultRecord> pts(nw * nr);
  parallel_for(nw * nr, cfg.workers, [&](int idx) {
    const int wi = idx / nr, ri = idx % nr;
    ResultRecord& r = pts[idx];
    r.axis = {cfg.disorder_w[wi], double(ri)};
    try {
      const Disorder d =
          make_disorder(lat, cfg.disorder_w[wi], derive_seed(cfg.seed, wi, ri));
      run_point(cfg, &d, r);
    } catch (const std::exception& e) {
      r.inv = Invariant{};
      r.status = e.what();
    }
  });

  std::vector<ResultRecord> recs;
  recs.reserve(nw * (nr + 2));
  for (int wi = 0; wi < nw; ++wi) {
    double sum = 0.0, sum2 = 0.0;
    int ok = 0;
    for (int ri = 0; ri < nr; ++ri) {
      const ResultRecord& r = pts[wi * nr + ri];
      recs.push_back(r);
      if (r.status == "ok") {
        sum += r.inv.value;
        sum2 += r.inv.value * r.inv.value;
        ++ok;
      }
    }
    ResultRecord mean, dev;
    mean.axis = {cfg.disorder_w[wi], kNaN};
    dev.axis = {cfg.disorder_w[wi], kNaN};
    mean.status = "mean";
    dev.status = "std";
    if (ok > 0) {
      mean.inv.value = sum / ok;
      const double var = std::max(0.0, sum2 / ok - mean.inv.value * mean.inv.value);
      dev.inv.value = std::sqrt(var);
    } else {
      mean.status = "mean: no successful realizations";
      dev.status = "std: no successful realizations";
    }
    recs.push_back(mean);
    recs.push_back(dev);
  }
  return recs;
}

std::string fmt(double v) {
  if (std::isnan(v)) return "";
  if (v == 0.0) return "0";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string csv_safe(std::string s) {
  for (char& c : s) {
    if (c == ',') c = ';';
    if (c == '\n' || c == '\r') c = ' ';
  }
  return s;
}

// the scientific configuration; scheduling and io details (workers, timing,
// out, format) stay out so equivalent runs compare equal byte for byte
json config_json(const RunConfig& cfg) {
  json j;
  j["model"] = cfg.model;
  j["method"] = cfg.method;
  j["lx"] = cfg.lx;
  j["ly"] = cfg.ly;
  j["haldane"] = {{"t1", cfg.hal.t1}, {"t2", cfg.hal.t2}, {"phi", cfg.hal.phi},
                  {"delta", cfg.hal.delta}};
  j["kane_mele"] = {{"t", cfg.km.t}, {"lso", cfg.km.lso}, {"lr", cfg.km.lr},
                    {"delta", cfg.km.delta}};
  j["gauge"] = cfg.gauge;
  j["variant"] = cfg.variant;
  j["grid"] = {cfg.grid_x, cfg.grid_y};
  j["q"] = cfg.q;
  j["filling"] = cfg.filling;
  j["obc"] = cfg.obc;
  j["margin"] = cfg.margin;
  j["disorder_w"] = cfg.disorder_w;
  j["realizations"] = cfg.realizations;
  j["seed"] = cfg.seed;
  json axes = json::array();
  for (const auto& ax : cfg.sweep)
    axes.push_back({{"name", ax.name}, {"start", ax.start}, {"stop", ax.stop},
                    {"count", ax.count}});
  j["sweep"] = axes;
  return j;
}

void config_from_json(const json& j, RunConfig& cfg) {
  cfg.model = j.at("model").get<std::string>();
  cfg.method = j.at("method").get<std::string>();
  cfg.lx = j.at("lx").get<int>();
  cfg.ly = j.at("ly").get<int>();
  const json& h = j.at("haldane");
  cfg.hal = {h.at("t1"), h.at("t2"), h.at("phi"), h.at("delta")};
  const json& k = j.at("kane_mele");
  cfg.km = {k.at("t"), k.at("lso"), k.at("lr"), k.at("delta")};
  cfg.gauge = j.at("gauge").get<std::string>();
  cfg.variant = j.at("variant").get<std::string>();
  cfg.grid_x = j.at("grid")[0].get<int>();
  cfg.grid_y = j.at("grid")[1].get<int>();
  cfg.q = j.at("q").get<int>();
  cfg.filling = j.at("filling").get<std::string>();
  cfg.obc = j.at("obc").get<bool>();
  cfg.margin = j.at("margin").get<int>();
  cfg.disorder_w = j.at("disorder_w").get<std::vector<double>>();
  cfg.realizations = j.at("realizations").get<int>();
  cfg.seed = j.at("seed").get<std::uint64_t>();
  cfg.sweep.clear();
  for (const auto& ax : j.at("sweep"))
    cfg.sweep.push_back({ax.at("name").get<std::string>(), ax.at("start").get<double>(),
                         ax.at("stop").get<double>(), ax.at("count").get<int>()});
}

double num_or_nan(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return kNaN;
  return j.at(key).get<double>();
}

std::string echo_line(const RunConfig& cfg) {
  std::string s = "# chern model=" + cfg.model + " method=" + cfg.method;
  s += " lx=" + fmt(cfg.lx) + " ly=" + fmt(cfg.ly);
  if (cfg.model == "haldane") {
    s += " t1=" + fmt(cfg.hal.t1) + " t2=" + fmt(cfg.hal.t2) + " phi=" + fmt(cfg.hal.phi) +
         " delta=" + fmt(cfg.hal.delta);
  } else {
    s += " t=" + fmt(cfg.km.t) + " lso=" + fmt(cfg.km.lso) + " lr=" + fmt(cfg.km.lr) +
         " delta=" + fmt(cfg.km.delta);
  }
  s += " gauge=" + cfg.gauge + " variant=" + cfg.variant;
  s += " grid=" + fmt(cfg.grid_x) + "x" + fmt(cfg.grid_y) + " q=" + fmt(cfg.q);
  s += " filling=" + cfg.filling + " obc=" + std::string(cfg.obc ? "1" : "0") +
       " margin=" + fmt(cfg.margin);
  if (!cfg.disorder_w.empty()) {
    s += " w=";
    for (std::size_t i = 0; i < cfg.disorder_w.size(); ++i)
      s += (i ? ";" : "") + fmt(cfg.disorder_w[i]);
    s += " realizations=" + fmt(cfg.realizations);
  }
  s += " seed=" + std::to_string(cfg.seed);
  for (const auto& ax : cfg.sweep)
    s += " sweep=" + ax.name + "=" + fmt(ax.start) + ":" + fmt(ax.stop) + ":" + fmt(ax.count);
  return s;
}

}  // namespace

std::vector<std::string> axis_names(const RunConfig& cfg) {
  if (!cfg.disorder_w.empty()) return {"w", "realization"};
  std::vector<std::string> names;
  for (const auto& ax : cfg.sweep) names.push_back(ax.name);
  return names;
}

std::vector<ResultRecord> run(const RunConfig& cfg) {
  validate(cfg);
  if (!cfg.disorder_w.empty()) return run_disorder_ensemble(cfg);
  return run_sweep_grid(cfg);
}

ResultRecord run_single(const RunConfig& cfg) {
  RunConfig local = cfg;
  local.sweep.clear();
  local.disorder_w.clear();
  local.realizations = 0;
  validate(local);
  ResultRecord r;
  run_point(local, nullptr, r);
  return r;
}

std::string to_csv(const RunConfig& cfg, const std::vector<ResultRecord>& recs) {
  std::string s = echo_line(cfg) + "\n";
  for (const auto& name : axis_names(cfg)) s += name + ",";
  s += "value,integer,gap,flatness,min_singular,residue,status,seconds\n";
  for (const auto& r : recs) {
    std::string line;
    for (const double a : r.axis) line += fmt(a) + ",";
    line += fmt(r.inv.value) + "," + fmt(r.inv.rounded) + "," + fmt(r.inv.gap) + "," +
            fmt(r.inv.flatness) + "," + fmt(r.inv.min_singular) + "," + fmt(r.inv.residue) +
            "," + csv_safe(r.status) + "," + fmt(cfg.timing ? r.seconds : 0.0);
    s += line + "\n";
  }
  return s;
}

std::string to_json_text(const RunConfig& cfg, const std::vector<ResultRecord>& recs) {
  json j;
  j["config"] = config_json(cfg);
  const auto names = axis_names(cfg);
  json rows = json::array();
  for (const auto& r : recs) {
    json row;
    json ax = json::object();
    for (std::size_t k = 0; k < r.axis.size() && k < names.size(); ++k)
      ax[names[k]] = r.axis[k];
    row["axis"] = ax;
    row["value"] = r.inv.value;
    row["integer"] = r.inv.rounded;
    row["gap"] = r.inv.gap;
    row["flatness"] = r.inv.flatness;
    row["min_singular"] = r.inv.min_singular;
    row["residue"] = r.inv.residue;
    row["max_unitarity_dev"] = r.inv.max_unitarity_dev;
    row["status"] = r.status;
    row["seconds"] = cfg.timing ? r.seconds : 0.0;
    rows.push_back(row);
  }
  j["records"] = rows;
  return j.dump(2) + "\n";
}

void from_json_text(const std::string& text, RunConfig& cfg, std::vector<ResultRecord>& recs) {
  const json j = json::parse(text);
  config_from_json(j.at("config"), cfg);
  recs.clear();
  const auto names = axis_names(cfg);
  for (const auto& row : j.at("records")) {
    ResultRecord r;
    for (const auto& name : names) {
      const json& ax = row.at("axis");
      r.axis.push_back(ax.contains(name) && !ax.at(name).is_null() ? ax.at(name).get<double>()
                                                                   : kNaN);
    }
    r.inv.value = num_or_nan(row, "value");
    r.inv.rounded = num_or_nan(row, "integer");
    r.inv.gap = num_or_nan(row, "gap");
    r.inv.flatness = num_or_nan(row, "flatness");
    r.inv.min_singular = num_or_nan(row, "min_singular");
    r.inv.residue = num_or_nan(row, "residue");
    r.inv.max_unitarity_dev = num_or_nan(row, "max_unitarity_dev");
    r.status = row.at("status").get<std::string>();
    r.seconds = num_or_nan(row, "seconds");
    recs.push_back(r);
  }
}

int status_exit_code(const std::vector<ResultRecord>& recs) {
  int evaluated = 0, failed = 0;
  for (const auto& r : recs) {
    if (r.status == "mean" || r.status == "std") continue;
    if (r.status.rfind("mean:", 0) == 0 || r.status.rfind("std:", 0) == 0) continue;
    ++evaluated;
    if (r.status != "ok") ++failed;
  }
  if (failed == 0) return 0;
  return failed == evaluated ? 3 : 4;
}

}  // namespace chern
