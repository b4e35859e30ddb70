#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "chern/models.hpp"
#include "chern/result.hpp"

namespace chern {

struct SweepAxis {
  std::string name;
  double start = 0.0, stop = 0.0;
  int count = 1;

  double at(int i) const {
    return count < 2 ? start : start + (stop - start) * double(i) / double(count - 1);
  }
};

struct RunConfig {
  std::string model = "haldane";  // haldane | kane-mele
  std::string method = "tbc-link";
  int lx = 8, ly = 8;
  HaldaneParams hal;
  KaneMeleParams km;
  std::string gauge = "boundary";   // twist placement: boundary | uniform
  std::string variant = "noncomm";  // sector evaluator for the spin methods: noncomm | bott
  int grid_x = 12, grid_y = 12;
  int q = 3;                      // conjugation-ladder depth
  std::string filling = "auto";   // auto | half | n:<count> | ef:<energy>
  bool obc = false;
  int margin = 3;
  std::vector<double> disorder_w;
  int realizations = 0;
  std::uint64_t seed = 1;
  std::vector<SweepAxis> sweep;  // up to two axes, first is the outer loop
  std::string out;               // output path; empty writes to stdout
  std::string format = "csv";    // csv | json
  int workers = 1;
  bool timing = false;  // emit measured wall time; off keeps reruns byte-identical
};

struct ResultRecord {
  std::vector<double> axis;
  Invariant inv;
  std::string status = "ok";
  double seconds = 0.0;
};

// axis column names for the records produced by run(): sweep names, or
// w/realization for disorder ensembles
std::vector<std::string> axis_names(const RunConfig& cfg);

// evaluate every requested point. sweeps expand in axis order (first axis
// outer); disorder ensembles append mean and std rows after each strength.
// per-point numerical failures land in the record status and the run
// continues; configuration problems throw.
std::vector<ResultRecord> run(const RunConfig& cfg);

// single fully resolved evaluation (no sweep, no disorder)
ResultRecord run_single(const RunConfig& cfg);

std::string to_csv(const RunConfig& cfg, const std::vector<ResultRecord>& recs);
std::string to_json_text(const RunConfig& cfg, const std::vector<ResultRecord>& recs);

// inverse of to_json_text, for lossless round trips
void from_json_text(const std::string& text, RunConfig& cfg, std::vector<ResultRecord>& recs);

// 0 all points ok, 3 every point failed, 4 some points failed
int status_exit_code(const std::vector<ResultRecord>& recs);

int cli_main(int argc, const char* const* argv);

}  // namespace chern
