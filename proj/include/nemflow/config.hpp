#pragma once

#include <cstdint>
#include <string>

#include "nemflow/initdata.hpp"
#include "nemflow/integrator.hpp"
#include "nemflow/model.hpp"

namespace nemflow {

// One run, fully described. Serialized as flat dotted key = value lines
// (grid.n = 256); the writer emits a canonical ordering at full precision so
// a written config parses back bitwise-equal.
struct RunConfig {
  // grid.*
  int n = 256;
  double length = 256.0;

  // physics.*
  Params params;
  DirectorMode mode = DirectorMode::angle;

  // initial.*
  InitSpec init;

  // stepping.*
  double dt = 0.0;  // 0 = adaptive
  double cfl = 0.4;
  double max_dt = 0.1;
  double t_end = 100.0;
  double sample_interval = 0.1;
  double snapshot_interval = 1.0;
  bool linear_only = false;

  // output.*
  std::string output_dir = "out";
  bool write_snapshots = false;

  // verify.*
  int weight_exponent = 3;
  std::string split_rule = "balance";  // balance | log_shell | algebraic_shell
  double omega_bar = 0.0;              // 0 = use the measured rigidity margin
  bool fit_enabled = true;
  double fit_window_lo = 5.0;
  double fit_window_hi = 50.0;

  StepPolicy policy() const;
  void validate() const;  // throws config_error with the offending key
};

std::string to_string(InitFamily f);
std::string to_string(DirectorMode m);
InitFamily family_from_string(const std::string& v);
DirectorMode mode_from_string(const std::string& v);

RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::string& path);

std::string canonical_config_text(const RunConfig& cfg);
void write_config_file(const RunConfig& cfg, const std::string& path);

}  // namespace nemflow
