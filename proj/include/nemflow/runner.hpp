#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "nemflow/config.hpp"
#include "nemflow/fitting.hpp"
#include "nemflow/integrator.hpp"

namespace nemflow {

// Version stamp written into summary.json / verify.json / campaign.json.
inline constexpr int kSummarySchemaVersion = 1;

struct FitOutcome {
  std::string quantity;  // total | low_freq | high_freq
  DecayModel model = DecayModel::algebraic;
  bool ok = false;
  DecayFit fit;
  std::string error;
};

struct RunResult {
  Trajectory traj;
  bool blew_up = false;
  double t_last = 0.0;
  double min_d2_initial = 0.0;
  double min_d2_run = 0.0;
  double max_unit_error = 0.0;         // max | |d| - 1 | over sampled states
  double omega_empirical = 0.0;        // min rigidity margin over hypothesis samples
  double max_energy_residual = 0.0;    // relative budget residual over samples
  std::vector<FitOutcome> fits;
};

// Verdict roll-up from write_verification: one named verdict per inequality
// report plus one for the shell-bound block.
struct VerificationSummary {
  bool holds = true;
  double omega_bar_used = 0.0;
  double min_slack_rel = 0.0;  // worst relative slack across all entries
  std::vector<std::pair<std::string, bool>> verdicts;
};

// Identity of a run: crc64 of the canonical config text with the output
// location normalized away, so the same physics hashes the same no matter
// where its artifacts land. Campaign tables sort by this value.
std::uint64_t config_crc(const RunConfig& cfg);

// Decay exponent the initial spectrum predicts for the total energy:
// slope + 1 for the spectral_slope family, 1 otherwise. Used for the
// reference line in plots.
double reference_decay_exponent(const RunConfig& cfg);

// Evolves cfg and writes, under cfg.output_dir:
//   run_config.cfg   canonical config echo (verify/campaign reread it)
//   series.csv       per-sample scalar series (fixed column set, streamed)
//   summary.json     schema_version, config hash, energies, fits, invariants,
//                    step count, series digest
//   plot.svg         log-log decay curves with fitted envelope and the
//                    reference slope overlaid
//   timing.json      wall-clock phases (the one deliberately nondeterministic
//                    file)
//   final.nem        checkpoint of the last state
//   snapshots/       per-snapshot checkpoints when cfg.write_snapshots
// Every file is written to a temp name and renamed into place. Blow-up is
// reported in the result (and summary), not thrown.
RunResult run_simulation(const RunConfig& cfg);

// Inequality verification over the stored trajectory; writes verify.json and
// splitting.csv under cfg.output_dir. `result` supplies the measured rigidity
// margin for radius rules that need omega_bar.
VerificationSummary write_verification(const RunConfig& cfg, const Trajectory& traj,
                                       const RunResult& result);

// One row of a campaign table.
struct CampaignRow {
  std::string config_path;
  std::string config_crc64;  // 16 hex digits; raw-bytes hash when parsing failed
  std::string status;        // ok | blow_up | config_error | error
  bool verified = false;     // all verification verdicts held
  double final_total = 0.0;
  bool fit_ok = false;
  double alpha_total = 0.0;
  double omega_empirical = 0.0;
  long long steps = 0;
  std::string error;
};

// Runs every config file into <out_root>/<config-stem>/ and writes
// campaign.csv + campaign.json under out_root, rows ordered by config hash.
// Individual failures are recorded in their row; the campaign continues.
std::vector<CampaignRow> run_campaign(const std::vector<std::string>& config_paths,
                                      const std::string& out_root);

// One box size in a convergence study.
struct BoxPoint {
  double length = 0.0;
  int n = 0;
  bool ok = false;
  double alpha = 0.0;           // fitted total-energy exponent
  double rms_residual = 0.0;
  double lowest_rate = 0.0;     // 2 min(nu,gamma) (2 pi / L)^2
  double t_sat_predicted = 0.0; // alpha / lowest_rate - 1, floored at 0
  bool saturated = false;       // tail rate pulled away from the envelope
  double t_sat_observed = -1.0; // first such time, -1 when never observed
  std::string error;
};

// Reruns `base` at each box length with the grid spacing held fixed
// (n scales with L), fits the decay exponent, and reports where the algebraic
// envelope hands off to the lowest-mode exponential. Writes
// box_convergence.csv + box_convergence.json under out_root.
std::vector<BoxPoint> box_convergence_study(const RunConfig& base,
                                            const std::vector<double>& lengths,
                                            const std::string& out_root);

// Rebuilds a trajectory from a simulate output directory: run_config.cfg plus
// snapshots/*.nem. Samples are recomputed from the snapshots, so downstream
// time quadrature runs at snapshot cadence. omega_empirical is the measured
// rigidity margin over those samples.
struct LoadedRun {
  RunConfig cfg;
  Trajectory traj;
  double omega_empirical = 0.0;
};
LoadedRun load_trajectory_dir(const std::string& dir);

// Minimal numeric CSV reader (header + double rows) for analyze.
struct SeriesTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;  // row-major, rows[i].size() == columns.size()
  std::vector<double> column(const std::string& name) const;  // throws config_error
};
SeriesTable read_series_csv(const std::string& path);

// series.csv column header (also the documentation anchor for tests).
extern const char* const kSeriesHeader;

}  // namespace nemflow
