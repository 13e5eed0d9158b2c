#include "nemflow/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "nemflow/checkpoint.hpp"
#include "nemflow/diagnostics.hpp"
#include "nemflow/errors.hpp"
#include "nemflow/svg_plot.hpp"

namespace nemflow {

const char* const kSeriesHeader =
    "t,kinetic,elastic,total,viscous_diss,director_diss,min_d2,rigidity_ratio,"
    "low_freq_energy,high_freq_energy,weighted_energy_1t,weighted_energy_log";

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

SplitRule rule_from_string(const std::string& s) {
  if (s == "balance") return SplitRule::balance;
  if (s == "log_shell") return SplitRule::log_shell;
  if (s == "algebraic_shell") return SplitRule::algebraic_shell;
  throw config_error("unknown split rule '" + s + "'");
}

// Radius rules that divide by omega_bar fall back to 1/2 while the measured
// margin is still unknown (i.e. while the run is in flight).
MultiplierSpec multiplier_from(const RunConfig& cfg, double omega_measured) {
  MultiplierSpec m;
  m.weight_exponent = cfg.weight_exponent;
  m.rule = rule_from_string(cfg.split_rule);
  m.omega_bar = cfg.omega_bar > 0.0 ? cfg.omega_bar
                                    : (omega_measured > 0.0 ? omega_measured : 0.5);
  return m;
}

std::uint64_t file_crc64(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw config_error("cannot reopen '" + path + "' for digest");
  char buf[65536];
  bool first = true;
  std::uint64_t acc = 0;
  while (in) {
    in.read(buf, sizeof(buf));
    const std::streamsize got = in.gcount();
    if (got <= 0) break;
    acc = crc64(buf, static_cast<std::size_t>(got), first ? 0 : acc);
    first = false;
  }
  return acc;
}

std::string hex64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

json entry_json(const InequalityEntry& e) {
  return json{{"label", e.label},     {"s", e.s},
              {"t", e.t},             {"lhs", e.lhs},
              {"rhs", e.rhs},         {"rhs_start", e.rhs_start},
              {"slack", e.slack},     {"slack_rel", e.slack_rel},
              {"holds", e.holds}};
}

json report_json(const InequalityReport& r) {
  json entries = json::array();
  for (const InequalityEntry& e : r.entries) entries.push_back(entry_json(e));
  return json{{"name", r.name},
              {"holds", r.holds},
              {"min_slack_rel", r.min_slack_rel},
              {"entries", std::move(entries)}};
}

json config_json(const RunConfig& cfg) {
  return json{
      {"grid", json{{"n", cfg.n}, {"length", cfg.length}}},
      {"physics", json{{"nu", cfg.params.nu},
                       {"lambda", cfg.params.lambda},
                       {"gamma", cfg.params.gamma},
                       {"director_mode", to_string(cfg.mode)}}},
      {"initial", json{{"family", to_string(cfg.init.family)},
                       {"amplitude", cfg.init.amplitude},
                       {"slope", cfg.init.slope},
                       {"seed", cfg.init.seed},
                       {"eps0", cfg.init.eps0},
                       {"director_amplitude", cfg.init.director_amplitude},
                       {"kinetic_target", cfg.init.kinetic_target},
                       {"elastic_target", cfg.init.elastic_target}}},
      {"stepping", json{{"dt", cfg.dt},
                        {"cfl", cfg.cfl},
                        {"max_dt", cfg.max_dt},
                        {"t_end", cfg.t_end},
                        {"sample_interval", cfg.sample_interval},
                        {"snapshot_interval", cfg.snapshot_interval},
                        {"linear_only", cfg.linear_only}}},
      {"verify", json{{"weight_exponent", cfg.weight_exponent},
                      {"split_rule", cfg.split_rule},
                      {"omega_bar", cfg.omega_bar},
                      {"fit_enabled", cfg.fit_enabled},
                      {"fit_window_lo", cfg.fit_window_lo},
                      {"fit_window_hi", cfg.fit_window_hi}}},
  };
}

// All artifact writes go through a temp name and a rename so a crashed or
// concurrent run never leaves a torn file at the final path.
void dump_json(const json& j, const std::string& path) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw config_error("cannot write '" + tmp + "'");
    out << j.dump(2) << "\n";
  }
  fs::rename(tmp, path);
}

void dump_text(const std::string& text, const std::string& path) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw config_error("cannot write '" + tmp + "'");
    out << text;
  }
  fs::rename(tmp, path);
}

std::string fmt_alpha(double a) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", a);
  return buf;
}

// Dashed overlays: the fitted envelope C(1+t)^-alpha over its window and a
// reference line with the theoretical exponent anchored at the window start.
void append_fit_overlays(std::vector<PlotSeries>& series, const DecayFit& fit, double alpha_ref) {
  const double lo = fit.window_lo, hi = fit.window_hi;
  if (!(hi > lo)) return;
  constexpr int kPts = 33;
  PlotSeries env;
  env.label = "fit (1+t)^-" + fmt_alpha(fit.alpha);
  env.dashed = true;
  PlotSeries ref;
  ref.label = "reference (1+t)^-" + fmt_alpha(alpha_ref);
  ref.dashed = true;
  const double anchor = fit.predict(lo);
  for (int i = 0; i < kPts; ++i) {
    const double x = (1.0 + lo) * std::pow((1.0 + hi) / (1.0 + lo), i / double(kPts - 1));
    const double t = x - 1.0;
    env.x.push_back(x);
    env.y.push_back(fit.predict(t));
    ref.x.push_back(x);
    ref.y.push_back(anchor * std::pow(x / (1.0 + lo), -alpha_ref));
  }
  series.push_back(std::move(env));
  series.push_back(std::move(ref));
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::uint64_t raw_file_crc(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return crc64(path.data(), path.size());
  std::ostringstream ss;
  ss << in.rdbuf();
  const std::string raw = ss.str();
  return crc64(raw.data(), raw.size());
}

}  // namespace

std::uint64_t config_crc(const RunConfig& cfg) {
  RunConfig c = cfg;
  c.output_dir = "out";  // identity covers the physics, not artifact placement
  const std::string text = canonical_config_text(c);
  return crc64(text.data(), text.size());
}

double reference_decay_exponent(const RunConfig& cfg) {
  if (cfg.init.family == InitFamily::spectral_slope) return cfg.init.slope + 1.0;
  return 1.0;
}

RunResult run_simulation(const RunConfig& cfg) {
  cfg.validate();
  const auto t_wall0 = std::chrono::steady_clock::now();

  fs::create_directories(cfg.output_dir);
  if (cfg.write_snapshots) fs::create_directories(cfg.output_dir + "/snapshots");
  write_config_file(cfg, cfg.output_dir + "/run_config.cfg");

  auto grid = make_grid(cfg.n, cfg.length);
  FlowState state = make_initial_state(grid, cfg.init, cfg.params);
  if (cfg.mode == DirectorMode::vec) state = to_vector_mode(state);

  const MultiplierSpec mult = multiplier_from(cfg, 0.0);

  const std::string series_path = cfg.output_dir + "/series.csv";
  const std::string series_tmp = series_path + ".tmp";
  std::ofstream csv(series_tmp, std::ios::binary | std::ios::trunc);
  if (!csv) throw config_error("cannot write '" + series_tmp + "'");
  csv << kSeriesHeader << "\n";

  RunResult res;
  res.min_d2_run = 1.0;
  std::vector<double> ts, totals, lows, highs;
  FlowState last_state = state;
  bool have_omega = false;

  const auto t_init_done = std::chrono::steady_clock::now();

  SampleSink sink = [&](const FlowState& st, const Sample& sm) {
    const auto [low, high] = frequency_split_energy(st, mult.radius_at(sm.t));
    const double total = low + high;
    const double ratio =
        sm.report.lap_d_sq > 0.0 ? sm.report.grad_d_l4_4 / sm.report.lap_d_sq : 0.0;
    const double lg = std::log(std::exp(1.0) + sm.t);

    csv << g17(sm.t) << ',' << g17(sm.report.kinetic) << ',' << g17(sm.report.elastic) << ','
        << g17(total) << ',' << g17(cfg.params.nu * sm.report.viscous) << ','
        << g17(cfg.params.gamma * cfg.params.lambda * sm.report.tension_sq) << ','
        << g17(sm.min_d2) << ',' << g17(ratio) << ',' << g17(low) << ',' << g17(high) << ','
        << g17((1.0 + sm.t) * total) << ',' << g17(lg * lg * total) << "\n";

    ts.push_back(sm.t);
    totals.push_back(total);
    lows.push_back(low);
    highs.push_back(high);

    res.min_d2_run = std::min(res.min_d2_run, sm.min_d2);
    res.max_unit_error = std::max(res.max_unit_error, unit_constraint_error(st));
    const RigidityReport rig = rigidity_report(sm.report, sm.min_d2, cfg.init.eps0);
    if (rig.hypothesis_ok && !rig.zero_gradient) {
      res.omega_empirical =
          have_omega ? std::min(res.omega_empirical, rig.omega_empirical) : rig.omega_empirical;
      have_omega = true;
    }
    last_state = st;
  };

  Trajectory partial;
  try {
    res.traj = evolve(state, cfg.policy(), sink,
                      [&](Trajectory&& tr) { partial = std::move(tr); });
    res.t_last = res.traj.samples.empty() ? 0.0 : res.traj.samples.back().t;
  } catch (const blowup_error& e) {
    res.blew_up = true;
    res.t_last = e.t_last;
    res.traj = std::move(partial);
  }
  csv.close();
  fs::rename(series_tmp, series_path);

  const auto t_evolve_done = std::chrono::steady_clock::now();

  if (!res.traj.samples.empty()) {
    res.min_d2_initial = res.traj.samples.front().min_d2;
    res.max_energy_residual = energy_budget(res.traj, cfg.params).max_residual_rel;
  }

  if (cfg.fit_enabled && !res.blew_up) {
    struct Q {
      const char* name;
      const std::vector<double>* y;
    } quantities[] = {{"total", &totals}, {"low_freq", &lows}, {"high_freq", &highs}};
    for (const Q& q : quantities) {
      FitOutcome fo;
      fo.quantity = q.name;
      fo.model = DecayModel::algebraic;
      try {
        fo.fit = fit_decay(ts, *q.y, cfg.fit_window_lo, cfg.fit_window_hi, fo.model);
        fo.ok = true;
      } catch (const std::exception& e) {
        fo.error = e.what();
      }
      res.fits.push_back(std::move(fo));
    }
  }

  write_checkpoint(last_state, cfg.output_dir + "/final.nem");
  if (cfg.write_snapshots) {
    for (std::size_t i = 0; i < res.traj.snapshots.size(); ++i) {
      char name[64];
      std::snprintf(name, sizeof(name), "/snapshots/snapshot_%06zu.nem", i);
      write_checkpoint(res.traj.snapshots[i], cfg.output_dir + name);
    }
  }

  {
    std::vector<PlotSeries> series;
    series.push_back({"total", ts, totals, false});
    series.push_back({"low frequency", ts, lows, false});
    series.push_back({"high frequency", ts, highs, false});
    // shift t -> 1+t so the t=0 sample survives the log axis
    for (PlotSeries& s : series) {
      for (double& x : s.x) x += 1.0;
    }
    for (const FitOutcome& fo : res.fits) {
      if (fo.quantity == "total" && fo.ok) {
        append_fit_overlays(series, fo.fit, reference_decay_exponent(cfg));
      }
    }
    write_loglog_svg(cfg.output_dir + "/plot.svg", "energy decay", "1 + t", "energy", series);
  }

  json summary;
  summary["schema_version"] = kSummarySchemaVersion;
  summary["config_crc64"] = hex64(config_crc(cfg));
  summary["config"] = config_json(cfg);
  summary["grid"] = json{{"n", cfg.n}, {"length", cfg.length}};
  if (!res.traj.samples.empty()) {
    const EnergyReport& r0 = res.traj.samples.front().report;
    const EnergyReport& r1 = res.traj.samples.back().report;
    summary["energies"] = json{
        {"initial", json{{"kinetic", r0.kinetic}, {"elastic", r0.elastic}, {"total", r0.total}}},
        {"final", json{{"kinetic", r1.kinetic}, {"elastic", r1.elastic}, {"total", r1.total}}}};
  }
  json fits = json::array();
  for (const FitOutcome& fo : res.fits) {
    json f{{"quantity", fo.quantity},
           {"model", fo.model == DecayModel::algebraic ? "algebraic" : "logarithmic"},
           {"ok", fo.ok}};
    if (fo.ok) {
      f["alpha"] = fo.fit.alpha;
      f["log_prefactor"] = fo.fit.log_prefactor;
      f["rms_residual"] = fo.fit.rms_residual;
      f["points_used"] = fo.fit.points_used;
      f["window"] = json::array({fo.fit.window_lo, fo.fit.window_hi});
    } else {
      f["error"] = fo.error;
    }
    fits.push_back(std::move(f));
  }
  summary["decay_fits"] = std::move(fits);
  summary["invariants"] = json{{"min_d2_initial", res.min_d2_initial},
                               {"min_d2_run", res.min_d2_run},
                               {"max_unit_error", res.max_unit_error},
                               {"max_energy_residual_rel", res.max_energy_residual},
                               {"omega_empirical", res.omega_empirical}};
  summary["blow_up"] = json{{"occurred", res.blew_up}, {"t_last", res.t_last}};
  summary["series_crc64"] = hex64(file_crc64(series_path));
  summary["steps"] = res.traj.steps;
  summary["samples"] = res.traj.samples.size();
  summary["snapshots"] = res.traj.snapshots.size();
  dump_json(summary, cfg.output_dir + "/summary.json");

  const auto t_post_done = std::chrono::steady_clock::now();
  auto secs = [](auto a, auto b) {
    return std::chrono::duration<double>(b - a).count();
  };
  json timing;
  timing["wall_seconds"] = json{{"init", secs(t_wall0, t_init_done)},
                                {"evolve", secs(t_init_done, t_evolve_done)},
                                {"post", secs(t_evolve_done, t_post_done)},
                                {"total", secs(t_wall0, t_post_done)}};
  timing["steps"] = res.traj.steps;
  timing["samples"] = res.traj.samples.size();
  timing["snapshots"] = res.traj.snapshots.size();
  dump_json(timing, cfg.output_dir + "/timing.json");

  return res;
}

VerificationSummary write_verification(const RunConfig& cfg, const Trajectory& traj,
                                       const RunResult& result) {
  VerificationSummary vs;
  vs.omega_bar_used =
      cfg.omega_bar > 0.0 ? cfg.omega_bar
                          : (result.omega_empirical > 0.0 ? result.omega_empirical : 0.5);
  MultiplierSpec mult = multiplier_from(cfg, result.omega_empirical);

  json out;
  out["schema_version"] = kSummarySchemaVersion;
  out["config_crc64"] = hex64(config_crc(cfg));
  out["omega_bar_used"] = vs.omega_bar_used;
  out["multiplier"] =
      json{{"weight_exponent", mult.weight_exponent}, {"split_rule", cfg.split_rule}};

  bool any_slack = false;
  auto fold_slack = [&](double v) {
    vs.min_slack_rel = any_slack ? std::min(vs.min_slack_rel, v) : v;
    any_slack = true;
  };
  auto take = [&](const InequalityReport& rep) {
    vs.holds = vs.holds && rep.holds;
    vs.verdicts.emplace_back(rep.name, rep.holds);
    if (!rep.entries.empty()) fold_slack(rep.min_slack_rel);
    return report_json(rep);
  };

  json reports = json::array();

  if (!traj.samples.empty()) {
    const EnergyLedger led = energy_budget(traj, cfg.params);
    out["energy"] = json{{"max_residual_rel", led.max_residual_rel}};
    reports.push_back(take(coercive_budget(traj, cfg.params, vs.omega_bar_used)));
  }

  if (traj.snapshots.size() >= 2) {
    for (InequalityKind kind : {InequalityKind::highpass_growth, InequalityKind::lowpass_duhamel,
                                InequalityKind::weighted_highpass}) {
      reports.push_back(take(verify_weighted_inequality(traj, mult, kind, cfg.params)));
    }
    reports.push_back(take(pointwise_fourier_bound(traj, cfg.params)));
  }
  out["reports"] = std::move(reports);

  if (!traj.snapshots.empty()) {
    json shells = json::array();
    bool shells_hold = true;
    const FlowState& s0 = traj.snapshots.front();
    struct F {
      const char* name;
      const SpectralField* f;
    } fields[] = {{"u1", &s0.u1}, {"u2", &s0.u2}};
    for (const F& fd : fields) {
      for (double p : {1.0, 1.5}) {
        for (double g : {0.1, 0.5, 1.0}) {
          const InequalityReport one = shell_energy_bound(*fd.f, g, p);
          const InequalityReport two = shell_energy_bound(*fd.f, 2.0 * g, p);
          shells_hold = shells_hold && one.holds && two.holds;
          fold_slack(std::min(one.min_slack_rel, two.min_slack_rel));
          const double expected = std::pow(2.0, 2.0 * (2.0 / p - 1.0));
          shells.push_back(json{{"field", fd.name},
                                {"p", p},
                                {"g", g},
                                {"shell_sum", one.entries[0].lhs},
                                {"bound", one.entries[0].rhs},
                                {"holds", one.holds},
                                {"doubling_ratio", two.entries[0].rhs / one.entries[0].rhs},
                                {"doubling_expected", expected}});
        }
      }
    }
    out["shell_bounds"] = std::move(shells);
    vs.holds = vs.holds && shells_hold;
    vs.verdicts.emplace_back("shell_bounds", shells_hold);

    const std::vector<SplitTraceRow> rows = splitting_decay_trace(traj, mult);
    std::ostringstream sp;
    sp << "t,radius,total,low,high,weighted_poly,weighted_log\n";
    for (const SplitTraceRow& r : rows) {
      sp << g17(r.t) << ',' << g17(r.radius) << ',' << g17(r.total) << ',' << g17(r.low) << ','
         << g17(r.high) << ',' << g17(r.weighted_poly) << ',' << g17(r.weighted_log) << "\n";
    }
    dump_text(sp.str(), cfg.output_dir + "/splitting.csv");
  }

  if (!any_slack) vs.min_slack_rel = 0.0;
  json verdicts = json::array();
  for (const auto& [name, holds] : vs.verdicts) {
    verdicts.push_back(json{{"name", name}, {"holds", holds}});
  }
  out["verdicts"] = std::move(verdicts);
  out["min_slack_rel"] = vs.min_slack_rel;
  out["holds"] = vs.holds;
  dump_json(out, cfg.output_dir + "/verify.json");
  return vs;
}

std::vector<CampaignRow> run_campaign(const std::vector<std::string>& config_paths,
                                      const std::string& out_root) {
  if (config_paths.empty()) throw config_error("campaign: no config files");
  fs::create_directories(out_root);

  std::vector<CampaignRow> rows;
  std::set<std::string> used_dirs;
  for (const std::string& path : config_paths) {
    CampaignRow row;
    row.config_path = path;
    try {
      RunConfig cfg = parse_config_file(path);
      row.config_crc64 = hex64(config_crc(cfg));

      std::string stem = fs::path(path).stem().string();
      std::string dir = stem;
      for (int k = 2; !used_dirs.insert(dir).second; ++k) {
        dir = stem + "_" + std::to_string(k);
      }
      cfg.output_dir = (fs::path(out_root) / dir).string();

      RunResult res = run_simulation(cfg);
      row.steps = res.traj.steps;
      row.omega_empirical = res.omega_empirical;
      if (!res.traj.samples.empty()) row.final_total = res.traj.samples.back().report.total;
      for (const FitOutcome& fo : res.fits) {
        if (fo.quantity == "total" && fo.ok) {
          row.fit_ok = true;
          row.alpha_total = fo.fit.alpha;
        }
      }
      row.status = res.blew_up ? "blow_up" : "ok";
      try {
        row.verified = write_verification(cfg, res.traj, res).holds;
      } catch (const std::exception& e) {
        row.verified = false;
        row.error = std::string("verification: ") + e.what();
      }
    } catch (const config_error& e) {
      row.status = "config_error";
      row.error = e.what();
    } catch (const std::exception& e) {
      row.status = "error";
      row.error = e.what();
    }
    if (row.config_crc64.empty()) row.config_crc64 = hex64(raw_file_crc(path));
    rows.push_back(std::move(row));
  }

  std::sort(rows.begin(), rows.end(), [](const CampaignRow& a, const CampaignRow& b) {
    return a.config_crc64 != b.config_crc64 ? a.config_crc64 < b.config_crc64
                                            : a.config_path < b.config_path;
  });

  std::ostringstream csv;
  csv << "config,config_crc64,status,verified,steps,final_total,fit_ok,alpha_total,"
         "omega_empirical,error\n";
  json jrows = json::array();
  for (const CampaignRow& r : rows) {
    csv << csv_quote(r.config_path) << ',' << r.config_crc64 << ',' << r.status << ','
        << (r.verified ? "true" : "false") << ',' << r.steps << ',' << g17(r.final_total) << ','
        << (r.fit_ok ? "true" : "false") << ',' << g17(r.alpha_total) << ','
        << g17(r.omega_empirical) << ',' << csv_quote(r.error) << "\n";
    jrows.push_back(json{{"config", r.config_path},
                         {"config_crc64", r.config_crc64},
                         {"status", r.status},
                         {"verified", r.verified},
                         {"steps", r.steps},
                         {"final_total", r.final_total},
                         {"fit_ok", r.fit_ok},
                         {"alpha_total", r.alpha_total},
                         {"omega_empirical", r.omega_empirical},
                         {"error", r.error}});
  }
  dump_text(csv.str(), (fs::path(out_root) / "campaign.csv").string());
  json j;
  j["schema_version"] = kSummarySchemaVersion;
  j["rows"] = std::move(jrows);
  dump_json(j, (fs::path(out_root) / "campaign.json").string());
  return rows;
}

std::vector<BoxPoint> box_convergence_study(const RunConfig& base,
                                            const std::vector<double>& lengths,
                                            const std::string& out_root) {
  if (lengths.empty()) throw config_error("box study: no lengths");
  fs::create_directories(out_root);
  const double dx = base.length / base.n;

  std::vector<BoxPoint> pts;
  for (double L : lengths) {
    BoxPoint bp;
    bp.length = L;
    try {
      if (!(L > 0.0)) throw config_error("box study: lengths must be positive");
      RunConfig cfg = base;
      cfg.length = L;
      long n = std::lround(L / dx);
      n += n & 1;  // keep dx fixed, n even
      cfg.n = static_cast<int>(std::max<long>(8, n));
      bp.n = cfg.n;
      char dirname[64];
      std::snprintf(dirname, sizeof(dirname), "box_L%g", L);
      cfg.output_dir = (fs::path(out_root) / dirname).string();
      cfg.write_snapshots = false;
      cfg.snapshot_interval = 0.0;
      cfg.fit_enabled = true;

      RunResult res = run_simulation(cfg);
      if (res.blew_up) throw numeric_error("blow-up at t = " + g17(res.t_last));
      const FitOutcome* fo = nullptr;
      for (const FitOutcome& f : res.fits) {
        if (f.quantity == "total") fo = &f;
      }
      if (!fo || !fo->ok) {
        throw numeric_error("total-energy fit failed" +
                            (fo && !fo->error.empty() ? ": " + fo->error : std::string()));
      }
      bp.alpha = fo->fit.alpha;
      bp.rms_residual = fo->fit.rms_residual;
      const double k1 = 2.0 * M_PI / L;
      bp.lowest_rate = 2.0 * std::min(cfg.params.nu, cfg.params.gamma) * k1 * k1;
      bp.t_sat_predicted = std::max(0.0, bp.alpha / bp.lowest_rate - 1.0);

      // Observed hand-off: the local log-derivative stops tracking the
      // algebraic envelope rate alpha/(1+t) and flattens onto the exponential
      // floor, overshooting the envelope prediction.
      const std::vector<Sample>& smp = res.traj.samples;
      for (std::size_t i = 1; i + 1 < smp.size(); ++i) {
        const double t = smp[i].t;
        if (t <= cfg.fit_window_lo) continue;
        const double y0 = smp[i - 1].report.total, y2 = smp[i + 1].report.total;
        if (!(y0 > 0.0) || !(y2 > 0.0)) continue;
        const double rate = -(std::log(y2) - std::log(y0)) / (smp[i + 1].t - smp[i - 1].t);
        const double envelope_rate = bp.alpha / (1.0 + t);
        if (rate > 1.25 * envelope_rate) {
          bp.saturated = true;
          bp.t_sat_observed = t;
          break;
        }
      }
      bp.ok = true;
    } catch (const std::exception& e) {
      bp.error = e.what();
    }
    pts.push_back(std::move(bp));
  }

  std::ostringstream csv;
  csv << "length,n,ok,alpha,rms_residual,lowest_rate,t_sat_predicted,saturated,t_sat_observed,"
         "error\n";
  json jrows = json::array();
  for (const BoxPoint& p : pts) {
    csv << g17(p.length) << ',' << p.n << ',' << (p.ok ? "true" : "false") << ',' << g17(p.alpha)
        << ',' << g17(p.rms_residual) << ',' << g17(p.lowest_rate) << ','
        << g17(p.t_sat_predicted) << ',' << (p.saturated ? "true" : "false") << ','
        << g17(p.t_sat_observed) << ',' << csv_quote(p.error) << "\n";
    jrows.push_back(json{{"length", p.length},
                         {"n", p.n},
                         {"ok", p.ok},
                         {"alpha", p.alpha},
                         {"rms_residual", p.rms_residual},
                         {"lowest_rate", p.lowest_rate},
                         {"t_sat_predicted", p.t_sat_predicted},
                         {"saturated", p.saturated},
                         {"t_sat_observed", p.t_sat_observed},
                         {"error", p.error}});
  }
  dump_text(csv.str(), (fs::path(out_root) / "box_convergence.csv").string());
  json j;
  j["schema_version"] = kSummarySchemaVersion;
  j["points"] = std::move(jrows);
  dump_json(j, (fs::path(out_root) / "box_convergence.json").string());
  return pts;
}

LoadedRun load_trajectory_dir(const std::string& dir) {
  const std::string cfg_path = (fs::path(dir) / "run_config.cfg").string();
  if (!fs::exists(cfg_path)) {
    throw config_error("'" + dir +
                       "' has no run_config.cfg; point at a simulate output directory");
  }
  LoadedRun lr;
  lr.cfg = parse_config_file(cfg_path);
  lr.cfg.output_dir = dir;  // verification artifacts land beside the inputs

  std::vector<fs::path> snaps;
  const fs::path sd = fs::path(dir) / "snapshots";
  if (fs::exists(sd)) {
    for (const auto& e : fs::directory_iterator(sd)) {
      if (e.path().extension() == ".nem") snaps.push_back(e.path());
    }
  }
  std::sort(snaps.begin(), snaps.end());
  if (snaps.empty()) {
    throw config_error("no snapshots under '" + dir +
                       "'; rerun simulate with output.write_snapshots = true");
  }

  bool have_omega = false;
  double t_prev = -1.0;
  for (const fs::path& p : snaps) {
    FlowState st = read_checkpoint(p.string());
    if (st.t <= t_prev) {
      throw config_error("snapshot times not increasing at '" + p.string() + "'");
    }
    t_prev = st.t;
    Sample smp;
    smp.t = st.t;
    smp.report = energy_report(st);
    smp.min_d2 = min_d2(st);
    smp.u_linf = velocity_linf(st);
    const RigidityReport rig = rigidity_report(smp.report, smp.min_d2, lr.cfg.init.eps0);
    if (rig.hypothesis_ok && !rig.zero_gradient) {
      lr.omega_empirical = have_omega ? std::min(lr.omega_empirical, rig.omega_empirical)
                                      : rig.omega_empirical;
      have_omega = true;
    }
    lr.traj.samples.push_back(smp);
    lr.traj.snapshots.push_back(std::move(st));
  }
  return lr;
}

std::vector<double> SeriesTable::column(const std::string& name) const {
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (columns[c] == name) {
      std::vector<double> out;
      out.reserve(rows.size());
      for (const std::vector<double>& r : rows) out.push_back(r[c]);
      return out;
    }
  }
  std::string have;
  for (const std::string& c : columns) {
    if (!have.empty()) have += ", ";
    have += c;
  }
  throw config_error("csv has no column '" + name + "' (columns: " + have + ")");
}

SeriesTable read_series_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw config_error("cannot read '" + path + "'");
  SeriesTable tab;
  std::string line;
  if (!std::getline(in, line)) throw config_error("'" + path + "' is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::size_t pos = 0;
  while (true) {
    const std::size_t comma = line.find(',', pos);
    tab.columns.push_back(line.substr(pos, comma - pos));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> row;
    row.reserve(tab.columns.size());
    pos = 0;
    while (true) {
      const std::size_t comma = line.find(',', pos);
      const std::string cell = line.substr(pos, comma - pos);
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str() || *end != '\0') {
        throw config_error(path + ":" + std::to_string(lineno) + ": non-numeric cell '" + cell +
                           "'");
      }
      row.push_back(v);
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    if (row.size() != tab.columns.size()) {
      throw config_error(path + ":" + std::to_string(lineno) + ": expected " +
                         std::to_string(tab.columns.size()) + " cells, got " +
                         std::to_string(row.size()));
    }
    tab.rows.push_back(std::move(row));
  }
  if (tab.rows.empty()) throw config_error("'" + path + "' has no data rows");
  return tab;
}

}  // namespace nemflow
