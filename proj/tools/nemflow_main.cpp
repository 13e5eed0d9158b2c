// Command-line front end. Exit codes, in precedence order when several apply:
//   0  run completed and every verification verdict held
//   2  at least one inequality verdict failed (or a numeric check could not
//      be evaluated)
//   3  the simulation blew up
//   4  configuration or input-file error
//   1  unexpected internal error
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "nemflow/checkpoint.hpp"
#include "nemflow/diagnostics.hpp"
#include "nemflow/errors.hpp"
#include "nemflow/fft.hpp"
#include "nemflow/field_ops.hpp"
#include "nemflow/fitting.hpp"
#include "nemflow/initdata.hpp"
#include "nemflow/integrator.hpp"
#include "nemflow/oracle.hpp"
#include "nemflow/rng.hpp"
#include "nemflow/runner.hpp"
#include "nemflow/svg_plot.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace nemflow;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitViolation = 2;
constexpr int kExitBlowUp = 3;
constexpr int kExitConfig = 4;

int cmd_simulate(const std::string& config_path, const std::string& out_override) {
  RunConfig cfg = parse_config_file(config_path);
  if (!out_override.empty()) cfg.output_dir = out_override;

  const RunResult res = run_simulation(cfg);
  const VerificationSummary vs = write_verification(cfg, res.traj, res);

  std::printf("run      %s\n", cfg.output_dir.c_str());
  std::printf("steps    %lld  samples %zu  snapshots %zu\n", res.traj.steps,
              res.traj.samples.size(), res.traj.snapshots.size());
  if (!res.traj.samples.empty()) {
    std::printf("energy   %.6g -> %.6g\n", res.traj.samples.front().report.total,
                res.traj.samples.back().report.total);
  }
  for (const FitOutcome& fo : res.fits) {
    if (fo.ok) {
      std::printf("fit      %-9s alpha %.4f  rms %.3g\n", fo.quantity.c_str(), fo.fit.alpha,
                  fo.fit.rms_residual);
    } else {
      std::printf("fit      %-9s failed: %s\n", fo.quantity.c_str(), fo.error.c_str());
    }
  }
  for (const auto& [name, holds] : vs.verdicts) {
    std::printf("verdict  %-24s %s\n", name.c_str(), holds ? "holds" : "VIOLATED");
  }
  if (res.blew_up) {
    std::printf("BLOW-UP at t = %.6g\n", res.t_last);
    return kExitBlowUp;
  }
  return vs.holds ? kExitOk : kExitViolation;
}

int cmd_campaign(const std::string& config_dir, const std::string& out_dir) {
  if (!fs::is_directory(config_dir)) {
    throw config_error("'" + config_dir + "' is not a directory");
  }
  std::vector<std::string> paths;
  for (const auto& e : fs::directory_iterator(config_dir)) {
    if (e.path().extension() == ".cfg") paths.push_back(e.path().string());
  }
  std::sort(paths.begin(), paths.end());
  if (paths.empty()) throw config_error("no .cfg files under '" + config_dir + "'");

  const std::vector<CampaignRow> rows = run_campaign(paths, out_dir);

  bool any_config = false, any_blow = false, any_bad = false;
  for (const CampaignRow& r : rows) {
    std::printf("%-16s %-12s verified=%-5s alpha=%.4f  %s\n", r.config_crc64.c_str(),
                r.status.c_str(), r.verified ? "true" : "false", r.alpha_total,
                fs::path(r.config_path).filename().string().c_str());
    any_config = any_config || r.status == "config_error";
    any_blow = any_blow || r.status == "blow_up";
    any_bad = any_bad || !r.verified || r.status != "ok";
  }
  std::printf("table    %s/campaign.{csv,json}\n", out_dir.c_str());
  if (any_config) return kExitConfig;
  if (any_blow) return kExitBlowUp;
  return any_bad ? kExitViolation : kExitOk;
}

int cmd_analyze(const std::string& csv_path, const std::string& quantity,
                const std::string& model_name, double lo, double hi, double ref_alpha,
                const std::string& plot_path) {
  const SeriesTable tab = read_series_csv(csv_path);
  const std::vector<double> ts = tab.column("t");
  const std::vector<double> ys = tab.column(quantity);

  DecayModel model;
  if (model_name == "algebraic") {
    model = DecayModel::algebraic;
  } else if (model_name == "logarithmic") {
    model = DecayModel::logarithmic;
  } else {
    throw config_error("model must be algebraic or logarithmic");
  }

  const DecayFit fit = fit_decay(ts, ys, lo, hi, model);
  json out{{"csv", csv_path},
           {"quantity", quantity},
           {"model", model_name},
           {"alpha", fit.alpha},
           {"log_prefactor", fit.log_prefactor},
           {"rms_residual", fit.rms_residual},
           {"points_used", fit.points_used},
           {"window", json::array({fit.window_lo, fit.window_hi})}};
  std::cout << out.dump(2) << "\n";

  if (!plot_path.empty()) {
    std::vector<PlotSeries> series;
    PlotSeries data{quantity, ts, ys, false};
    for (double& x : data.x) x += 1.0;
    series.push_back(std::move(data));

    char label[64];
    std::snprintf(label, sizeof(label), "fit (1+t)^-%.2f", fit.alpha);
    PlotSeries env{label, {}, {}, true};
    std::snprintf(label, sizeof(label), "reference (1+t)^-%.2f", ref_alpha);
    PlotSeries ref{label, {}, {}, true};
    const double anchor = fit.predict(lo);
    constexpr int kPts = 33;
    for (int i = 0; i < kPts; ++i) {
      const double x = (1.0 + lo) * std::pow((1.0 + hi) / (1.0 + lo), i / double(kPts - 1));
      env.x.push_back(x);
      env.y.push_back(fit.predict(x - 1.0));
      ref.x.push_back(x);
      ref.y.push_back(anchor * std::pow(x / (1.0 + lo), -ref_alpha));
    }
    series.push_back(std::move(env));
    series.push_back(std::move(ref));
    write_loglog_svg(plot_path, "decay fit", "1 + t", quantity, series);
    std::printf("plot     %s\n", plot_path.c_str());
  }
  return kExitOk;
}

int cmd_verify(const std::string& dir) {
  const LoadedRun lr = load_trajectory_dir(dir);
  RunResult res;
  res.omega_empirical = lr.omega_empirical;
  const VerificationSummary vs = write_verification(lr.cfg, lr.traj, res);

  std::printf("loaded   %zu snapshots from %s\n", lr.traj.snapshots.size(), dir.c_str());
  std::printf("omega    %.6g (used %.6g)\n", lr.omega_empirical, vs.omega_bar_used);
  for (const auto& [name, holds] : vs.verdicts) {
    std::printf("verdict  %-24s %s\n", name.c_str(), holds ? "holds" : "VIOLATED");
  }
  std::printf("slack    min relative %.3e\n", vs.min_slack_rel);
  std::printf("report   %s/verify.json\n", dir.c_str());
  return vs.holds ? kExitOk : kExitViolation;
}

int cmd_checkpoint_info(const std::string& path) {
  const CheckpointInfo info = checkpoint_info(path);
  char crc[20];
  std::snprintf(crc, sizeof(crc), "%016llx", static_cast<unsigned long long>(info.payload_crc));
  json out{{"path", path},
           {"version", info.version},
           {"n", info.n},
           {"length", info.length},
           {"t", info.t},
           {"nu", info.params.nu},
           {"lambda", info.params.lambda},
           {"gamma", info.params.gamma},
           {"director_mode", info.mode == DirectorMode::angle ? "angle" : "vec"},
           {"payload_crc64", crc}};
  std::cout << out.dump(2) << "\n";
  return kExitOk;
}

int cmd_box_study(const std::string& config_path, const std::vector<double>& lengths,
                  const std::string& out_dir) {
  RunConfig base = parse_config_file(config_path);
  const std::vector<BoxPoint> pts = box_convergence_study(base, lengths, out_dir);
  bool all_ok = true;
  for (const BoxPoint& p : pts) {
    if (p.ok) {
      std::printf("L=%-8g n=%-5d alpha=%.4f  lowest_rate=%.3e  t_sat_pred=%.4g  observed=%s\n",
                  p.length, p.n, p.alpha, p.lowest_rate, p.t_sat_predicted,
                  p.saturated ? ("t=" + std::to_string(p.t_sat_observed)).c_str() : "no");
    } else {
      std::printf("L=%-8g FAILED: %s\n", p.length, p.error.c_str());
      all_ok = false;
    }
  }
  std::printf("table    %s/box_convergence.{csv,json}\n", out_dir.c_str());
  return all_ok ? kExitOk : kExitViolation;
}

// Built-in oracle suite: fast independent cross-checks of the numerical core.
int cmd_selftest() {
  int failures = 0;
  auto check = [&](const char* name, bool ok, double value, double tol) {
    std::printf("%-44s %s  (%.3e, tol %.1e)\n", name, ok ? "PASS" : "FAIL", value, tol);
    if (!ok) ++failures;
  };

  {  // direct double-sum DFT vs the fast transform
    auto g = make_grid(8, 2.0 * M_PI);
    RealField f(g);
    SplitMix64 rng(7);
    for (double& v : f.v) v = rng.uniform() - 0.5;
    const SpectralField a = forward_transform(f);
    const SpectralField b = dft_bruteforce(f);
    double err = 0.0;
    for (std::size_t i = 0; i < a.c.size(); ++i) err = std::max(err, std::abs(a.c[i] - b.c[i]));
    check("dft oracle matches fft (n=8)", err < 1e-12, err, 1e-12);
  }

  {  // Bluestein path round trip (n=48 is not a power of two)
    auto g = make_grid(48, 1.0);
    RealField f(g);
    SplitMix64 rng(11);
    for (double& v : f.v) v = rng.uniform() - 0.5;
    const RealField r = inverse_transform(forward_transform(f));
    double err = 0.0;
    for (std::size_t i = 0; i < f.v.size(); ++i) err = std::max(err, std::abs(f.v[i] - r.v[i]));
    check("transform round trip (n=48)", err < 1e-10, err, 1e-10);
  }

  {  // serial reference vs the OpenMP kernel, bitwise
    auto plan = make_plan(64);
    std::vector<std::complex<double>> a(64 * 64), b;
    SplitMix64 rng(13);
    for (auto& z : a) z = {rng.uniform() - 0.5, rng.uniform() - 0.5};
    b = a;
    fft2d(*plan, a.data(), -1);
    serialref::fft2d(*plan, b.data(), -1);
    bool same = true;
    for (std::size_t i = 0; i < a.size(); ++i) same = same && a[i] == b[i];
    check("parallel fft bitwise equals serial (n=64)", same, same ? 0.0 : 1.0, 0.0);
  }

  {  // Parseval: physical L2 norm equals the mode sum
    auto g = make_grid(32, 3.0);
    RealField f(g);
    SplitMix64 rng(17);
    for (double& v : f.v) v = rng.uniform() - 0.5;
    const double phys = [&] {
      double s = 0.0;
      for (double v : f.v) s += v * v;
      return s * g->length * g->length / (double(g->n) * g->n);
    }();
    const double spec = parseval_energy(forward_transform(f));
    const double err = std::abs(phys - spec) / phys;
    check("parseval identity (n=32)", err < 1e-12, err, 1e-12);
  }

  {  // Leray projection kills divergence and is idempotent
    auto g = make_grid(32, 2.0 * M_PI);
    RealField r1(g), r2(g);
    SplitMix64 rng(19);
    for (double& v : r1.v) v = rng.uniform() - 0.5;
    for (double& v : r2.v) v = rng.uniform() - 0.5;
    SpectralField v1 = forward_transform(r1);
    SpectralField v2 = forward_transform(r2);
    dealias_inplace(v1);
    dealias_inplace(v2);
    leray_project(v1, v2);
    double div = 0.0;
    for (int i = 0; i < g->n; ++i) {
      for (int j = 0; j < g->n; ++j) {
        const std::size_t id = g->idx(i, j);
        div = std::max(div, std::abs(g->dxi[i] * v1.c[id] + g->dxi[j] * v2.c[id]));
      }
    }
    SpectralField w1 = v1, w2 = v2;
    leray_project(w1, w2);
    double drift = 0.0;
    for (std::size_t i = 0; i < w1.c.size(); ++i) {
      drift = std::max(drift, std::abs(w1.c[i] - v1.c[i]));
      drift = std::max(drift, std::abs(w2.c[i] - v2.c[i]));
    }
    check("leray projection divergence", div < 1e-12, div, 1e-12);
    check("leray projection idempotent", drift < 1e-13, drift, 1e-13);
  }

  {  // exact single-mode heat decay through the integrating factor
    auto g = make_grid(16, 2.0 * M_PI);
    FlowState s;
    s.grid = g;
    s.mode = DirectorMode::angle;
    s.params.nu = 1.0;
    s.params.lambda = 1.0;
    s.params.gamma = 0.7;
    s.u1 = SpectralField(g);
    s.u2 = SpectralField(g);
    s.theta = SpectralField(g);
    s.theta.c[g->idx(1, 0)] = 0.01;
    s.theta.c[g->idx(g->n - 1, 0)] = 0.01;  // Hermitian partner
    FlowState s1 = step(step(s, 0.25, true), 0.25, true);
    const double expect = 0.01 * std::exp(-0.7 * 1.0 * 0.5);
    const double got = s1.theta.c[g->idx(1, 0)].real();
    const double err = std::abs(got - expect) / expect;
    check("integrating factor exact on heat mode", err < 1e-13, err, 1e-13);
  }

  {  // Taylor-Green: exact nonlinear solution reproduced by the stepper
    auto g = make_grid(32, 2.0 * M_PI);
    FlowState s = taylor_green_exact(g, 1.0, 1.0, 0.0);
    for (int k = 0; k < 100; ++k) s = step(s, 1e-3);
    const FlowState ex = taylor_green_exact(g, 1.0, 1.0, 0.1);
    double err = 0.0;
    for (std::size_t i = 0; i < s.u1.c.size(); ++i) {
      err = std::max(err, std::abs(s.u1.c[i] - ex.u1.c[i]));
      err = std::max(err, std::abs(s.u2.c[i] - ex.u2.c[i]));
    }
    check("taylor-green nonlinear step accuracy", err < 1e-7, err, 1e-7);
  }

  {  // shell bound: single mode, exact doubling scaling
    auto g = make_grid(32, 2.0 * M_PI);
    SpectralField f(g);
    f.c[g->idx(1, 0)] = 0.25;
    f.c[g->idx(g->n - 1, 0)] = 0.25;
    const double p = 1.0;
    const InequalityReport one = shell_energy_bound(f, 0.5, p);
    const InequalityReport two = shell_energy_bound(f, 1.0, p);
    const double ratio = two.entries[0].rhs / one.entries[0].rhs;
    const double expect = std::pow(2.0, 2.0 * (2.0 / p - 1.0));
    const double err = std::abs(ratio - expect) / expect;
    check("shell bound holds (p=1, g=0.5)", one.holds, one.entries[0].slack_rel, kInequalityTol);
    check("shell bound doubling scaling exact", err < 1e-12, err, 1e-12);
  }

  {  // decay fit recovers an exact power law
    std::vector<double> t, y;
    for (int i = 0; i <= 400; ++i) {
      t.push_back(0.25 * i);
      y.push_back(3.0 * std::pow(1.0 + t.back(), -1.5));
    }
    const DecayFit fit = fit_decay(t, y, 5.0, 50.0, DecayModel::algebraic);
    const double err = std::abs(fit.alpha - 1.5);
    check("fit recovers exact exponent", err < 1e-12, err, 1e-12);
  }

  std::printf("%s\n", failures == 0 ? "selftest: all checks passed" : "selftest: FAILURES");
  return failures == 0 ? kExitOk : kExitViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Pseudo-spectral simulator for coupled fluid / director relaxation on a periodic box, "
      "with an energy-law and decay-rate verification harness"};
  app.require_subcommand(1);

  std::string config_path, out_override, csv_path, traj_dir, ckpt_path;
  std::string quantity = "total", model_name = "algebraic", plot_path;
  double fit_lo = 5.0, fit_hi = 50.0, ref_alpha = 1.0;
  std::vector<double> lengths;

  CLI::App* sim = app.add_subcommand("simulate", "run one config and verify it");
  sim->add_option("config", config_path, "config file")->required();
  sim->add_option("--out", out_override, "override output.output_dir");

  CLI::App* camp = app.add_subcommand("campaign", "run every .cfg in a directory");
  camp->add_option("config-dir", config_path, "directory of .cfg files")->required();
  camp->add_option("--out", out_override, "output root (default campaign_out)");

  CLI::App* ana = app.add_subcommand("analyze", "fit decay exponents from a series.csv");
  ana->add_option("csv", csv_path, "series.csv from a run")->required();
  ana->add_option("--quantity", quantity, "column to fit (default total)");
  ana->add_option("--model", model_name, "algebraic | logarithmic");
  ana->add_option("--lo", fit_lo, "fit window start (default 5)");
  ana->add_option("--hi", fit_hi, "fit window end (default 50)");
  ana->add_option("--ref-alpha", ref_alpha, "reference exponent overlay (default 1)");
  ana->add_option("--plot", plot_path, "write a log-log SVG here");

  CLI::App* ver = app.add_subcommand("verify", "rerun the inequality suite on stored snapshots");
  ver->add_option("trajectory-dir", traj_dir, "simulate output directory with snapshots/")
      ->required();

  app.add_subcommand("selftest", "run the built-in oracle suite");

  CLI::App* ck = app.add_subcommand("checkpoint-info", "print checkpoint header and digest");
  ck->add_option("path", ckpt_path, ".nem checkpoint file")->required();

  CLI::App* box = app.add_subcommand("box-study", "rerun one config across box sizes");
  box->add_option("config", config_path, "base config file")->required();
  box->add_option("--lengths", lengths, "box lengths")->required()->delimiter(',');
  box->add_option("--out", out_override, "output root (default box_out)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) return cmd_simulate(config_path, out_override);
    if (camp->parsed()) {
      return cmd_campaign(config_path, out_override.empty() ? "campaign_out" : out_override);
    }
    if (ana->parsed()) {
      return cmd_analyze(csv_path, quantity, model_name, fit_lo, fit_hi, ref_alpha, plot_path);
    }
    if (ver->parsed()) return cmd_verify(traj_dir);
    if (app.get_subcommand("selftest")->parsed()) return cmd_selftest();
    if (ck->parsed()) return cmd_checkpoint_info(ckpt_path);
    if (box->parsed()) {
      return cmd_box_study(config_path, lengths, out_override.empty() ? "box_out" : out_override);
    }
  } catch (const config_error& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const blowup_error& e) {
    std::fprintf(stderr, "blow-up: %s\n", e.what());
    return kExitBlowUp;
  } catch (const numeric_error& e) {
    std::fprintf(stderr, "numeric check failed: %s\n", e.what());
    return kExitViolation;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInternal;
  }
  return kExitInternal;
}
