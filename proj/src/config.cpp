#include "nemflow/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "nemflow/errors.hpp"

namespace nemflow {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

double parse_double(const std::string& v, const std::string& key) {
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (end == v.c_str() || *end != '\0') {
    throw config_error("config: bad number for " + key + ": '" + v + "'");
  }
  return x;
}

long long parse_int(const std::string& v, const std::string& key) {
  char* end = nullptr;
  const long long x = std::strtoll(v.c_str(), &end, 10);
  if (end == v.c_str() || *end != '\0') {
    throw config_error("config: bad integer for " + key + ": '" + v + "'");
  }
  return x;
}

std::uint64_t parse_u64(const std::string& v, const std::string& key) {
  char* end = nullptr;
  const unsigned long long x = std::strtoull(v.c_str(), &end, 10);
  if (end == v.c_str() || *end != '\0') {
    throw config_error("config: bad unsigned integer for " + key + ": '" + v + "'");
  }
  return static_cast<std::uint64_t>(x);
}

bool parse_bool(const std::string& v, const std::string& key) {
  if (v == "true") return true;
  if (v == "false") return false;
  throw config_error("config: bad boolean for " + key + ": '" + v + "' (use true/false)");
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string to_string(InitFamily f) {
  switch (f) {
    case InitFamily::taylor_green: return "taylor_green";
    case InitFamily::spectral_slope: return "spectral_slope";
    case InitFamily::vortex_pair: return "vortex_pair";
  }
  return "?";
}

std::string to_string(DirectorMode m) {
  return m == DirectorMode::angle ? "angle" : "vec";
}

InitFamily family_from_string(const std::string& v) {
  if (v == "taylor_green") return InitFamily::taylor_green;
  if (v == "spectral_slope") return InitFamily::spectral_slope;
  if (v == "vortex_pair") return InitFamily::vortex_pair;
  throw config_error("config: unknown initial.family '" + v + "'");
}

DirectorMode mode_from_string(const std::string& v) {
  if (v == "angle") return DirectorMode::angle;
  if (v == "vec") return DirectorMode::vec;
  throw config_error("config: unknown physics.director_mode '" + v + "'");
}

StepPolicy RunConfig::policy() const {
  StepPolicy p;
  p.mode = mode;
  p.dt = dt;
  p.cfl = cfl;
  p.max_dt = max_dt;
  p.t_end = t_end;
  p.sample_interval = sample_interval;
  p.snapshot_interval = snapshot_interval;
  p.linear_only = linear_only;
  return p;
}

void RunConfig::validate() const {
  if (n < 8 || n % 2 != 0) throw config_error("config: grid.n must be even and >= 8");
  if (n > 4096) throw config_error("config: grid.n above 4096 is not supported");
  if (!(length > 0.0)) throw config_error("config: grid.length must be positive");
  if (!(params.nu > 0.0)) throw config_error("config: physics.nu must be positive");
  if (!(params.gamma > 0.0)) throw config_error("config: physics.gamma must be positive");
  if (!(params.lambda >= 0.0)) throw config_error("config: physics.lambda must be nonnegative");
  init.validate();
  if (init.family == InitFamily::taylor_green && std::abs(length - kTwoPi) > 1e-9) {
    throw config_error("config: taylor_green initial data requires grid.length = 2 pi");
  }
  if (!(dt >= 0.0)) throw config_error("config: stepping.dt must be nonnegative");
  if (dt == 0.0) {
    if (!(cfl > 0.0 && cfl <= 1.0)) throw config_error("config: stepping.cfl must lie in (0,1]");
    if (!(max_dt > 0.0)) throw config_error("config: stepping.max_dt must be positive");
  }
  if (!(t_end > 0.0)) throw config_error("config: stepping.t_end must be positive");
  if (!(sample_interval > 0.0 && sample_interval <= t_end)) {
    throw config_error("config: stepping.sample_interval must lie in (0, t_end]");
  }
  if (snapshot_interval < 0.0) {
    throw config_error("config: stepping.snapshot_interval must be nonnegative");
  }
  if (snapshot_interval > 0.0) {
    const double q = snapshot_interval / sample_interval;
    if (std::abs(q - std::round(q)) > 1e-9 * std::max(1.0, q)) {
      throw config_error(
          "config: stepping.snapshot_interval must be a multiple of sample_interval");
    }
  }
  if (weight_exponent < 3) {
    throw config_error("config: verify.weight_exponent must be >= 3 (the polynomial weight "
                       "needs superquadratic growth)");
  }
  if (split_rule != "balance" && split_rule != "log_shell" && split_rule != "algebraic_shell") {
    throw config_error("config: verify.split_rule must be balance, log_shell or algebraic_shell");
  }
  if (!(omega_bar >= 0.0 && omega_bar < 1.0)) {
    throw config_error("config: verify.omega_bar must lie in [0,1) (0 selects the measured margin)");
  }
  if (fit_enabled) {
    if (!(fit_window_lo >= 1.0 && fit_window_lo < fit_window_hi)) {
      throw config_error("config: verify.fit_window must satisfy 1 <= lo < hi");
    }
    if (fit_window_hi > t_end) {
      throw config_error("config: verify.fit_window_hi exceeds t_end");
    }
    if (fit_window_hi > 0.05 * length * length) {
      throw config_error(
          "config: verify.fit_window_hi exceeds the pre-saturation window 0.05 L^2");
    }
  }
  if (output_dir.empty()) throw config_error("config: output.output_dir must not be empty");
}

RunConfig parse_config_text(const std::string& text) {
  RunConfig cfg;
  using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;
  static const std::map<std::string, Setter> keys = {
      {"grid.n", [](RunConfig& c, const std::string& k, const std::string& v) {
         c.n = static_cast<int>(parse_int(v, k));
       }},
      {"grid.length", [](RunConfig& c, const std::string& k, const std::string& v) {
         c.length = parse_double(v, k);
       }},
      {"physics.nu", [](RunConfig& c, const std::string& k, const std::string& v) {
         c.params.nu = parse_double(v, k);
       }},
      {"physics.lambda", [](RunConfig& c, const std::string& k, const std::string& v) {
         c.params.lambda = parse_double(v, k);
       }},
      {"physics.gamma", [](RunConfig& c, const std::string& k, const std::string& v) {
         c.params.gamma = parse_double(v, k);
       }},
      {"physics.director_mode", [](RunConfig& c, const std::string&, const std::string& v) {
         c.mode = mode_from_string(v);
       }},
      {"initial.family", [](RunConfig& c, const std::string&, const std::string& v) {
         c.init.family = family_from_string(v);
       }},
      {"initial.amplitude", [](RunConfig& c, const std::string& k, const std::string& v) {
         c.init.amplitude = parse_double(v, k);
       }},
      {"initial.slope", [](RunConfig& c, const std::string& k, const std::string& v) {
         c.init.slope = parse_double(v, k);
       }},
      {"initial.seed", [](RunConfig& c, const std::string& k, const std::string& v) {
         c.init.seed = parse_u64(v, k);
       }},
      {"initial.eps0", [](RunConfig& c, const std::string& k, const std::string& v) {
         c.init.eps0 = parse_double(v, k);
       }},
      {"initial.director_amplitude", [](RunConfig& c, const std::string& k, const std::string& v) {
         c.init.director_amplitude = parse_double(v, k);
       }},
      {"initial.kinetic_target", [](RunConfig& c, const std::string& k, const std::string& v) {
         c.init.kinetic_target = parse_double(v, k);
       }},
      {"initial.elastic_target", [](RunConfig& c, const std::string& k, const std::string& v) {
         c.init.elastic_target = parse_double(v, k);
       }},
      {"stepping.dt", [](RunConfig& c, const std::string& k, const std::string& v) {
         c.dt = parse_double(v, k);
       }},
      {"stepping.cfl", [](RunConfig& c, const std::string& k, const std::string& v) {
         c.cfl = parse_double(v, k);
       }},
      {"stepping.max_dt", [](RunConfig& c, const std::string& k, const std::string& v) {
         c.max_dt = parse_double(v, k);
       }},
      {"stepping.t_end", [](RunConfig& c, const std::string& k, const std::string& v) {
         c.t_end = parse_double(v, k);
       }},
      {"stepping.sample_interval", [](RunConfig& c, const std::string& k, const std::string& v) {
         c.sample_interval = parse_double(v, k);
       }},
      {"stepping.snapshot_interval", [](RunConfig& c, const std::string& k, const std::string& v) {
         c.snapshot_interval = parse_double(v, k);
       }},
      {"stepping.linear_only", [](RunConfig& c, const std::string& k, const std::string& v) {
         c.linear_only = parse_bool(v, k);
       }},
      {"output.output_dir", [](RunConfig& c, const std::string&, const std::string& v) {
         c.output_dir = v;
       }},
      {"output.write_snapshots", [](RunConfig& c, const std::string& k, const std::string& v) {
         c.write_snapshots = parse_bool(v, k);
       }},
      {"verify.weight_exponent", [](RunConfig& c, const std::string& k, const std::string& v) {
         c.weight_exponent = static_cast<int>(parse_int(v, k));
       }},
      {"verify.split_rule", [](RunConfig& c, const std::string&, const std::string& v) {
         c.split_rule = v;
       }},
      {"verify.omega_bar", [](RunConfig& c, const std::string& k, const std::string& v) {
         c.omega_bar = parse_double(v, k);
       }},
      {"verify.fit_enabled", [](RunConfig& c, const std::string& k, const std::string& v) {
         c.fit_enabled = parse_bool(v, k);
       }},
      {"verify.fit_window_lo", [](RunConfig& c, const std::string& k, const std::string& v) {
         c.fit_window_lo = parse_double(v, k);
       }},
      {"verify.fit_window_hi", [](RunConfig& c, const std::string& k, const std::string& v) {
         c.fit_window_hi = parse_double(v, k);
       }},
  };

  // Flat key = value lines with dotted section prefixes (grid.n = 256);
  // '#' starts a comment.
  std::istringstream in(text);
  std::string line;
  std::set<std::string> seen;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw config_error("config line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = keys.find(key);
    if (it == keys.end()) {
      throw config_error("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
    if (!seen.insert(key).second) {
      throw config_error("config line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    }
    if (value.empty()) {
      throw config_error("config line " + std::to_string(lineno) + ": empty value for '" + key + "'");
    }
    it->second(cfg, key, value);
  }
  // syntax only: semantic validation runs where a simulation actually starts,
  // so serialization round-trips configs that are not yet runnable
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw config_error("config: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

std::string canonical_config_text(const RunConfig& cfg) {
  std::ostringstream os;
  os << "grid.n = " << cfg.n << "\n"
     << "grid.length = " << fmt(cfg.length) << "\n\n"
     << "physics.nu = " << fmt(cfg.params.nu) << "\n"
     << "physics.lambda = " << fmt(cfg.params.lambda) << "\n"
     << "physics.gamma = " << fmt(cfg.params.gamma) << "\n"
     << "physics.director_mode = " << to_string(cfg.mode) << "\n\n"
     << "initial.family = " << to_string(cfg.init.family) << "\n"
     << "initial.amplitude = " << fmt(cfg.init.amplitude) << "\n"
     << "initial.slope = " << fmt(cfg.init.slope) << "\n"
     << "initial.seed = " << cfg.init.seed << "\n"
     << "initial.eps0 = " << fmt(cfg.init.eps0) << "\n"
     << "initial.director_amplitude = " << fmt(cfg.init.director_amplitude) << "\n"
     << "initial.kinetic_target = " << fmt(cfg.init.kinetic_target) << "\n"
     << "initial.elastic_target = " << fmt(cfg.init.elastic_target) << "\n\n"
     << "stepping.dt = " << fmt(cfg.dt) << "\n"
     << "stepping.cfl = " << fmt(cfg.cfl) << "\n"
     << "stepping.max_dt = " << fmt(cfg.max_dt) << "\n"
     << "stepping.t_end = " << fmt(cfg.t_end) << "\n"
     << "stepping.sample_interval = " << fmt(cfg.sample_interval) << "\n"
     << "stepping.snapshot_interval = " << fmt(cfg.snapshot_interval) << "\n"
     << "stepping.linear_only = " << (cfg.linear_only ? "true" : "false") << "\n\n"
     << "output.output_dir = " << cfg.output_dir << "\n"
     << "output.write_snapshots = " << (cfg.write_snapshots ? "true" : "false") << "\n\n"
     << "verify.weight_exponent = " << cfg.weight_exponent << "\n"
     << "verify.split_rule = " << cfg.split_rule << "\n"
     << "verify.omega_bar = " << fmt(cfg.omega_bar) << "\n"
     << "verify.fit_enabled = " << (cfg.fit_enabled ? "true" : "false") << "\n"
     << "verify.fit_window_lo = " << fmt(cfg.fit_window_lo) << "\n"
     << "verify.fit_window_hi = " << fmt(cfg.fit_window_hi) << "\n";
  return os.str();
}

void write_config_file(const RunConfig& cfg, const std::string& path) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw config_error("config: cannot write '" + tmp + "'");
    out << canonical_config_text(cfg);
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace nemflow
