// Copyright 2026 The oqb Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Presets, flat key = value configuration, run/sweep drivers and CSV output.

#include "oqb/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

namespace oqb {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// ---------------------------------------------------------------------------
// Presets
// ---------------------------------------------------------------------------

struct Preset {
  std::string name;
  std::string description;
  std::vector<ScenarioSpec> scenarios;
};

namespace detail {

inline ScenarioSpec xx_preset(const std::string& label, cplx alpha, cplx beta_c, cplx gamma_c) {
  ScenarioSpec s;
  s.label = label;
  s.kind = ModelKind::XXChain;
  s.alpha = alpha;
  s.beta_c = beta_c;
  s.gamma_c = gamma_c;
  s.dt = 1e-3;
  s.t_max = 20.0;
  s.analysis.ref_bound = true;
  return s;
}

inline ScenarioSpec charger_preset(const std::string& label, double gamma0, double lambda, double kappa) {
  ScenarioSpec s;
  s.label = label;
  s.kind = ModelKind::ChargerBattery;
  s.reservoir = ReservoirParams{gamma0, lambda, 3.0, 0.0};
  s.eta = 0.1;
  s.kappa = kappa;
  s.dt = 1e-2;
  s.t_max = 20.0;
  s.min_eig_tolerance = s.reservoir.non_markovian() ? -1e-3 : -1e-8;
  return s;
}

inline ScenarioSpec hot_preset(const std::string& label, double gamma0, double lambda) {
  ScenarioSpec s = charger_preset(label, gamma0, lambda, 50.0);
  s.eta = 10.0;
  s.reservoir.n_photon = 5.0;
  s.zero_t = false;
  s.beta = 0.1;
  s.dt = 1e-3;
  s.t_max = 1.0;
  return s;
}

inline ScenarioSpec coherence_preset(const std::string& label, const std::string& charger,
                                     const std::string& battery) {
  ScenarioSpec s = hot_preset(label, 0.1, 0.01);
  s.initial_charger = charger;
  s.initial_battery = battery;
  return s;
}

}  // namespace detail

inline const std::vector<Preset>& presets() {
  static const std::vector<Preset> table = [] {
    using detail::charger_preset;
    const double h = 1.0 / std::sqrt(2.0);
    std::vector<Preset> p;
    p.push_back({"fig1a", "XX ring, battery initially empty (gamma_c = 1)",
                 {detail::xx_preset("fig1a", 0.0, 0.0, 1.0)}});
    p.push_back({"fig1b", "XX ring, beta_c = gamma_c = 1/sqrt(2)", {detail::xx_preset("fig1b", 0.0, h, h)}});
    const struct {
      const char* tag;
      const char* panel;
      const char* what;
      double gamma0, lambda, kappa;
    } regimes[] = {{"mo", "a", "Markovian overdamped", 1.0, 100.0, 0.001},
                   {"mu", "b", "Markovian underdamped", 0.1, 10.0, 0.2},
                   {"nmo", "c", "non-Markovian overdamped", 10.0, 1.0, 0.001},
                   {"nmu", "d", "non-Markovian underdamped", 0.1, 0.01, 0.2}};
    for (const auto& r : regimes) {
      const std::string name = std::string("fig3-") + r.tag;
      p.push_back({name, std::string("charger-battery, ") + r.what + ", T = 0, stored work",
                   {charger_preset(name, r.gamma0, r.lambda, r.kappa)}});
    }
    for (const auto& r : regimes) {
      const std::string name = std::string("fig4") + r.panel;
      p.push_back({name, std::string("charger-battery, ") + r.what + ", T = 0, power and geometric bound",
                   {charger_preset(name, r.gamma0, r.lambda, r.kappa)}});
    }
    p.push_back({"fig5", "hot reservoir (N = 5, beta = 0.1), strong drive; non-Markovian and Markovian runs",
                 {detail::hot_preset("fig5-nm", 0.1, 0.01), detail::hot_preset("fig5-m", 0.1, 10.0)}});
    p.push_back({"fig6a", "charger |+>, battery |+>", {detail::coherence_preset("fig6a", "+", "+")}});
    p.push_back({"fig6b", "charger |+>, battery |0>", {detail::coherence_preset("fig6b", "+", "0")}});
    p.push_back({"fig6c", "charger |1>, battery |+>", {detail::coherence_preset("fig6c", "1", "+")}});
    return p;
  }();
  return table;
}

inline const Preset* find_preset(const std::string& name) {
  for (const auto& p : presets()) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

struct SweepAxis {
  std::string key;
  std::vector<std::string> values;
};

struct RunConfig {
  std::string model;  // preset name, or charger-battery | xx-chain | qubit-relax
  std::vector<std::pair<std::string, std::string>> overrides;  // scenario keys, applied in order
  std::vector<SweepAxis> sweep;
  bool has_sweep = false;  // a sweep.* key was present, even with no values
  std::string output = "out";
  std::uint64_t seed = 0;
  unsigned workers = 1;
  bool write_series = true;
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline double parse_double(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.size()) throw ConfigError("config key '" + key + "': expected a number, got '" + v + "'");
  return x;
}

inline std::uint64_t parse_unsigned(const std::string& key, const std::string& v) {
  const double x = parse_double(key, v);
  if (x < 0.0 || x != std::floor(x)) throw ConfigError("config key '" + key + "': expected a nonnegative integer");
  return static_cast<std::uint64_t>(x);
}

inline bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("config key '" + key + "': expected true or false, got '" + v + "'");
}

/// Accepts "re", "re+imi", "re-imi" or "imi".
inline cplx parse_complex(const std::string& key, const std::string& v) {
  const auto fail = [&] { return ConfigError("config key '" + key + "': expected a complex number, got '" + v + "'"); };
  if (v.empty()) throw fail();
  if (v.back() != 'i') return parse_double(key, v);
  const std::string body = v.substr(0, v.size() - 1);
  // Split at the last sign that is not part of an exponent.
  for (std::size_t k = body.size(); k-- > 1;) {
    if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
      const std::string im = body.substr(k);
      return {parse_double(key, body.substr(0, k)), parse_double(key, im == "+" || im == "-" ? im + "1" : im)};
    }
  }
  if (body.empty() || body == "+" || body == "-") return {0.0, body == "-" ? -1.0 : 1.0};
  try {
    return {0.0, parse_double(key, body)};
  } catch (const ConfigError&) {
    throw fail();
  }
}

inline std::string parse_ket_name(const std::string& key, const std::string& v) {
  if (v == "0" || v == "1" || v == "+" || v == "-" || v == "random") return v;
  throw ConfigError("config key '" + key + "': expected 0, 1, +, - or random, got '" + v + "'");
}

using Setter = std::function<void(ScenarioSpec&, const std::string&, const std::string&)>;

inline const std::map<std::string, Setter>& scenario_setters() {
  static const std::map<std::string, Setter> table = {
      {"label", [](ScenarioSpec& s, const std::string&, const std::string& v) { s.label = v; }},
      {"dt", [](ScenarioSpec& s, const std::string& k, const std::string& v) { s.dt = parse_double(k, v); }},
      {"t_max", [](ScenarioSpec& s, const std::string& k, const std::string& v) { s.t_max = parse_double(k, v); }},
      {"record_every",
       [](ScenarioSpec& s, const std::string& k, const std::string& v) {
         s.record_every = parse_unsigned(k, v);
         if (s.record_every == 0) throw ConfigError("config key 'record_every': must be >= 1");
       }},
      {"zero_t", [](ScenarioSpec& s, const std::string& k, const std::string& v) { s.zero_t = parse_bool(k, v); }},
      {"beta",
       [](ScenarioSpec& s, const std::string& k, const std::string& v) {
         s.beta = parse_double(k, v);
         s.zero_t = false;
       }},
      {"n_photon",
       [](ScenarioSpec& s, const std::string& k, const std::string& v) { s.reservoir.n_photon = parse_double(k, v); }},
      {"omega0", [](ScenarioSpec& s, const std::string& k, const std::string& v) { s.omega0 = parse_double(k, v); }},
      {"eta", [](ScenarioSpec& s, const std::string& k, const std::string& v) { s.eta = parse_double(k, v); }},
      {"kappa", [](ScenarioSpec& s, const std::string& k, const std::string& v) { s.kappa = parse_double(k, v); }},
      {"gamma0",
       [](ScenarioSpec& s, const std::string& k, const std::string& v) { s.reservoir.gamma0 = parse_double(k, v); }},
      {"lambda",
       [](ScenarioSpec& s, const std::string& k, const std::string& v) { s.reservoir.lambda = parse_double(k, v); }},
      {"R",
       [](ScenarioSpec& s, const std::string& k, const std::string& v) {
         const double r = parse_double(k, v);
         if (!(r > 0.0)) throw ConfigError("config key 'R': must be positive");
         s.reservoir.lambda = s.reservoir.gamma0 / r;
       }},
      {"detuning",
       [](ScenarioSpec& s, const std::string& k, const std::string& v) { s.reservoir.detuning = parse_double(k, v); }},
      {"J", [](ScenarioSpec& s, const std::string& k, const std::string& v) { s.J = parse_double(k, v); }},
      {"B", [](ScenarioSpec& s, const std::string& k, const std::string& v) { s.B = parse_double(k, v); }},
      {"alpha", [](ScenarioSpec& s, const std::string& k, const std::string& v) { s.alpha = parse_complex(k, v); }},
      {"beta_c", [](ScenarioSpec& s, const std::string& k, const std::string& v) { s.beta_c = parse_complex(k, v); }},
      {"gamma_c",
       [](ScenarioSpec& s, const std::string& k, const std::string& v) { s.gamma_c = parse_complex(k, v); }},
      {"gamma", [](ScenarioSpec& s, const std::string& k, const std::string& v) { s.gamma = parse_double(k, v); }},
      {"initial_charger",
       [](ScenarioSpec& s, const std::string& k, const std::string& v) { s.initial_charger = parse_ket_name(k, v); }},
      {"initial_battery",
       [](ScenarioSpec& s, const std::string& k, const std::string& v) { s.initial_battery = parse_ket_name(k, v); }},
      {"min_eig_tolerance",
       [](ScenarioSpec& s, const std::string& k, const std::string& v) { s.min_eig_tolerance = parse_double(k, v); }},
      {"geo", [](ScenarioSpec& s, const std::string& k, const std::string& v) { s.analysis.geo = parse_bool(k, v); }},
      {"ext", [](ScenarioSpec& s, const std::string& k, const std::string& v) { s.analysis.ext = parse_bool(k, v); }},
      {"thermo_bound",
       [](ScenarioSpec& s, const std::string& k, const std::string& v) { s.analysis.thermo_bound = parse_bool(k, v); }},
      {"ref_bound",
       [](ScenarioSpec& s, const std::string& k, const std::string& v) { s.analysis.ref_bound = parse_bool(k, v); }},
      {"spectral_qfi",
       [](ScenarioSpec& s, const std::string& k, const std::string& v) { s.analysis.spectral_qfi = parse_bool(k, v); }},
  };
  return table;
}

inline const std::vector<std::string> kRunKeys = {"model", "output", "seed", "workers", "write_series"};

inline std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

inline void apply_override(ScenarioSpec& s, const std::string& key, const std::string& value) {
  const auto& setters = scenario_setters();
  const auto it = setters.find(key);
  if (it == setters.end()) throw ConfigError("unknown config key '" + key + "'");
  it->second(s, key, value);
}

}  // namespace detail

inline bool is_scenario_key(const std::string& key) { return detail::scenario_setters().count(key) > 0; }

/// Sets one key, validating it. Scenario keys are checked against a default
/// scenario so that bad values fail at parse time.
inline void set_config_key(RunConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "model") {
    cfg.model = value;
  } else if (key == "output") {
    cfg.output = value;
  } else if (key == "seed") {
    cfg.seed = detail::parse_unsigned(key, value);
  } else if (key == "workers") {
    cfg.workers = static_cast<unsigned>(std::max<std::uint64_t>(1, detail::parse_unsigned(key, value)));
  } else if (key == "write_series") {
    cfg.write_series = detail::parse_bool(key, value);
  } else if (key.rfind("sweep.", 0) == 0) {
    const std::string target = key.substr(6);
    if (!is_scenario_key(target) || target == "label") {
      throw ConfigError("unknown config key '" + key + "' (sweep target '" + target + "' is not a scenario key)");
    }
    cfg.has_sweep = true;
    SweepAxis axis{target, detail::split_list(value)};
    ScenarioSpec probe;
    for (const auto& v : axis.values) detail::apply_override(probe, target, v);
    cfg.sweep.push_back(std::move(axis));
  } else {
    ScenarioSpec probe;
    detail::apply_override(probe, key, value);
    cfg.overrides.emplace_back(key, value);
  }
}

/// Base scenarios of a model name before overrides.
inline std::vector<ScenarioSpec> base_scenarios(const std::string& model) {
  if (const Preset* p = find_preset(model)) return p->scenarios;
  ScenarioSpec s;
  s.label = model;
  if (model == "charger-battery") {
    s.kind = ModelKind::ChargerBattery;
  } else if (model == "xx-chain") {
    s.kind = ModelKind::XXChain;
    s.dt = 1e-3;
    s.analysis.ref_bound = true;
  } else if (model == "qubit-relax") {
    s.kind = ModelKind::QubitRelax;
    s.initial_battery = "1";
    s.t_max = 5.0;
    s.analysis.thermo_bound = true;
  } else {
    throw ConfigError("config key 'model': unknown preset or model '" + model + "'");
  }
  return {s};
}

inline RunConfig parse_config(std::istream& in) {
  RunConfig cfg;
  cfg.write_series = true;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(lineno) + ": expected 'key = value'");
    }
    set_config_key(cfg, detail::trim(line.substr(0, eq)), detail::trim(line.substr(eq + 1)));
  }
  if (cfg.model.empty()) throw ConfigError("config key 'model' is required");
  base_scenarios(cfg.model);
  return cfg;
}

inline RunConfig parse_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  return parse_config(in);
}

inline RunConfig parse_config_string(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

/// Scenarios of `cfg` with its overrides and seed applied (no sweep).
inline std::vector<ScenarioSpec> resolve_scenarios(const RunConfig& cfg,
                                                   const std::vector<std::pair<std::string, std::string>>& extra = {}) {
  std::vector<ScenarioSpec> out = base_scenarios(cfg.model);
  for (auto& s : out) {
    s.seed = cfg.seed;
    const std::string label = s.label;
    // R is relative to gamma0, so it goes after every other key.
    auto apply_all = [&](bool r_pass) {
      for (const auto* list : {&cfg.overrides, &extra}) {
        for (const auto& [k, v] : *list) {
          if ((k == "R") == r_pass) detail::apply_override(s, k, v);
        }
      }
    };
    apply_all(false);
    apply_all(true);
    // A single-scenario preset keeps its name unless relabelled; fig5 keeps its suffixes.
    if (out.size() > 1) s.label = label;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Output
// ---------------------------------------------------------------------------

inline const char* kSeriesHeader =
    "t,W_max,dW,P,sigma_A,sqrt_IQ,bound_geo,sqrt_IQ_ext,bound_ext,W_diss,S_irr_rate,bound_thermo,bound_ref,f_t,"
    "trace_err,min_eig,flags";

inline const char* kSummaryHeader =
    "label,max_dW,argmax_dW_t,max_abs_P,argmax_P_t,saturation_fraction,min_slack_geo,min_slack_ext,"
    "min_slack_thermo,max_trace_err,min_eig";

/// 17 significant digits; "nan" for NaN.
inline std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline void write_series_csv(std::ostream& out, std::span<const AnalysisRow> rows) {
  out << kSeriesHeader << '\n';
  for (const auto& r : rows) {
    const double cols[] = {r.t,          r.w_max,     r.dw,       r.power,     r.sigma_a,  r.sqrt_qfi,
                           r.bound_geo,  r.sqrt_qfi_ext, r.bound_ext, r.w_diss, r.s_irr_rate, r.bound_thermo,
                           r.bound_ref,  r.f_t,       r.trace_err, r.min_eig};
    for (double c : cols) out << format_number(c) << ',';
    out << (r.flags.empty() ? "-" : r.flags) << '\n';
  }
}

inline void write_summary_row(std::ostream& out, const SummaryRecord& s) {
  out << s.label;
  for (double c : {s.max_dw, s.argmax_dw_t, s.max_abs_power, s.argmax_power_t, s.saturation_fraction,
                   s.min_slack_geo, s.min_slack_ext, s.min_slack_thermo, s.max_trace_err, s.min_eig}) {
    out << ',' << format_number(c);
  }
  out << '\n';
}

/// Parses a series CSV back into rows (CSV columns only).
inline std::vector<AnalysisRow> read_series_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kSeriesHeader) throw std::runtime_error("read_series_csv: bad header");
  std::vector<AnalysisRow> rows;
  while (std::getline(in, line)) {
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (f.size() != 17) throw std::runtime_error("read_series_csv: expected 17 columns");
    auto num = [&](std::size_t i) { return f[i] == "nan" ? kNaN : std::stod(f[i]); };
    AnalysisRow r;
    r.t = num(0);
    r.w_max = num(1);
    r.dw = num(2);
    r.power = num(3);
    r.sigma_a = num(4);
    r.sqrt_qfi = num(5);
    r.bound_geo = num(6);
    r.sqrt_qfi_ext = num(7);
    r.bound_ext = num(8);
    r.w_diss = num(9);
    r.s_irr_rate = num(10);
    r.bound_thermo = num(11);
    r.bound_ref = num(12);
    r.f_t = num(13);
    r.trace_err = num(14);
    r.min_eig = num(15);
    r.flags = f[16] == "-" ? "" : f[16];
    rows.push_back(std::move(r));
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Drivers
// ---------------------------------------------------------------------------

/// Runs `jobs` on up to `workers` threads; results keep the job order.
/// The first failure (in job order) is rethrown after all threads finish.
inline std::vector<ScenarioResult> run_parallel(const std::vector<ScenarioSpec>& jobs, unsigned workers) {
  std::vector<ScenarioResult> results(jobs.size());
  std::vector<std::exception_ptr> errors(jobs.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      try {
        results[i] = run_scenario(jobs[i]);
      } catch (const std::exception& e) {
        errors[i] = std::make_exception_ptr(std::runtime_error("scenario '" + jobs[i].label + "': " + e.what()));
      }
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(jobs.size())));
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < n; ++k) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

struct RunOutput {
  std::vector<ScenarioResult> results;
  std::vector<std::filesystem::path> files;
};

inline std::filesystem::path write_text(const std::filesystem::path& path, const std::function<void(std::ostream&)>& fn) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  fn(out);
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
  return path;
}

/// Runs every scenario of the config and writes `<label>.csv` plus summary.csv.
inline RunOutput run(const RunConfig& cfg) {
  if (cfg.has_sweep) throw ConfigError("config key 'sweep': use the sweep command for configs with sweep.* keys");
  RunOutput out;
  out.results = run_parallel(resolve_scenarios(cfg), cfg.workers);
  const std::filesystem::path dir(cfg.output);
  std::filesystem::create_directories(dir);
  for (const auto& r : out.results) {
    out.files.push_back(write_text(dir / (r.label + ".csv"), [&](std::ostream& os) { write_series_csv(os, r.rows); }));
  }
  out.files.push_back(write_text(dir / "summary.csv", [&](std::ostream& os) {
    os << kSummaryHeader << '\n';
    for (const auto& r : out.results) write_summary_row(os, r.summary);
  }));
  return out;
}

struct SweepPoint {
  std::size_t index = 0;
  std::vector<std::pair<std::string, std::string>> values;
};

inline constexpr std::size_t kMaxSweepPoints = 10000;

/// Cartesian grid, last axis fastest.
inline std::vector<SweepPoint> sweep_grid(const RunConfig& cfg) {
  if (!cfg.has_sweep || cfg.sweep.empty()) throw ConfigError("config key 'sweep': no sweep.<key> axes given");
  std::size_t total = 1;
  for (const auto& a : cfg.sweep) {
    if (a.values.empty()) throw ConfigError("config key 'sweep." + a.key + "': empty sweep grid");
    total *= a.values.size();
    if (total > kMaxSweepPoints) throw ConfigError("config key 'sweep': grid exceeds 10000 points");
  }
  std::vector<SweepPoint> grid(total);
  for (std::size_t i = 0; i < total; ++i) {
    grid[i].index = i;
    std::size_t rem = i;
    grid[i].values.resize(cfg.sweep.size());
    for (std::size_t a = cfg.sweep.size(); a-- > 0;) {
      const auto& axis = cfg.sweep[a];
      grid[i].values[a] = {axis.key, axis.values[rem % axis.values.size()]};
      rem /= axis.values.size();
    }
  }
  return grid;
}

struct SweepOutput {
  std::vector<SweepPoint> points;
  std::vector<std::size_t> point_of_result;  // grid index for each result
  std::vector<ScenarioResult> results;
  std::vector<std::filesystem::path> files;
};

/// Runs every grid point independently and writes sweep_summary.csv (one row
/// per point and trajectory) and, if write_series, per-point CSVs.
inline SweepOutput sweep(const RunConfig& cfg) {
  SweepOutput out;
  out.points = sweep_grid(cfg);
  std::vector<ScenarioSpec> jobs;
  for (const auto& pt : out.points) {
    for (auto s : resolve_scenarios(cfg, pt.values)) {
      s.label += "_p" + std::to_string(pt.index);
      jobs.push_back(std::move(s));
      out.point_of_result.push_back(pt.index);
    }
  }
  out.results = run_parallel(jobs, cfg.workers);

  const std::filesystem::path dir(cfg.output);
  std::filesystem::create_directories(dir);
  if (cfg.write_series) {
    for (const auto& r : out.results) {
      out.files.push_back(write_text(dir / (r.label + ".csv"), [&](std::ostream& os) { write_series_csv(os, r.rows); }));
    }
  }
  out.files.push_back(write_text(dir / "summary.csv", [&](std::ostream& os) {
    os << "point";
    for (const auto& a : cfg.sweep) os << ',' << a.key;
    os << ',' << kSummaryHeader << '\n';
    for (std::size_t i = 0; i < out.results.size(); ++i) {
      const auto& pt = out.points[out.point_of_result[i]];
      os << pt.index;
      for (const auto& [k, v] : pt.values) os << ',' << v;
      os << ',';
      write_summary_row(os, out.results[i].summary);
    }
  }));
  return out;
}

}  // namespace oqb
