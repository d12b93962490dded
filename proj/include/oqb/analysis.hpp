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

// Scenario description -> battery trajectory -> per-sample thermodynamic and
// geometric series (one AnalysisRow per recorded time) plus a summary.

#include "oqb/bounds.hpp"
#include "oqb/dynamics.hpp"
#include "oqb/models.hpp"
#include "oqb/qgeom.hpp"
#include "oqb/thermo.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace oqb {

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

enum class ModelKind { XXChain, ChargerBattery, QubitRelax };

inline const char* to_string(ModelKind k) {
  switch (k) {
    case ModelKind::XXChain:
      return "xx-chain";
    case ModelKind::ChargerBattery:
      return "charger-battery";
    case ModelKind::QubitRelax:
      return "qubit-relax";
  }
  return "?";
}

struct AnalysisToggles {
  bool geo = true;
  bool ext = true;
  bool thermo_bound = false;
  bool ref_bound = false;
  bool spectral_qfi = false;
};

/// Flat parameter set for one trajectory. Fields irrelevant to `kind` are
/// ignored.
struct ScenarioSpec {
  std::string label = "custom";
  ModelKind kind = ModelKind::ChargerBattery;
  double omega0 = 1.0;

  // xx-chain
  double J = 1.0;
  double B = 0.0;
  cplx alpha{0.0, 0.0};
  cplx beta_c{0.0, 0.0};
  cplx gamma_c{1.0, 0.0};

  // charger-battery
  double eta = 0.1;
  double kappa = 0.2;
  ReservoirParams reservoir{0.1, 0.01, 3.0, 0.0};
  std::string initial_charger = "1";
  std::string initial_battery = "0";

  // qubit-relax: heating N gamma, dissipation (N + 1) gamma
  double gamma = 1.0;

  bool zero_t = true;
  double beta = 1.0;

  double dt = 1e-2;
  double t_max = 20.0;
  std::size_t record_every = 1;
  double min_eig_tolerance = -1e-8;
  AnalysisToggles analysis{};
  std::uint64_t seed = 0;
};

struct AnalysisRow {
  double t = 0.0;
  double w_max = 0.0;
  double dw = 0.0;
  double power = 0.0;
  double sigma_a = 0.0;
  double sqrt_qfi = kNaN;
  double bound_geo = kNaN;
  double sqrt_qfi_ext = kNaN;
  double bound_ext = kNaN;
  double w_diss = kNaN;
  double s_irr_rate = kNaN;
  double bound_thermo = kNaN;
  double bound_ref = kNaN;
  double f_t = kNaN;
  double trace_err = 0.0;
  double min_eig = 0.0;
  std::string flags;

  // Not exported to CSV.
  double w_max_raw = 0.0;
  double qfi = kNaN;
  double qfi_ext_split = kNaN;
  double qfi_spectral = kNaN;
  bool spectral_flagged = false;
  bool ext_consistent = true;
  double split_residual = kNaN;
  double battery_population = kNaN;  // <1|rho_B|1>
  double battery_min_eig = kNaN;

  BoundReport bounds() const {
    BoundReport r;
    r.t = t;
    r.power_abs = std::abs(power);
    r.bound_geo = bound_geo;
    r.bound_ext = bound_ext;
    r.bound_thermo = bound_thermo;
    r.bound_ref = bound_ref;
    return r;
  }
};

struct SummaryRecord {
  std::string label;
  double max_dw = kNaN;
  double argmax_dw_t = kNaN;
  double max_abs_power = kNaN;
  double argmax_power_t = kNaN;
  double saturation_fraction = kNaN;
  double min_slack_geo = kNaN;
  double min_slack_ext = kNaN;
  double min_slack_thermo = kNaN;
  double max_trace_err = kNaN;
  double min_eig = kNaN;
};

struct ScenarioResult {
  std::string label;
  std::vector<AnalysisRow> rows;
  SummaryRecord summary;
};

/// Battery-level samples shared by every model.
struct BatterySeries {
  double dt = 0.0;
  std::vector<double> times;
  std::vector<CMatrix> rho;
  std::vector<CMatrix> rho_dot;
  std::vector<CMatrix> full;  // empty when the reference bound is unavailable
  std::optional<CMatrix> coupling;
  std::vector<SampleDiagnostics> diagnostics;
  std::vector<double> f_t;
};

/// Parses "0", "1", "+", "-" or "random" into a qubit ket.
inline CVector parse_qubit_ket(const std::string& name, std::mt19937_64& rng) {
  if (name == "0") return ops::ket0();
  if (name == "1") return ops::ket1();
  if (name == "+") return ops::ket_plus();
  if (name == "-") return (ops::ket0() - ops::ket1()) / std::sqrt(2.0);
  if (name == "random") {
    std::normal_distribution<double> normal;
    CVector v(2);
    for (Eigen::Index i = 0; i < 2; ++i) v(i) = cplx(normal(rng), normal(rng));
    return v / v.norm();
  }
  throw std::invalid_argument("unknown qubit state '" + name + "' (expected 0, 1, +, - or random)");
}

inline ThermoContext scenario_thermo(const ScenarioSpec& s) {
  const CMatrix hb = qubit_battery_hamiltonian(s.omega0);
  if (s.zero_t) return ThermoContext::zero_temperature(hb);
  return ThermoContext::at_beta(hb, s.beta, s.reservoir.n_photon);
}

inline XXChainParams xx_params(const ScenarioSpec& s) {
  XXChainParams p;
  p.omega0 = s.omega0;
  p.J = s.J;
  p.B = s.B;
  p.alpha = s.alpha;
  p.beta_c = s.beta_c;
  p.gamma_c = s.gamma_c;
  return p;
}

inline ChargerBatteryParams charger_battery_params(const ScenarioSpec& s) {
  std::mt19937_64 rng(s.seed);
  ChargerBatteryParams p;
  p.omega0 = s.omega0;
  p.eta = s.eta;
  p.kappa = s.kappa;
  p.reservoir = s.reservoir;
  if (!s.zero_t) p.beta = s.beta;
  p.charger = parse_qubit_ket(s.initial_charger, rng);
  p.battery = parse_qubit_ket(s.initial_battery, rng);
  return p;
}

inline std::size_t grid_steps(double dt, double t_max) {
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (!(t_max >= 0.0)) throw std::invalid_argument("t_max must be nonnegative");
  const double steps = t_max / dt;
  const auto n = static_cast<std::size_t>(std::llround(steps));
  if (std::abs(steps - static_cast<double>(n)) > 1e-6) {
    throw std::invalid_argument("t_max must be an integer multiple of dt");
  }
  return n;
}

inline BatterySeries xx_series(const ScenarioSpec& s) {
  const XXChainParams p = xx_params(s);
  p.validate();
  const std::size_t n = grid_steps(s.dt, s.t_max);
  BatterySeries out;
  out.dt = s.dt * static_cast<double>(s.record_every);
  out.coupling = xx_interaction(p);
  for (std::size_t k = 0; k <= n; k += s.record_every) {
    const double t = static_cast<double>(k) * s.dt;
    const BatteryState b = xx_battery_state(p, t);
    const CMatrix full = projector(xx_state(p, t));
    SampleDiagnostics d;
    d.trace_error = std::abs(real_trace(full) - 1.0);
    d.hermiticity_defect = hermiticity_defect(full);
    d.min_eigenvalue = eig_hermitian(full).values(0);
    out.times.push_back(t);
    out.rho.push_back(b.rho);
    out.rho_dot.push_back(b.rho_dot);
    out.full.push_back(full);
    out.diagnostics.push_back(d);
    out.f_t.push_back(kNaN);
  }
  return out;
}

inline IntegrateOptions integrate_options(const ScenarioSpec& s) {
  IntegrateOptions opt;
  opt.dt = s.dt;
  opt.t_max = s.t_max;
  opt.record_every = s.record_every;
  opt.min_eigenvalue_tolerance = s.min_eig_tolerance;
  return opt;
}

inline BatterySeries charger_battery_series(const ScenarioSpec& s) {
  const ChargerBatteryModel model = build_charger_battery(charger_battery_params(s));
  IntegrateOptions opt = integrate_options(s);
  opt.bipartition = std::make_pair(std::size_t{2}, std::size_t{2});
  Trajectory traj = integrate(model.rho0, model.hamiltonian_fn(), model.channels, opt);

  BatterySeries out;
  out.dt = traj.dt;
  out.times = std::move(traj.times);
  out.rho = std::move(traj.reduced_states);
  out.diagnostics = std::move(traj.diagnostics);
  out.rho_dot.reserve(out.times.size());
  for (std::size_t k = 0; k < out.times.size(); ++k) {
    const double t = out.times[k];
    // All jump operators act on the battery, so Tr_A of the full generator is
    // the exact battery generator.
    const CMatrix full_rate = lindblad_rhs(traj.states[k], model.hamiltonian, model.channels, t);
    out.rho_dot.push_back(hermitian_part(partial_trace(full_rate, Subsystem::B, 2, 2)));
    out.f_t.push_back(rate_function_f(model.reservoir, t));
  }
  out.full = std::move(traj.states);
  return out;
}

inline BatterySeries qubit_relax_series(const ScenarioSpec& s) {
  std::mt19937_64 rng(s.seed);
  const CMatrix rho0 = projector(parse_qubit_ket(s.initial_battery, rng));
  const double n = s.reservoir.n_photon;
  const std::vector<LindbladChannel> channels = {{ops::sigma_plus(), constant_rate(n * s.gamma)},
                                                 {ops::sigma_minus(), constant_rate((n + 1.0) * s.gamma)}};
  // Rotating frame of H_B: the channels are eigenoperators of H_B, so the
  // generator is the dissipator alone.
  const HamiltonianFunction h = constant_hamiltonian(CMatrix::Zero(2, 2));
  Trajectory traj = integrate(rho0, h, channels, integrate_options(s));
  BatterySeries out;
  out.dt = traj.dt;
  out.times = std::move(traj.times);
  out.diagnostics = std::move(traj.diagnostics);
  for (std::size_t k = 0; k < out.times.size(); ++k) {
    out.rho_dot.push_back(lindblad_rhs(traj.states[k], h, channels, out.times[k]));
    out.f_t.push_back(kNaN);
  }
  out.rho = std::move(traj.states);
  return out;
}

inline BatterySeries scenario_series(const ScenarioSpec& s) {
  switch (s.kind) {
    case ModelKind::XXChain:
      return xx_series(s);
    case ModelKind::ChargerBattery:
      return charger_battery_series(s);
    case ModelKind::QubitRelax:
      return qubit_relax_series(s);
  }
  throw std::logic_error("scenario_series: unknown model kind");
}

inline void append_flag(std::string& flags, const std::string& token) {
  if (!flags.empty()) flags += ';';
  flags += token;
}

/// Evaluates every enabled quantity at every sample of `series`.
inline std::vector<AnalysisRow> analyze(const BatterySeries& series, const ThermoContext& ctx,
                                        const AnalysisToggles& toggles) {
  const std::size_t n = series.times.size();
  std::vector<AnalysisRow> rows(n);
  const bool need_split = toggles.ext || toggles.thermo_bound;
  const bool have_ref = toggles.ref_bound && series.coupling && series.full.size() == n;

  double w0 = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    AnalysisRow& row = rows[k];
    const CMatrix& rho = series.rho[k];
    const CMatrix& rho_dot = series.rho_dot[k];
    const EigenSystem es = eig_hermitian(rho);
    const CMatrix activity = activity_operator(es, ctx);

    row.t = series.times[k];
    row.w_max_raw = expval(rho, activity);
    if (k == 0) w0 = row.w_max_raw;
    row.w_max = std::max(row.w_max_raw, -1e-10);
    row.dw = row.w_max_raw - w0;
    row.power = (rho_dot * activity).trace().real();
    row.sigma_a = stddev(rho, activity);
    row.f_t = series.f_t[k];
    row.battery_population = rho(rho.rows() - 1, rho.cols() - 1).real();
    row.battery_min_eig = es.values(0);

    const SampleDiagnostics& diag = series.diagnostics[k];
    row.trace_err = diag.trace_error;
    row.min_eig = diag.min_eigenvalue;
    if (diag.positivity_warning) append_flag(row.flags, "N");

    if (toggles.geo) {
      row.qfi = qfi_sld(es, rho_dot);
      row.sqrt_qfi = std::sqrt(row.qfi);
      row.bound_geo = row.sigma_a * row.sqrt_qfi;
    }
    if (need_split) {
      const DissipatorSplit split = split_generator(es, rho_dot);
      row.split_residual = split_residuals(split, rho).max();
      if (split.dropped_pairs > 0) append_flag(row.flags, "D" + std::to_string(split.dropped_pairs));
      if (toggles.ext) {
        const SpeedReport speed = qfi_extended(rho, split);
        row.sqrt_qfi_ext = std::sqrt(std::max(0.0, speed.qfi_ext));
        row.qfi_ext_split = speed.qfi_ext_split;
        row.bound_ext = row.sigma_a * row.sqrt_qfi_ext;
        row.ext_consistent = speed.consistent;
        if (!speed.consistent) append_flag(row.flags, "E");
      }
      const ThermoBound tb = bound_thermodynamic(rho, split, CMatrix::Zero(rho.rows(), rho.cols()), ctx);
      row.w_diss = tb.dissipative_work;
      row.s_irr_rate = tb.irreversible;
      if (toggles.thermo_bound) {
        row.bound_thermo = tb.value;
        if (!tb.entropy_included) append_flag(row.flags, "Z");
      }
    }
    if (have_ref) row.bound_ref = bound_reference(series.full[k], *series.coupling, rho, ctx);
    if (toggles.spectral_qfi && k > 0 && k + 1 < n) {
      const SpectralQfi sq = qfi_spectral(series.rho[k - 1], rho, series.rho[k + 1], series.dt);
      row.qfi_spectral = sq.value;
      row.spectral_flagged = sq.flagged;
      if (sq.flagged) append_flag(row.flags, "X");
    }
  }
  return rows;
}

namespace detail {

inline void track_min(double& acc, double v) {
  if (std::isnan(v)) return;
  if (std::isnan(acc) || v < acc) acc = v;
}

inline void track_max(double& acc, double v) {
  if (std::isnan(v)) return;
  if (std::isnan(acc) || v > acc) acc = v;
}

}  // namespace detail

inline SummaryRecord summarize(const std::string& label, std::span<const AnalysisRow> rows) {
  SummaryRecord s;
  s.label = label;
  std::size_t sat = 0;
  std::size_t geo = 0;
  for (const auto& r : rows) {
    if (std::isnan(s.max_dw) || r.dw > s.max_dw) {
      s.max_dw = r.dw;
      s.argmax_dw_t = r.t;
    }
    const double p = std::abs(r.power);
    if (std::isnan(s.max_abs_power) || p > s.max_abs_power) {
      s.max_abs_power = p;
      s.argmax_power_t = r.t;
    }
    if (!std::isnan(r.bound_geo)) {
      ++geo;
      if (saturated(r.bound_geo, p)) ++sat;
    }
    detail::track_min(s.min_slack_geo, r.bound_geo - p);
    detail::track_min(s.min_slack_ext, r.bound_ext - p);
    detail::track_min(s.min_slack_thermo, r.bound_thermo - p);
    detail::track_max(s.max_trace_err, r.trace_err);
    detail::track_min(s.min_eig, r.min_eig);
  }
  if (geo > 0) s.saturation_fraction = static_cast<double>(sat) / static_cast<double>(geo);
  return s;
}

inline ScenarioResult run_scenario(const ScenarioSpec& s) {
  ScenarioResult res;
  res.label = s.label;
  res.rows = analyze(scenario_series(s), scenario_thermo(s), s.analysis);
  res.summary = summarize(s.label, res.rows);
  return res;
}

}  // namespace oqb
