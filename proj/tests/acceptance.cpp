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

// Acceptance criteria AC1..AC8. Prints one PASS/FAIL line per criterion, with
// the measured values; exits nonzero if any criterion fails.

#include "oqb/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace oqb;
using Clock = std::chrono::steady_clock;

struct Line {
  std::string id;
  bool pass;
  std::string detail;
};

std::vector<Line> lines;

void report(const std::string& id, bool pass, const std::string& detail) {
  lines.push_back({id, pass, detail});
  std::printf("%s %s  %s\n", id.c_str(), pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

struct PresetRun {
  std::vector<ScenarioResult> results;
  double seconds = 0.0;
  const ScenarioResult& only() const { return results.front(); }
};

std::map<std::string, PresetRun> runs;

const PresetRun& preset(const std::string& name) {
  auto it = runs.find(name);
  if (it != runs.end()) return it->second;
  PresetRun r;
  const auto start = Clock::now();
  for (ScenarioSpec s : find_preset(name)->scenarios) {
    if (s.kind == ModelKind::XXChain) s.analysis.spectral_qfi = true;
    r.results.push_back(run_scenario(s));
  }
  r.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return runs.emplace(name, std::move(r)).first->second;
}

const ScenarioResult& by_label(const PresetRun& r, const std::string& label) {
  for (const auto& x : r.results) {
    if (x.label == label) return x;
  }
  throw std::logic_error("no trajectory " + label);
}

void ac1() {
  double worst = 0.0;
  std::size_t used = 0;
  for (const char* name : {"fig1a", "fig1b"}) {
    for (const auto& row : preset(name).only().rows) {
      if (row.battery_population < 1e-6 || row.battery_population > 1.0 - 1e-6) continue;
      const double scale = std::max(std::abs(row.power), row.bound_geo);
      if (scale == 0.0) continue;
      worst = std::max(worst, std::abs(row.bound_geo - std::abs(row.power)) / scale);
      ++used;
    }
  }
  const double secs = preset("fig1a").seconds + preset("fig1b").seconds;
  report("AC1", worst <= 1e-4 && secs < 10.0,
         "XX saturation: max relative gap |P| vs sigma_A sqrt(I_Q) = " + fmt("%.3g", worst) + " over " +
             std::to_string(used) + " samples (limit 1e-4); runtime " + fmt("%.2f", secs) + " s");
}

void ac2() {
  std::size_t violations = 0;
  double min_ref_gap = 1e300;
  double min_geo_gap = 1e300;
  for (const char* name : {"fig1a", "fig1b"}) {
    for (const auto& row : preset(name).only().rows) {
      const double tol = bound_tolerance(row.bound_geo);
      const double ref_gap = row.bound_ref - row.bound_geo;
      const double geo_gap = row.bound_geo - std::abs(row.power);
      min_ref_gap = std::min(min_ref_gap, ref_gap);
      min_geo_gap = std::min(min_geo_gap, geo_gap);
      if (ref_gap < -tol || geo_gap < -tol) ++violations;
    }
  }
  report("AC2", violations == 0,
         "fig1 ordering 2 sigma_V sigma_F >= sigma_A sqrt(I_Q) >= |P| - tol: " + std::to_string(violations) +
             " violations; min(ref - geo) = " + fmt("%.3g", min_ref_gap) + ", min(geo - |P|) = " +
             fmt("%.3g", min_geo_gap));
}

void ac3() {
  const double nmu = preset("fig3-nmu").only().summary.max_dw;
  bool others_smaller = true;
  std::ostringstream os;
  os << "fig3-nmu max dW = " << fmt("%.4f", nmu) << " (target [0.95, 1.0]);";
  for (const char* name : {"fig3-mo", "fig3-mu", "fig3-nmo"}) {
    const double v = preset(name).only().summary.max_dw;
    others_smaller = others_smaller && v < nmu;
    os << ' ' << name << " = " << fmt("%.4g", v);
  }
  report("AC3", nmu >= 0.95 && nmu <= 1.0 && others_smaller, os.str());
}

void ac4() {
  const SummaryRecord& d = preset("fig4d").only().summary;
  const bool peak_ok = std::abs(d.max_abs_power - 0.1) <= 0.015;
  const bool time_ok = std::abs(d.argmax_power_t - 15.0) <= 2.0;
  std::size_t violations = 0;
  std::ostringstream where;
  bool saturation_ok = true;
  std::ostringstream sat;
  for (const char* name : {"fig4a", "fig4b", "fig4c", "fig4d"}) {
    const ScenarioResult& r = preset(name).only();
    std::size_t here = 0;
    double first = -1.0, last = -1.0, worst = 0.0;
    for (const auto& row : r.rows) {
      const double excess = std::abs(row.power) - row.bound_geo - bound_tolerance(row.bound_geo);
      if (excess > 0.0) {
        ++here;
        if (first < 0.0) first = row.t;
        last = row.t;
        worst = std::max(worst, excess);
      }
    }
    violations += here;
    if (here > 0) {
      where << ' ' << name << ": " << here << " samples in t = [" << first << ", " << last
            << "], max excess " << fmt("%.3g", worst) << " (rho_B not positive there, flag N);";
    }
    saturation_ok = saturation_ok && r.summary.saturation_fraction > 0.0;
    sat << ' ' << name << '=' << fmt("%.3f", r.summary.saturation_fraction);
  }
  report("AC4", peak_ok && time_ok && violations == 0 && saturation_ok,
         "fig4d max |P| = " + fmt("%.4f", d.max_abs_power) + " at t = " + fmt("%.2f", d.argmax_power_t) +
             " (target 0.1 +- 15% at 15 +- 2): " + (peak_ok && time_ok ? "ok" : "miss") +
             "; pointwise |P| <= geo + tol: " + std::to_string(violations) + " violations;" + where.str() +
             " saturation fractions" + sat.str());
}

void ac5() {
  const PresetRun& run = preset("fig5");
  const ScenarioResult& nm = by_label(run, "fig5-nm");
  const ScenarioResult& m = by_label(run, "fig5-m");
  double lo = 1e300, hi = -1e300;
  for (const ScenarioResult* r : {&nm, &m}) {
    for (const auto& row : r->rows) {
      lo = std::min(lo, row.dw);
      hi = std::max(hi, row.dw);
    }
  }
  const bool window_ok = lo >= -10.5 && hi <= 1.05;
  const bool charge_ok = std::abs(nm.summary.max_dw - 1.0) <= 0.1 && std::abs(nm.summary.argmax_dw_t - 0.3) <= 0.05;
  const bool power_ok = std::abs(nm.summary.max_abs_power - 200.0) <= 40.0;
  const bool order_ok = nm.summary.max_abs_power > m.summary.max_abs_power;
  report("AC5", window_ok && charge_ok && power_ok && order_ok,
         "dW range [" + fmt("%.3f", lo) + ", " + fmt("%.3f", hi) + "] (limit [-10.5, 1.05]): " +
             (window_ok ? "ok" : "miss") + "; NM max dW = " + fmt("%.4f", nm.summary.max_dw) + " at t = " +
             fmt("%.3f", nm.summary.argmax_dw_t) + " (1.0 +- 10% near 0.3 +- 0.05): " + (charge_ok ? "ok" : "miss") +
             "; NM max |P| = " + fmt("%.1f", nm.summary.max_abs_power) + " (200 +- 20%): " +
             (power_ok ? "ok" : "miss") + "; M max |P| = " + fmt("%.1f", m.summary.max_abs_power) + ", NM > M: " +
             (order_ok ? "ok" : "miss"));
}

void ac6() {
  const double a = preset("fig6a").only().summary.max_dw;
  const double b = preset("fig6b").only().summary.max_dw;
  const double c = preset("fig6c").only().summary.max_dw;
  const bool a_ok = a <= 1e-6;
  const bool b_ok = std::abs(b - 1.0) <= 0.05;
  const bool c_ok = std::abs(c - 1.0) <= 0.05;
  const bool same = std::abs(b - c) <= 0.05 * std::max(b, c);
  report("AC6", a_ok && b_ok && c_ok && same,
         "fig6a max dW = " + fmt("%.3g", a) + " (<= 1e-6): " + (a_ok ? "ok" : "miss") + "; fig6b = " + fmt("%.4f", b) +
             " (1 +- 5%): " + (b_ok ? "ok" : "miss") + "; fig6c = " + fmt("%.4f", c) + " (1 +- 5%): " +
             (c_ok ? "ok" : "miss") + "; |6b - 6c| <= 5%: " + (same ? "ok" : "miss"));
}

// Central-difference derivative of the stored work along the recorded grid.
double power_identity_error(const ScenarioResult& r, std::size_t stride) {
  const auto& rows = r.rows;
  const double h = (rows[1].t - rows[0].t) * static_cast<double>(stride);
  double err = 0.0;
  for (std::size_t k = stride; k + stride < rows.size(); ++k) {
    bool clean = true;
    for (std::size_t j = k - stride; j <= k + stride; ++j) clean = clean && rows[j].flags.find('N') == std::string::npos;
    if (!clean) continue;
    const double fd = (rows[k + stride].w_max_raw - rows[k - stride].w_max_raw) / (2.0 * h);
    err = std::max(err, std::abs(fd - rows[k].power));
  }
  return err;
}

void ac7() {
  std::vector<std::string> failures;
  std::ostringstream os;

  // Extended QFI on random (rho, generator) pairs.
  {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> normal;
    std::size_t bad = 0;
    for (int trial = 0; trial < 1000; ++trial) {
      const Eigen::Index dim = trial % 3 == 0 ? 4 : 2;
      CMatrix g(dim, dim), h(dim, dim);
      for (Eigen::Index i = 0; i < dim; ++i)
        for (Eigen::Index j = 0; j < dim; ++j) {
          g(i, j) = cplx(normal(rng), normal(rng));
          h(i, j) = cplx(normal(rng), normal(rng));
        }
      CMatrix rho = g * g.adjoint();
      rho = hermitian_part(rho / rho.trace().real());
      CMatrix rate = hermitian_part(h);
      rate -= (rate.trace() / static_cast<double>(dim)) * CMatrix::Identity(dim, dim);
      const DissipatorSplit s = split_generator(eig_hermitian(rho), rate);
      const SpeedReport rep = qfi_extended(rho, s);
      const double rel = std::abs(rep.qfi_ext - rep.qfi_ext_split) / std::max(1.0, rep.qfi_ext);
      if (rel > 1e-8 || rep.qfi_ext < rep.qfi - 1e-9) ++bad;
    }
    os << "ext-QFI random pairs: " << bad << "/1000 bad;";
    if (bad) failures.push_back("ext-QFI");
  }

  // Split identities, ext-QFI ordering and the power identity along every shipped trajectory.
  {
    double worst_split = 0.0;
    std::size_t ext_bad = 0, samples = 0, skipped_n = 0;
    for (const auto& p : presets()) {
      for (const auto& r : preset(p.name).results) {
        for (const auto& row : r.rows) {
          ++samples;
          worst_split = std::max(worst_split, row.split_residual);
          // A battery state with a negative eigenvalue has no valid SLD to compare against.
          if (row.battery_min_eig < 0.0) {
            ++skipped_n;
            continue;
          }
          if (!row.ext_consistent || row.sqrt_qfi_ext * row.sqrt_qfi_ext < row.qfi - 1e-9) ++ext_bad;
        }
      }
    }
    os << " split residual max " << fmt("%.2g", worst_split) << " over " << samples << " samples; ext-QFI bad "
       << ext_bad << " (" << skipped_n << " rows with negative battery eigenvalue skipped);";
    if (worst_split > 1e-9) failures.push_back("split");
    if (ext_bad) failures.push_back("ext-QFI trajectories");
  }
  {
    // Halving the stencil width must cut the error about fourfold wherever W is
    // smooth. At finite temperature W carries p log p terms, so near a pure
    // battery state its higher derivatives blow up and the worst-case error only
    // drops about twofold; there the error must still shrink.
    double worst_smooth = 1e300, worst_rough = 1e300;
    std::string smooth_name, rough_name;
    for (const auto& p : presets()) {
      const auto& results = preset(p.name).results;
      for (std::size_t i = 0; i < results.size(); ++i) {
        const auto& r = results[i];
        const double e1 = power_identity_error(r, 1);
        const double e2 = power_identity_error(r, 2);
        if (e2 < 1e-9) continue;
        const double ratio = e2 / e1;
        double min_eig = 1.0;
        for (const auto& row : r.rows) min_eig = std::min(min_eig, row.battery_min_eig);
        const bool smooth = p.scenarios[i].zero_t || min_eig > 1e-2;
        double& worst = smooth ? worst_smooth : worst_rough;
        if (ratio < worst) {
          worst = ratio;
          (smooth ? smooth_name : rough_name) = r.label;
        }
      }
    }
    os << " P = dW/dt: min stencil-halving ratio " << fmt("%.2f", worst_smooth) << " (" << smooth_name
       << ", expect ~4), near-pure finite-T " << fmt("%.2f", worst_rough) << " (" << rough_name << ", expect > 1.5);";
    if (!(worst_smooth > 3.0 && worst_smooth < 5.0)) failures.push_back("P=dW/dt");
    if (!(worst_rough > 1.5)) failures.push_back("P=dW/dt near-pure");
  }

  // RK4 order on the Markovian underdamped couplings.
  {
    const ScenarioSpec base = find_preset("fig3-mu")->scenarios.front();
    const ChargerBatteryModel m = build_charger_battery(charger_battery_params(base));
    const double h = 0.2;
    auto traj = [&](double dt) {
      IntegrateOptions opt;
      opt.dt = dt;
      opt.t_max = 20.0;
      opt.record_every = static_cast<std::size_t>(std::llround(h / dt));
      opt.min_eigenvalue_tolerance = -1e-6;
      return integrate(m.rho0, m.hamiltonian_fn(), m.channels, opt);
    };
    const Trajectory ref = traj(h / 8.0), a = traj(h), b = traj(h / 2.0);
    double ea = 0.0, eb = 0.0;
    for (std::size_t k = 0; k < ref.size(); ++k) {
      ea = std::max(ea, (a.states[k] - ref.states[k]).norm());
      eb = std::max(eb, (b.states[k] - ref.states[k]).norm());
    }
    os << " RK4 ratio " << fmt("%.2f", ea / eb) << ';';
    if (std::abs(ea / eb - 16.0) > 4.0) failures.push_back("RK4");
  }

  // Gibbs fixed point.
  {
    const double n = 1.2;
    const CMatrix hb = qubit_battery_hamiltonian(1.0);
    const auto ctx = ThermoContext::at_beta(hb, std::log((n + 1.0) / n), n);
    IntegrateOptions opt;
    opt.dt = 1e-2;
    opt.t_max = 40.0;
    const Trajectory t = integrate(projector(ops::ket_plus()), constant_hamiltonian(hb),
                                   {{ops::sigma_plus(), constant_rate(0.5 * n)},
                                    {ops::sigma_minus(), constant_rate(0.5 * (n + 1.0))}},
                                   opt);
    const double dist = (t.states.back() - ctx.gibbs_state()).norm();
    os << " Gibbs distance " << fmt("%.2g", dist) << ';';
    if (dist > 1e-6) failures.push_back("Gibbs");
  }

  // qfi_spectral vs qfi_sld on the XX trajectories (analytic neighbours).
  {
    // Pinned after measurement: max err / dt^2 is 12.0 on fig1a and 7.3 on fig1b,
    // unchanged for dt in {2e-3, 1e-3, 5e-4}.
    constexpr double kSpectralConstant = 15.0;
    double worst = 0.0;
    std::size_t bad = 0, used = 0;
    for (const char* name : {"fig1a", "fig1b"}) {
      const auto& rows = preset(name).only().rows;
      const double dt = rows[1].t - rows[0].t;
      for (const auto& row : rows) {
        if (std::isnan(row.qfi_spectral) || row.spectral_flagged) continue;
        ++used;
        const double err = std::abs(row.qfi_spectral - row.qfi);
        worst = std::max(worst, err / (dt * dt));
        if (err > std::max(1e-6, kSpectralConstant * dt * dt)) ++bad;
      }
    }
    os << " spectral vs SLD: " << bad << '/' << used << " beyond max(1e-6, 15 dt^2), max err/dt^2 "
       << fmt("%.3g", worst);
    if (bad) failures.push_back("spectral");
  }

  std::string detail = os.str();
  if (!failures.empty()) {
    detail += " | failing:";
    for (const auto& f : failures) detail += ' ' + f;
  }
  report("AC7", failures.empty(), detail);
}

void ac8(double suite_seconds) {
  double slowest = 0.0;
  std::string name;
  for (const auto& p : presets()) {
    const double s = preset(p.name).seconds;
    if (s > slowest) {
      slowest = s;
      name = p.name;
    }
  }
  report("AC8", slowest < 60.0 && suite_seconds < 600.0,
         "slowest preset " + name + " " + fmt("%.2f", slowest) + " s (limit 60 s); acceptance suite " +
             fmt("%.1f", suite_seconds) + " s (limit 600 s)");
}

}  // namespace

int main() {
  const auto start = Clock::now();
  try {
    for (const auto& p : presets()) preset(p.name);
    ac1();
    ac2();
    ac3();
    ac4();
    ac5();
    ac6();
    ac7();
  } catch (const std::exception& e) {
    std::printf("acceptance aborted: %s\n", e.what());
    return 2;
  }
  ac8(std::chrono::duration<double>(Clock::now() - start).count());
  int failed = 0;
  for (const auto& l : lines) failed += l.pass ? 0 : 1;
  std::printf("%d of %zu criteria pass\n", static_cast<int>(lines.size()) - failed, lines.size());
  return failed == 0 ? 0 : 1;
}
