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

// Upper bounds on the charging power |P| = |Tr(rho_dot A)|:
//   geometric      sigma_A sqrt(I_Q)
//   extended       sigma_A sqrt(I_Q^ext)
//   thermodynamic  W_diss + beta^-1 |dS_irr/dt|
//   reference      2 sigma_V sigma_F (interaction and work-operator spreads)

#include "oqb/qgeom.hpp"
#include "oqb/qmat.hpp"
#include "oqb/thermo.hpp"

#include <cmath>
#include <limits>
#include <span>

namespace oqb {

/// Absolute slack tolerated when checking |P| <= bound.
inline double bound_tolerance(double bound) { return 1e-7 * std::max(1.0, std::abs(bound)); }

inline double bound_geometric(const CMatrix& rho, const CMatrix& rho_dot, const ThermoContext& ctx,
                              double cutoff = kSupportCutoff) {
  const EigenSystem es = eig_hermitian(rho);
  return stddev(rho, activity_operator(es, ctx, cutoff)) * std::sqrt(qfi_sld(es, rho_dot, cutoff));
}

inline double bound_extended(const CMatrix& rho, const DissipatorSplit& split, const ThermoContext& ctx,
                             double cutoff = kSupportCutoff) {
  return stddev(rho, activity_operator(split.basis, ctx, cutoff)) * std::sqrt(qfi_extended(rho, split, cutoff).qfi_ext);
}

struct ThermoBound {
  double value = 0.0;
  double dissipative_work = 0.0;  // |Tr(-i[H_coh + H_diss, rho] H_B)|
  double irreversible = 0.0;      // |Q_dot - S_dot / beta|
  bool entropy_included = true;   // false at zero temperature
};

/// W_diss + beta^-1 |dS_irr/dt| as rates. `h_coherent_extra` is the coherent
/// Hamiltonian of the generator beyond H_B; zero for battery-local dynamics.
inline ThermoBound bound_thermodynamic(const CMatrix& rho, const DissipatorSplit& split,
                                       const CMatrix& h_coherent_extra, const ThermoContext& ctx,
                                       double cutoff = kSupportCutoff) {
  ThermoBound b;
  const CMatrix h_eff = h_coherent_extra + split.h_diss;
  b.dissipative_work = std::abs((-kI * commutator(h_eff, rho) * ctx.hamiltonian()).trace().real());
  const HeatEntropyRates rates = heat_and_entropy_rates(split.basis, split.diag, ctx, cutoff);
  b.irreversible = rates.irreversible;
  b.entropy_included = rates.entropy_included;
  b.value = b.dissipative_work + b.irreversible;
  return b;
}

/// 2 sigma_V(rho_full) sigma_F(rho_battery), with F the work operator.
inline double bound_reference(const CMatrix& rho_full, const CMatrix& coupling, const CMatrix& rho_battery,
                              const ThermoContext& ctx, double cutoff = kSupportCutoff) {
  return 2.0 * stddev(rho_full, coupling) * stddev(rho_battery, work_operator(rho_battery, ctx, cutoff));
}

/// One sample of every bound along a trajectory. Disabled bounds are NaN.
struct BoundReport {
  double t = 0.0;
  double power_abs = 0.0;
  double bound_geo = std::numeric_limits<double>::quiet_NaN();
  double bound_ext = std::numeric_limits<double>::quiet_NaN();
  double bound_thermo = std::numeric_limits<double>::quiet_NaN();
  double bound_ref = std::numeric_limits<double>::quiet_NaN();

  double slack_geo() const { return bound_geo - power_abs; }
  double slack_ext() const { return bound_ext - power_abs; }
  double slack_thermo() const { return bound_thermo - power_abs; }
};

/// A bound is saturated at a sample when its slack is within 1e-3 max(1, bound).
inline bool saturated(double bound, double power_abs) {
  return bound - power_abs <= 1e-3 * std::max(1.0, std::abs(bound));
}

/// Fraction of samples at which the geometric bound is saturated.
inline double saturation_fraction(std::span<const BoundReport> reports) {
  if (reports.empty()) return 0.0;
  std::size_t hits = 0;
  std::size_t valid = 0;
  for (const auto& r : reports) {
    if (std::isnan(r.bound_geo)) continue;
    ++valid;
    if (saturated(r.bound_geo, r.power_abs)) ++hits;
  }
  return valid == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(valid);
}

}  // namespace oqb
