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

// Thermodynamic observables of the battery: Gibbs state, non-equilibrium free
// energy, activity operator, maximum extractable work, charging power, and the
// heat/entropy rates carried by the population-moving part of a dissipator.

#include "oqb/qmat.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace oqb {

/// Inverse temperature together with the battery Hamiltonian and its Gibbs
/// state. A context is either at finite beta or at zero temperature, where the
/// Gibbs state is the (nondegenerate) ground-state projector.
class ThermoContext {
 public:
  static ThermoContext at_beta(CMatrix battery_hamiltonian, double beta, double n_photon = 0.0) {
    if (!(beta > 0.0) || !std::isfinite(beta)) {
      throw std::invalid_argument("ThermoContext: beta must be finite and positive");
    }
    return ThermoContext(std::move(battery_hamiltonian), beta, n_photon);
  }

  static ThermoContext zero_temperature(CMatrix battery_hamiltonian) {
    return ThermoContext(std::move(battery_hamiltonian), std::numeric_limits<double>::infinity(), 0.0);
  }

  bool zero_t() const { return std::isinf(beta_); }
  double beta() const { return beta_; }
  /// 1/beta; zero at zero temperature.
  double temperature() const { return zero_t() ? 0.0 : 1.0 / beta_; }
  double n_photon() const { return n_photon_; }
  std::size_t dim() const { return static_cast<std::size_t>(hamiltonian_.rows()); }

  const CMatrix& hamiltonian() const { return hamiltonian_; }
  const CMatrix& gibbs_state() const { return gibbs_; }
  /// ln(tau_beta); only defined at finite beta.
  const CMatrix& log_gibbs() const {
    if (zero_t()) throw std::domain_error("log_gibbs: the zero-temperature Gibbs state is not full rank");
    return log_gibbs_;
  }
  double partition_function() const { return partition_; }
  /// F(tau_beta) = -ln(Z)/beta, or the ground energy at zero temperature.
  double equilibrium_free_energy() const { return free_energy_eq_; }
  double ground_energy() const { return spectrum_.values(0); }
  const EigenSystem& spectrum() const { return spectrum_; }

 private:
  ThermoContext(CMatrix h, double beta, double n_photon)
      : hamiltonian_(std::move(h)), beta_(beta), n_photon_(n_photon) {
    if (n_photon_ < 0.0) throw std::invalid_argument("ThermoContext: n_photon must be nonnegative");
    spectrum_ = eig_hermitian(hamiltonian_);
    const double e0 = spectrum_.values(0);
    if (zero_t()) {
      if (spectrum_.dim() > 1 && spectrum_.values(1) - e0 < 1e-12) {
        throw std::invalid_argument("ThermoContext: zero temperature needs a nondegenerate ground state");
      }
      gibbs_ = projector(spectrum_.vectors.col(0));
      partition_ = 1.0;
      free_energy_eq_ = e0;
      return;
    }
    // Shift by e0 so exp() cannot overflow for large beta.
    double z_shifted = 0.0;
    for (Eigen::Index i = 0; i < spectrum_.values.size(); ++i) {
      z_shifted += std::exp(-beta_ * (spectrum_.values(i) - e0));
    }
    const double log_z = std::log(z_shifted) - beta_ * e0;
    partition_ = std::exp(log_z);
    free_energy_eq_ = -log_z / beta_;
    gibbs_ = apply_on_spectrum(spectrum_, [&](double e) { return std::exp(-beta_ * (e - e0)) / z_shifted; });
    log_gibbs_ = apply_on_spectrum(spectrum_, [&](double e) { return -beta_ * e - log_z; });
  }

  CMatrix hamiltonian_;
  double beta_;
  double n_photon_;
  EigenSystem spectrum_;
  CMatrix gibbs_;
  CMatrix log_gibbs_;
  double partition_ = 1.0;
  double free_energy_eq_ = 0.0;
};

/// F(rho) = Tr(rho H_B) - S(rho)/beta. Finite beta only.
inline double free_energy(const CMatrix& rho, const ThermoContext& ctx) {
  if (ctx.zero_t()) {
    throw std::domain_error("free_energy: undefined at zero temperature; use the energy Tr(rho H_B)");
  }
  return expval(rho, ctx.hamiltonian()) - von_neumann_entropy(eig_hermitian(rho)) / ctx.beta();
}

/// beta^-1 (ln rho - ln tau_beta) with ln rho taken on the support. At zero
/// temperature the beta^-1 ln rho term vanishes and the operator is H_B - E_0.
inline CMatrix activity_operator(const EigenSystem& rho_es, const ThermoContext& ctx,
                                 double cutoff = kSupportCutoff) {
  if (ctx.zero_t()) return ctx.hamiltonian() - ctx.ground_energy() * ops::identity(ctx.dim());
  return (log_on_support(rho_es, cutoff) - ctx.log_gibbs()) / ctx.beta();
}

inline CMatrix activity_operator(const CMatrix& rho, const ThermoContext& ctx, double cutoff = kSupportCutoff) {
  return activity_operator(eig_hermitian(rho), ctx, cutoff);
}

/// The work operator H_B + beta^-1 ln rho used by the reference bound; H_B at
/// zero temperature.
inline CMatrix work_operator(const CMatrix& rho, const ThermoContext& ctx, double cutoff = kSupportCutoff) {
  if (ctx.zero_t()) return ctx.hamiltonian();
  return ctx.hamiltonian() + log_on_support(rho, cutoff) / ctx.beta();
}

/// W_max = Tr(rho A).
inline double max_work(const CMatrix& rho, const ThermoContext& ctx, double cutoff = kSupportCutoff) {
  return expval(rho, activity_operator(rho, ctx, cutoff));
}

/// W_max = F(rho) - F(tau_beta), the free-energy route. Equal to max_work().
inline double max_work_free_energy(const CMatrix& rho, const ThermoContext& ctx) {
  if (ctx.zero_t()) return expval(rho, ctx.hamiltonian()) - ctx.ground_energy();
  return free_energy(rho, ctx) - ctx.equilibrium_free_energy();
}

/// Pointwise charging power Tr(rho_dot A(rho)).
inline double charging_power(const CMatrix& rho, const CMatrix& rho_dot, const ThermoContext& ctx,
                             double cutoff = kSupportCutoff) {
  require_same_shape(rho, rho_dot, "charging_power");
  return (rho_dot * activity_operator(rho, ctx, cutoff)).trace().real();
}

enum class DerivativeScheme { Analytic, CentralDifference };

/// Central differences on a uniform grid; second-order one-sided stencils at the
/// two ends.
inline std::vector<CMatrix> finite_difference_rates(std::span<const CMatrix> states, double dt) {
  if (states.size() < 3) {
    throw std::invalid_argument("finite_difference_rates: need at least 3 grid points");
  }
  if (!(dt > 0.0)) throw std::invalid_argument("finite_difference_rates: dt must be positive");
  const std::size_t n = states.size();
  std::vector<CMatrix> rates(n);
  rates[0] = (-3.0 * states[0] + 4.0 * states[1] - states[2]) / (2.0 * dt);
  for (std::size_t k = 1; k + 1 < n; ++k) rates[k] = (states[k + 1] - states[k - 1]) / (2.0 * dt);
  rates[n - 1] = (3.0 * states[n - 1] - 4.0 * states[n - 2] + states[n - 3]) / (2.0 * dt);
  return rates;
}

/// Charging power along a sampled trajectory. With DerivativeScheme::Analytic the
/// caller supplies generator-evaluated rates; otherwise they are differenced
/// from `states` on the uniform step `dt`.
inline std::vector<double> charging_power(std::span<const CMatrix> states, std::span<const CMatrix> rates,
                                          double dt, const ThermoContext& ctx, DerivativeScheme scheme) {
  std::vector<CMatrix> differenced;
  if (scheme == DerivativeScheme::CentralDifference) {
    differenced = finite_difference_rates(states, dt);
    rates = differenced;
  } else if (rates.size() != states.size()) {
    throw std::invalid_argument("charging_power: rates and states differ in length");
  }
  std::vector<double> power(states.size());
  for (std::size_t k = 0; k < states.size(); ++k) power[k] = charging_power(states[k], rates[k], ctx);
  return power;
}

struct HeatEntropyRates {
  double heat_rate = 0.0;     // Tr(D_d[rho] H_B)
  double entropy_rate = 0.0;  // -sum Pdot_n ln P_n
  /// |Q_dot - S_dot/beta|, i.e. beta^-1 |dS_irr/dt|; |Q_dot| at zero temperature.
  double irreversible = 0.0;
  bool entropy_included = true;
};

/// Heat and entropy rates of the diagonal dissipator part `diag_part`, whose
/// diagonal in the eigenbasis of rho holds the population rates.
inline HeatEntropyRates heat_and_entropy_rates(const EigenSystem& rho_es, const CMatrix& diag_part,
                                               const ThermoContext& ctx, double cutoff = kSupportCutoff) {
  HeatEntropyRates out;
  out.heat_rate = (diag_part * ctx.hamiltonian()).trace().real();
  if (ctx.zero_t()) {
    out.entropy_included = false;
    out.irreversible = std::abs(out.heat_rate);
    return out;
  }
  const CMatrix in_basis = rho_es.vectors.adjoint() * diag_part * rho_es.vectors;
  for (Eigen::Index n = 0; n < rho_es.values.size(); ++n) {
    const double p = rho_es.values(n);
    if (p > cutoff) out.entropy_rate -= in_basis(n, n).real() * std::log(p);
  }
  out.irreversible = std::abs(out.heat_rate - out.entropy_rate / ctx.beta());
  return out;
}

}  // namespace oqb
