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

// The two battery models:
//  * a three-qubit Heisenberg XX ring in the single-excitation sector, whose
//    middle qubit is the battery (closed form amplitudes), and
//  * a driven charger qubit exchanging energy with a battery qubit that sits in
//    a Lorentzian reservoir with heating and dissipation channels.

#include "oqb/dynamics.hpp"
#include "oqb/qmat.hpp"
#include "oqb/thermo.hpp"

#include <cmath>
#include <complex>
#include <optional>
#include <stdexcept>
#include <vector>

namespace oqb {

/// Battery Hamiltonian (w0/2)(sigma_z + 1) = w0 |1><1|.
inline CMatrix qubit_battery_hamiltonian(double omega0) {
  return 0.5 * omega0 * (ops::sigma_z() + ops::identity(2));
}

// ---------------------------------------------------------------------------
// Heisenberg XX ring
// ---------------------------------------------------------------------------

/// Initial state alpha|001> + beta_c|010> + gamma_c|100>.
struct XXChainParams {
  double omega0 = 1.0;
  double J = 1.0;
  double B = 0.0;
  cplx alpha{0.0, 0.0};
  cplx beta_c{0.0, 0.0};
  cplx gamma_c{1.0, 0.0};

  void validate() const {
    const double norm = std::norm(alpha) + std::norm(beta_c) + std::norm(gamma_c);
    if (std::abs(norm - 1.0) > 1e-12) {
      throw std::invalid_argument("XXChainParams: |alpha|^2 + |beta|^2 + |gamma|^2 must be 1");
    }
  }
};

struct XXAmplitudes {
  cplx a, b, c;
  cplx a_dot, b_dot, c_dot;
};

/// Closed-form amplitudes: the symmetric combination evolves with e^{-i(2J-B)t},
/// the two orthogonal ones with e^{i(J+B)t}.
inline XXAmplitudes xx_amplitudes(const XXChainParams& p, double t) {
  p.validate();
  const cplx w_sym = -kI * (2.0 * p.J - p.B);
  const cplx w_rest = kI * (p.J + p.B);
  const cplx e_sym = std::exp(w_sym * t);
  const cplx e_rest = std::exp(w_rest * t);
  const cplx sum = p.alpha + p.beta_c + p.gamma_c;
  const cplx ra = 2.0 * p.alpha - p.beta_c - p.gamma_c;
  const cplx rb = 2.0 * p.beta_c - p.alpha - p.gamma_c;
  const cplx rc = 2.0 * p.gamma_c - p.alpha - p.beta_c;
  const cplx k = e_sym * sum;
  const cplx k_dot = w_sym * k;
  XXAmplitudes out;
  out.a = (e_rest * ra + k) / 3.0;
  out.b = (e_rest * rb + k) / 3.0;
  out.c = (e_rest * rc + k) / 3.0;
  out.a_dot = (w_rest * e_rest * ra + k_dot) / 3.0;
  out.b_dot = (w_rest * e_rest * rb + k_dot) / 3.0;
  out.c_dot = (w_rest * e_rest * rc + k_dot) / 3.0;
  return out;
}

/// Full three-qubit ket; |q1 q2 q3> sits at index 4 q1 + 2 q2 + q3.
inline CVector xx_state(const XXChainParams& p, double t) {
  const XXAmplitudes amp = xx_amplitudes(p, t);
  CVector psi = CVector::Zero(8);
  psi(1) = amp.a;  // |001>
  psi(2) = amp.b;  // |010>
  psi(4) = amp.c;  // |100>
  return psi;
}

struct BatteryState {
  CMatrix rho;
  CMatrix rho_dot;
};

/// Reduced state of the middle qubit, diag(1 - |b|^2, |b|^2), and its exact
/// time derivative.
inline BatteryState xx_battery_state(const XXChainParams& p, double t) {
  const XXAmplitudes amp = xx_amplitudes(p, t);
  const double pop = std::norm(amp.b);
  const double pop_dot = 2.0 * (amp.b_dot * std::conj(amp.b)).real();
  BatteryState s{CMatrix::Zero(2, 2), CMatrix::Zero(2, 2)};
  s.rho(0, 0) = 1.0 - pop;
  s.rho(1, 1) = pop;
  s.rho_dot(0, 0) = -pop_dot;
  s.rho_dot(1, 1) = pop_dot;
  return s;
}

/// V = (J/2) sum_n (sx_n sx_{n+1} + sy_n sy_{n+1}) + B sum_n sz_n on the ring.
inline CMatrix xx_interaction(const XXChainParams& p) {
  CMatrix v = CMatrix::Zero(8, 8);
  for (std::size_t n = 0; n < 3; ++n) {
    const std::size_t m = (n + 1) % 3;
    v += 0.5 * p.J *
         (ops::on_site(ops::sigma_x(), n, 3) * ops::on_site(ops::sigma_x(), m, 3) +
          ops::on_site(ops::sigma_y(), n, 3) * ops::on_site(ops::sigma_y(), m, 3));
    v += p.B * ops::on_site(ops::sigma_z(), n, 3);
  }
  return v;
}

/// H0 = (w0/2) sum_n (sz_n + 1), zero on the all-ground state.
inline CMatrix xx_free_hamiltonian(const XXChainParams& p) {
  CMatrix h = CMatrix::Zero(8, 8);
  for (std::size_t n = 0; n < 3; ++n) h += ops::on_site(qubit_battery_hamiltonian(p.omega0), n, 3);
  return h;
}

// ---------------------------------------------------------------------------
// Driven charger + battery in a Lorentzian reservoir
// ---------------------------------------------------------------------------

struct ChargerBatteryParams {
  double omega0 = 1.0;
  double eta = 0.1;    // drive amplitude on the charger
  double kappa = 0.2;  // charger-battery exchange
  ReservoirParams reservoir{};
  /// Inverse temperature; nullopt means zero temperature.
  std::optional<double> beta;
  CVector charger = ops::ket1();
  CVector battery = ops::ket0();

  void validate() const {
    reservoir.validate();
    if (!std::isfinite(eta) || !std::isfinite(kappa)) {
      throw std::invalid_argument("ChargerBatteryParams: couplings must be finite reals");
    }
    if (charger.size() != 2 || battery.size() != 2) {
      throw std::invalid_argument("ChargerBatteryParams: charger and battery kets must be qubits");
    }
    if (std::abs(charger.norm() - 1.0) > 1e-12 || std::abs(battery.norm() - 1.0) > 1e-12) {
      throw std::invalid_argument("ChargerBatteryParams: initial kets must be normalized");
    }
    if (!beta && reservoir.n_photon != 0.0) {
      throw std::invalid_argument("ChargerBatteryParams: zero temperature requires n_photon = 0");
    }
    if (beta && !(*beta > 0.0)) throw std::invalid_argument("ChargerBatteryParams: beta must be positive");
  }

  ThermoContext thermo() const {
    const CMatrix hb = qubit_battery_hamiltonian(omega0);
    return beta ? ThermoContext::at_beta(hb, *beta, reservoir.n_photon) : ThermoContext::zero_temperature(hb);
  }
};

struct ChargerBatteryModel {
  CMatrix hamiltonian;  // interaction picture, time independent
  std::vector<LindbladChannel> channels;  // {heating, dissipation}
  CMatrix rho0;
  ThermoContext thermo;
  ReservoirParams reservoir;

  HamiltonianFunction hamiltonian_fn() const { return constant_hamiltonian(hamiltonian); }
};

/// Interaction-picture generator on charger (x) battery:
///   H = kappa (s+^A s-^B + s-^A s+^B) + eta (s+^A + s-^A),
///   heating   s+^B at rate N f(t), dissipation s-^B at rate (N + 1) f(t).
inline ChargerBatteryModel build_charger_battery(const ChargerBatteryParams& p) {
  p.validate();
  const CMatrix id = ops::identity(2);
  const CMatrix sp = ops::sigma_plus();
  const CMatrix sm = ops::sigma_minus();
  CMatrix h = p.kappa * (kron(sp, sm) + kron(sm, sp)) + p.eta * kron(sp + sm, id);

  const ReservoirParams res = p.reservoir;
  const double n = res.n_photon;
  std::vector<LindbladChannel> channels;
  channels.push_back({kron(id, sp), [res, n](double t) { return n == 0.0 ? 0.0 : n * rate_function_f(res, t); }});
  channels.push_back({kron(id, sm), [res, n](double t) { return (n + 1.0) * rate_function_f(res, t); }});

  const CVector psi = kron(p.charger, p.battery);
  return ChargerBatteryModel{std::move(h), std::move(channels), projector(psi), p.thermo(), res};
}

}  // namespace oqb
