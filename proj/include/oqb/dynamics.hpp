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

// Time-local master equations with time-dependent (possibly negative) rates,
// the Lorentzian-reservoir decay function f(t), and a fixed-step RK4 integrator
// that records states together with physicality diagnostics.

#include "oqb/qmat.hpp"

#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace oqb {

using RateFunction = std::function<double(double)>;
using HamiltonianFunction = std::function<CMatrix(double)>;

/// Jump operator with its rate gamma(t). Negative rates are allowed.
struct LindbladChannel {
  CMatrix jump;
  RateFunction rate;
};

inline RateFunction constant_rate(double gamma) {
  return [gamma](double) { return gamma; };
}

inline HamiltonianFunction constant_hamiltonian(CMatrix h) {
  return [h = std::move(h)](double) { return h; };
}

/// Lorentzian reservoir: J(w) = gamma0 lambda^2 / (2 pi [(w0 - Delta - w)^2 + lambda^2]).
struct ReservoirParams {
  double gamma0 = 1.0;
  double lambda = 1.0;
  double detuning = 0.0;
  double n_photon = 0.0;

  /// R = gamma0 / lambda; R > 1 is the strong-coupling, non-Markovian side.
  double markovianity() const { return gamma0 / lambda; }
  bool non_markovian() const { return markovianity() > 1.0; }

  void validate() const {
    if (!(gamma0 > 0.0)) throw std::invalid_argument("reservoir: gamma0 must be positive");
    if (!(lambda > 0.0)) throw std::invalid_argument("reservoir: lambda must be positive");
    if (!(n_photon >= 0.0)) throw std::invalid_argument("reservoir: n_photon must be nonnegative");
    if (!std::isfinite(detuning)) throw std::invalid_argument("reservoir: detuning must be finite");
  }
};

/// Ratio Cdot(t)/C(t) for the exactly solvable Lorentzian amplitude
///   C(t) = e^{-z t/2} (cosh(d t/2) + (z/d) sinh(d t/2)) C(0),
/// z = lambda - i Delta, d = sqrt(z^2 - 2 gamma0 lambda) on the principal branch.
/// Written as -gamma0 lambda (1 - e^{-dt}) / (d (1 + e^{-dt}) + z (1 - e^{-dt})),
/// which never exponentiates a growing argument.
inline cplx amplitude_log_derivative(const ReservoirParams& p, double t) {
  const cplx z(p.lambda, -p.detuning);
  cplx d = std::sqrt(z * z - 2.0 * p.gamma0 * p.lambda);
  if (d.real() < 0.0) d = -d;
  const cplx dt = d * t;
  const cplx decay = std::exp(-dt);
  // (1 - e^{-dt}) / d, with the small-|dt| series to survive d -> 0.
  cplx one_minus_over_d;
  if (std::abs(dt) < 1e-5) {
    one_minus_over_d = t * (1.0 - dt / 2.0 + dt * dt / 6.0);
  } else {
    one_minus_over_d = (1.0 - decay) / d;
  }
  const cplx denom = (1.0 + decay) + z * one_minus_over_d;

  // |C(t)| = |e^{(d-z)t/2} denom / 2| with C(0) = 1.
  const double log_abs_c = 0.5 * ((d - z) * t).real() + std::log(std::abs(denom) / 2.0);
  if (!(log_abs_c > std::log(1e-300))) {
    std::ostringstream msg;
    msg << "rate_function_f: C(t) vanishes at t = " << t << " (|C| < 1e-300); shorten t_max";
    throw std::domain_error(msg.str());
  }
  return -p.gamma0 * p.lambda * one_minus_over_d / denom;
}

/// f(t) = -2 Re{Cdot(t)/C(t)}, the single-excitation decay rate of the reservoir.
inline double rate_function_f(const ReservoirParams& p, double t) {
  if (t < 0.0) throw std::invalid_argument("rate_function_f: t must be nonnegative");
  return -2.0 * amplitude_log_derivative(p, t).real();
}

/// sum_a gamma_a(t) (L rho L^dag - {L^dag L, rho}/2).
inline CMatrix dissipator(const CMatrix& rho, const std::vector<LindbladChannel>& channels, double t) {
  CMatrix out = CMatrix::Zero(rho.rows(), rho.cols());
  for (const auto& ch : channels) {
    require_same_shape(rho, ch.jump, "dissipator");
    const double g = ch.rate(t);
    if (g == 0.0) continue;
    const CMatrix ldl = ch.jump.adjoint() * ch.jump;
    out += g * (ch.jump * rho * ch.jump.adjoint() - 0.5 * (ldl * rho + rho * ldl));
  }
  return out;
}

inline CMatrix lindblad_rhs(const CMatrix& rho, const CMatrix& h, const std::vector<LindbladChannel>& channels,
                            double t) {
  require_same_shape(rho, h, "lindblad_rhs");
  return -kI * (h * rho - rho * h) + dissipator(rho, channels, t);
}

inline CMatrix lindblad_rhs(const CMatrix& rho, const HamiltonianFunction& h,
                            const std::vector<LindbladChannel>& channels, double t) {
  return lindblad_rhs(rho, h(t), channels, t);
}

struct SampleDiagnostics {
  double trace_error = 0.0;         // max |Tr rho - 1| before renormalization since last sample
  double hermiticity_defect = 0.0;  // max raw defect before re-Hermitization
  double min_eigenvalue = 1.0;
  bool positivity_warning = false;  // min eigenvalue below -1e-8 but within the run's tolerance
};

struct IntegrateOptions {
  double dt = 1e-2;
  double t_max = 1.0;
  std::size_t record_every = 1;
  double trace_tolerance = 1e-8;
  double hermiticity_tolerance = 1e-10;
  /// Abort threshold for the smallest eigenvalue.
  double min_eigenvalue_tolerance = -1e-8;
  /// When set, reduced_states holds Tr_A of each recorded state on (dA, dB).
  std::optional<std::pair<std::size_t, std::size_t>> bipartition;
};

struct Trajectory {
  double dt = 0.0;  // spacing of the recorded grid
  std::vector<double> times;
  std::vector<CMatrix> states;
  std::vector<CMatrix> reduced_states;
  std::vector<SampleDiagnostics> diagnostics;

  std::size_t size() const { return times.size(); }
};

class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, double t) : std::runtime_error(what), t_(t) {}
  double time() const { return t_; }

 private:
  double t_;
};

/// Classical RK4 on a uniform grid. After every step the state is
/// re-Hermitized and renormalized; the raw drift goes to the diagnostics.
inline Trajectory integrate(const CMatrix& rho0, const HamiltonianFunction& h,
                            const std::vector<LindbladChannel>& channels, const IntegrateOptions& opt) {
  require_square(rho0, "integrate");
  if (!(opt.dt > 0.0)) throw std::invalid_argument("integrate: dt must be positive");
  if (!(opt.t_max >= 0.0)) throw std::invalid_argument("integrate: t_max must be nonnegative");
  if (opt.record_every == 0) throw std::invalid_argument("integrate: record_every must be >= 1");
  const double steps_real = opt.t_max / opt.dt;
  const auto n_steps = static_cast<std::size_t>(std::llround(steps_real));
  if (std::abs(steps_real - static_cast<double>(n_steps)) > 1e-6) {
    throw std::invalid_argument("integrate: t_max must be an integer multiple of dt");
  }

  Trajectory traj;
  traj.dt = opt.dt * static_cast<double>(opt.record_every);
  const std::size_t n_records = n_steps / opt.record_every + 1;
  traj.times.reserve(n_records);
  traj.states.reserve(n_records);
  traj.diagnostics.reserve(n_records);

  auto record = [&](const CMatrix& rho, double t, SampleDiagnostics diag) {
    traj.times.push_back(t);
    traj.states.push_back(rho);
    if (opt.bipartition) {
      traj.reduced_states.push_back(
          partial_trace(rho, Subsystem::B, opt.bipartition->first, opt.bipartition->second));
    } else {
      traj.reduced_states.push_back(rho);
    }
    traj.diagnostics.push_back(diag);
  };

  auto check_positivity = [&](const CMatrix& rho, double t, SampleDiagnostics& diag) {
    const double min_eig = eig_hermitian(rho).values(0);
    diag.min_eigenvalue = std::min(diag.min_eigenvalue, min_eig);
    if (min_eig < -1e-8) diag.positivity_warning = true;
    if (min_eig < opt.min_eigenvalue_tolerance) {
      std::ostringstream msg;
      msg << "integrate: min eigenvalue " << min_eig << " below " << opt.min_eigenvalue_tolerance
          << " at t = " << t;
      throw IntegrationError(msg.str(), t);
    }
  };

  CMatrix rho = rho0;
  SampleDiagnostics diag;
  diag.trace_error = std::abs(real_trace(rho) - 1.0);
  diag.hermiticity_defect = hermiticity_defect(rho);
  check_positivity(rho, 0.0, diag);
  record(rho, 0.0, diag);
  diag = SampleDiagnostics{};

  const double dt = opt.dt;
  for (std::size_t step = 0; step < n_steps; ++step) {
    const double t = static_cast<double>(step) * dt;
    const CMatrix k1 = lindblad_rhs(rho, h, channels, t);
    const CMatrix k2 = lindblad_rhs(rho + 0.5 * dt * k1, h, channels, t + 0.5 * dt);
    const CMatrix k3 = lindblad_rhs(rho + 0.5 * dt * k2, h, channels, t + 0.5 * dt);
    const CMatrix k4 = lindblad_rhs(rho + dt * k3, h, channels, t + dt);
    rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

    const double t_next = static_cast<double>(step + 1) * dt;
    const double herm = hermiticity_defect(rho);
    const cplx tr = rho.trace();
    const double trace_err = std::abs(tr - 1.0);
    diag.hermiticity_defect = std::max(diag.hermiticity_defect, herm);
    diag.trace_error = std::max(diag.trace_error, trace_err);
    if (!std::isfinite(trace_err) || trace_err > opt.trace_tolerance) {
      std::ostringstream msg;
      msg << "integrate: trace drift " << trace_err << " exceeds " << opt.trace_tolerance << " at t = " << t_next;
      throw IntegrationError(msg.str(), t_next);
    }
    if (herm > opt.hermiticity_tolerance) {
      std::ostringstream msg;
      msg << "integrate: Hermiticity defect " << herm << " exceeds " << opt.hermiticity_tolerance
          << " at t = " << t_next;
      throw IntegrationError(msg.str(), t_next);
    }
    rho = hermitian_part(rho);
    rho /= rho.trace().real();
    check_positivity(rho, t_next, diag);

    if ((step + 1) % opt.record_every == 0) {
      record(rho, t_next, diag);
      diag = SampleDiagnostics{};
    }
  }
  return traj;
}

}  // namespace oqb
