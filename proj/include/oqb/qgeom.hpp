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

// Information geometry of a state trajectory: symmetric logarithmic derivative
// and quantum Fisher information (two independent routes), the split of a
// generator into a population part (Gamma) and a coherence part (H_Diss), and
// the extended Fisher information built from the non-Hermitian SLD.

#include "oqb/dynamics.hpp"
#include "oqb/qmat.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace oqb {

namespace detail {

inline void require_traceless_hermitian(const CMatrix& rho_dot, const char* what) {
  const double scale = std::max(1.0, rho_dot.norm());
  if (hermiticity_defect(rho_dot) > kHermitianTolerance) {
    std::ostringstream msg;
    msg << what << ": rho_dot is not Hermitian (defect " << hermiticity_defect(rho_dot) << ")";
    throw std::invalid_argument(msg.str());
  }
  const double tr = std::abs(rho_dot.trace());
  if (tr > 1e-10 * scale) {
    std::ostringstream msg;
    msg << what << ": rho_dot is not traceless (|Tr| = " << tr << ")";
    throw std::invalid_argument(msg.str());
  }
}

}  // namespace detail

/// Symmetric logarithmic derivative: L_nm = 2 (rho_dot)_nm / (p_n + p_m) in the
/// eigenbasis of rho, zero where p_n + p_m <= cutoff.
inline CMatrix sld(const EigenSystem& rho_es, const CMatrix& rho_dot, double cutoff = kSupportCutoff) {
  detail::require_traceless_hermitian(rho_dot, "sld");
  const CMatrix r = rho_es.vectors.adjoint() * rho_dot * rho_es.vectors;
  CMatrix l = CMatrix::Zero(r.rows(), r.cols());
  for (Eigen::Index n = 0; n < r.rows(); ++n) {
    for (Eigen::Index m = 0; m < r.cols(); ++m) {
      const double s = rho_es.values(n) + rho_es.values(m);
      if (s > cutoff) l(n, m) = 2.0 * r(n, m) / s;
    }
  }
  return rho_es.vectors * l * rho_es.vectors.adjoint();
}

inline CMatrix sld(const CMatrix& rho, const CMatrix& rho_dot, double cutoff = kSupportCutoff) {
  return sld(eig_hermitian(rho), rho_dot, cutoff);
}

/// Tr(rho L^2) = sum over p_n + p_m > cutoff of 2 |rho_dot_nm|^2 / (p_n + p_m).
inline double qfi_sld(const EigenSystem& rho_es, const CMatrix& rho_dot, double cutoff = kSupportCutoff) {
  detail::require_traceless_hermitian(rho_dot, "qfi_sld");
  const CMatrix r = rho_es.vectors.adjoint() * rho_dot * rho_es.vectors;
  double qfi = 0.0;
  for (Eigen::Index n = 0; n < r.rows(); ++n) {
    for (Eigen::Index m = 0; m < r.cols(); ++m) {
      const double s = rho_es.values(n) + rho_es.values(m);
      if (s > cutoff) qfi += 2.0 * std::norm(r(n, m)) / s;
    }
  }
  return qfi;
}

inline double qfi_sld(const CMatrix& rho, const CMatrix& rho_dot, double cutoff = kSupportCutoff) {
  return qfi_sld(eig_hermitian(rho), rho_dot, cutoff);
}

struct SpectralQfi {
  double value = 0.0;
  /// Eigenvector matching across the stencil failed (crossing, near-degeneracy
  /// or a change of support); the value is unreliable.
  bool flagged = false;
};

/// Minimum overlap |<n(t)|n(t +- h)>| accepted when matching eigenvectors.
inline constexpr double kMatchOverlap = 0.99;

/// QFI from the spectral data of rho(t - h), rho(t), rho(t + h): eigenvalue and
/// eigenvector derivatives by central differences after matching each
/// eigenvector of rho(t) to its largest-overlap partner at t +- h.
inline SpectralQfi qfi_spectral(const CMatrix& rho_minus, const CMatrix& rho_center, const CMatrix& rho_plus,
                                double step, double cutoff = kSupportCutoff) {
  if (!(step > 0.0)) throw std::invalid_argument("qfi_spectral: step must be positive");
  const EigenSystem c = eig_hermitian(rho_center);
  const EigenSystem sides[2] = {eig_hermitian(rho_minus), eig_hermitian(rho_plus)};
  const Eigen::Index dim = c.values.size();
  SpectralQfi out;

  // matched[s] holds, for every center eigenpair, the gauge-aligned partner.
  RVector lam[2] = {RVector(dim), RVector(dim)};
  CMatrix vec[2] = {CMatrix(dim, dim), CMatrix(dim, dim)};
  for (int s = 0; s < 2; ++s) {
    const CMatrix overlaps = c.vectors.adjoint() * sides[s].vectors;
    std::vector<bool> used(static_cast<std::size_t>(dim), false);
    for (Eigen::Index k = 0; k < dim; ++k) {
      Eigen::Index best = 0;
      overlaps.row(k).cwiseAbs().maxCoeff(&best);
      const cplx ov = overlaps(k, best);
      if (std::abs(ov) < kMatchOverlap || used[static_cast<std::size_t>(best)]) out.flagged = true;
      used[static_cast<std::size_t>(best)] = true;
      lam[s](k) = sides[s].values(best);
      vec[s].col(k) = sides[s].vectors.col(best) * (std::conj(ov) / std::max(std::abs(ov), 1e-300));
      if ((c.values(k) > cutoff) != (lam[s](k) > cutoff)) out.flagged = true;
    }
  }

  std::vector<Eigen::Index> support;
  for (Eigen::Index k = 0; k < dim; ++k) {
    if (c.values(k) > cutoff) support.push_back(k);
  }
  const CMatrix dvec = (vec[1] - vec[0]) / (2.0 * step);
  const RVector dlam = (lam[1] - lam[0]) / (2.0 * step);

  double classical = 0.0;
  double norm_term = 0.0;
  double cross_term = 0.0;
  for (const auto i : support) {
    const double li = c.values(i);
    classical += dlam(i) * dlam(i) / li;
    norm_term += 4.0 * li * dvec.col(i).squaredNorm();
    for (const auto j : support) {
      const double lj = c.values(j);
      const cplx overlap = dvec.col(i).dot(c.vectors.col(j));  // <d i | j>
      cross_term += 8.0 * li * lj / (li + lj) * std::norm(overlap);
    }
  }
  out.value = classical + norm_term - cross_term;
  return out;
}

/// Callable form: rho_of_t(t) must return the state at t.
template <typename StateAt>
SpectralQfi qfi_spectral(StateAt&& rho_of_t, double t, double step, double cutoff = kSupportCutoff) {
  return qfi_spectral(rho_of_t(t - step), rho_of_t(t), rho_of_t(t + step), step, cutoff);
}

/// A generator value D split in the eigenbasis {|n>} of rho:
///   D_diag = sum_n <n|D|n> |n><n| = -{Gamma, rho} on the support,
///   D_nondiag = D - D_diag = -i [H_diss, rho].
struct DissipatorSplit {
  CMatrix full;
  CMatrix diag;
  CMatrix nondiag;
  CMatrix gamma;
  CMatrix h_diss;
  EigenSystem basis;
  RVector population_rates;  // Pdot_n = <n|D|n>
  /// Off-diagonal pairs with |P_m - P_n| <= the degeneracy threshold; their
  /// H_diss elements are zero and D_nondiag is not reproduced there.
  std::size_t dropped_pairs = 0;
  std::vector<std::pair<Eigen::Index, Eigen::Index>> dropped;
};

inline constexpr double kDegeneracyThreshold = 1e-10;

inline DissipatorSplit split_generator(const EigenSystem& rho_es, const CMatrix& d_value,
                                       double cutoff = kSupportCutoff,
                                       double degeneracy = kDegeneracyThreshold) {
  require_same_shape(d_value, rho_es.vectors, "split_generator");
  const auto& v = rho_es.vectors;
  const auto& p = rho_es.values;
  const Eigen::Index dim = p.size();
  const CMatrix r = v.adjoint() * d_value * v;

  DissipatorSplit s;
  s.full = d_value;
  s.basis = rho_es;
  s.population_rates = r.diagonal().real();

  CMatrix diag_b = CMatrix::Zero(dim, dim);
  CMatrix gamma_b = CMatrix::Zero(dim, dim);
  CMatrix h_b = CMatrix::Zero(dim, dim);
  for (Eigen::Index n = 0; n < dim; ++n) {
    diag_b(n, n) = s.population_rates(n);
    if (p(n) > cutoff) gamma_b(n, n) = -0.5 * s.population_rates(n) / p(n);
    for (Eigen::Index m = 0; m < dim; ++m) {
      if (m == n) continue;
      const double gap = p(m) - p(n);
      if (std::abs(gap) <= degeneracy) {
        if (n < m) {
          ++s.dropped_pairs;
          s.dropped.emplace_back(n, m);
        }
        continue;
      }
      h_b(n, m) = kI * r(n, m) / gap;
    }
  }
  s.diag = v * diag_b * v.adjoint();
  s.nondiag = d_value - s.diag;
  s.gamma = v * gamma_b * v.adjoint();
  s.h_diss = v * h_b * v.adjoint();
  return s;
}

inline DissipatorSplit split_dissipator(const CMatrix& rho, const std::vector<LindbladChannel>& channels, double t,
                                        double cutoff = kSupportCutoff) {
  return split_generator(eig_hermitian(rho), dissipator(rho, channels, t), cutoff);
}

/// Residuals of the split identities, each as an absolute Frobenius norm.
struct SplitResiduals {
  double sum = 0.0;           // ||D_diag + D_nondiag - D||
  double anticommutator = 0.0;  // ||P_S (D_diag + {Gamma, rho}) P_S||
  double commutator = 0.0;      // ||D_nondiag + i[H_diss, rho]|| outside dropped pairs
  double trace_h = 0.0;         // |Tr(rho H_diss)|

  double max() const { return std::max({sum, anticommutator, commutator, trace_h}); }
};

inline SplitResiduals split_residuals(const DissipatorSplit& s, const CMatrix& rho, double cutoff = kSupportCutoff) {
  SplitResiduals res;
  const auto& v = s.basis.vectors;
  res.sum = (s.diag + s.nondiag - s.full).norm();

  CMatrix support = CMatrix::Zero(v.rows(), v.cols());
  for (Eigen::Index n = 0; n < s.basis.values.size(); ++n) {
    if (s.basis.values(n) > cutoff) support(n, n) = 1.0;
  }
  const CMatrix anti_b = v.adjoint() * (s.diag + anticommutator(s.gamma, rho)) * v;
  res.anticommutator = (support * anti_b * support).norm();

  CMatrix comm_b = v.adjoint() * (s.nondiag + kI * commutator(s.h_diss, rho)) * v;
  for (const auto& [n, m] : s.dropped) {
    comm_b(n, m) = 0.0;
    comm_b(m, n) = 0.0;
  }
  res.commutator = comm_b.norm();
  res.trace_h = std::abs((rho * s.h_diss).trace());
  return res;
}

/// Extended Fisher information and its speed decomposition.
struct SpeedReport {
  double qfi = 0.0;           // SLD QFI of the same generator
  double qfi_ext = 0.0;       // Tr(L~ rho L~^dag)
  double qfi_ext_split = 0.0; // 4 Var(H_diss) + sum Pdot^2 / P
  double v_classical = 0.0;   // sqrt(sum Pdot^2 / P)
  double v_quantum = 0.0;     // 2 sigma(H_diss)
  bool consistent = true;     // the two routes agree within 1e-8 relative
};

/// Extended QFI in the interaction picture, where the nSLD is
/// L~ = -2i (H_diss - i Gamma) and the coherent Hamiltonian drops out.
inline SpeedReport qfi_extended(const CMatrix& rho, const DissipatorSplit& split, double cutoff = kSupportCutoff) {
  SpeedReport rep;
  const CMatrix nsld = -2.0 * kI * (split.h_diss - kI * split.gamma);
  rep.qfi_ext = (nsld * rho * nsld.adjoint()).trace().real();

  double classical = 0.0;
  for (Eigen::Index n = 0; n < split.basis.values.size(); ++n) {
    const double p = split.basis.values(n);
    if (p > cutoff) classical += split.population_rates(n) * split.population_rates(n) / p;
  }
  const double var_h = variance(rho, split.h_diss);
  rep.qfi_ext_split = 4.0 * var_h + classical;
  rep.v_classical = std::sqrt(classical);
  rep.v_quantum = 2.0 * std::sqrt(std::max(0.0, var_h));
  rep.qfi = qfi_sld(split.basis, split.full, cutoff);
  rep.consistent =
      std::abs(rep.qfi_ext - rep.qfi_ext_split) <= 1e-8 * std::max({1.0, rep.qfi_ext, rep.qfi_ext_split});
  return rep;
}

}  // namespace oqb
