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

// Dense complex-matrix kernel for the small Hilbert spaces (dim <= 8) used by
// the battery models. Everything here is a pure function on values.
//
// Qubit convention: basis index 0 is the ground state |0>, index 1 the excited
// state |1>. sigma_z = |1><1| - |0><0| and sigma_plus = |1><0|, so that
// (w0/2)(sigma_z + 1) = w0 |1><1|. Multi-qubit states use Kronecker order
// q1 (x) q2 (x) ..., the first factor being the most significant index.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <span>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace oqb {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

/// Eigenvalues at or below this are treated as outside the support of a state.
inline constexpr double kSupportCutoff = 1e-12;
inline constexpr double kHermitianTolerance = 1e-10;

inline constexpr cplx kI{0.0, 1.0};

/// Spectral decomposition of a Hermitian matrix. Values ascend; vectors are the
/// matching orthonormal columns.
struct EigenSystem {
  RVector values;
  CMatrix vectors;

  std::size_t dim() const { return static_cast<std::size_t>(values.size()); }

  CMatrix reconstruct() const {
    return vectors * values.cast<cplx>().asDiagonal() * vectors.adjoint();
  }
};

inline void require_square(const CMatrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    std::ostringstream msg;
    msg << what << ": expected a non-empty square matrix, got " << m.rows() << "x" << m.cols();
    throw std::invalid_argument(msg.str());
  }
}

inline void require_same_shape(const CMatrix& a, const CMatrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    std::ostringstream msg;
    msg << what << ": dimension mismatch " << a.rows() << "x" << a.cols() << " vs " << b.rows() << "x"
        << b.cols();
    throw std::invalid_argument(msg.str());
  }
}

/// ||M - M^dag||_F relative to max(1, ||M||_F).
inline double hermiticity_defect(const CMatrix& m) {
  return (m - m.adjoint()).norm() / std::max(1.0, m.norm());
}

inline CMatrix hermitian_part(const CMatrix& m) { return 0.5 * (m + m.adjoint()); }

inline double real_trace(const CMatrix& m) { return m.trace().real(); }

/// Eigendecomposition of a Hermitian matrix with a deterministic gauge: each
/// eigenvector is rotated so that its first component of magnitude > 1e-12 is
/// real and positive.
inline EigenSystem eig_hermitian(const CMatrix& m, double tolerance = kHermitianTolerance) {
  require_square(m, "eig_hermitian");
  const double defect = hermiticity_defect(m);
  if (defect > tolerance) {
    std::ostringstream msg;
    msg << "eig_hermitian: matrix is not Hermitian (relative asymmetry " << defect << " > " << tolerance
        << ")";
    throw std::invalid_argument(msg.str());
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(hermitian_part(m));
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("eig_hermitian: eigensolver did not converge");
  }
  EigenSystem es{solver.eigenvalues(), solver.eigenvectors()};
  for (Eigen::Index k = 0; k < es.vectors.cols(); ++k) {
    auto col = es.vectors.col(k);
    for (Eigen::Index i = 0; i < col.size(); ++i) {
      if (std::abs(col(i)) > 1e-12) {
        col *= std::conj(col(i)) / std::abs(col(i));
        break;
      }
    }
  }
  return es;
}

/// Applies f to every eigenvalue and reassembles V f(D) V^dag.
template <typename F>
CMatrix apply_on_spectrum(const EigenSystem& es, F&& f) {
  CVector mapped(es.values.size());
  for (Eigen::Index i = 0; i < es.values.size(); ++i) {
    mapped(i) = cplx(f(es.values(i)), 0.0);
  }
  return es.vectors * mapped.asDiagonal() * es.vectors.adjoint();
}

/// sum over p_n > cutoff of ln(p_n) |n><n|.
inline CMatrix log_on_support(const EigenSystem& es, double cutoff = kSupportCutoff) {
  return apply_on_spectrum(es, [cutoff](double p) { return p > cutoff ? std::log(p) : 0.0; });
}

inline CMatrix log_on_support(const CMatrix& rho, double cutoff = kSupportCutoff) {
  return log_on_support(eig_hermitian(rho), cutoff);
}

/// -Tr(rho ln rho) restricted to the support.
inline double von_neumann_entropy(const EigenSystem& es, double cutoff = kSupportCutoff) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < es.values.size(); ++i) {
    const double p = es.values(i);
    if (p > cutoff) s -= p * std::log(p);
  }
  return s;
}

inline CMatrix commutator(const CMatrix& a, const CMatrix& b) {
  require_same_shape(a, b, "commutator");
  return a * b - b * a;
}

inline CMatrix anticommutator(const CMatrix& a, const CMatrix& b) {
  require_same_shape(a, b, "anticommutator");
  return a * b + b * a;
}

/// Re Tr(rho O).
inline double expval(const CMatrix& rho, const CMatrix& op) {
  require_same_shape(rho, op, "expval");
  return (rho * op).trace().real();
}

/// <O^2> - <O>^2, clamped at zero when rounding leaves it within -1e-12.
inline double variance(const CMatrix& rho, const CMatrix& op) {
  require_same_shape(rho, op, "variance");
  const double mean = expval(rho, op);
  const double second = (rho * op * op).trace().real();
  const double var = second - mean * mean;
  if (var < 0.0 && var >= -1e-12 * std::max(1.0, second)) return 0.0;
  return var;
}

inline double stddev(const CMatrix& rho, const CMatrix& op) {
  return std::sqrt(std::max(0.0, variance(rho, op)));
}

inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

inline CVector kron(const CVector& a, const CVector& b) {
  CVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

inline CMatrix projector(const CVector& ket) { return ket * ket.adjoint(); }

/// Reduced state of one factor of a tensor-product space with dimensions `dims`.
inline CMatrix reduce_to(const CMatrix& rho, std::span<const std::size_t> dims, std::size_t keep) {
  require_square(rho, "reduce_to");
  if (keep >= dims.size()) throw std::invalid_argument("reduce_to: subsystem index out of range");
  const std::size_t total =
      std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
  if (total != static_cast<std::size_t>(rho.rows())) {
    std::ostringstream msg;
    msg << "reduce_to: product of dims " << total << " != state dimension " << rho.rows();
    throw std::invalid_argument(msg.str());
  }
  std::size_t inner = 1;
  for (std::size_t k = keep + 1; k < dims.size(); ++k) inner *= dims[k];
  const std::size_t dk = dims[keep];
  const std::size_t outer = total / (inner * dk);

  CMatrix out = CMatrix::Zero(static_cast<Eigen::Index>(dk), static_cast<Eigen::Index>(dk));
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t in = 0; in < inner; ++in) {
      for (std::size_t i = 0; i < dk; ++i) {
        for (std::size_t j = 0; j < dk; ++j) {
          const auto r = static_cast<Eigen::Index>((o * dk + i) * inner + in);
          const auto c = static_cast<Eigen::Index>((o * dk + j) * inner + in);
          out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) += rho(r, c);
        }
      }
    }
  }
  return out;
}

enum class Subsystem { A, B };

/// Partial trace on a bipartite space of dimensions (dA, dB), keeping `keep`.
inline CMatrix partial_trace(const CMatrix& rho_ab, Subsystem keep, std::size_t dim_a, std::size_t dim_b) {
  const std::size_t dims[] = {dim_a, dim_b};
  return reduce_to(rho_ab, dims, keep == Subsystem::A ? 0 : 1);
}

namespace ops {

inline CMatrix identity(std::size_t n) {
  return CMatrix::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
}

inline CMatrix sigma_x() {
  CMatrix m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

inline CMatrix sigma_y() {
  CMatrix m(2, 2);
  m << 0.0, kI, -kI, 0.0;
  return m;
}

inline CMatrix sigma_z() {
  CMatrix m(2, 2);
  m << -1.0, 0.0, 0.0, 1.0;
  return m;
}

/// |1><0|
inline CMatrix sigma_plus() {
  CMatrix m = CMatrix::Zero(2, 2);
  m(1, 0) = 1.0;
  return m;
}

/// |0><1|
inline CMatrix sigma_minus() { return sigma_plus().adjoint(); }

inline CVector ket0() {
  CVector v(2);
  v << 1.0, 0.0;
  return v;
}

inline CVector ket1() {
  CVector v(2);
  v << 0.0, 1.0;
  return v;
}

/// (|0> + |1>)/sqrt(2)
inline CVector ket_plus() { return (ket0() + ket1()) / std::sqrt(2.0); }

/// Embeds a single-qubit operator at `site` of an n-qubit register.
inline CMatrix on_site(const CMatrix& op, std::size_t site, std::size_t n_qubits) {
  CMatrix out = CMatrix::Identity(1, 1);
  for (std::size_t k = 0; k < n_qubits; ++k) out = kron(out, k == site ? op : identity(2));
  return out;
}

}  // namespace ops

}  // namespace oqb
