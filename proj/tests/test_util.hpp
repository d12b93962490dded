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

// Random matrices and states shared by the test binaries.

#include "oqb/qmat.hpp"

#include <random>

namespace oqb::testing {

inline CMatrix random_complex(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> n;
  CMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = cplx(n(rng), n(rng));
  return m;
}

inline CMatrix random_hermitian(std::mt19937_64& rng, Eigen::Index dim) {
  return hermitian_part(random_complex(rng, dim, dim));
}

/// Full-rank density matrix G G^dag / Tr.
inline CMatrix random_density(std::mt19937_64& rng, Eigen::Index dim) {
  const CMatrix g = random_complex(rng, dim, dim);
  CMatrix rho = g * g.adjoint();
  return hermitian_part(rho / rho.trace().real());
}

inline CVector random_ket(std::mt19937_64& rng, Eigen::Index dim) {
  CVector v = random_complex(rng, dim, 1);
  return v / v.norm();
}

/// Traceless Hermitian matrix, a valid tangent vector at any state.
inline CMatrix random_tangent(std::mt19937_64& rng, Eigen::Index dim) {
  CMatrix h = random_hermitian(rng, dim);
  h -= (h.trace() / static_cast<double>(dim)) * CMatrix::Identity(dim, dim);
  return h;
}

}  // namespace oqb::testing
