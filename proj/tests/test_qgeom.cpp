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

#include "oqb/dynamics.hpp"
#include "oqb/models.hpp"
#include "oqb/qgeom.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace oqb {
namespace {

using testing::random_density;
using testing::random_ket;
using testing::random_tangent;

// Pinned after measurement: max |qfi_spectral - qfi_sld| / step^2 over the
// smooth test curves below is 7.3.
constexpr double kSpectralConstant = 10.0;

CMatrix diag2(double a, double b) {
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

/// exp(-i h t) for Hermitian h.
CMatrix propagator(const CMatrix& h, double t) {
  const EigenSystem es = eig_hermitian(h);
  CVector phases(es.values.size());
  for (Eigen::Index k = 0; k < phases.size(); ++k) phases(k) = std::exp(-kI * es.values(k) * t);
  return es.vectors * phases.asDiagonal() * es.vectors.adjoint();
}

TEST(Sld, StationaryStateGivesZero) {
  EXPECT_EQ(sld(diag2(0.3, 0.7), CMatrix::Zero(2, 2)).norm(), 0.0);
  EXPECT_EQ(qfi_sld(diag2(0.3, 0.7), CMatrix::Zero(2, 2)), 0.0);
}

TEST(Sld, DiagonalScalarSolve) {
  const double p = 0.3;
  const double pd = 0.12;
  const CMatrix l = sld(diag2(p, 1.0 - p), diag2(pd, -pd));
  EXPECT_NEAR(l(0, 0).real(), pd / p, 1e-14);
  EXPECT_NEAR(l(1, 1).real(), -pd / (1.0 - p), 1e-14);
  EXPECT_NEAR(qfi_sld(diag2(p, 1.0 - p), diag2(pd, -pd)), pd * pd / (p * (1.0 - p)), 1e-14);
}

TEST(Sld, UnitaryRotationReconstruction) {
  std::mt19937_64 rng(1);
  const CMatrix rho = random_density(rng, 2);
  const CMatrix h = testing::random_hermitian(rng, 2);
  const CMatrix rate = -kI * commutator(h, rho);
  const CMatrix l = sld(rho, rate);
  EXPECT_LT((0.5 * (l * rho + rho * l) - rate).norm(), 1e-12);
}

TEST(Sld, ReconstructsRandomPairsOnSupport) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Index dim = trial % 2 == 0 ? 2 : 4;
    const CMatrix rho = random_density(rng, dim);
    const CMatrix rate = random_tangent(rng, dim);
    const CMatrix l = sld(rho, rate);
    EXPECT_LT((0.5 * (l * rho + rho * l) - rate).norm(), 1e-9);
    EXPECT_NEAR(qfi_sld(rho, rate), (rho * l * l).trace().real(), 1e-9 * std::max(1.0, qfi_sld(rho, rate)));
  }
}

TEST(Sld, RejectsNonTangentGenerator) {
  EXPECT_THROW(qfi_sld(diag2(0.5, 0.5), ops::identity(2)), std::invalid_argument);
}

// Pure state under unitary evolution: 4 (<dpsi|dpsi> - |<psi|dpsi>|^2), and the
// fidelity route 8 (1 - |<psi(t)|psi(t+e)>|) / e^2.
TEST(QfiSld, PureStateClosedFormAndFidelity) {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::Index dim = trial % 2 == 0 ? 2 : 4;
    const CVector psi = random_ket(rng, dim);
    const CMatrix h = testing::random_hermitian(rng, dim);
    const CVector dpsi = -kI * h * psi;
    const double closed = 4.0 * (dpsi.squaredNorm() - std::norm(psi.dot(dpsi)));
    const CMatrix rho = projector(psi);
    const double qfi = qfi_sld(rho, -kI * commutator(h, rho));
    EXPECT_NEAR(qfi, closed, 1e-10 * std::max(1.0, closed));
    const double eps = 1e-4;
    const double fid = std::abs(psi.dot(propagator(h, eps) * psi));
    EXPECT_NEAR(8.0 * (1.0 - fid) / (eps * eps), closed, 1e-4 * std::max(1.0, closed));
  }
}

TEST(QfiSpectral, StationaryAndDiagonal) {
  const CMatrix rho = diag2(0.25, 0.75);
  EXPECT_NEAR(qfi_spectral(rho, rho, rho, 1e-3).value, 0.0, 1e-15);
  auto diag_at = [](double t) {
    const double p = 0.5 + 0.3 * std::sin(t);
    return diag2(p, 1.0 - p);
  };
  const double t = 0.4;
  const double h = 1e-4;
  const double p = 0.5 + 0.3 * std::sin(t);
  const double pd = 0.3 * std::cos(t);
  const SpectralQfi sq = qfi_spectral(diag_at, t, h);
  EXPECT_FALSE(sq.flagged);
  EXPECT_NEAR(sq.value, pd * pd / p + pd * pd / (1.0 - p), 1e-7);
}

// Smooth curves: rotated damped qubit and the XX battery.
TEST(QfiSpectral, AgreesWithSldAtSecondOrder) {
  const CMatrix h = 0.7 * ops::sigma_x() + 0.2 * ops::sigma_z();
  auto state = [&](double t) {
    const double p = 0.5 + 0.35 * std::exp(-0.3 * t);
    const CMatrix u = propagator(h, t);
    return CMatrix(u * diag2(p, 1.0 - p) * u.adjoint());
  };
  auto rate = [&](double t) {
    const double pd = -0.3 * 0.35 * std::exp(-0.3 * t);
    const CMatrix u = propagator(h, t);
    return CMatrix(-kI * commutator(h, state(t)) + u * diag2(pd, -pd) * u.adjoint());
  };
  XXChainParams xx;
  xx.beta_c = xx.gamma_c = 1.0 / std::sqrt(2.0);
  double worst_ratio = 0.0;
  for (double step : {1e-2, 1e-3}) {
    for (double t = 0.3; t < 5.0; t += 0.37) {
      const SpectralQfi sq = qfi_spectral(state, t, step);
      ASSERT_FALSE(sq.flagged);
      const double exact = qfi_sld(state(t), rate(t));
      const double err = std::abs(sq.value - exact);
      EXPECT_LE(err, std::max(1e-6, kSpectralConstant * step * step)) << "t = " << t << " step = " << step;
      worst_ratio = std::max(worst_ratio, err / (step * step));

      const BatteryState b = xx_battery_state(xx, t);
      const SpectralQfi sx = qfi_spectral([&](double s) { return xx_battery_state(xx, s).rho; }, t, step);
      if (!sx.flagged) {
        const double ex = qfi_sld(b.rho, b.rho_dot);
        EXPECT_LE(std::abs(sx.value - ex), std::max(1e-6, kSpectralConstant * step * step)) << "xx t = " << t;
        worst_ratio = std::max(worst_ratio, std::abs(sx.value - ex) / (step * step));
      }
    }
  }
  RecordProperty("worst_ratio", std::to_string(worst_ratio));
  std::printf("qfi_spectral: max |err| / step^2 = %.3g\n", worst_ratio);
}

TEST(QfiSpectral, CrossingFollowsOverlap) {
  // The ascending order swaps at t = 0; overlap matching keeps each branch.
  auto state = [](double t) { return diag2(0.5 + 0.2 * t, 0.5 - 0.2 * t); };
  const SpectralQfi sq = qfi_spectral(state, 0.0, 1e-3);
  EXPECT_FALSE(sq.flagged);
  EXPECT_NEAR(sq.value, 0.04 / 0.5 + 0.04 / 0.5, 1e-9);
}

TEST(QfiSpectral, FlagsUnreliableStencils) {
  // Eigenvectors rotate by a radian across the stencil.
  const CMatrix h = ops::sigma_y();
  auto rotating = [&](double t) {
    const CMatrix u = propagator(h, 0.5 * t);
    return CMatrix(u * diag2(0.8, 0.2) * u.adjoint());
  };
  EXPECT_TRUE(qfi_spectral(rotating, 0.0, 1.0).flagged);
  EXPECT_FALSE(qfi_spectral(rotating, 0.0, 1e-3).flagged);
  // Rank changes between the center and the sides.
  auto filling = [](double t) { return diag2(1.0 - t * t, t * t); };
  EXPECT_TRUE(qfi_spectral(filling, 0.0, 1e-3).flagged);
}

TEST(Split, DiagonalDissipationHasNoHamiltonian) {
  const CMatrix rho = diag2(0.3, 0.7);
  const std::vector<LindbladChannel> decay = {{ops::sigma_minus(), constant_rate(0.5)}};
  const DissipatorSplit s = split_dissipator(rho, decay, 0.0);
  EXPECT_LT(s.h_diss.norm(), 1e-15);
  EXPECT_NEAR(s.gamma(1, 1).real(), -0.5 * (-0.5 * 0.7) / 0.7, 1e-15);
  EXPECT_NEAR(s.gamma(0, 0).real(), -0.5 * (0.5 * 0.7) / 0.3, 1e-15);
  const SpeedReport rep = qfi_extended(rho, s);
  EXPECT_NEAR(rep.v_quantum, 0.0, 1e-15);
  const double pd = 0.35;
  EXPECT_NEAR(rep.qfi_ext, pd * pd / 0.3 + pd * pd / 0.7, 1e-13);
}

TEST(Split, IdentitiesOnRandomAmplitudeDamping) {
  std::mt19937_64 rng(5);
  const std::vector<LindbladChannel> decay = {{ops::sigma_minus(), constant_rate(0.8)},
                                              {ops::sigma_plus(), constant_rate(0.1)}};
  for (int trial = 0; trial < 50; ++trial) {
    const CMatrix rho = random_density(rng, 2);
    const DissipatorSplit s = split_dissipator(rho, decay, 0.0);
    EXPECT_LT((s.diag + s.nondiag - dissipator(rho, decay, 0.0)).norm(), 1e-14);
    const SplitResiduals r = split_residuals(s, rho);
    EXPECT_LT(r.max(), 1e-12);
    EXPECT_EQ(s.dropped_pairs, 0u);
  }
}

TEST(Split, DegeneratePairsAreDroppedAndCounted) {
  const CMatrix rho = ops::identity(2) / 2.0;
  const DissipatorSplit s = split_generator(eig_hermitian(rho), 0.1 * ops::sigma_x());
  EXPECT_EQ(s.dropped_pairs, 1u);
  EXPECT_LT(s.h_diss.norm(), 1e-15);
  EXPECT_LT(split_residuals(s, rho).max(), 1e-15);
}

TEST(ExtendedQfi, ClosedSystemInInteractionPicture) {
  const CMatrix rho = diag2(0.2, 0.8);
  const DissipatorSplit s = split_generator(eig_hermitian(rho), CMatrix::Zero(2, 2));
  const SpeedReport rep = qfi_extended(rho, s);
  EXPECT_EQ(rep.qfi_ext, 0.0);
  EXPECT_EQ(rep.qfi, 0.0);
}

TEST(ExtendedQfi, BoundsQfiAndRoutesAgree) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 1000; ++trial) {
    const Eigen::Index dim = trial % 3 == 0 ? 4 : 2;
    const CMatrix rho = random_density(rng, dim);
    const DissipatorSplit s = split_generator(eig_hermitian(rho), random_tangent(rng, dim));
    const SpeedReport rep = qfi_extended(rho, s);
    EXPECT_TRUE(rep.consistent);
    EXPECT_NEAR(rep.qfi_ext, rep.qfi_ext_split, 1e-8 * std::max(1.0, rep.qfi_ext));
    EXPECT_GE(rep.qfi_ext, rep.qfi - 1e-9);
    EXPECT_NEAR(rep.v_classical * rep.v_classical + rep.v_quantum * rep.v_quantum, rep.qfi_ext,
                1e-8 * std::max(1.0, rep.qfi_ext));
  }
}

TEST(ExtendedQfi, ChargerBatterySamples) {
  ChargerBatteryParams p;
  p.reservoir = ReservoirParams{0.1, 10.0, 3.0, 0.0};
  p.charger = ops::ket_plus();
  const ChargerBatteryModel m = build_charger_battery(p);
  IntegrateOptions opt;
  opt.dt = 1e-2;
  opt.t_max = 10.0;
  opt.record_every = 10;
  opt.bipartition = std::make_pair(std::size_t{2}, std::size_t{2});
  const Trajectory traj = integrate(m.rho0, m.hamiltonian_fn(), m.channels, opt);
  for (std::size_t k = 1; k < traj.size(); ++k) {
    const CMatrix rate =
        partial_trace(lindblad_rhs(traj.states[k], m.hamiltonian, m.channels, traj.times[k]), Subsystem::B, 2, 2);
    const CMatrix& rho = traj.reduced_states[k];
    const DissipatorSplit s = split_generator(eig_hermitian(rho), hermitian_part(rate));
    const SpeedReport rep = qfi_extended(rho, s);
    EXPECT_GE(rep.qfi_ext, rep.qfi - 1e-9) << "t = " << traj.times[k];
    EXPECT_LT(split_residuals(s, rho).max(), 1e-10);
  }
}

}  // namespace
}  // namespace oqb
