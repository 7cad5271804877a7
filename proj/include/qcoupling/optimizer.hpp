// Copyright 2026 The qcoupling Authors
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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qcoupling/coupling.hpp"

namespace qcoupling::optimizer {

using coupling::Coupling;
using linalg::ComplexMatrix;
using qstate::DensityMatrix;

struct OptimizerConfig {
  int max_iters = 20000;
  double step0 = 1.0;  ///< initial ADMM penalty
  double tol = 1e-8;   ///< objective change that counts as a plateau
  int dykstra_iters = 500;
  std::uint64_t seed = 0;

  /// Throws ParamOutOfRange unless every field is positive.
  void validate() const;
};

/// Bracket [(1 + F^2)/2, (1 + F)/2] on max Tr(P_s tau) over couplings.
struct Certificate {
  double lower_bound;
  double upper_bound;
};

struct OptimizationResult {
  double value = 0.0;
  Coupling argument;
  int iterations = 0;
  bool converged = false;
  std::optional<Certificate> certificate;
  /// Best feasible objective seen so far, one entry per checkpoint.
  std::vector<double> history;
  std::vector<std::string> warnings;
};

/// Frobenius-nearest Hermitian Y with Tr_B Y = rho_a and Tr_A Y = rho_b:
///   Y = X + R_A (x) I/d_B + I/d_A (x) R_B - Tr(R_A) I/(d_A d_B),
/// where R_A and R_B are the marginal residuals of X.
ComplexMatrix project_marginal_affine(const ComplexMatrix& x, const DensityMatrix& rho_a, const DensityMatrix& rho_b);

/// Nearest PSD matrix in Frobenius norm (negative eigenvalues clamped).
ComplexMatrix project_psd(const ComplexMatrix& x);

struct DykstraResult {
  ComplexMatrix point;
  /// Marginal residual ||Tr_B Y - rho_a||_F + ||Tr_A Y - rho_b||_F of the
  /// PSD iterate after each sweep.
  std::vector<double> residuals;
};

/// Dykstra's alternating projections of `x` onto (PSD cone) cap (marginal
/// affine set); stops after `iters` sweeps or once the residual drops to `tol`.
DykstraResult dykstra_project(const ComplexMatrix& x, const DensityMatrix& rho_a, const DensityMatrix& rho_b,
                              int iters, double tol = 1e-12);

/// max Tr(H tau) over couplings tau of (rho_a, rho_b).
///
/// ADMM on the split (marginal affine set) / (PSD cone), restricted to
/// supp(rho_a) (x) supp(rho_b). Iterates are repaired to exact couplings
/// by projecting onto the affine set and mixing with rho_a (x) rho_b, so
/// every reported value is attained by the returned argument. When H is
/// P_s the result carries the fidelity certificate.
OptimizationResult max_overlap(const DensityMatrix& rho_a, const DensityMatrix& rho_b, const ComplexMatrix& h,
                               const OptimizerConfig& cfg = {});

/// min Tr(P_as tau) = 1 - max Tr(P_s tau), same argument.
OptimizationResult min_antisym_overlap(const DensityMatrix& rho_a, const DensityMatrix& rho_b,
                                       const OptimizerConfig& cfg = {});

/// Earth mover's objective for the linear cost h(psi) = Tr(H psi):
/// min Tr(H tau) over couplings.
OptimizationResult emd_min(const DensityMatrix& rho_a, const DensityMatrix& rho_b, const ComplexMatrix& h,
                           const OptimizerConfig& cfg = {});

/// Exact U (x) U twirl (Tr(H P_s)/r_s) P_s + (Tr(H P_as)/r_as) P_as.
ComplexMatrix twirl(const ComplexMatrix& h);

struct TwirlReduction {
  double lambda_identity;  ///< twirl(H) = lambda_identity I + lambda_antisym P_as
  double lambda_antisym;
  double decomposition_residual;  ///< ||twirl(H) - (l1 I + l2 P_as)||_F
  double invariance_defect;       ///< max_U ||(U(x)U) T (U(x)U)^dag - T||_F over samples
};

struct ForcingPoint {
  double mu;
  double min_antisym;  ///< min over couplings of Tr(P_as tau)
  double distance;     ///< trace distance of the two marginals
  double infidelity;   ///< 1 - F of the two marginals
  double f_distance;   ///< 2 sqrt(x (1 - x)) at x = min_antisym
  double f_infidelity; ///< 1 - |1 - 2x|
};

struct PurePairContradiction {
  double overlap;           ///< c = |<alpha|beta>|
  double min_antisym;       ///< Tr(P_as alpha (x) beta), the unique coupling
  double distance;          ///< sqrt(1 - c^2)
  double f_distance;        ///< 2 sqrt(x (1 - x)) at x = (1 - c^2)/2
  double distance_gap;
  double infidelity;        ///< 1 - c
  double f_infidelity;      ///< 1 - |1 - 2x| = 1 - c^2
  double infidelity_gap;
};

struct NogoReport {
  TwirlReduction twirl;
  std::vector<ForcingPoint> forcing;
  PurePairContradiction contradiction;
  /// Same comparison at c = 0 and c = 1, where both formulas agree.
  std::vector<PurePairContradiction> endpoints;
};

/// Numerical walk through the no-go argument for a distance determined by
/// a linear earth mover's cost (trace distance and infidelity variants).
NogoReport nogo_demo(const OptimizerConfig& cfg = {});

/// Pure-pair comparison for an arbitrary overlap c in [0, 1].
PurePairContradiction pure_pair_contradiction(double c);

}  // namespace qcoupling::optimizer
