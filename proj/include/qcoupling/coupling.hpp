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

#include <array>
#include <functional>
#include <optional>
#include <vector>

#include "qcoupling/qstate.hpp"

namespace qcoupling::coupling {

using linalg::ComplexMatrix;
using linalg::ComplexVector;
using qstate::DensityMatrix;
using qstate::PureState;

inline constexpr double kCouplingTol = 1e-8;

struct CouplingCheck {
  bool ok = false;
  double residual_a = 0.0;  ///< ||Tr_B joint - rho_A||_F
  double residual_b = 0.0;  ///< ||Tr_A joint - rho_B||_F
};

/// Marginal residuals of `joint` against (rho_a, rho_b); ok iff both <= tol.
CouplingCheck is_coupling(const DensityMatrix& joint, const DensityMatrix& rho_a, const DensityMatrix& rho_b,
                          double tol = kCouplingTol);

/// A bipartite state together with the two marginals it reproduces.
class Coupling {
 public:
  /// Throws MarginalMismatch when the marginals are off by more than `tol`.
  Coupling(DensityMatrix joint, DensityMatrix target_a, DensityMatrix target_b, double tol = kCouplingTol);

  static Coupling product(const DensityMatrix& rho_a, const DensityMatrix& rho_b);

  const DensityMatrix& joint() const noexcept { return joint_; }
  const DensityMatrix& target_a() const noexcept { return target_a_; }
  const DensityMatrix& target_b() const noexcept { return target_b_; }
  double tolerance() const noexcept { return tol_; }
  const CouplingCheck& check() const noexcept { return check_; }

  /// Tr(P_s joint).
  double sym_overlap() const;

 private:
  DensityMatrix joint_;
  DensityMatrix target_a_;
  DensityMatrix target_b_;
  double tol_;
  CouplingCheck check_;
};

/// Nonnegative probability vector summing to one (within 1e-9). Entries in
/// [-1e-12, 0) are clamped to zero.
class Distribution {
 public:
  explicit Distribution(std::vector<double> p);

  const std::vector<double>& values() const noexcept { return p_; }
  std::size_t size() const noexcept { return p_.size(); }
  double operator[](std::size_t i) const { return p_[i]; }

 private:
  std::vector<double> p_;
};

/// Nonnegative n x n matrix with declared row and (optionally) column sums.
struct TransportPlan {
  std::size_t n = 0;
  std::vector<double> entries;  ///< row-major
  std::vector<double> row_contract;
  std::optional<std::vector<double>> col_contract;

  double operator()(std::size_t i, std::size_t j) const { return entries[i * n + j]; }
  double& at(std::size_t i, std::size_t j) { return entries[i * n + j]; }

  std::vector<double> row_sums() const;
  std::vector<double> col_sums() const;
  /// Largest deviation from the declared contracts.
  double contract_residual() const;
  /// Total mass off the diagonal.
  double mismatch_mass() const;
};

/// Coupling of two distributions with X_ii = min(mu_i, nu_i); its mismatch
/// mass equals the total variation distance.
TransportPlan classical_tv_coupling(const Distribution& mu, const Distribution& nu);

/// Per-round record of the diagonal-transport loop.
struct TransportRound {
  std::vector<std::size_t> active;  ///< index set at the start of the round
  double active_s = 0.0;            ///< sum of residual s over the active set
  double active_t = 0.0;            ///< sum of residual t over the active set
  std::size_t pivot = 0;
};
using TransportObserver = std::function<void(const TransportRound&)>;

/// Transport plan with row sums S, column sums T, and weighted asymmetry
///   sum_{i>j} (sqrt X_ij - sqrt X_ji)^2 <= sum_i (sqrt S_i - sqrt T_i)^2 - min_i (sqrt S_i - sqrt T_i)^2.
///
/// Each round pairs the index k with the most lopsided ratio max(s/t, t/s)
/// against the opposite-signed indices (ascending) and moves mass in the
/// fixed proportion s_k : t_k. `observer`, when set, sees every round.
TransportPlan diag_transport(const Distribution& s, const Distribution& t, const TransportObserver& observer = {});

/// sum_{i>j} (sqrt X_ij - sqrt X_ji)^2.
double transport_asymmetry(const TransportPlan& plan);
/// sum_i (sqrt S_i - sqrt T_i)^2 - min_i (sqrt S_i - sqrt T_i)^2.
double transport_asymmetry_bound(const Distribution& s, const Distribution& t);

/// Coupling of diag(lambda_a) and diag(lambda_b) built from diag_transport.
Coupling diag_coupling(const Distribution& lambda_a, const Distribution& lambda_b);

/// F(lambda_a, lambda_b) + min_i (sqrt lambda_a,i - sqrt lambda_b,i)^2 / 2.
double diag_lower_bound(const Distribution& lambda_a, const Distribution& lambda_b);

/// Two weighted pure-state pairs aligned so that <v_1|v_2> = 0 and each
/// <v_i|u_i> is real and nonnegative. Weights may be subnormalized.
struct RankTwoPair {
  std::array<double, 2> s{};
  std::array<ComplexVector, 2> u;
  std::array<double, 2> t{};
  std::array<ComplexVector, 2> v;

  /// sum_i sqrt(s_i t_i) <v_i|u_i> after normalizing both weight pairs.
  double alignment_sum() const;
};

/// Coupling of rho = sum s_i |u_i><u_i| and sigma = sum t_i |v_i><v_i| with
/// Tr(P_s tau) >= 1/2 + alignment_sum()^2 / 2. Throws AlignmentViolation
/// if the alignment preconditions fail by more than 1e-7.
Coupling rank2_coupling(const RankTwoPair& pair);

/// Matrix X >= 0 with unit row sums and X_ij s_i + X_ji s_j = X_ij t_i + X_ji t_j.
TransportPlan mass_split(const Distribution& s, const Distribution& t);

/// Largest violation of the balance identity over all (i, j).
double balance_residual(const TransportPlan& plan, const Distribution& s, const Distribution& t);

/// Coupling of rho and sigma with Tr(P_s tau) >= (1 + F^2) / 2, assembled
/// block by block from the Uhlmann-aligned decomposition and mass_split.
Coupling general_coupling(const DensityMatrix& rho, const DensityMatrix& sigma);

struct EnsembleMember {
  double weight;
  PureState state;
};

/// Finite pure-state decomposition of a mixed state.
class Ensemble {
 public:
  explicit Ensemble(std::vector<EnsembleMember> members);

  const std::vector<EnsembleMember>& members() const noexcept { return members_; }
  std::size_t size() const noexcept { return members_.size(); }

  DensityMatrix mixture() const;
  /// sum_i p_i Tr(H psi_i).
  double average_cost(const ComplexMatrix& h) const;

 private:
  std::vector<EnsembleMember> members_;
};

/// Caratheodory reduction of an ensemble on C^d (x) C^d. Ensembles with at
/// most d^4 + 1 members come back unchanged; larger ones are pruned until
/// the embedded points (psi_i, Tr(H psi_i), 1) are linearly independent,
/// which leaves at most d^4 + 1 members with the same mixture and cost.
Ensemble caratheodory_reduce(const Ensemble& ensemble, const ComplexMatrix& h);

struct FidelityBoundReport {
  double fidelity;       ///< F(rho_A, rho_B)
  double distance_pq;    ///< |Tr(P_as rho) - Tr(P_s rho)|
  double slack;          ///< fidelity - distance_pq
};

struct DistanceBoundReport {
  double distance;       ///< D(rho_A, rho_B)
  double fidelity_pq;    ///< 2 sqrt(Tr(P_as rho) Tr(P_s rho))
  double slack;          ///< fidelity_pq - distance
};

FidelityBoundReport check_fidelity_bound(const DensityMatrix& rho_ab);
DistanceBoundReport check_distance_bound(const DensityMatrix& rho_ab);

}  // namespace qcoupling::coupling
