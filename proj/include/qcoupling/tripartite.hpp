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
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qcoupling/qstate.hpp"

namespace qcoupling::tripartite {

using qstate::DensityMatrix;
using qstate::KrausChannel;

enum class Verdict { Consistent, Violated };

std::string_view to_string(Verdict v);

/// One necessary condition evaluated as lhs >= rhs; violated iff
/// slack = lhs - rhs < -tol.
struct CriterionReport {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  double tol = 0.0;
  Verdict verdict = Verdict::Consistent;
  std::optional<KrausChannel> witness;
  std::string note;

  bool violated() const noexcept { return verdict == Verdict::Violated; }
};

CriterionReport make_report(std::string name, double lhs, double rhs, double tol);

struct ConsistencyReport {
  double residual_a;  ///< ||Tr_B rho_AB - Tr_C rho_AC||_F
  double residual_b;  ///< ||Tr_A rho_AB - Tr_C rho_BC||_F
  double residual_c;  ///< ||Tr_A rho_AC - Tr_B rho_BC||_F

  double worst() const noexcept;
};

/// Candidate two-body marginals (rho_AB, rho_AC, rho_BC) of a state on
/// A (x) B (x) C. Dimensions are read from each state's two-factor dims.
class MarginalTriple {
 public:
  MarginalTriple(DensityMatrix ab, DensityMatrix ac, DensityMatrix bc);

  /// The three two-body marginals of a three-factor state.
  static MarginalTriple from_global(const DensityMatrix& abc);

  const DensityMatrix& ab() const noexcept { return ab_; }
  const DensityMatrix& ac() const noexcept { return ac_; }
  const DensityMatrix& bc() const noexcept { return bc_; }
  std::size_t dim_a() const noexcept { return dims_[0]; }
  std::size_t dim_b() const noexcept { return dims_[1]; }
  std::size_t dim_c() const noexcept { return dims_[2]; }

  /// Single-party marginals: A from ab, B from ab, C from ac.
  DensityMatrix rho_a() const;
  DensityMatrix rho_b() const;
  DensityMatrix rho_c() const;

  ConsistencyReport consistency() const;

  /// Embeds the smaller of A and B into the larger by zero padding so that
  /// P_s and P_as are defined. Returns *this when d_A = d_B.
  MarginalTriple padded() const;

 private:
  DensityMatrix ab_;
  DensityMatrix ac_;
  DensityMatrix bc_;
  std::array<std::size_t, 3> dims_{};
};

inline constexpr double kCriterionTol = 1e-8;

/// Pairwise agreement of the single-party marginals (lhs 0, rhs the worst
/// residual). Disagreement alone rules out a global state.
CriterionReport consistency_check(const MarginalTriple& t, double tol = kCriterionTol);

/// F(rho_AC, rho_BC) >= |Tr(P_as rho_AB) - Tr(P_s rho_AB)|.
CriterionReport fidelity_criterion_check(const MarginalTriple& t, double tol = kCriterionTol);

/// 2 sqrt(Tr(P_as rho_AB) Tr(P_s rho_AB)) >= D(rho_AC, rho_BC).
CriterionReport distance_criterion_check(const MarginalTriple& t, double tol = kCriterionTol);

struct ScanOptions {
  std::size_t samples = 100;
  std::uint64_t seed = 0;
  /// Extra channels on B. The criterion is only established for unitary
  /// channels, so these reports carry a "beyond proof scope" note.
  std::vector<KrausChannel> extra_channels;
  bool fail_fast = false;
  double tol = kCriterionTol;
};

/// The fidelity criterion after a channel E on B:
///   F(rho_AC, (E (x) I) rho_BC) >= |Tr P_as (I (x) E) rho_AB - Tr P_s (I (x) E) rho_AB|.
/// Entry 0 is the identity channel; entries 1..samples use Haar unitaries
/// drawn from per-sample seeds, followed by `extra_channels`. Violations
/// carry the channel as witness.
std::vector<CriterionReport> channel_scan(const MarginalTriple& t, const ScanOptions& opts = {});

/// S(AC) + S(AB) >= S(A) and S(AC) + S(AB) >= S(B) + S(C).
std::vector<CriterionReport> entropy_criteria(const MarginalTriple& t, double tol = kCriterionTol);

/// Two-qubit symmetric extendibility on B:
///   Tr(rho_B^2) >= Tr(rho_AB^2) - 4 sqrt(det rho_AB).
/// Consistent means extendible.
CriterionReport symext_2qubit(const DensityMatrix& rho_ab, double tol = 1e-10);

/// Row-major joint probability table.
struct ClassicalTable {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;

  double operator()(std::size_t i, std::size_t j) const { return values[i * cols + j]; }
  std::vector<double> row_marginal() const;
};

/// p(x, y, z) stored at (x * d_B + y) * d_C + z.
struct ClassicalTripartite {
  std::size_t dim_a = 0;
  std::size_t dim_b = 0;
  std::size_t dim_c = 0;
  std::vector<double> values;

  double operator()(std::size_t x, std::size_t y, std::size_t z) const {
    return values[(x * dim_b + y) * dim_c + z];
  }
  ClassicalTable marginal_ab() const;
  ClassicalTable marginal_ac() const;
};

/// p_ABC(x, y, z) = p_AC(x, z) p_AB(x, y) / p_A(x), with zero rows where
/// p_A(x) = 0. Throws MarginalMismatch when the A-marginals of the two
/// tables differ by more than 1e-10.
ClassicalTripartite classical_glue(const ClassicalTable& ac, const ClassicalTable& ab);

}  // namespace qcoupling::tripartite
