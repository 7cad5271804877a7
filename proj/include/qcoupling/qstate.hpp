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
#include <random>
#include <utility>
#include <vector>

#include "qcoupling/linalg.hpp"

namespace qcoupling::qstate {

using linalg::Complex;
using linalg::ComplexMatrix;
using linalg::ComplexVector;
using Dims = std::vector<std::size_t>;

/// Deterministic generator used everywhere randomness is needed. It is
/// always passed explicitly.
using Rng = std::mt19937_64;

/// Hermitian, PSD, unit-trace operator with a declared tensor factorization.
///
/// Construction validates the matrix against `tol` (Hermiticity, smallest
/// eigenvalue, trace) and stores its Hermitian part.
class DensityMatrix {
 public:
  DensityMatrix(ComplexMatrix mat, Dims dims, double tol = linalg::kDefaultTol);
  /// Single-factor convenience constructor.
  explicit DensityMatrix(ComplexMatrix mat, double tol = linalg::kDefaultTol);

  static DensityMatrix maximally_mixed(std::size_t d);
  static DensityMatrix diagonal(std::span<const double> probabilities);

  const ComplexMatrix& mat() const noexcept { return mat_; }
  const Dims& dims() const noexcept { return dims_; }
  std::size_t dim() const noexcept { return mat_.rows(); }

  /// Marginal on the listed subsystems (sorted ascending).
  DensityMatrix reduced(std::span<const std::size_t> keep) const;
  DensityMatrix reduced(std::initializer_list<std::size_t> keep) const;

 private:
  ComplexMatrix mat_;
  Dims dims_;
};

class PureState {
 public:
  PureState(ComplexVector vec, Dims dims, double tol = 1e-10);
  explicit PureState(ComplexVector vec, double tol = 1e-10);

  static PureState basis(std::size_t d, std::size_t index);

  const ComplexVector& vec() const noexcept { return vec_; }
  const Dims& dims() const noexcept { return dims_; }
  std::size_t dim() const noexcept { return vec_.size(); }

  DensityMatrix density() const;

 private:
  ComplexVector vec_;
  Dims dims_;
};

/// CPTP map given by Kraus operators K_k : C^in -> C^out.
class KrausChannel {
 public:
  explicit KrausChannel(std::vector<ComplexMatrix> kraus, double tol = linalg::kDefaultTol);
  static KrausChannel unitary(ComplexMatrix u);
  static KrausChannel identity(std::size_t d);

  const std::vector<ComplexMatrix>& kraus() const noexcept { return kraus_; }
  std::size_t dim_in() const noexcept { return kraus_.front().cols(); }
  std::size_t dim_out() const noexcept { return kraus_.front().rows(); }

 private:
  std::vector<ComplexMatrix> kraus_;
};

/// Outcome probabilities of the symmetric / antisymmetric measurement.
/// p = (Tr P_as rho, Tr P_s rho); q is p reversed.
struct SymmetryStats {
  std::pair<double, double> p;
  std::pair<double, double> q;

  double antisym() const noexcept { return p.first; }
  double sym() const noexcept { return p.second; }
};

/// Paired ensembles rho = sum s_i |u_i><u_i|, sigma = sum t_i |v_i><v_i| with
/// orthonormal v_i and real non-negative <v_i|u_i>, whose alignment sum
/// sum sqrt(s_i t_i) <v_i|u_i> equals F(rho, sigma).
struct AlignedDecomposition {
  std::vector<double> s;
  std::vector<ComplexVector> u;
  std::vector<double> t;
  std::vector<ComplexVector> v;

  double alignment_sum() const;
};

double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);
double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma);

/// Fidelity and trace distance of two classical distributions.
double classical_fidelity(std::span<const double> p, std::span<const double> q);
double classical_trace_distance(std::span<const double> p, std::span<const double> q);

ComplexMatrix swap_operator(std::size_t d);

struct SymProjectors {
  ComplexMatrix sym;
  ComplexMatrix antisym;
};
SymProjectors sym_projectors(std::size_t d);

SymmetryStats symmetry_stats(const DensityMatrix& rho_ab);

/// |psi> = sum_ij M_ij |i>|j>, i.e. (M x I) applied to the unnormalized
/// sum_i |ii>. Requires ||M||_F = 1.
PureState vectorize(const ComplexMatrix& m, double tol = linalg::kDefaultTol);
ComplexMatrix devectorize(const PureState& psi);

struct SymAntisymSplit {
  ComplexMatrix sym;      ///< E = (M + M^T) / 2
  ComplexMatrix antisym;  ///< F = (M - M^T) / 2
};
SymAntisymSplit ef_split(const ComplexMatrix& m);

/// Standard purification sum_i sqrt(lambda_i) |v_i>|i>; the ancilla is
/// the second factor and has the same dimension as rho.
PureState purify(const DensityMatrix& rho);

AlignedDecomposition uhlmann_aligned(const DensityMatrix& rho, const DensityMatrix& sigma);

ComplexMatrix haar_unitary(std::size_t d, Rng& rng);
ComplexMatrix haar_unitary(std::size_t d, std::uint64_t seed);

PureState random_pure_state(const Dims& dims, Rng& rng);
/// Induced-measure random state G G^dag / Tr with G of shape dim x rank
/// (rank 0 means full rank, i.e. Hilbert-Schmidt measure).
DensityMatrix random_density_matrix(const Dims& dims, Rng& rng, std::size_t rank = 0);

DensityMatrix apply_channel(const KrausChannel& channel, const DensityMatrix& rho);
/// Apply `channel` to subsystem `site` of a multipartite state, identity elsewhere.
DensityMatrix apply_local_channel(const KrausChannel& channel, const DensityMatrix& rho, std::size_t site);

/// Natural-log von Neumann entropy with 0 log 0 = 0.
double von_neumann_entropy(const DensityMatrix& rho);

/// Tr(H rho), real part.
double expectation(const ComplexMatrix& h, const ComplexMatrix& rho);

}  // namespace qcoupling::qstate
