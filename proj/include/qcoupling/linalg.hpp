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

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "qcoupling/error.hpp"

namespace qcoupling::linalg {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;

/// Relative tolerance used when an operation is not given one explicitly.
inline constexpr double kDefaultTol = 1e-9;

/// Dense row-major complex matrix. Entries are always finite; the
/// constructors reject NaN and Inf.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);
  ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix zero(std::size_t rows, std::size_t cols);
  static ComplexMatrix diagonal(std::span<const double> values);
  static ComplexMatrix diagonal(std::span<const Complex> values);
  /// |a><b| for column vectors a, b.
  static ComplexMatrix outer(std::span<const Complex> a, std::span<const Complex> b);
  static ComplexMatrix from_columns(const std::vector<ComplexVector>& columns);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  bool is_square() const noexcept { return rows_ == cols_; }

  Complex& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }

  std::span<const Complex> entries() const noexcept { return entries_; }
  std::span<Complex> entries() noexcept { return entries_; }

  ComplexVector column(std::size_t c) const;
  void set_column(std::size_t c, std::span<const Complex> values);

  ComplexMatrix adjoint() const;
  ComplexMatrix transpose() const;
  ComplexMatrix conjugate() const;
  Complex trace() const;

  ComplexMatrix& operator+=(const ComplexMatrix& other);
  ComplexMatrix& operator-=(const ComplexMatrix& other);
  ComplexMatrix& operator*=(Complex scalar);

  bool all_finite() const noexcept;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> entries_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(Complex scalar, ComplexMatrix a);
ComplexMatrix operator*(ComplexMatrix a, Complex scalar);
ComplexVector operator*(const ComplexMatrix& a, std::span<const Complex> v);

/// <a|b>, antilinear in the first argument.
Complex inner(std::span<const Complex> a, std::span<const Complex> b);
double norm2(std::span<const Complex> v);

/// Frobenius norm sqrt(Tr A^dag A).
double frob_norm(const ComplexMatrix& a);
/// Tr(A^dag B).
Complex hs_inner(const ComplexMatrix& a, const ComplexMatrix& b);
/// ||A - A^dag||_F.
double hermiticity_defect(const ComplexMatrix& a);
ComplexMatrix hermitian_part(const ComplexMatrix& a);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexVector kron(std::span<const Complex> a, std::span<const Complex> b);

struct HermitianEigen {
  std::vector<double> values;  ///< descending
  ComplexMatrix vectors;       ///< column i belongs to values[i]
};

/// Cyclic complex Jacobi eigensolver for Hermitian matrices.
///
/// Rejects inputs whose Hermiticity defect exceeds tol * max(1, ||A||_F).
/// Eigenvalues are sorted descending; equal values keep their diagonal
/// order, so the output is reproducible bit for bit.
HermitianEigen herm_eig(const ComplexMatrix& a, double tol = kDefaultTol);

struct SingularValueDecomposition {
  std::vector<double> values;  ///< descending, length min(rows, cols)
  ComplexMatrix u;             ///< rows x k, orthonormal columns
  ComplexMatrix v;             ///< cols x k, orthonormal columns
};

/// One-sided (Hestenes) Jacobi SVD; A = U diag(values) V^dag.
SingularValueDecomposition svd(const ComplexMatrix& a);
std::vector<double> singular_values(const ComplexMatrix& a);

/// Unitary factor W of the polar decomposition A = W |A| of a square matrix.
/// Null directions are completed to a full unitary.
ComplexMatrix polar_unitary(const ComplexMatrix& a);

/// Sum of singular values, Tr sqrt(A^dag A).
double trace_norm(const ComplexMatrix& a);

/// Principal square root of a PSD matrix. Eigenvalues in [-tol * scale, 0)
/// are clamped to zero; anything more negative raises NotPSD.
ComplexMatrix matrix_sqrt_psd(const ComplexMatrix& a, double tol = kDefaultTol);

/// V f(diag) V^dag from an existing decomposition.
ComplexMatrix reassemble(const HermitianEigen& eig, std::span<const double> values);

enum class Keep { A, B };

/// Reduced matrix of a bipartite operator on C^dA (x) C^dB.
ComplexMatrix partial_trace(const ComplexMatrix& rho, std::size_t dim_a, std::size_t dim_b, Keep keep);

/// Trace out every subsystem not listed in `keep`; `keep` must be sorted
/// ascending. The result is ordered like `keep`.
ComplexMatrix partial_trace(const ComplexMatrix& rho, std::span<const std::size_t> dims,
                            std::span<const std::size_t> keep);

/// Orthonormal basis completion: returns `columns` extended (by Gram-Schmidt
/// against the standard basis) to `n` orthonormal columns.
std::vector<ComplexVector> complete_basis(std::vector<ComplexVector> columns, std::size_t n);

}  // namespace qcoupling::linalg
