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

#include "qcoupling/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace qcoupling {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotSquare: return "NotSquare";
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::NotPSD: return "NotPSD";
    case ErrorKind::NotNormalized: return "NotNormalized";
    case ErrorKind::NumericalFailure: return "NumericalFailure";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::InvalidDistribution: return "InvalidDistribution";
    case ErrorKind::AlignmentViolation: return "AlignmentViolation";
    case ErrorKind::MarginalMismatch: return "MarginalMismatch";
    case ErrorKind::NotConverged: return "NotConverged";
    case ErrorKind::ParamOutOfRange: return "ParamOutOfRange";
    case ErrorKind::InvalidInput: return "InvalidInput";
  }
  return "Unknown";
}

}  // namespace qcoupling

namespace qcoupling::linalg {

namespace {

constexpr int kMaxJacobiSweeps = 100;
// Columns count as orthogonal once |<w_p|w_q>| <= m * eps * ||w_p|| ||w_q||.
constexpr double kSvdRotationTol = std::numeric_limits<double>::epsilon();

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorKind::DimensionMismatch,
                std::string(what) + ": " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                    " vs " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  }
}

void require_finite(const ComplexMatrix& m) {
  if (!m.all_finite()) throw Error(ErrorKind::InvalidInput, "matrix has non-finite entries");
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols, Complex(0.0, 0.0)) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (entries_.size() != rows_ * cols_) {
    throw Error(ErrorKind::DimensionMismatch, "entry count " + std::to_string(entries_.size()) +
                                                  " does not match " + std::to_string(rows_) + "x" +
                                                  std::to_string(cols_));
  }
  require_finite(*this);
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  entries_.reserve(rows_ * cols_);
  for (const auto& row : rows) {
    if (row.size() != cols_) throw Error(ErrorKind::DimensionMismatch, "ragged initializer");
    entries_.insert(entries_.end(), row.begin(), row.end());
  }
  require_finite(*this);
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::zero(std::size_t rows, std::size_t cols) { return ComplexMatrix(rows, cols); }

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> values) {
  ComplexMatrix m(values.size(), values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const Complex> values) {
  ComplexMatrix m(values.size(), values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
  return m;
}

ComplexMatrix ComplexMatrix::outer(std::span<const Complex> a, std::span<const Complex> b) {
  ComplexMatrix m(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) m(i, j) = a[i] * std::conj(b[j]);
  }
  return m;
}

ComplexMatrix ComplexMatrix::from_columns(const std::vector<ComplexVector>& columns) {
  if (columns.empty()) return {};
  ComplexMatrix m(columns.front().size(), columns.size());
  for (std::size_t c = 0; c < columns.size(); ++c) m.set_column(c, columns[c]);
  return m;
}

ComplexVector ComplexMatrix::column(std::size_t c) const {
  ComplexVector out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

void ComplexMatrix::set_column(std::size_t c, std::span<const Complex> values) {
  if (values.size() != rows_) throw Error(ErrorKind::DimensionMismatch, "column length");
  for (std::size_t r = 0; r < rows_; ++r) (*this)(r, c) = values[r];
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix m(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) m(c, r) = std::conj((*this)(r, c));
  }
  return m;
}

ComplexMatrix ComplexMatrix::transpose() const {
  ComplexMatrix m(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) m(c, r) = (*this)(r, c);
  }
  return m;
}

ComplexMatrix ComplexMatrix::conjugate() const {
  ComplexMatrix m = *this;
  for (auto& z : m.entries_) z = std::conj(z);
  return m;
}

Complex ComplexMatrix::trace() const {
  if (!is_square()) throw Error(ErrorKind::NotSquare, "trace of non-square matrix");
  Complex t = 0.0;
  for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
  return t;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
  require_same_shape(*this, other, "matrix sum");
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += other.entries_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
  require_same_shape(*this, other, "matrix difference");
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] -= other.entries_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex scalar) {
  for (auto& z : entries_) z *= scalar;
  return *this;
}

bool ComplexMatrix::all_finite() const noexcept {
  return std::all_of(entries_.begin(), entries_.end(),
                     [](const Complex& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
ComplexMatrix operator*(Complex scalar, ComplexMatrix a) { return a *= scalar; }
ComplexMatrix operator*(ComplexMatrix a, Complex scalar) { return a *= scalar; }

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "matrix product " + std::to_string(a.cols()) + " vs " +
                                                  std::to_string(b.rows()));
  }
  ComplexMatrix m(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex(0.0, 0.0)) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) m(i, j) += aik * b(k, j);
    }
  }
  return m;
}

ComplexVector operator*(const ComplexMatrix& a, std::span<const Complex> v) {
  if (a.cols() != v.size()) throw Error(ErrorKind::DimensionMismatch, "matrix-vector product");
  ComplexVector out(a.rows(), Complex(0.0, 0.0));
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) out[i] += a(i, k) * v[k];
  }
  return out;
}

Complex inner(std::span<const Complex> a, std::span<const Complex> b) {
  if (a.size() != b.size()) throw Error(ErrorKind::DimensionMismatch, "inner product");
  Complex s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

double norm2(std::span<const Complex> v) {
  double s = 0.0;
  for (const auto& z : v) s += std::norm(z);
  return std::sqrt(s);
}

double frob_norm(const ComplexMatrix& a) { return norm2(a.entries()); }

Complex hs_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_shape(a, b, "Hilbert-Schmidt inner product");
  return inner(a.entries(), b.entries());
}

double hermiticity_defect(const ComplexMatrix& a) {
  if (!a.is_square()) throw Error(ErrorKind::NotSquare, "Hermiticity of non-square matrix");
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) s += std::norm(a(i, j) - std::conj(a(j, i)));
  }
  return std::sqrt(s);
}

ComplexMatrix hermitian_part(const ComplexMatrix& a) {
  if (!a.is_square()) throw Error(ErrorKind::NotSquare, "Hermitian part of non-square matrix");
  ComplexMatrix h(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    h(i, i) = a(i, i).real();
    for (std::size_t j = i + 1; j < a.cols(); ++j) {
      h(i, j) = 0.5 * (a(i, j) + std::conj(a(j, i)));
      h(j, i) = std::conj(h(i, j));
    }
  }
  return h;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix m(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const Complex aij = a(i, j);
      if (aij == Complex(0.0, 0.0)) continue;
      for (std::size_t k = 0; k < b.rows(); ++k) {
        for (std::size_t l = 0; l < b.cols(); ++l) m(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
      }
    }
  }
  return m;
}

ComplexVector kron(std::span<const Complex> a, std::span<const Complex> b) {
  ComplexVector out(a.size() * b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) out[i * b.size() + j] = a[i] * b[j];
  }
  return out;
}

HermitianEigen herm_eig(const ComplexMatrix& a, double tol) {
  if (!a.is_square()) throw Error(ErrorKind::NotSquare, "herm_eig needs a square matrix");
  require_finite(a);
  const std::size_t n = a.rows();
  const double scale = frob_norm(a);
  if (hermiticity_defect(a) > tol * std::max(1.0, scale)) {
    throw Error(ErrorKind::NotHermitian, "Hermiticity defect " + std::to_string(hermiticity_defect(a)));
  }

  ComplexMatrix w = hermitian_part(a);
  ComplexMatrix v = ComplexMatrix::identity(n);
  const double stop = 1e-15 * std::max(scale, 1e-300);

  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) s += std::norm(w(p, q));
    }
    return std::sqrt(2.0 * s);
  };

  int sweep = 0;
  double off = off_norm();
  for (; sweep < kMaxJacobiSweeps && off > stop; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex g = w(p, q);
        const double abs_g = std::abs(g);
        if (abs_g <= 1e-300) continue;
        // Rotate the (p, q) plane by G = diag(1, e^{-i phi}) * R, which
        // first makes the pivot real and then annihilates it.
        const Complex phase_conj = std::conj(g) / abs_g;
        const double app = w(p, p).real();
        const double aqq = w(q, q).real();
        const double theta = (aqq - app) / (2.0 * abs_g);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const Complex g_pp = c;
        const Complex g_pq = s;
        const Complex g_qp = -s * phase_conj;
        const Complex g_qq = c * phase_conj;

        for (std::size_t k = 0; k < n; ++k) {
          const Complex wkp = w(k, p);
          const Complex wkq = w(k, q);
          w(k, p) = wkp * g_pp + wkq * g_qp;
          w(k, q) = wkp * g_pq + wkq * g_qq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const Complex wpk = w(p, k);
          const Complex wqk = w(q, k);
          w(p, k) = std::conj(g_pp) * wpk + std::conj(g_qp) * wqk;
          w(q, k) = std::conj(g_pq) * wpk + std::conj(g_qq) * wqk;
        }
        w(p, q) = 0.0;
        w(q, p) = 0.0;
        w(p, p) = w(p, p).real();
        w(q, q) = w(q, q).real();
        for (std::size_t k = 0; k < n; ++k) {
          const Complex vkp = v(k, p);
          const Complex vkq = v(k, q);
          v(k, p) = vkp * g_pp + vkq * g_qp;
          v(k, q) = vkp * g_pq + vkq * g_qq;
        }
      }
    }
    off = off_norm();
  }
  if (off > 1e-12 * std::max(scale, 1.0)) {
    throw Error(ErrorKind::NumericalFailure,
                "Jacobi did not converge after " + std::to_string(sweep) + " sweeps");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return w(i, i).real() > w(j, j).real(); });
  HermitianEigen out{std::vector<double>(n), ComplexMatrix(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = w(order[k], order[k]).real();
    for (std::size_t r = 0; r < n; ++r) out.vectors(r, k) = v(r, order[k]);
  }
  return out;
}

std::vector<ComplexVector> complete_basis(std::vector<ComplexVector> columns, std::size_t n) {
  for (std::size_t e = 0; e < n && columns.size() < n; ++e) {
    ComplexVector cand(n, Complex(0.0, 0.0));
    cand[e] = 1.0;
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& col : columns) {
        const Complex proj = inner(col, cand);
        for (std::size_t i = 0; i < n; ++i) cand[i] -= proj * col[i];
      }
    }
    const double nrm = norm2(cand);
    if (nrm < 1e-6) continue;
    for (auto& z : cand) z /= nrm;
    columns.push_back(std::move(cand));
  }
  return columns;
}

SingularValueDecomposition svd(const ComplexMatrix& a) {
  require_finite(a);
  if (a.rows() < a.cols()) {
    SingularValueDecomposition t = svd(a.adjoint());
    std::swap(t.u, t.v);
    return t;
  }
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  ComplexMatrix w = a;
  ComplexMatrix v = ComplexMatrix::identity(n);
  // Columns at rounding level relative to A are pure noise; rotating them
  // against each other never converges, so they are left alone.
  const double negligible = std::pow(kSvdRotationTol * static_cast<double>(m) * frob_norm(a), 2);

  for (int sweep = 0; sweep < kMaxJacobiSweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double alpha = 0.0;
        double beta = 0.0;
        Complex gamma = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
          alpha += std::norm(w(k, p));
          beta += std::norm(w(k, q));
          gamma += std::conj(w(k, p)) * w(k, q);
        }
        const double abs_gamma = std::abs(gamma);
        if (std::min(alpha, beta) <= negligible) continue;
        if (abs_gamma <= kSvdRotationTol * static_cast<double>(m) * std::sqrt(alpha * beta) || abs_gamma <= 1e-300) continue;
        rotated = true;
        const Complex phase_conj = std::conj(gamma) / abs_gamma;
        const double zeta = (beta - alpha) / (2.0 * abs_gamma);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t k = 0; k < m; ++k) {
          const Complex wp = w(k, p);
          const Complex wq = phase_conj * w(k, q);
          w(k, p) = c * wp - s * wq;
          w(k, q) = s * wp + c * wq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const Complex vp = v(k, p);
          const Complex vq = phase_conj * v(k, q);
          v(k, p) = c * vp - s * vq;
          v(k, q) = s * vp + c * vq;
        }
      }
    }
    if (!rotated) break;
    if (sweep + 1 == kMaxJacobiSweeps) throw Error(ErrorKind::NumericalFailure, "SVD did not converge");
  }

  std::vector<double> norms(n);
  for (std::size_t j = 0; j < n; ++j) norms[j] = norm2(w.column(j));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return norms[i] > norms[j]; });

  const double cutoff = 1e-14 * std::max(norms.empty() ? 0.0 : norms[order.front()], 1e-300);
  SingularValueDecomposition out;
  out.values.resize(n);
  std::vector<ComplexVector> ucols;
  ComplexMatrix vs(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t j = order[k];
    out.values[k] = norms[j];
    for (std::size_t r = 0; r < n; ++r) vs(r, k) = v(r, j);
    if (norms[j] > cutoff) {
      ComplexVector col = w.column(j);
      for (auto& z : col) z /= norms[j];
      ucols.push_back(std::move(col));
    }
  }
  ucols = complete_basis(std::move(ucols), m);
  ucols.resize(n);
  out.u = ComplexMatrix::from_columns(ucols);
  out.v = std::move(vs);
  return out;
}

std::vector<double> singular_values(const ComplexMatrix& a) { return svd(a).values; }

ComplexMatrix polar_unitary(const ComplexMatrix& a) {
  if (!a.is_square()) throw Error(ErrorKind::NotSquare, "polar decomposition needs a square matrix");
  const SingularValueDecomposition d = svd(a);
  return d.u * d.v.adjoint();
}

double trace_norm(const ComplexMatrix& a) {
  const auto sv = singular_values(a);
  return std::accumulate(sv.begin(), sv.end(), 0.0);
}

ComplexMatrix reassemble(const HermitianEigen& eig, std::span<const double> values) {
  const std::size_t n = eig.vectors.rows();
  ComplexMatrix out(n, n);
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (values[k] == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i) {
      const Complex vik = values[k] * eig.vectors(i, k);
      for (std::size_t j = 0; j < n; ++j) out(i, j) += vik * std::conj(eig.vectors(j, k));
    }
  }
  return out;
}

ComplexMatrix matrix_sqrt_psd(const ComplexMatrix& a, double tol) {
  const HermitianEigen eig = herm_eig(a, tol);
  const double floor = -tol * std::max(1.0, frob_norm(a));
  std::vector<double> roots(eig.values.size());
  for (std::size_t k = 0; k < roots.size(); ++k) {
    if (eig.values[k] < floor) {
      throw Error(ErrorKind::NotPSD, "eigenvalue " + std::to_string(eig.values[k]) + " below tolerance");
    }
    roots[k] = std::sqrt(std::max(eig.values[k], 0.0));
  }
  return reassemble(eig, roots);
}

ComplexMatrix partial_trace(const ComplexMatrix& rho, std::size_t dim_a, std::size_t dim_b, Keep keep) {
  const std::size_t dims[2] = {dim_a, dim_b};
  const std::size_t keep_a[1] = {0};
  const std::size_t keep_b[1] = {1};
  return partial_trace(rho, dims, keep == Keep::A ? std::span<const std::size_t>(keep_a)
                                                  : std::span<const std::size_t>(keep_b));
}

ComplexMatrix partial_trace(const ComplexMatrix& rho, std::span<const std::size_t> dims,
                            std::span<const std::size_t> keep) {
  const std::size_t total =
      std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
  if (!rho.is_square() || rho.rows() != total) {
    throw Error(ErrorKind::DimensionMismatch,
                "operator of size " + std::to_string(rho.rows()) + " vs subsystem product " + std::to_string(total));
  }
  std::vector<bool> kept(dims.size(), false);
  for (std::size_t idx = 0; idx < keep.size(); ++idx) {
    if (keep[idx] >= dims.size() || kept[keep[idx]] || (idx > 0 && keep[idx] < keep[idx - 1])) {
      throw Error(ErrorKind::DimensionMismatch, "keep list must be sorted distinct subsystem indices");
    }
    kept[keep[idx]] = true;
  }
  std::vector<std::size_t> strides(dims.size(), 1);
  for (std::size_t k = dims.size(); k-- > 1;) strides[k - 1] = strides[k] * dims[k];

  // Offsets of every multi-index restricted to the kept (resp. traced) factors.
  auto offsets = [&](bool want_kept) {
    std::vector<std::size_t> offs{0};
    for (std::size_t k = 0; k < dims.size(); ++k) {
      if (kept[k] != want_kept) continue;
      std::vector<std::size_t> next;
      next.reserve(offs.size() * dims[k]);
      for (std::size_t base : offs) {
        for (std::size_t digit = 0; digit < dims[k]; ++digit) next.push_back(base + digit * strides[k]);
      }
      offs = std::move(next);
    }
    return offs;
  };
  const auto kept_offsets = offsets(true);
  const auto traced_offsets = offsets(false);

  ComplexMatrix out(kept_offsets.size(), kept_offsets.size());
  for (std::size_t r = 0; r < kept_offsets.size(); ++r) {
    for (std::size_t c = 0; c < kept_offsets.size(); ++c) {
      Complex s = 0.0;
      for (std::size_t t : traced_offsets) s += rho(kept_offsets[r] + t, kept_offsets[c] + t);
      out(r, c) = s;
    }
  }
  return out;
}

}  // namespace qcoupling::linalg
