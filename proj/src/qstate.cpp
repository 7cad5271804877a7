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

#include "qcoupling/qstate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace qcoupling::qstate {

using linalg::frob_norm;
using linalg::herm_eig;

namespace {

std::size_t product(const Dims& dims) {
  return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
}

void require_same_dim(const DensityMatrix& a, const DensityMatrix& b, const char* what) {
  if (a.dim() != b.dim()) {
    throw Error(ErrorKind::DimensionMismatch,
                std::string(what) + ": " + std::to_string(a.dim()) + " vs " + std::to_string(b.dim()));
  }
}

ComplexVector complex_gaussian_vector(std::size_t n, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexVector v(n);
  for (auto& z : v) {
    const double re = normal(rng);
    const double im = normal(rng);
    z = Complex(re, im) * std::sqrt(0.5);
  }
  return v;
}

}  // namespace

DensityMatrix::DensityMatrix(ComplexMatrix mat, Dims dims, double tol) : dims_(std::move(dims)) {
  if (!mat.is_square()) throw Error(ErrorKind::NotSquare, "density matrix must be square");
  if (dims_.empty()) dims_ = {mat.rows()};
  if (product(dims_) != mat.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "subsystem dimensions do not multiply to " + std::to_string(mat.rows()));
  }
  const double scale = std::max(1.0, frob_norm(mat));
  if (linalg::hermiticity_defect(mat) > tol * scale) {
    throw Error(ErrorKind::NotHermitian, "density matrix is not Hermitian");
  }
  mat_ = linalg::hermitian_part(mat);
  const Complex tr = mat_.trace();
  if (std::abs(tr - Complex(1.0, 0.0)) > tol) {
    throw Error(ErrorKind::NotNormalized, "trace " + std::to_string(tr.real()) + " differs from 1");
  }
  const auto eig = herm_eig(mat_, tol);
  if (eig.values.back() < -tol) {
    throw Error(ErrorKind::NotPSD, "smallest eigenvalue " + std::to_string(eig.values.back()));
  }
}

DensityMatrix::DensityMatrix(ComplexMatrix mat, double tol) : DensityMatrix(std::move(mat), Dims{}, tol) {}

DensityMatrix DensityMatrix::maximally_mixed(std::size_t d) {
  return DensityMatrix(ComplexMatrix::identity(d) * Complex(1.0 / static_cast<double>(d)));
}

DensityMatrix DensityMatrix::diagonal(std::span<const double> probabilities) {
  return DensityMatrix(ComplexMatrix::diagonal(probabilities));
}

DensityMatrix DensityMatrix::reduced(std::span<const std::size_t> keep) const {
  Dims kept;
  for (std::size_t k : keep) {
    if (k >= dims_.size()) throw Error(ErrorKind::DimensionMismatch, "subsystem index out of range");
    kept.push_back(dims_[k]);
  }
  return DensityMatrix(linalg::partial_trace(mat_, dims_, keep), kept);
}

DensityMatrix DensityMatrix::reduced(std::initializer_list<std::size_t> keep) const {
  return reduced(std::span<const std::size_t>(keep.begin(), keep.size()));
}

PureState::PureState(ComplexVector vec, Dims dims, double tol) : vec_(std::move(vec)), dims_(std::move(dims)) {
  if (dims_.empty()) dims_ = {vec_.size()};
  if (product(dims_) != vec_.size()) throw Error(ErrorKind::DimensionMismatch, "state vector length");
  if (std::abs(linalg::norm2(vec_) - 1.0) > tol) {
    throw Error(ErrorKind::NotNormalized, "state vector norm " + std::to_string(linalg::norm2(vec_)));
  }
}

PureState::PureState(ComplexVector vec, double tol) : PureState(std::move(vec), Dims{}, tol) {}

PureState PureState::basis(std::size_t d, std::size_t index) {
  ComplexVector v(d, Complex(0.0, 0.0));
  v.at(index) = 1.0;
  return PureState(std::move(v));
}

DensityMatrix PureState::density() const { return DensityMatrix(ComplexMatrix::outer(vec_, vec_), dims_); }

KrausChannel::KrausChannel(std::vector<ComplexMatrix> kraus, double tol) : kraus_(std::move(kraus)) {
  if (kraus_.empty()) throw Error(ErrorKind::InvalidInput, "channel needs at least one Kraus operator");
  const std::size_t in = kraus_.front().cols();
  const std::size_t out = kraus_.front().rows();
  ComplexMatrix completeness(in, in);
  for (const auto& k : kraus_) {
    if (k.cols() != in || k.rows() != out) throw Error(ErrorKind::DimensionMismatch, "Kraus operator shapes differ");
    completeness += k.adjoint() * k;
  }
  if (frob_norm(completeness - ComplexMatrix::identity(in)) > tol) {
    throw Error(ErrorKind::InvalidInput, "Kraus operators violate sum K^dag K = I");
  }
}

KrausChannel KrausChannel::unitary(ComplexMatrix u) { return KrausChannel({std::move(u)}); }

KrausChannel KrausChannel::identity(std::size_t d) { return KrausChannel({ComplexMatrix::identity(d)}); }

double AlignedDecomposition::alignment_sum() const {
  double total = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    total += std::sqrt(std::max(s[i], 0.0) * std::max(t[i], 0.0)) * linalg::inner(v[i], u[i]).real();
  }
  return total;
}

double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  require_same_dim(rho, sigma, "fidelity");
  const ComplexMatrix overlap = linalg::matrix_sqrt_psd(rho.mat()) * linalg::matrix_sqrt_psd(sigma.mat());
  return std::clamp(linalg::trace_norm(overlap), 0.0, 1.0);
}

double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
  require_same_dim(rho, sigma, "trace distance");
  const auto eig = herm_eig(rho.mat() - sigma.mat());
  double total = 0.0;
  for (double lambda : eig.values) total += std::abs(lambda);
  return std::clamp(0.5 * total, 0.0, 1.0);
}

double classical_fidelity(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw Error(ErrorKind::LengthMismatch, "classical fidelity");
  double total = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) total += std::sqrt(std::max(p[i], 0.0) * std::max(q[i], 0.0));
  return total;
}

double classical_trace_distance(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw Error(ErrorKind::LengthMismatch, "classical trace distance");
  double total = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) total += std::abs(p[i] - q[i]);
  return 0.5 * total;
}

ComplexMatrix swap_operator(std::size_t d) {
  ComplexMatrix s(d * d, d * d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) s(i * d + j, j * d + i) = 1.0;
  }
  return s;
}

SymProjectors sym_projectors(std::size_t d) {
  if (d == 0) throw Error(ErrorKind::ParamOutOfRange, "local dimension must be positive");
  const ComplexMatrix id = ComplexMatrix::identity(d * d);
  const ComplexMatrix swap = swap_operator(d);
  return {0.5 * (id + swap), 0.5 * (id - swap)};
}

SymmetryStats symmetry_stats(const DensityMatrix& rho_ab) {
  const Dims& dims = rho_ab.dims();
  if (dims.size() != 2 || dims[0] != dims[1]) {
    throw Error(ErrorKind::DimensionMismatch, "symmetry statistics need two equal local dimensions");
  }
  const std::size_t d = dims[0];
  // Tr(S rho) = sum_ij <ij|S rho|ij> = sum_ij rho_(ji),(ij).
  double swap_expectation = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) swap_expectation += rho_ab.mat()(j * d + i, i * d + j).real();
  }
  const double sym = 0.5 * (1.0 + swap_expectation);
  const double antisym = 0.5 * (1.0 - swap_expectation);
  return {{antisym, sym}, {sym, antisym}};
}

PureState vectorize(const ComplexMatrix& m, double tol) {
  if (std::abs(frob_norm(m) - 1.0) > tol) {
    throw Error(ErrorKind::NotNormalized, "||M||_2 = " + std::to_string(frob_norm(m)));
  }
  ComplexVector v(m.entries().begin(), m.entries().end());
  return PureState(std::move(v), Dims{m.rows(), m.cols()}, tol);
}

ComplexMatrix devectorize(const PureState& psi) {
  if (psi.dims().size() != 2) throw Error(ErrorKind::DimensionMismatch, "devectorize needs a bipartite state");
  return ComplexMatrix(psi.dims()[0], psi.dims()[1], psi.vec());
}

SymAntisymSplit ef_split(const ComplexMatrix& m) {
  if (!m.is_square()) throw Error(ErrorKind::NotSquare, "E/F split needs a square matrix");
  const ComplexMatrix mt = m.transpose();
  return {0.5 * (m + mt), 0.5 * (m - mt)};
}

PureState purify(const DensityMatrix& rho) {
  const std::size_t d = rho.dim();
  const auto eig = herm_eig(rho.mat());
  ComplexVector psi(d * d, Complex(0.0, 0.0));
  for (std::size_t k = 0; k < d; ++k) {
    const double weight = std::sqrt(std::max(eig.values[k], 0.0));
    for (std::size_t i = 0; i < d; ++i) psi[i * d + k] = weight * eig.vectors(i, k);
  }
  const double nrm = linalg::norm2(psi);
  for (auto& z : psi) z /= nrm;
  return PureState(std::move(psi), Dims{d, d});
}

AlignedDecomposition uhlmann_aligned(const DensityMatrix& rho, const DensityMatrix& sigma) {
  require_same_dim(rho, sigma, "uhlmann_aligned");
  const std::size_t d = rho.dim();
  const auto sigma_eig = herm_eig(sigma.mat());
  const ComplexMatrix sqrt_rho = linalg::matrix_sqrt_psd(rho.mat());

  AlignedDecomposition out;
  out.t.resize(d);
  out.v.resize(d);
  // A = diag(sqrt t) V^dag sqrt(rho); the Uhlmann-optimal purification of rho
  // relative to sum sqrt(t_i)|v_i>|i> is (sqrt(rho) Q) with Q = polar(A)^dag.
  ComplexMatrix a(d, d);
  for (std::size_t i = 0; i < d; ++i) {
    out.t[i] = std::max(sigma_eig.values[i], 0.0);
    out.v[i] = sigma_eig.vectors.column(i);
    const double root_t = std::sqrt(out.t[i]);
    for (std::size_t j = 0; j < d; ++j) {
      Complex row = 0.0;
      for (std::size_t k = 0; k < d; ++k) row += std::conj(out.v[i][k]) * sqrt_rho(k, j);
      a(i, j) = root_t * row;
    }
  }
  const ComplexMatrix w = sqrt_rho * linalg::polar_unitary(a).adjoint();

  out.s.resize(d);
  out.u.resize(d);
  for (std::size_t i = 0; i < d; ++i) {
    ComplexVector col = w.column(i);
    const double nrm = linalg::norm2(col);
    out.s[i] = nrm * nrm;
    if (out.s[i] < 1e-12) {
      out.u[i] = out.v[i];
      continue;
    }
    for (auto& z : col) z /= nrm;
    const Complex overlap = linalg::inner(out.v[i], col);
    if (std::abs(overlap) > 0.0) {
      const Complex fix = std::conj(overlap) / std::abs(overlap);
      for (auto& z : col) z *= fix;
    }
    out.u[i] = std::move(col);
  }
  const double s_total = std::accumulate(out.s.begin(), out.s.end(), 0.0);
  const double t_total = std::accumulate(out.t.begin(), out.t.end(), 0.0);
  if (!(s_total > 0.0) || !(t_total > 0.0)) throw Error(ErrorKind::NumericalFailure, "degenerate decomposition");
  for (auto& x : out.s) x /= s_total;
  for (auto& x : out.t) x /= t_total;
  return out;
}

ComplexMatrix haar_unitary(std::size_t d, Rng& rng) {
  if (d == 0) throw Error(ErrorKind::ParamOutOfRange, "unitary dimension must be positive");
  // Gram-Schmidt on Ginibre columns yields Q with a positive real R
  // diagonal, which is exactly the phase-corrected Haar sample.
  std::vector<ComplexVector> cols;
  cols.reserve(d);
  while (cols.size() < d) {
    ComplexVector z = complex_gaussian_vector(d, rng);
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& q : cols) {
        const Complex proj = linalg::inner(q, z);
        for (std::size_t i = 0; i < d; ++i) z[i] -= proj * q[i];
      }
    }
    const double nrm = linalg::norm2(z);
    if (nrm < 1e-8) continue;
    for (auto& x : z) x /= nrm;
    cols.push_back(std::move(z));
  }
  return ComplexMatrix::from_columns(cols);
}

ComplexMatrix haar_unitary(std::size_t d, std::uint64_t seed) {
  Rng rng(seed);
  return haar_unitary(d, rng);
}

PureState random_pure_state(const Dims& dims, Rng& rng) {
  ComplexVector v = complex_gaussian_vector(product(dims), rng);
  const double nrm = linalg::norm2(v);
  for (auto& z : v) z /= nrm;
  return PureState(std::move(v), dims);
}

DensityMatrix random_density_matrix(const Dims& dims, Rng& rng, std::size_t rank) {
  const std::size_t n = product(dims);
  if (rank == 0) rank = n;
  ComplexMatrix g(n, rank);
  for (std::size_t c = 0; c < rank; ++c) g.set_column(c, complex_gaussian_vector(n, rng));
  ComplexMatrix rho = g * g.adjoint();
  rho *= Complex(1.0 / rho.trace().real());
  return DensityMatrix(linalg::hermitian_part(rho), dims);
}

DensityMatrix apply_channel(const KrausChannel& channel, const DensityMatrix& rho) {
  if (channel.dim_in() != rho.dim()) throw Error(ErrorKind::DimensionMismatch, "channel input dimension");
  ComplexMatrix out(channel.dim_out(), channel.dim_out());
  for (const auto& k : channel.kraus()) out += k * rho.mat() * k.adjoint();
  Dims dims = channel.dim_out() == rho.dim() ? rho.dims() : Dims{channel.dim_out()};
  return DensityMatrix(linalg::hermitian_part(out), dims);
}

DensityMatrix apply_local_channel(const KrausChannel& channel, const DensityMatrix& rho, std::size_t site) {
  const Dims& dims = rho.dims();
  if (site >= dims.size() || dims[site] != channel.dim_in()) {
    throw Error(ErrorKind::DimensionMismatch, "local channel does not match subsystem " + std::to_string(site));
  }
  std::size_t left = 1;
  std::size_t right = 1;
  for (std::size_t k = 0; k < site; ++k) left *= dims[k];
  for (std::size_t k = site + 1; k < dims.size(); ++k) right *= dims[k];
  Dims out_dims = dims;
  out_dims[site] = channel.dim_out();
  const std::size_t out_dim = product(out_dims);
  ComplexMatrix out(out_dim, out_dim);
  for (const auto& k : channel.kraus()) {
    const ComplexMatrix lifted =
        linalg::kron(linalg::kron(ComplexMatrix::identity(left), k), ComplexMatrix::identity(right));
    out += lifted * rho.mat() * lifted.adjoint();
  }
  return DensityMatrix(linalg::hermitian_part(out), out_dims);
}

double von_neumann_entropy(const DensityMatrix& rho) {
  const auto eig = herm_eig(rho.mat());
  double s = 0.0;
  for (double lambda : eig.values) {
    if (lambda > 0.0) s -= lambda * std::log(lambda);
  }
  return s;
}

double expectation(const ComplexMatrix& h, const ComplexMatrix& rho) {
  if (h.rows() != rho.cols() || h.cols() != rho.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "observable and state sizes differ");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < h.rows(); ++i) {
    for (std::size_t j = 0; j < h.cols(); ++j) total += (h(i, j) * rho(j, i)).real();
  }
  return total;
}

}  // namespace qcoupling::qstate
