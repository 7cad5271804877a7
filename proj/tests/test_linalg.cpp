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

#include <doctest.h>

#include <cmath>
#include <random>

#include "qcoupling/error.hpp"
#include "qcoupling/linalg.hpp"
#include "support/oracles.hpp"

using namespace qcoupling;
using namespace qcoupling::linalg;

namespace {

ComplexMatrix random_matrix(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  ComplexMatrix m(rows, cols);
  for (auto& z : m.entries()) z = {n(rng), n(rng)};
  return m;
}

ComplexMatrix random_hermitian(std::size_t d, std::mt19937_64& rng) { return hermitian_part(random_matrix(d, d, rng)); }

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.entries()[i] - b.entries()[i]));
  return m;
}

}  // namespace

TEST_CASE("constructors reject non-finite entries") {
  CHECK_THROWS_AS(ComplexMatrix(1, 1, {Complex(std::nan(""), 0.0)}), Error);
  CHECK_THROWS_AS(ComplexMatrix(2, 2, {1.0, 2.0, 3.0}), Error);
}

TEST_CASE("herm_eig on closed-form inputs") {
  const auto id = herm_eig(ComplexMatrix::identity(2));
  CHECK(id.values[0] == doctest::Approx(1.0));
  CHECK(id.values[1] == doctest::Approx(1.0));

  const std::vector<double> d{3.0, -1.0};
  const auto e = herm_eig(ComplexMatrix::diagonal(d));
  CHECK(e.values[0] == 3.0);
  CHECK(e.values[1] == -1.0);
  CHECK(max_abs_diff(e.vectors, ComplexMatrix::identity(2)) < 1e-15);

  // Descending order with ties kept in diagonal order.
  const std::vector<double> tied{1.0, 2.0, 1.0};
  const auto t = herm_eig(ComplexMatrix::diagonal(tied));
  CHECK(t.values == std::vector<double>{2.0, 1.0, 1.0});
  CHECK(std::abs(t.vectors(0, 1)) == doctest::Approx(1.0));
  CHECK(std::abs(t.vectors(2, 2)) == doctest::Approx(1.0));
}

TEST_CASE("herm_eig reconstructs random Hermitian matrices") {
  std::mt19937_64 rng(11);
  for (std::size_t d : {1, 2, 5, 9, 16}) {
    const ComplexMatrix a = random_hermitian(d, rng);
    const auto e = herm_eig(a);
    const ComplexMatrix back = reassemble(e, e.values);
    CHECK(frob_norm(back - a) <= 1e-10 * std::max(1.0, frob_norm(a)));
    CHECK(frob_norm(e.vectors.adjoint() * e.vectors - ComplexMatrix::identity(d)) <= 1e-10);
    CHECK(std::is_sorted(e.values.rbegin(), e.values.rend()));

    Eigen::SelfAdjointEigenSolver<oracle::EMatrix> es(oracle::to_eigen(a));
    for (std::size_t i = 0; i < d; ++i) CHECK(e.values[i] == doctest::Approx(es.eigenvalues()(d - 1 - i)).epsilon(1e-10));
  }
}

TEST_CASE("herm_eig errors") {
  CHECK_THROWS_AS(herm_eig(ComplexMatrix(2, 3)), Error);
  try {
    herm_eig(ComplexMatrix{{1.0, 1.0}, {0.0, 1.0}});
    FAIL("expected NotHermitian");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotHermitian);
  }
}

TEST_CASE("trace norm against an independent SVD") {
  CHECK(trace_norm(ComplexMatrix::identity(2)) == doctest::Approx(2.0));
  const std::vector<double> z{1.0, -1.0};
  CHECK(trace_norm(ComplexMatrix::diagonal(z)) == doctest::Approx(2.0));

  std::mt19937_64 rng(3);
  for (int k = 0; k < 20; ++k) {
    const ComplexMatrix a = random_matrix(4, 4, rng);
    CHECK(trace_norm(a) == doctest::Approx(oracle::trace_norm(oracle::to_eigen(a))).epsilon(1e-10));
    const ComplexMatrix r = random_matrix(3, 5, rng);
    CHECK(trace_norm(r) == doctest::Approx(oracle::trace_norm(oracle::to_eigen(r))).epsilon(1e-10));
  }
}

TEST_CASE("trace norm of a Hermitian matrix is the absolute eigenvalue sum") {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 20; ++k) {
    const ComplexMatrix a = random_hermitian(4, rng);
    double sum = 0.0;
    for (double l : herm_eig(a).values) sum += std::abs(l);
    CHECK(std::abs(trace_norm(a) - sum) <= 1e-10 * std::max(1.0, sum));
  }
}

TEST_CASE("svd factors reproduce the matrix") {
  std::mt19937_64 rng(8);
  const ComplexMatrix a = random_matrix(4, 3, rng);
  const auto s = svd(a);
  ComplexMatrix sigma = ComplexMatrix::zero(3, 3);
  for (std::size_t i = 0; i < 3; ++i) sigma(i, i) = s.values[i];
  CHECK(frob_norm(s.u * sigma * s.v.adjoint() - a) < 1e-11);
}

TEST_CASE("polar unitary") {
  std::mt19937_64 rng(9);
  const ComplexMatrix a = random_matrix(4, 4, rng);
  const ComplexMatrix w = polar_unitary(a);
  CHECK(frob_norm(w.adjoint() * w - ComplexMatrix::identity(4)) < 1e-11);
  const ComplexMatrix p = w.adjoint() * a;  // |A|, must be PSD Hermitian
  CHECK(hermiticity_defect(p) < 1e-10);
  CHECK(herm_eig(p).values.back() > -1e-10);

  // Rank-deficient input still yields a unitary.
  const std::vector<double> d{1.0, 0.0};
  const ComplexMatrix wd = polar_unitary(ComplexMatrix::diagonal(d));
  CHECK(frob_norm(wd.adjoint() * wd - ComplexMatrix::identity(2)) < 1e-12);
}

TEST_CASE("partial trace") {
  std::mt19937_64 rng(13);
  const ComplexMatrix ra = random_hermitian(2, rng);
  const ComplexMatrix rb = random_hermitian(3, rng);
  const Complex tr_b = rb.trace();
  CHECK(max_abs_diff(partial_trace(kron(ra, rb), 2, 3, Keep::A), ra * tr_b) < 1e-12);
  CHECK(max_abs_diff(partial_trace(kron(ra, rb), 2, 3, Keep::B), rb * ra.trace()) < 1e-12);

  const double h = 0.5;
  const ComplexMatrix phi{{h, 0, 0, h}, {0, 0, 0, 0}, {0, 0, 0, 0}, {h, 0, 0, h}};
  CHECK(max_abs_diff(partial_trace(phi, 2, 2, Keep::A), ComplexMatrix::identity(2) * Complex(0.5)) < 1e-15);

  const ComplexMatrix r = random_matrix(6, 6, rng);
  const auto er = oracle::to_eigen(r);
  CHECK(max_abs_diff(partial_trace(r, 2, 3, Keep::A), oracle::from_eigen(oracle::partial_trace_sum(er, 2, 3, true))) < 1e-12);
  CHECK(max_abs_diff(partial_trace(r, 2, 3, Keep::B), oracle::from_eigen(oracle::partial_trace_sum(er, 2, 3, false))) < 1e-12);
  CHECK(std::abs(partial_trace(r, 2, 3, Keep::A).trace() - r.trace()) < 1e-12);

  CHECK_THROWS_AS(partial_trace(r, 2, 2, Keep::A), Error);
}

TEST_CASE("multipartite partial trace agrees with the bipartite form") {
  std::mt19937_64 rng(17);
  const ComplexMatrix r = random_matrix(12, 12, rng);
  const std::vector<std::size_t> dims{2, 3, 2};
  const std::vector<std::size_t> keep01{0, 1};
  const std::vector<std::size_t> keep12{1, 2};
  CHECK(max_abs_diff(partial_trace(r, dims, keep01), partial_trace(r, 6, 2, Keep::A)) < 1e-12);
  CHECK(max_abs_diff(partial_trace(r, dims, keep12), partial_trace(r, 2, 6, Keep::B)) < 1e-12);
}

TEST_CASE("kron, square root and Frobenius norm") {
  CHECK(max_abs_diff(kron(ComplexMatrix::identity(2), ComplexMatrix::identity(2)), ComplexMatrix::identity(4)) == 0.0);

  const std::vector<double> d{4.0, 9.0};
  const std::vector<double> r{2.0, 3.0};
  CHECK(max_abs_diff(matrix_sqrt_psd(ComplexMatrix::diagonal(d)), ComplexMatrix::diagonal(r)) < 1e-14);

  std::mt19937_64 rng(19);
  const ComplexMatrix g = random_matrix(5, 5, rng);
  const ComplexMatrix psd = g * g.adjoint();
  const ComplexMatrix root = matrix_sqrt_psd(psd);
  CHECK(frob_norm(root * root - psd) <= 1e-8 * std::max(1.0, frob_norm(psd)));

  double sum = 0.0;
  for (const auto& z : g.entries()) sum += std::norm(z);
  CHECK(frob_norm(g) == doctest::Approx(std::sqrt(sum)).epsilon(1e-14));

  const std::vector<double> neg{1.0, -0.1};
  CHECK_THROWS_AS(matrix_sqrt_psd(ComplexMatrix::diagonal(neg)), Error);
  const std::vector<double> tiny{1.0, -1e-12};
  CHECK_NOTHROW(matrix_sqrt_psd(ComplexMatrix::diagonal(tiny)));
}

TEST_CASE("trace-norm inequalities on random pairs") {
  std::mt19937_64 rng(23);
  for (int k = 0; k < 200; ++k) {
    const ComplexMatrix a = random_matrix(3, 3, rng);
    const ComplexMatrix b = random_matrix(3, 3, rng);
    CHECK(trace_norm(a + b) <= trace_norm(a) + trace_norm(b) + 1e-9);
    CHECK(std::abs(trace_norm(a) - trace_norm(b)) <= trace_norm(a - b) + 1e-9);
    CHECK(trace_norm(a * b) <= frob_norm(a) * frob_norm(b) + 1e-9);
  }
}

TEST_CASE("complete_basis extends to an orthonormal basis") {
  const double h = std::sqrt(0.5);
  const auto basis = complete_basis({ComplexVector{h, Complex(0.0, h), 0.0}}, 3);
  REQUIRE(basis.size() == 3);
  const ComplexMatrix v = ComplexMatrix::from_columns(basis);
  CHECK(frob_norm(v.adjoint() * v - ComplexMatrix::identity(3)) < 1e-14);
}

TEST_CASE("svd converges on rank-deficient products") {
  std::mt19937_64 rng(29);
  for (int k = 0; k < 200; ++k) {
    const ComplexMatrix g = random_matrix(4, 2, rng);
    const ComplexMatrix h = random_matrix(2, 4, rng);
    const ComplexMatrix a = g * h;  // rank 2 with rounding-level null columns
    const auto s = svd(a);
    CHECK(s.values[2] < 1e-13 * s.values[0]);
    CHECK(trace_norm(a) == doctest::Approx(oracle::trace_norm(oracle::to_eigen(a))).epsilon(1e-10));
  }
}
