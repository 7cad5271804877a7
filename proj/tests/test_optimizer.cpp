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

#include "qcoupling/error.hpp"
#include "qcoupling/optimizer.hpp"
#include "support/oracles.hpp"

using namespace qcoupling;
using namespace qcoupling::optimizer;
using linalg::Complex;
using linalg::frob_norm;
using linalg::kron;
using linalg::partial_trace;
using qstate::Rng;

namespace {

ComplexMatrix random_hermitian(std::size_t n, Rng& rng) {
  std::normal_distribution<double> g;
  ComplexMatrix m(n, n);
  for (auto& z : m.entries()) z = {g(rng), g(rng)};
  return linalg::hermitian_part(m);
}

qstate::PureState pure_with_overlap(double c) {
  return qstate::PureState({c, std::sqrt(1 - c * c)});
}

DensityMatrix rotate(const DensityMatrix& rho, const ComplexMatrix& u) {
  return DensityMatrix(u * rho.mat() * u.adjoint());
}

void check_result(const OptimizationResult& r, const ComplexMatrix& h) {
  CHECK(coupling::is_coupling(r.argument.joint(), r.argument.target_a(), r.argument.target_b(), 1e-7).ok);
  CHECK(std::abs(r.value - qstate::expectation(h, r.argument.joint().mat())) <= 1e-10);
  for (std::size_t i = 1; i < r.history.size(); ++i) CHECK(r.history[i] >= r.history[i - 1]);
}

}  // namespace

TEST_CASE("config validation") {
  OptimizerConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.tol = 0.0;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = {};
  cfg.max_iters = 0;
  CHECK_THROWS_AS(max_overlap(DensityMatrix::maximally_mixed(2), DensityMatrix::maximally_mixed(2),
                              qstate::sym_projectors(2).sym, cfg),
                  Error);
}

TEST_CASE("affine marginal projection") {
  const DensityMatrix mm = DensityMatrix::maximally_mixed(2);
  const ComplexMatrix feasible = kron(mm.mat(), mm.mat());
  CHECK(frob_norm(project_marginal_affine(feasible, mm, mm) - feasible) < 1e-15);
  CHECK(frob_norm(project_marginal_affine(ComplexMatrix::zero(4, 4), mm, mm) - ComplexMatrix::identity(4) * Complex(0.25)) <
        1e-15);

  Rng rng(1);
  for (int k = 0; k < 50; ++k) {
    const std::size_t da = 2 + k % 2;
    const std::size_t db = 2 + (k / 2) % 2;
    const DensityMatrix a = qstate::random_density_matrix({da}, rng);
    const DensityMatrix b = qstate::random_density_matrix({db}, rng);
    const ComplexMatrix x = random_hermitian(da * db, rng);
    const ComplexMatrix p = project_marginal_affine(x, a, b);
    CHECK(frob_norm(partial_trace(p, da, db, linalg::Keep::A) - a.mat()) < 1e-10);
    CHECK(frob_norm(partial_trace(p, da, db, linalg::Keep::B) - b.mat()) < 1e-10);
    CHECK(frob_norm(project_marginal_affine(p, a, b) - p) < 1e-12);

    // Any feasible point f satisfies <x - P(x), f - P(x)> = 0.
    const DensityMatrix c = qstate::random_density_matrix({da, db}, rng);
    const ComplexMatrix f = project_marginal_affine(c.mat(), a, b);
    CHECK(std::abs(linalg::hs_inner(x - p, f - p)) < 1e-9);
  }
  CHECK_THROWS_AS(project_marginal_affine(ComplexMatrix::zero(5, 5), mm, mm), Error);
}

TEST_CASE("PSD projection and Dykstra") {
  const std::vector<double> d{2.0, -1.0, 0.5};
  const std::vector<double> clamped{2.0, 0.0, 0.5};
  CHECK(frob_norm(project_psd(ComplexMatrix::diagonal(d)) - ComplexMatrix::diagonal(clamped)) < 1e-14);

  Rng rng(2);
  for (int k = 0; k < 10; ++k) {
    const DensityMatrix a = qstate::random_density_matrix({2}, rng);
    const DensityMatrix b = qstate::random_density_matrix({3}, rng);
    // Start from a perturbed product coupling, up to unit Frobenius distance.
    const ComplexMatrix noise = random_hermitian(6, rng);
    const double scale = 0.1 * (1 + k);
    const ComplexMatrix x = kron(a.mat(), b.mat()) + noise * Complex(scale / frob_norm(noise));
    const DykstraResult r = dykstra_project(x, a, b, 20000, 1e-9);
    REQUIRE_FALSE(r.residuals.empty());
    CHECK(r.residuals.back() < 1e-7);
    CHECK(herm_eig(r.point).values.back() >= -1e-12);
    for (std::size_t i = 1; i < r.residuals.size(); ++i) CHECK(r.residuals[i] <= r.residuals[i - 1] + 1e-12);
  }
}

TEST_CASE("max overlap closed-form cases") {
  const ComplexMatrix p_s = qstate::sym_projectors(2).sym;
  const ComplexMatrix p_as = qstate::sym_projectors(2).antisym;
  const DensityMatrix mm = DensityMatrix::maximally_mixed(2);
  const OptimizationResult mixed = max_overlap(mm, mm, p_s);
  CHECK(mixed.value == doctest::Approx(1.0).epsilon(1e-6));
  check_result(mixed, p_s);

  for (double x : {0.2, 0.6, 0.9}) {
    const std::vector<double> pa{(1 + x) / 2, (1 - x) / 2};
    const std::vector<double> pb{(1 - x) / 2, (1 + x) / 2};
    const OptimizationResult r = max_overlap(DensityMatrix::diagonal(pa), DensityMatrix::diagonal(pb), p_s);
    const double f = std::sqrt(1 - x * x);
    CHECK(r.value == doctest::Approx((1 + f) / 2).epsilon(1e-3));
    REQUIRE(r.certificate);
    CHECK(r.certificate->lower_bound == doctest::Approx((1 + f * f) / 2));
    CHECK(r.certificate->upper_bound == doctest::Approx((1 + f) / 2));
    CHECK(r.value >= r.certificate->lower_bound - 1e-6);
    CHECK(r.value <= r.certificate->upper_bound + 1e-6);
    CHECK(r.warnings.empty());
    check_result(r, p_s);
  }

  const DensityMatrix e0 = qstate::PureState::basis(2, 0).density();
  const DensityMatrix e1 = qstate::PureState::basis(2, 1).density();
  const OptimizationResult orth = max_overlap(e0, e1, p_as);
  CHECK(orth.value == doctest::Approx(0.5).epsilon(1e-9));
  CHECK_FALSE(orth.certificate);
  check_result(orth, p_as);

  CHECK_THROWS_AS(max_overlap(e0, e1, ComplexMatrix::identity(3)), Error);
}

TEST_CASE("minimal antisymmetric overlap") {
  for (double c : {0.0, 0.25, 0.5, 0.8, 1.0}) {
    const DensityMatrix a = qstate::PureState::basis(2, 0).density();
    const DensityMatrix b = pure_with_overlap(c).density();
    CHECK(min_antisym_overlap(a, b).value == doctest::Approx((1 - c * c) / 2).epsilon(1e-3));
  }

  const double mu = 0.2;
  const double g = std::sqrt(mu * (1 - mu));
  const std::vector<double> p1{0.5 - g, 0.5 + g};
  const std::vector<double> p2{0.5 + g, 0.5 - g};
  const OptimizationResult forced = min_antisym_overlap(DensityMatrix::diagonal(p1), DensityMatrix::diagonal(p2));
  CHECK(forced.value == doctest::Approx(mu).epsilon(1e-3));
  CHECK(forced.value >= mu - 1e-6);

  Rng rng(3);
  for (int k = 0; k < 5; ++k) {
    const DensityMatrix a = qstate::random_density_matrix({2}, rng);
    const DensityMatrix b = qstate::random_density_matrix({2}, rng);
    const double up = max_overlap(a, b, qstate::sym_projectors(2).sym).value;
    const OptimizationResult down = min_antisym_overlap(a, b);
    CHECK(std::abs(up + down.value - 1.0) <= 1e-9);
    CHECK(std::abs(down.value - qstate::expectation(qstate::sym_projectors(2).antisym, down.argument.joint().mat())) <= 1e-10);
    for (std::size_t i = 1; i < down.history.size(); ++i) CHECK(down.history[i] <= down.history[i - 1]);
  }
}

TEST_CASE("max overlap is invariant under joint rotation") {
  Rng rng(4);
  const DensityMatrix a = qstate::random_density_matrix({3}, rng);
  const DensityMatrix b = qstate::random_density_matrix({3}, rng);
  const ComplexMatrix p_s = qstate::sym_projectors(3).sym;
  const double base = max_overlap(a, b, p_s).value;
  for (int k = 0; k < 50; ++k) {
    const ComplexMatrix u = qstate::haar_unitary(3, rng);
    CHECK(std::abs(max_overlap(rotate(a, u), rotate(b, u), p_s).value - base) <= 2e-3);
  }
}

TEST_CASE("earth mover objective") {
  Rng rng(5);
  const DensityMatrix a = qstate::random_density_matrix({2}, rng);
  const DensityMatrix b = qstate::random_density_matrix({2}, rng);
  const ComplexMatrix h = random_hermitian(4, rng);
  const OptimizationResult low = emd_min(a, b, h);
  const OptimizationResult high = max_overlap(a, b, h * Complex(-1.0));
  CHECK(low.value == doctest::Approx(-high.value).epsilon(1e-9));
  CHECK(low.value <= qstate::expectation(h, kron(a.mat(), b.mat())) + 1e-9);
  CHECK(std::abs(low.value - qstate::expectation(h, low.argument.joint().mat())) <= 1e-10);
}

TEST_CASE("two-copy twirl") {
  const auto p2 = qstate::sym_projectors(2);
  CHECK(frob_norm(twirl(ComplexMatrix::identity(4)) - ComplexMatrix::identity(4)) < 1e-14);
  CHECK(frob_norm(twirl(p2.antisym) - p2.antisym) < 1e-14);

  ComplexMatrix e01 = ComplexMatrix::zero(4, 4);
  e01(1, 1) = 1.0;
  const ComplexMatrix expected = p2.sym * Complex(1.0 / 6) + p2.antisym * Complex(0.5);
  const ComplexMatrix t = twirl(e01);
  CHECK(frob_norm(t - expected) < 1e-14);
  const auto mc = oracle::haar_twirl_estimate(oracle::to_eigen(e01), 2, 10000, 99);
  CHECK((mc - oracle::to_eigen(expected)).cwiseAbs().maxCoeff() < 1e-2);

  Rng rng(6);
  for (std::size_t d : {2, 3}) {
    const ComplexMatrix h = random_hermitian(d * d, rng);
    const ComplexMatrix th = twirl(h);
    CHECK(frob_norm(twirl(th) - th) < 1e-12);
    for (int k = 0; k < 5; ++k) {
      const ComplexMatrix u = qstate::haar_unitary(d, rng);
      const ComplexMatrix uu = kron(u, u);
      CHECK(frob_norm(uu * th * uu.adjoint() - th) < 1e-9);
    }
  }
  CHECK_THROWS_AS(twirl(ComplexMatrix::identity(5)), Error);
}

TEST_CASE("no-go demonstration") {
  const NogoReport r = nogo_demo();
  CHECK(r.twirl.decomposition_residual < 1e-12);
  CHECK(r.twirl.invariance_defect < 1e-9);

  REQUIRE_FALSE(r.forcing.empty());
  for (const ForcingPoint& p : r.forcing) {
    CHECK(p.min_antisym == doctest::Approx(p.mu).epsilon(1e-6));
    CHECK(p.distance == doctest::Approx(2 * std::sqrt(p.mu * (1 - p.mu))).epsilon(1e-9));
    CHECK(p.f_distance == doctest::Approx(p.distance).epsilon(1e-6));
    CHECK(p.infidelity == doctest::Approx(1 - std::abs(1 - 2 * p.mu)).epsilon(1e-9));
    CHECK(p.f_infidelity == doctest::Approx(p.infidelity).epsilon(1e-6));
  }

  const PurePairContradiction& c = r.contradiction;
  CHECK(c.overlap == 0.5);
  CHECK(c.min_antisym == doctest::Approx(0.375));
  CHECK(c.distance == doctest::Approx(std::sqrt(0.75)));
  CHECK(c.f_distance == doctest::Approx(std::sqrt(0.9375)));
  CHECK(c.distance_gap == doctest::Approx(std::sqrt(0.9375) - std::sqrt(0.75)).epsilon(1e-12));
  CHECK(c.distance_gap > 0.05);
  CHECK(c.infidelity == doctest::Approx(0.5));
  CHECK(c.f_infidelity == doctest::Approx(0.75));
  CHECK(c.infidelity_gap == doctest::Approx(0.25));

  REQUIRE(r.endpoints.size() == 2);
  for (const auto& e : r.endpoints) {
    CHECK(e.distance_gap < 1e-12);
    CHECK(e.infidelity_gap < 1e-12);
  }
  CHECK(pure_pair_contradiction(0.25).min_antisym == doctest::Approx((1 - 0.0625) / 2));
  CHECK_THROWS_AS(pure_pair_contradiction(1.5), Error);
}
