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
#include "qcoupling/tripartite.hpp"

using namespace qcoupling;
using namespace qcoupling::tripartite;
using linalg::Complex;
using linalg::ComplexMatrix;
using linalg::kron;
using qstate::PureState;
using qstate::Rng;

namespace {

const double kH = std::sqrt(0.5);

DensityMatrix two_qubit(const linalg::ComplexVector& v) { return PureState(v, {2, 2}).density(); }

DensityMatrix singlet() { return two_qubit({0.0, kH, -kH, 0.0}); }

MarginalTriple singlet_triple() {
  return MarginalTriple(singlet(), two_qubit({1.0, 0.0, 0.0, 0.0}), two_qubit({0.0, 0.0, 0.0, 1.0}));
}

DensityMatrix with_c(const DensityMatrix& ab, const DensityMatrix& c) {
  qstate::Dims dims = ab.dims();
  dims.push_back(c.dim());
  return DensityMatrix(kron(ab.mat(), c.mat()), dims);
}

DensityMatrix example4(double mu) {
  const double a = std::sqrt((1 - mu) / 2);
  const double b = std::sqrt(mu / 2);
  const Complex i(0.0, 1.0);
  return two_qubit({a, i * b, -i * b, a});
}

DensityMatrix example5(double mu) {
  const double a = std::sqrt((1 - mu) / 2);
  const double b = std::sqrt(mu / 2);
  return two_qubit({0.0, a + b, a - b, 0.0});
}

DensityMatrix ket000() { return with_c(two_qubit({1.0, 0.0, 0.0, 0.0}), qstate::PureState::basis(2, 0).density()); }

ClassicalTable table(std::size_t rows, std::size_t cols, std::vector<double> v) { return {rows, cols, std::move(v)}; }

}  // namespace

TEST_CASE("marginal triple construction") {
  const MarginalTriple t = MarginalTriple::from_global(ket000());
  CHECK(t.dim_a() == 2);
  CHECK(t.dim_b() == 2);
  CHECK(t.dim_c() == 2);
  CHECK(t.consistency().worst() < 1e-15);
  CHECK_FALSE(consistency_check(t).violated());

  const ConsistencyReport bad = singlet_triple().consistency();
  CHECK(bad.worst() > 0.5);
  CHECK(consistency_check(singlet_triple()).violated());

  CHECK_THROWS_AS(MarginalTriple(DensityMatrix::maximally_mixed(4), singlet(), singlet()), Error);
  const DensityMatrix ab3(ComplexMatrix::identity(6) * Complex(1.0 / 6), {2, 3});
  CHECK_THROWS_AS(MarginalTriple(ab3, singlet(), singlet()), Error);
}

TEST_CASE("fidelity criterion") {
  const CriterionReport pure = fidelity_criterion_check(MarginalTriple::from_global(ket000()));
  CHECK(pure.lhs == doctest::Approx(1.0));
  CHECK(pure.rhs == doctest::Approx(1.0));
  CHECK(std::abs(pure.slack) < 1e-9);
  CHECK_FALSE(pure.violated());

  const CriterionReport bad = fidelity_criterion_check(singlet_triple());
  CHECK(bad.lhs == doctest::Approx(0.0));
  CHECK(bad.rhs == doctest::Approx(1.0));
  CHECK(bad.slack == doctest::Approx(-1.0).epsilon(1e-9));
  CHECK(bad.violated());

  for (double mu : {0.0, 0.1, 0.25, 0.4}) {
    const auto t = MarginalTriple::from_global(with_c(example4(mu), DensityMatrix::maximally_mixed(2)));
    CHECK(std::abs(fidelity_criterion_check(t).slack) < 1e-9);
  }

  Rng rng(1);
  for (int k = 0; k < 100; ++k) {
    const auto t = MarginalTriple::from_global(qstate::random_density_matrix({2, 2, 2}, rng, 1 + k % 8));
    CHECK(fidelity_criterion_check(t).slack >= -1e-8);
  }
}

TEST_CASE("distance criterion") {
  const CriterionReport tight =
      distance_criterion_check(MarginalTriple::from_global(with_c(example5(0.2), qstate::PureState::basis(2, 0).density())));
  CHECK(tight.lhs == doctest::Approx(0.8).epsilon(1e-9));
  CHECK(tight.rhs == doctest::Approx(0.8).epsilon(1e-9));
  CHECK(std::abs(tight.slack) < 1e-9);

  const CriterionReport zero = distance_criterion_check(MarginalTriple::from_global(ket000()));
  CHECK(zero.lhs == doctest::Approx(0.0));
  CHECK(zero.rhs == doctest::Approx(0.0));

  Rng rng(2);
  for (int k = 0; k < 100; ++k) {
    const auto t = MarginalTriple::from_global(qstate::random_density_matrix({2, 2, 2}, rng, 1 + k % 8));
    CHECK(distance_criterion_check(t).slack >= -1e-8);
  }
}

TEST_CASE("channel scan") {
  const MarginalTriple bad = singlet_triple();
  ScanOptions opts;
  opts.samples = 50;
  const auto reports = channel_scan(bad, opts);
  REQUIRE(reports.size() == 51);
  const CriterionReport direct = fidelity_criterion_check(bad);
  CHECK(reports[0].lhs == direct.lhs);
  CHECK(reports[0].rhs == direct.rhs);
  CHECK(reports[0].slack == direct.slack);
  CHECK(reports[0].violated());
  REQUIRE(reports[0].witness);
  CHECK(linalg::frob_norm(reports[0].witness->kraus()[0] - ComplexMatrix::identity(2)) == 0.0);

  opts.fail_fast = true;
  CHECK(channel_scan(bad, opts).size() == 1);

  Rng rng(3);
  for (int k = 0; k < 10; ++k) {
    ScanOptions o;
    o.seed = static_cast<std::uint64_t>(k);
    const auto t = MarginalTriple::from_global(qstate::random_density_matrix({2, 2, 2}, rng, 1 + k % 4));
    const auto scan = channel_scan(t, o);
    CHECK(scan.size() == 101);
    CHECK(scan[0].slack == fidelity_criterion_check(t).slack);
    for (const auto& r : scan) {
      CHECK(r.slack >= -1e-7);
      CHECK_FALSE(r.violated());
      CHECK_FALSE(r.witness);
    }
    const auto again = channel_scan(t, o);
    for (std::size_t i = 0; i < scan.size(); ++i) CHECK(again[i].slack == scan[i].slack);
  }

  // A replacement channel lies outside what the criterion covers.
  ScanOptions extra;
  extra.samples = 1;
  extra.extra_channels.emplace_back(std::vector<ComplexMatrix>{ComplexMatrix{{1.0, 0.0}, {0.0, 0.0}},
                                                               ComplexMatrix{{0.0, 1.0}, {0.0, 0.0}}});
  const auto with_extra = channel_scan(MarginalTriple::from_global(ket000()), extra);
  REQUIRE(with_extra.size() == 3);
  CHECK(with_extra[2].note.find("beyond proof scope") != std::string::npos);
  CHECK(with_extra[1].note.empty());
}

TEST_CASE("entropy criteria") {
  const auto pure = entropy_criteria(MarginalTriple::from_global(ket000()));
  REQUIRE(pure.size() == 2);
  for (const auto& r : pure) CHECK(std::abs(r.slack) < 1e-12);

  const auto mixed = entropy_criteria(MarginalTriple::from_global(DensityMatrix(ComplexMatrix::identity(8) * Complex(0.125), {2, 2, 2})));
  const double l2 = std::log(2.0);
  CHECK(mixed[0].slack == doctest::Approx(3 * l2));
  CHECK(mixed[1].slack == doctest::Approx(2 * l2));

  Rng rng(4);
  for (int k = 0; k < 100; ++k) {
    const auto t = MarginalTriple::from_global(qstate::random_density_matrix({2, 2, 3}, rng, 1 + k % 6));
    for (const auto& r : entropy_criteria(t)) CHECK(r.slack >= -1e-8);
  }
}

TEST_CASE("unequal A and B dimensions are padded") {
  Rng rng(5);
  for (int k = 0; k < 30; ++k) {
    const auto t = MarginalTriple::from_global(qstate::random_density_matrix({2, 3, 2}, rng, 1 + k % 4));
    const MarginalTriple p = t.padded();
    CHECK(p.dim_a() == 3);
    CHECK(p.dim_b() == 3);
    CHECK(p.consistency().worst() < 1e-12);
    CHECK(fidelity_criterion_check(t).slack >= -1e-7);
    CHECK(distance_criterion_check(t).slack >= -1e-7);
    ScanOptions o;
    o.samples = 20;
    for (const auto& r : channel_scan(t, o)) CHECK(r.slack >= -1e-7);
  }
}

TEST_CASE("two-qubit symmetric extension") {
  const CriterionReport s = symext_2qubit(singlet());
  CHECK(s.lhs == doctest::Approx(0.5));
  CHECK(s.rhs == doctest::Approx(1.0));
  CHECK(s.violated());
  CHECK(s.note == "not extendible");

  const CriterionReport mm = symext_2qubit(DensityMatrix::maximally_mixed(4));
  CHECK(mm.lhs == doctest::Approx(0.5));
  CHECK(mm.rhs == doctest::Approx(0.0).epsilon(1e-12));
  CHECK_FALSE(mm.violated());
  CHECK(mm.note == "extendible");

  const CriterionReport prod = symext_2qubit(two_qubit({1.0, 0.0, 0.0, 0.0}));
  CHECK(prod.lhs == doctest::Approx(1.0));
  CHECK(prod.rhs == doctest::Approx(1.0));
  CHECK_FALSE(prod.violated());

  CHECK_THROWS_AS(symext_2qubit(DensityMatrix::maximally_mixed(3)), Error);
}

TEST_CASE("classical glue") {
  const auto uniform = table(2, 2, {0.25, 0.25, 0.25, 0.25});
  const auto correlated = table(2, 2, {0.5, 0.0, 0.0, 0.5});
  const ClassicalTripartite g = classical_glue(uniform, correlated);
  for (std::size_t x = 0; x < 2; ++x) {
    for (std::size_t y = 0; y < 2; ++y) {
      for (std::size_t z = 0; z < 2; ++z) CHECK(g(x, y, z) == doctest::Approx(x == y ? 0.25 : 0.0));
    }
  }

  // Product AB: the glued table factorizes as p_AC(x, z) p_B(y).
  const auto ac = table(2, 3, {0.1, 0.2, 0.1, 0.3, 0.2, 0.1});
  const auto ab = table(2, 2, {0.4 * 0.7, 0.4 * 0.3, 0.6 * 0.7, 0.6 * 0.3});
  const ClassicalTripartite f = classical_glue(ac, ab);
  for (std::size_t x = 0; x < 2; ++x) {
    for (std::size_t y = 0; y < 2; ++y) {
      for (std::size_t z = 0; z < 3; ++z) CHECK(f(x, y, z) == doctest::Approx(ac(x, z) * (y == 0 ? 0.7 : 0.3)));
    }
  }

  // Zero rows of p_A stay zero.
  const auto point_ac = table(2, 2, {0.0, 0.0, 0.3, 0.7});
  const auto point_ab = table(2, 2, {0.0, 0.0, 0.5, 0.5});
  const ClassicalTripartite p = classical_glue(point_ac, point_ab);
  CHECK(p(0, 0, 0) == 0.0);
  CHECK(p(1, 1, 1) == doctest::Approx(0.35));

  Rng rng(6);
  std::uniform_real_distribution<double> u;
  for (int k = 0; k < 50; ++k) {
    std::vector<double> joint(2 * 3 * 2);
    double s = 0.0;
    for (auto& v : joint) s += (v = u(rng));
    for (auto& v : joint) v /= s;
    const ClassicalTripartite src{2, 3, 2, joint};
    const ClassicalTripartite out = classical_glue(src.marginal_ac(), src.marginal_ab());
    const auto ab_out = out.marginal_ab();
    const auto ac_out = out.marginal_ac();
    double total = 0.0;
    for (double v : out.values) {
      CHECK(v >= 0.0);
      total += v;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    for (std::size_t i = 0; i < ab_out.values.size(); ++i) CHECK(std::abs(ab_out.values[i] - src.marginal_ab().values[i]) <= 1e-12);
    for (std::size_t i = 0; i < ac_out.values.size(); ++i) CHECK(std::abs(ac_out.values[i] - src.marginal_ac().values[i]) <= 1e-12);
  }

  CHECK_THROWS_AS(classical_glue(uniform, table(2, 2, {0.7, 0.0, 0.0, 0.3})), Error);
}
