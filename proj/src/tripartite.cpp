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

#include "qcoupling/tripartite.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qcoupling::tripartite {

using linalg::Complex;
using linalg::ComplexMatrix;
using qstate::Dims;

namespace {

std::array<std::size_t, 2> two_factors(const DensityMatrix& rho, const char* label) {
  if (rho.dims().size() != 2) {
    throw Error(ErrorKind::DimensionMismatch, std::string(label) + " must declare two subsystem dimensions");
  }
  return {rho.dims()[0], rho.dims()[1]};
}

// Isometric embedding C^from -> C^to onto the first `from` basis vectors.
ComplexMatrix embedding(std::size_t from, std::size_t to) {
  ComplexMatrix v(to, from);
  for (std::size_t i = 0; i < from; ++i) v(i, i) = 1.0;
  return v;
}

DensityMatrix embed(const DensityMatrix& rho, const ComplexMatrix& first, const ComplexMatrix& second) {
  const ComplexMatrix w = linalg::kron(first, second);
  return DensityMatrix(w * rho.mat() * w.adjoint(), Dims{first.rows(), second.rows()});
}

// The fidelity criterion for the triple as given; fidelity_criterion_check and the
// identity entry of channel_scan share this path.
CriterionReport fidelity_criterion(const MarginalTriple& p, double tol, std::string name) {
  const auto stats = qstate::symmetry_stats(p.ab());
  const double lhs = qstate::fidelity(p.ac(), p.bc());
  const double rhs = std::abs(stats.antisym() - stats.sym());
  return make_report(std::move(name), lhs, rhs, tol);
}

}  // namespace

std::string_view to_string(Verdict v) { return v == Verdict::Consistent ? "consistent" : "violated"; }

CriterionReport make_report(std::string name, double lhs, double rhs, double tol) {
  CriterionReport r;
  r.name = std::move(name);
  r.lhs = lhs;
  r.rhs = rhs;
  r.slack = lhs - rhs;
  r.tol = tol;
  r.verdict = r.slack < -tol ? Verdict::Violated : Verdict::Consistent;
  return r;
}

double ConsistencyReport::worst() const noexcept { return std::max({residual_a, residual_b, residual_c}); }

MarginalTriple::MarginalTriple(DensityMatrix ab, DensityMatrix ac, DensityMatrix bc)
    : ab_(std::move(ab)), ac_(std::move(ac)), bc_(std::move(bc)) {
  const auto [da, db] = two_factors(ab_, "rho_AB");
  const auto [da2, dc] = two_factors(ac_, "rho_AC");
  const auto [db2, dc2] = two_factors(bc_, "rho_BC");
  if (da != da2 || db != db2 || dc != dc2) {
    throw Error(ErrorKind::DimensionMismatch, "subsystem dimensions of the three marginals disagree");
  }
  dims_ = {da, db, dc};
}

MarginalTriple MarginalTriple::from_global(const DensityMatrix& abc) {
  if (abc.dims().size() != 3) throw Error(ErrorKind::DimensionMismatch, "global state must have three factors");
  return MarginalTriple(abc.reduced({0, 1}), abc.reduced({0, 2}), abc.reduced({1, 2}));
}

DensityMatrix MarginalTriple::rho_a() const { return ab_.reduced({0}); }
DensityMatrix MarginalTriple::rho_b() const { return ab_.reduced({1}); }
DensityMatrix MarginalTriple::rho_c() const { return ac_.reduced({1}); }

ConsistencyReport MarginalTriple::consistency() const {
  ConsistencyReport r{};
  r.residual_a = linalg::frob_norm(ab_.reduced({0}).mat() - ac_.reduced({0}).mat());
  r.residual_b = linalg::frob_norm(ab_.reduced({1}).mat() - bc_.reduced({0}).mat());
  r.residual_c = linalg::frob_norm(ac_.reduced({1}).mat() - bc_.reduced({1}).mat());
  return r;
}

MarginalTriple MarginalTriple::padded() const {
  const std::size_t d = std::max(dim_a(), dim_b());
  if (dim_a() == dim_b()) return *this;
  const ComplexMatrix va = embedding(dim_a(), d);
  const ComplexMatrix vb = embedding(dim_b(), d);
  const ComplexMatrix ic = ComplexMatrix::identity(dim_c());
  return MarginalTriple(embed(ab_, va, vb), embed(ac_, va, ic), embed(bc_, vb, ic));
}

CriterionReport consistency_check(const MarginalTriple& t, double tol) {
  return make_report("marginal-consistency", 0.0, t.consistency().worst(), tol);
}

CriterionReport fidelity_criterion_check(const MarginalTriple& t, double tol) {
  return fidelity_criterion(t.padded(), tol, "fidelity-criterion");
}

CriterionReport distance_criterion_check(const MarginalTriple& t, double tol) {
  const MarginalTriple p = t.padded();
  const auto stats = qstate::symmetry_stats(p.ab());
  const double lhs = 2.0 * std::sqrt(std::max(stats.antisym(), 0.0) * std::max(stats.sym(), 0.0));
  const double rhs = qstate::trace_distance(p.ac(), p.bc());
  return make_report("distance-criterion", lhs, rhs, tol);
}

std::vector<CriterionReport> channel_scan(const MarginalTriple& t, const ScanOptions& opts) {
  const MarginalTriple p = t.padded();
  const std::size_t d = p.dim_b();
  for (const auto& ch : opts.extra_channels) {
    if (ch.dim_in() != d || ch.dim_out() != d) {
      throw Error(ErrorKind::DimensionMismatch, "channels on B must map C^" + std::to_string(d) + " to itself");
    }
  }

  std::vector<CriterionReport> out;
  auto record = [&](CriterionReport r, const KrausChannel& channel) {
    if (r.violated()) r.witness = channel;
    out.push_back(std::move(r));
    return opts.fail_fast && out.back().violated();
  };
  auto evaluate = [&](const KrausChannel& channel, std::string name) {
    const MarginalTriple moved(qstate::apply_local_channel(channel, p.ab(), 1), p.ac(),
                               qstate::apply_local_channel(channel, p.bc(), 0));
    return fidelity_criterion(moved, opts.tol, std::move(name));
  };

  if (record(fidelity_criterion(p, opts.tol, "channel-scan[identity]"), KrausChannel::identity(d))) return out;
  for (std::size_t k = 1; k <= opts.samples; ++k) {
    std::seed_seq seq{static_cast<std::uint32_t>(opts.seed), static_cast<std::uint32_t>(opts.seed >> 32),
                      static_cast<std::uint32_t>(k)};
    qstate::Rng rng(seq);
    const KrausChannel channel = KrausChannel::unitary(qstate::haar_unitary(d, rng));
    if (record(evaluate(channel, "channel-scan[haar " + std::to_string(k) + "]"), channel)) return out;
  }
  for (std::size_t k = 0; k < opts.extra_channels.size(); ++k) {
    CriterionReport r = evaluate(opts.extra_channels[k], "channel-scan[kraus " + std::to_string(k) + "]");
    r.note = "beyond proof scope";
    if (record(std::move(r), opts.extra_channels[k])) return out;
  }
  return out;
}

std::vector<CriterionReport> entropy_criteria(const MarginalTriple& t, double tol) {
  const double s_ab = qstate::von_neumann_entropy(t.ab());
  const double s_ac = qstate::von_neumann_entropy(t.ac());
  const double s_a = qstate::von_neumann_entropy(t.rho_a());
  const double s_b = qstate::von_neumann_entropy(t.rho_b());
  const double s_c = qstate::von_neumann_entropy(t.rho_c());
  return {make_report("entropy[S(AC)+S(AB)>=S(A)]", s_ac + s_ab, s_a, tol),
          make_report("entropy[S(AC)+S(AB)>=S(B)+S(C)]", s_ac + s_ab, s_b + s_c, tol)};
}

CriterionReport symext_2qubit(const DensityMatrix& rho_ab, double tol) {
  if (rho_ab.dim() != 4) throw Error(ErrorKind::DimensionMismatch, "symmetric extension test needs a two-qubit state");
  const DensityMatrix joint(rho_ab.mat(), Dims{2, 2});
  const ComplexMatrix rho_b = joint.reduced({1}).mat();
  const double purity_b = linalg::hs_inner(rho_b, rho_b).real();
  const double purity_ab = linalg::hs_inner(joint.mat(), joint.mat()).real();
  const auto eig = linalg::herm_eig(joint.mat());
  double det = 1.0;
  for (double v : eig.values) det *= std::max(v, 0.0);
  CriterionReport r = make_report("symext", purity_b, purity_ab - 4.0 * std::sqrt(det), tol);
  r.note = r.violated() ? "not extendible" : "extendible";
  return r;
}

std::vector<double> ClassicalTable::row_marginal() const {
  std::vector<double> out(rows, 0.0);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) out[i] += (*this)(i, j);
  }
  return out;
}

ClassicalTable ClassicalTripartite::marginal_ab() const {
  ClassicalTable t{dim_a, dim_b, std::vector<double>(dim_a * dim_b, 0.0)};
  for (std::size_t x = 0; x < dim_a; ++x) {
    for (std::size_t y = 0; y < dim_b; ++y) {
      for (std::size_t z = 0; z < dim_c; ++z) t.values[x * dim_b + y] += (*this)(x, y, z);
    }
  }
  return t;
}

ClassicalTable ClassicalTripartite::marginal_ac() const {
  ClassicalTable t{dim_a, dim_c, std::vector<double>(dim_a * dim_c, 0.0)};
  for (std::size_t x = 0; x < dim_a; ++x) {
    for (std::size_t y = 0; y < dim_b; ++y) {
      for (std::size_t z = 0; z < dim_c; ++z) t.values[x * dim_c + z] += (*this)(x, y, z);
    }
  }
  return t;
}

ClassicalTripartite classical_glue(const ClassicalTable& ac, const ClassicalTable& ab) {
  for (const auto* table : {&ac, &ab}) {
    if (table->values.size() != table->rows * table->cols || table->values.empty()) {
      throw Error(ErrorKind::DimensionMismatch, "table shape does not match its entries");
    }
    double total = 0.0;
    for (double v : table->values) {
      if (!(v >= 0.0)) throw Error(ErrorKind::InvalidDistribution, "table entries must be nonnegative");
      total += v;
    }
    if (std::abs(total - 1.0) > 1e-9) throw Error(ErrorKind::InvalidDistribution, "table does not sum to 1");
  }
  if (ac.rows != ab.rows) throw Error(ErrorKind::DimensionMismatch, "tables disagree on the size of A");
  const std::vector<double> pa_ac = ac.row_marginal();
  const std::vector<double> pa_ab = ab.row_marginal();
  for (std::size_t x = 0; x < ac.rows; ++x) {
    if (std::abs(pa_ac[x] - pa_ab[x]) > 1e-10) {
      throw Error(ErrorKind::MarginalMismatch, "A-marginals differ at x = " + std::to_string(x));
    }
  }
  ClassicalTripartite out{ab.rows, ab.cols, ac.cols, std::vector<double>(ab.rows * ab.cols * ac.cols, 0.0)};
  for (std::size_t x = 0; x < out.dim_a; ++x) {
    const double pa = 0.5 * (pa_ac[x] + pa_ab[x]);
    if (pa <= 0.0) continue;
    for (std::size_t y = 0; y < out.dim_b; ++y) {
      for (std::size_t z = 0; z < out.dim_c; ++z) {
        out.values[(x * out.dim_b + y) * out.dim_c + z] = ac(x, z) * ab(x, y) / pa;
      }
    }
  }
  return out;
}

}  // namespace qcoupling::tripartite
