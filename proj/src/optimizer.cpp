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

#include "qcoupling/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace qcoupling::optimizer {

using linalg::Complex;
using linalg::ComplexVector;
using linalg::frob_norm;
using linalg::herm_eig;
using linalg::Keep;
using qstate::Dims;

namespace {

void require_pair(const DensityMatrix& rho_a, const DensityMatrix& rho_b, const ComplexMatrix& x) {
  if (x.rows() != rho_a.dim() * rho_b.dim() || !x.is_square()) {
    throw Error(ErrorKind::DimensionMismatch, "joint operator does not match the marginal dimensions");
  }
}

ComplexMatrix kron_identity_right(const ComplexMatrix& a, std::size_t db) {
  return linalg::kron(a, ComplexMatrix::identity(db));
}

ComplexMatrix kron_identity_left(std::size_t da, const ComplexMatrix& b) {
  return linalg::kron(ComplexMatrix::identity(da), b);
}

// Affine projection against raw marginal matrices.
ComplexMatrix affine(const ComplexMatrix& x, const ComplexMatrix& a, const ComplexMatrix& b) {
  const std::size_t da = a.rows();
  const std::size_t db = b.rows();
  const ComplexMatrix ra = a - linalg::partial_trace(x, da, db, Keep::A);
  const ComplexMatrix rb = b - linalg::partial_trace(x, da, db, Keep::B);
  const Complex shift = ra.trace() / static_cast<double>(da * db);
  ComplexMatrix y = x;
  y += kron_identity_right(ra, db) * Complex(1.0 / static_cast<double>(db));
  y += kron_identity_left(da, rb) * Complex(1.0 / static_cast<double>(da));
  for (std::size_t i = 0; i < y.rows(); ++i) y(i, i) -= shift;
  return linalg::hermitian_part(y);
}

double marginal_residual(const ComplexMatrix& y, const ComplexMatrix& a, const ComplexMatrix& b) {
  return frob_norm(linalg::partial_trace(y, a.rows(), b.rows(), Keep::A) - a) +
         frob_norm(linalg::partial_trace(y, a.rows(), b.rows(), Keep::B) - b);
}

// PSD projection that reuses the eigenbasis of the previous call: the
// input is rotated into `basis` first, where it is nearly diagonal and the
// Jacobi sweeps converge fast.
class WarmPsdProjector {
 public:
  explicit WarmPsdProjector(std::size_t n) : basis_(ComplexMatrix::identity(n)) {}

  ComplexMatrix operator()(const ComplexMatrix& x) {
    const ComplexMatrix rotated = linalg::hermitian_part(basis_.adjoint() * x * basis_);
    auto eig = herm_eig(rotated, 1e-6);
    basis_ = basis_ * eig.vectors;
    eig.vectors = basis_;
    std::vector<double> clamped = eig.values;
    for (auto& v : clamped) v = std::max(v, 0.0);
    return linalg::reassemble(eig, clamped);
  }

 private:
  ComplexMatrix basis_;
};

// Orthonormal basis of the eigenvectors with eigenvalue above the cutoff.
ComplexMatrix support_basis(const DensityMatrix& rho) {
  const auto eig = herm_eig(rho.mat());
  const double cutoff = 1e-10 * std::max(eig.values.front(), 1e-300);
  std::vector<ComplexVector> cols;
  for (std::size_t i = 0; i < eig.values.size(); ++i) {
    if (eig.values[i] > cutoff) cols.push_back(eig.vectors.column(i));
  }
  return ComplexMatrix::from_columns(cols);
}

ComplexMatrix compress(const ComplexMatrix& m, const ComplexMatrix& w) {
  return linalg::hermitian_part(w.adjoint() * m * w);
}

ComplexMatrix normalized(ComplexMatrix m) {
  const double tr = m.trace().real();
  m *= 1.0 / tr;
  return m;
}

double min_eigenvalue(const ComplexMatrix& m) { return herm_eig(m, 1e-6).values.back(); }

bool is_p_sym(const ComplexMatrix& h, std::size_t d) {
  if (h.rows() != d * d) return false;
  return frob_norm(h - qstate::sym_projectors(d).sym) <= 1e-12;
}

struct Reduced {
  ComplexMatrix wa;
  ComplexMatrix wb;
  ComplexMatrix a;
  ComplexMatrix b;
  ComplexMatrix h;
  ComplexMatrix product;
  double product_min_eig;
};

Reduced reduce(const DensityMatrix& rho_a, const DensityMatrix& rho_b, const ComplexMatrix& h) {
  Reduced r;
  r.wa = support_basis(rho_a);
  r.wb = support_basis(rho_b);
  r.a = normalized(compress(rho_a.mat(), r.wa));
  r.b = normalized(compress(rho_b.mat(), r.wb));
  r.h = compress(h, linalg::kron(r.wa, r.wb));
  r.product = linalg::kron(r.a, r.b);
  r.product_min_eig = min_eigenvalue(r.product);
  return r;
}

// Feasible coupling near a PSD iterate: exact marginals first, then the
// smallest admixture of the (full-rank, reduced) product coupling that
// restores positivity.
ComplexMatrix repair(const ComplexMatrix& z, const Reduced& r) {
  ComplexMatrix y = affine(z, r.a, r.b);
  const double e = min_eigenvalue(y);
  if (e >= 0.0) return y;
  const double lambda = -e / (r.product_min_eig - e);
  y *= (1.0 - lambda);
  y += r.product * Complex(lambda);
  return y;
}

OptimizationResult make_result(const DensityMatrix& rho_a, const DensityMatrix& rho_b, const Reduced& r,
                               const ComplexMatrix& reduced_best, const ComplexMatrix& h) {
  const ComplexMatrix w = linalg::kron(r.wa, r.wb);
  ComplexMatrix full = linalg::hermitian_part(w * reduced_best * w.adjoint());
  full = normalized(std::move(full));
  const std::size_t da = rho_a.dim();
  const std::size_t db = rho_b.dim();
  DensityMatrix joint(std::move(full), Dims{da, db}, 1e-8);
  Coupling arg(std::move(joint), rho_a, rho_b, 1e-7);
  const double value = qstate::expectation(h, arg.joint().mat());
  return OptimizationResult{value, std::move(arg), 0, false, std::nullopt, {}, {}};
}

}  // namespace

void OptimizerConfig::validate() const {
  if (max_iters <= 0 || !(step0 > 0.0) || !(tol > 0.0) || dykstra_iters <= 0) {
    throw Error(ErrorKind::ParamOutOfRange, "optimizer settings must be positive");
  }
}

ComplexMatrix project_marginal_affine(const ComplexMatrix& x, const DensityMatrix& rho_a, const DensityMatrix& rho_b) {
  require_pair(rho_a, rho_b, x);
  return affine(x, rho_a.mat(), rho_b.mat());
}

ComplexMatrix project_psd(const ComplexMatrix& x) {
  const auto eig = herm_eig(x);
  std::vector<double> clamped = eig.values;
  for (auto& v : clamped) v = std::max(v, 0.0);
  return linalg::reassemble(eig, clamped);
}

DykstraResult dykstra_project(const ComplexMatrix& x, const DensityMatrix& rho_a, const DensityMatrix& rho_b,
                              int iters, double tol) {
  require_pair(rho_a, rho_b, x);
  const std::size_t n = x.rows();
  WarmPsdProjector psd(n);
  DykstraResult out{linalg::hermitian_part(x), {}};
  ComplexMatrix p(n, n);
  ComplexMatrix q(n, n);
  for (int k = 0; k < iters; ++k) {
    const ComplexMatrix a = affine(out.point + p, rho_a.mat(), rho_b.mat());
    p = out.point + p - a;
    const ComplexMatrix shifted = a + q;
    out.point = psd(shifted);
    q = shifted - out.point;
    out.residuals.push_back(marginal_residual(out.point, rho_a.mat(), rho_b.mat()));
    if (out.residuals.back() <= tol) break;
  }
  return out;
}

OptimizationResult max_overlap(const DensityMatrix& rho_a, const DensityMatrix& rho_b, const ComplexMatrix& h,
                               const OptimizerConfig& cfg) {
  cfg.validate();
  require_pair(rho_a, rho_b, h);
  if (linalg::hermiticity_defect(h) > 1e-9 * std::max(1.0, frob_norm(h))) {
    throw Error(ErrorKind::NotHermitian, "objective operator must be Hermitian");
  }
  const Reduced r = reduce(rho_a, rho_b, h);
  const std::size_t n = r.product.rows();

  constexpr int kCheckEvery = 25;
  constexpr int kPlateauWindow = 200;
  constexpr double kResidualTight = 1e-9;
  constexpr double kResidualLoose = 1e-6;

  WarmPsdProjector psd(n);
  double beta = cfg.step0;
  ComplexMatrix z = r.product;
  ComplexMatrix u(n, n);
  ComplexMatrix best = r.product;
  double best_value = qstate::expectation(r.h, best);
  double plateau_ref = best_value;
  int plateau_start = 0;
  std::vector<double> history{best_value};
  bool converged = false;
  int iter = 0;
  const double scale = std::max(1.0, frob_norm(r.h));

  for (iter = 1; iter <= cfg.max_iters; ++iter) {
    ComplexMatrix target = z - u;
    target += r.h * Complex(1.0 / beta);
    const ComplexMatrix x = affine(target, r.a, r.b);
    const ComplexMatrix z_old = z;
    const ComplexMatrix shifted = x + u;
    z = psd(shifted);
    u = shifted - z;
    const double primal = frob_norm(x - z);
    const double dual = beta * frob_norm(z - z_old) / scale;

    const bool tight = primal <= kResidualTight && dual <= kResidualTight;
    if (iter % kCheckEvery == 0 || tight || iter == cfg.max_iters) {
      const ComplexMatrix candidate = repair(z, r);
      const double value = qstate::expectation(r.h, candidate);
      if (value > best_value) {
        best_value = value;
        best = candidate;
      }
      history.push_back(best_value);
      if (best_value - plateau_ref > cfg.tol) {
        plateau_ref = best_value;
        plateau_start = iter;
      }
      const bool plateau = iter - plateau_start >= kPlateauWindow;
      if (tight || (plateau && primal <= kResidualLoose && dual <= kResidualLoose)) {
        converged = true;
        break;
      }
    }
    if (iter % 10 == 0) {
      if (primal > 10.0 * dual) {
        beta *= 2.0;
        u *= 0.5;
      } else if (dual > 10.0 * primal) {
        beta *= 0.5;
        u *= 2.0;
      }
    }
  }

  OptimizationResult out = make_result(rho_a, rho_b, r, best, h);
  out.iterations = std::min(iter, cfg.max_iters);
  out.converged = converged;
  out.history = std::move(history);
  if (!converged) out.warnings.push_back("iteration limit reached before convergence");
  if (rho_a.dim() == rho_b.dim() && is_p_sym(h, rho_a.dim())) {
    const double f = qstate::fidelity(rho_a, rho_b);
    out.certificate = Certificate{(1.0 + f * f) / 2.0, (1.0 + f) / 2.0};
    if (out.value < out.certificate->lower_bound - 1e-6 || out.value > out.certificate->upper_bound + 1e-6) {
      out.warnings.push_back("value " + std::to_string(out.value) + " escapes the fidelity bracket");
    }
  }
  return out;
}

OptimizationResult min_antisym_overlap(const DensityMatrix& rho_a, const DensityMatrix& rho_b,
                                       const OptimizerConfig& cfg) {
  if (rho_a.dim() != rho_b.dim()) throw Error(ErrorKind::DimensionMismatch, "marginals must share a dimension");
  OptimizationResult out = max_overlap(rho_a, rho_b, qstate::sym_projectors(rho_a.dim()).sym, cfg);
  out.value = 1.0 - out.value;
  for (auto& v : out.history) v = 1.0 - v;
  if (out.certificate) out.certificate = Certificate{1.0 - out.certificate->upper_bound, 1.0 - out.certificate->lower_bound};
  return out;
}

OptimizationResult emd_min(const DensityMatrix& rho_a, const DensityMatrix& rho_b, const ComplexMatrix& h,
                           const OptimizerConfig& cfg) {
  OptimizationResult out = max_overlap(rho_a, rho_b, h * Complex(-1.0), cfg);
  out.value = qstate::expectation(h, out.argument.joint().mat());
  for (auto& v : out.history) v = -v;
  return out;
}

ComplexMatrix twirl(const ComplexMatrix& h) {
  if (!h.is_square()) throw Error(ErrorKind::NotSquare, "twirl needs a square operator");
  const auto d = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(h.rows()))));
  if (d * d != h.rows()) throw Error(ErrorKind::DimensionMismatch, "operator is not on a two-copy space");
  const auto proj = qstate::sym_projectors(d);
  const double rank_s = static_cast<double>(d * (d + 1) / 2);
  const double rank_as = static_cast<double>(d * (d - 1) / 2);
  ComplexMatrix out = proj.sym * (linalg::hs_inner(proj.sym, h) / rank_s);
  if (rank_as > 0.0) out += proj.antisym * (linalg::hs_inner(proj.antisym, h) / rank_as);
  return out;
}

PurePairContradiction pure_pair_contradiction(double c) {
  if (!(c >= 0.0 && c <= 1.0)) throw Error(ErrorKind::ParamOutOfRange, "overlap must lie in [0, 1]");
  // |alpha> = |0>, |beta> = c|0> + sqrt(1 - c^2)|1>.
  const ComplexVector alpha{1.0, 0.0};
  const ComplexVector beta{c, std::sqrt(std::max(0.0, 1.0 - c * c))};
  const qstate::PureState pa(alpha);
  const qstate::PureState pb(beta);
  const DensityMatrix joint(linalg::kron(pa.density().mat(), pb.density().mat()), Dims{2, 2});

  PurePairContradiction out{};
  out.overlap = c;
  out.min_antisym = qstate::symmetry_stats(joint).antisym();
  out.distance = qstate::trace_distance(pa.density(), pb.density());
  const double x = (1.0 - c * c) / 2.0;
  out.f_distance = 2.0 * std::sqrt(x * (1.0 - x));
  out.distance_gap = std::abs(out.distance - out.f_distance);
  out.infidelity = 1.0 - qstate::fidelity(pa.density(), pb.density());
  out.f_infidelity = 1.0 - std::abs(1.0 - 2.0 * x);
  out.infidelity_gap = std::abs(out.infidelity - out.f_infidelity);
  return out;
}

NogoReport nogo_demo(const OptimizerConfig& cfg) {
  cfg.validate();
  NogoReport report{};
  qstate::Rng rng(cfg.seed);

  // Any Hermitian cost collapses to lambda_1 I + lambda_2 P_as under the twirl.
  {
    constexpr std::size_t d = 2;
    ComplexMatrix g(d * d, d * d);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (auto& z : g.entries()) z = Complex(normal(rng), normal(rng));
    const ComplexMatrix h = linalg::hermitian_part(g);
    const ComplexMatrix t = twirl(h);
    const auto proj = qstate::sym_projectors(d);
    const double l1 = linalg::hs_inner(proj.sym, t).real() / 3.0;
    const double l2 = linalg::hs_inner(proj.antisym, t).real() - l1;
    ComplexMatrix model = ComplexMatrix::identity(d * d) * Complex(l1);
    model += proj.antisym * Complex(l2);
    report.twirl.lambda_identity = l1;
    report.twirl.lambda_antisym = l2;
    report.twirl.decomposition_residual = frob_norm(t - model);
    double defect = 0.0;
    for (int k = 0; k < 20; ++k) {
      const ComplexMatrix uu = qstate::haar_unitary(d, rng);
      const ComplexMatrix w = linalg::kron(uu, uu);
      defect = std::max(defect, frob_norm(w * t * w.adjoint() - t));
    }
    report.twirl.invariance_defect = defect;
  }

  // rho_{1,2} = I/2 -/+ sqrt(mu(1-mu)) Z: the diagonal coupling meets the
  // (1 + F)/2 ceiling, so its antisymmetric weight is the exact minimum.
  for (double mu : {0.0, 0.05, 0.1, 0.2, 0.3, 0.4, 0.5}) {
    const double g = std::sqrt(mu * (1.0 - mu));
    const coupling::Distribution p1(std::vector<double>{0.5 - g, 0.5 + g});
    const coupling::Distribution p2(std::vector<double>{0.5 + g, 0.5 - g});
    const Coupling tau = coupling::diag_coupling(p1, p2);
    ForcingPoint pt{};
    pt.mu = mu;
    pt.min_antisym = 1.0 - tau.sym_overlap();
    pt.distance = qstate::trace_distance(tau.target_a(), tau.target_b());
    pt.infidelity = 1.0 - qstate::fidelity(tau.target_a(), tau.target_b());
    const double x = pt.min_antisym;
    pt.f_distance = 2.0 * std::sqrt(std::max(0.0, x * (1.0 - x)));
    pt.f_infidelity = 1.0 - std::abs(1.0 - 2.0 * x);
    report.forcing.push_back(pt);
  }

  report.contradiction = pure_pair_contradiction(0.5);
  report.endpoints = {pure_pair_contradiction(0.0), pure_pair_contradiction(1.0)};
  return report;
}

}  // namespace qcoupling::optimizer
