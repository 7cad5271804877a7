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

#include "qcoupling/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace qcoupling::coupling {

using linalg::Complex;
using linalg::Keep;
using qstate::Dims;

namespace {

void require_same_length(const Distribution& a, const Distribution& b) {
  if (a.size() != b.size()) {
    throw Error(ErrorKind::LengthMismatch,
                "distribution lengths differ: " + std::to_string(a.size()) + " vs " + std::to_string(b.size()));
  }
}

std::size_t local_dim(const DensityMatrix& rho_ab) {
  const auto& dims = rho_ab.dims();
  if (dims.size() == 2) {
    if (dims[0] != dims[1]) throw Error(ErrorKind::DimensionMismatch, "local dimensions differ");
    return dims[0];
  }
  const auto d = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(rho_ab.dim()))));
  if (d * d != rho_ab.dim()) throw Error(ErrorKind::DimensionMismatch, "state is not on a two-copy space");
  return d;
}

std::pair<DensityMatrix, DensityMatrix> marginals(const DensityMatrix& rho_ab) {
  const std::size_t d = local_dim(rho_ab);
  DensityMatrix joint(rho_ab.mat(), Dims{d, d});
  return {joint.reduced({0}), joint.reduced({1})};
}

double ratio(double a, double b) {
  if (b == 0.0) return std::numeric_limits<double>::infinity();
  return a / b;
}

// Adds w |a (x) b> to `psi` without forming the Kronecker product.
void add_product(ComplexVector& psi, Complex w, const ComplexVector& a, const ComplexVector& b) {
  const std::size_t db = b.size();
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Complex wa = w * a[i];
    if (wa == Complex(0.0)) continue;
    for (std::size_t j = 0; j < db; ++j) psi[i * db + j] += wa * b[j];
  }
}

// Accumulates w |psi><psi| into the Hermitian matrix `acc`.
void add_projector(ComplexMatrix& acc, double w, const ComplexVector& psi) {
  const std::size_t n = psi.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Complex wi = w * psi[i];
    for (std::size_t j = 0; j < n; ++j) acc(i, j) += wi * std::conj(psi[j]);
  }
}

// One side of a diag_transport round: row index k has s_k > t_k (or the
// mirrored case with s and t swapped). Returns false when no partner exists.
bool transport_round(std::size_t k, std::vector<double>& s, std::vector<double>& t, std::vector<bool>& active,
                     std::vector<double>& x, std::size_t n, bool transposed) {
  auto put = [&](std::size_t r, std::size_t c, double v) {
    v = std::max(v, 0.0);
    if (transposed) {
      x[c * n + r] += v;
    } else {
      x[r * n + c] += v;
    }
  };
  const double m = ratio(s[k], t[k]);
  bool matched = false;
  for (std::size_t i = 0; i < n; ++i) {
    if (!active[i] || i == k || !(s[i] < t[i])) continue;
    matched = true;
    const double need = t[i] - s[i];
    // back = flow column k -> row i, fwd = flow row k -> column i, in ratio m.
    const double back = std::isinf(m) ? 0.0 : need / (m - 1.0);
    const double fwd = std::isinf(m) ? need : m * back;
    if (std::abs(fwd - s[k]) <= 1e-13 * s[k]) {
      put(k, i, s[k]);
      put(i, k, t[k]);
      put(i, i, t[i] - s[k]);
      active[i] = false;
      active[k] = false;
      return true;
    }
    if (fwd > s[k]) {
      put(k, i, s[k]);
      put(i, k, t[k]);
      s[i] = std::max(s[i] - t[k], 0.0);
      t[i] = std::max(t[i] - s[k], 0.0);
      active[k] = false;
      return true;
    }
    put(k, i, fwd);
    put(i, k, back);
    s[k] -= fwd;
    t[k] = std::max(t[k] - back, 0.0);
    put(i, i, s[i] - back);
    active[i] = false;
  }
  return matched;
}

}  // namespace

CouplingCheck is_coupling(const DensityMatrix& joint, const DensityMatrix& rho_a, const DensityMatrix& rho_b,
                          double tol) {
  if (joint.dim() != rho_a.dim() * rho_b.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "joint dimension is not the product of the marginal dimensions");
  }
  const ComplexMatrix ma = linalg::partial_trace(joint.mat(), rho_a.dim(), rho_b.dim(), Keep::A);
  const ComplexMatrix mb = linalg::partial_trace(joint.mat(), rho_a.dim(), rho_b.dim(), Keep::B);
  CouplingCheck out;
  out.residual_a = linalg::frob_norm(ma - rho_a.mat());
  out.residual_b = linalg::frob_norm(mb - rho_b.mat());
  out.ok = out.residual_a <= tol && out.residual_b <= tol;
  return out;
}

Coupling::Coupling(DensityMatrix joint, DensityMatrix target_a, DensityMatrix target_b, double tol)
    : joint_(DensityMatrix(joint.mat(), Dims{target_a.dim(), target_b.dim()})),
      target_a_(std::move(target_a)),
      target_b_(std::move(target_b)),
      tol_(tol) {
  check_ = is_coupling(joint_, target_a_, target_b_, tol_);
  if (!check_.ok) {
    throw Error(ErrorKind::MarginalMismatch, "marginal residuals " + std::to_string(check_.residual_a) + ", " +
                                                 std::to_string(check_.residual_b) + " exceed tolerance");
  }
}

Coupling Coupling::product(const DensityMatrix& rho_a, const DensityMatrix& rho_b) {
  DensityMatrix joint(linalg::kron(rho_a.mat(), rho_b.mat()), Dims{rho_a.dim(), rho_b.dim()});
  return Coupling(std::move(joint), rho_a, rho_b);
}

double Coupling::sym_overlap() const { return qstate::symmetry_stats(joint_).sym(); }

Distribution::Distribution(std::vector<double> p) : p_(std::move(p)) {
  if (p_.empty()) throw Error(ErrorKind::InvalidDistribution, "empty distribution");
  double total = 0.0;
  for (auto& x : p_) {
    if (!std::isfinite(x) || x < -1e-12) throw Error(ErrorKind::InvalidDistribution, "negative or non-finite entry");
    x = std::max(x, 0.0);
    total += x;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw Error(ErrorKind::InvalidDistribution, "entries sum to " + std::to_string(total));
  }
}

std::vector<double> TransportPlan::row_sums() const {
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) out[i] += (*this)(i, j);
  }
  return out;
}

std::vector<double> TransportPlan::col_sums() const {
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) out[j] += (*this)(i, j);
  }
  return out;
}

double TransportPlan::contract_residual() const {
  double worst = 0.0;
  const auto rows = row_sums();
  for (std::size_t i = 0; i < n; ++i) worst = std::max(worst, std::abs(rows[i] - row_contract[i]));
  if (col_contract) {
    const auto cols = col_sums();
    for (std::size_t j = 0; j < n; ++j) worst = std::max(worst, std::abs(cols[j] - (*col_contract)[j]));
  }
  return worst;
}

double TransportPlan::mismatch_mass() const {
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) total += (*this)(i, j);
    }
  }
  return total;
}

TransportPlan classical_tv_coupling(const Distribution& mu, const Distribution& nu) {
  require_same_length(mu, nu);
  const std::size_t n = mu.size();
  TransportPlan plan{n, std::vector<double>(n * n, 0.0), mu.values(), nu.values()};
  std::vector<double> excess(n);
  std::vector<double> deficit(n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double common = std::min(mu[i], nu[i]);
    plan.at(i, i) = common;
    excess[i] = mu[i] - common;
    deficit[i] = nu[i] - common;
    total += excess[i];
  }
  if (total <= 0.0) return plan;
  for (std::size_t i = 0; i < n; ++i) {
    if (excess[i] == 0.0) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) plan.at(i, j) = excess[i] * deficit[j] / total;
    }
  }
  return plan;
}

TransportPlan diag_transport(const Distribution& big_s, const Distribution& big_t, const TransportObserver& observer) {
  require_same_length(big_s, big_t);
  const std::size_t n = big_s.size();
  std::vector<double> s = big_s.values();
  std::vector<double> t = big_t.values();
  std::vector<double> x(n * n, 0.0);
  std::vector<bool> active(n, true);
  auto remaining = [&] { return static_cast<std::size_t>(std::count(active.begin(), active.end(), true)); };

  while (remaining() > 1) {
    // Entries with no mass left on either side carry no obligation.
    bool pruned = false;
    for (std::size_t i = 0; i < n; ++i) {
      if (active[i] && s[i] == 0.0 && t[i] == 0.0) {
        active[i] = false;
        pruned = true;
      }
    }
    if (pruned) continue;

    std::size_t k = n;
    double best = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!active[i]) continue;
      const double r = std::max(ratio(s[i], t[i]), ratio(t[i], s[i]));
      if (r > best) {
        best = r;
        k = i;
      }
    }
    if (observer) {
      TransportRound round;
      for (std::size_t i = 0; i < n; ++i) {
        if (!active[i]) continue;
        round.active.push_back(i);
        round.active_s += s[i];
        round.active_t += t[i];
      }
      round.pivot = k;
      observer(round);
    }

    if (std::abs(s[k] - t[k]) <= 1e-13 * std::max(s[k], t[k])) {
      x[k * n + k] += s[k];
      active[k] = false;
      continue;
    }
    const bool matched = s[k] > t[k] ? transport_round(k, s, t, active, x, n, false)
                                     : transport_round(k, t, s, active, x, n, true);
    if (!matched) {
      // Only reachable through rounding: nothing left to pair with.
      x[k * n + k] += std::min(s[k], t[k]);
      active[k] = false;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (active[i]) x[i * n + i] += s[i];
  }
  return TransportPlan{n, std::move(x), big_s.values(), big_t.values()};
}

double transport_asymmetry(const TransportPlan& plan) {
  double total = 0.0;
  for (std::size_t i = 0; i < plan.n; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      const double gap = std::sqrt(plan(i, j)) - std::sqrt(plan(j, i));
      total += gap * gap;
    }
  }
  return total;
}

double transport_asymmetry_bound(const Distribution& s, const Distribution& t) {
  require_same_length(s, t);
  double total = 0.0;
  double smallest = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double gap = std::sqrt(s[i]) - std::sqrt(t[i]);
    total += gap * gap;
    smallest = std::min(smallest, gap * gap);
  }
  return total - smallest;
}

Coupling diag_coupling(const Distribution& lambda_a, const Distribution& lambda_b) {
  const TransportPlan plan = diag_transport(lambda_a, lambda_b);
  const std::size_t d = plan.n;
  ComplexMatrix joint(d * d, d * d);
  for (std::size_t i = 0; i < d; ++i) {
    joint(i * d + i, i * d + i) = plan(i, i);
    for (std::size_t j = 0; j < i; ++j) {
      const double a = std::sqrt(plan(i, j));
      const double b = std::sqrt(plan(j, i));
      const std::size_t ij = i * d + j;
      const std::size_t ji = j * d + i;
      joint(ij, ij) += a * a;
      joint(ji, ji) += b * b;
      joint(ij, ji) += a * b;
      joint(ji, ij) += a * b;
    }
  }
  return Coupling(DensityMatrix(std::move(joint), Dims{d, d}), DensityMatrix::diagonal(lambda_a.values()),
                  DensityMatrix::diagonal(lambda_b.values()));
}

double diag_lower_bound(const Distribution& lambda_a, const Distribution& lambda_b) {
  require_same_length(lambda_a, lambda_b);
  double smallest = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < lambda_a.size(); ++i) {
    const double gap = std::sqrt(lambda_a[i]) - std::sqrt(lambda_b[i]);
    smallest = std::min(smallest, gap * gap);
  }
  return qstate::classical_fidelity(lambda_a.values(), lambda_b.values()) + smallest / 2.0;
}

double RankTwoPair::alignment_sum() const {
  const double s_total = s[0] + s[1];
  const double t_total = t[0] + t[1];
  double total = 0.0;
  for (std::size_t i = 0; i < 2; ++i) {
    total += std::sqrt(s[i] / s_total * t[i] / t_total) * linalg::inner(v[i], u[i]).real();
  }
  return total;
}

namespace {

// Unnormalized rank-2 coupling of total mass s_total: returns
// s_total * tau for the normalized pair.
ComplexMatrix rank2_block(const RankTwoPair& pair) {
  const std::size_t d = pair.u[0].size();
  for (const auto* vecs : {&pair.u, &pair.v}) {
    for (const auto& vec : *vecs) {
      if (vec.size() != d) throw Error(ErrorKind::DimensionMismatch, "rank-2 vectors differ in length");
    }
  }
  const double s_total = pair.s[0] + pair.s[1];
  const double t_total = pair.t[0] + pair.t[1];
  if (!(s_total > 0.0) || !(t_total > 0.0) || pair.s[0] < 0.0 || pair.s[1] < 0.0 || pair.t[0] < 0.0 ||
      pair.t[1] < 0.0) {
    throw Error(ErrorKind::InvalidDistribution, "rank-2 weights must be nonnegative with positive totals");
  }
  const std::array<double, 2> s{pair.s[0] / s_total, pair.s[1] / s_total};
  const std::array<double, 2> t{pair.t[0] / t_total, pair.t[1] / t_total};

  auto weighted = [](double w) { return w > 0.0; };
  if (weighted(t[0]) && weighted(t[1]) && std::abs(linalg::inner(pair.v[0], pair.v[1])) > 1e-7) {
    throw Error(ErrorKind::AlignmentViolation, "<v_1|v_2> is not zero");
  }
  for (std::size_t i = 0; i < 2; ++i) {
    if (!weighted(s[i]) || !weighted(t[i])) continue;
    const Complex overlap = linalg::inner(pair.v[i], pair.u[i]);
    if (std::abs(overlap.imag()) > 1e-7 || overlap.real() < -1e-7) {
      throw Error(ErrorKind::AlignmentViolation, "<v_i|u_i> is not real and nonnegative");
    }
  }

  const Complex u12 = linalg::inner(pair.u[0], pair.u[1]);
  // <u_1|u_2> = r e^{-i theta}; theta is irrelevant when r = 0.
  const double theta = std::abs(u12) > 0.0 ? -std::arg(u12) : 0.0;
  const Complex phase = std::polar(1.0, 2.0 * theta);

  ComplexVector first(d * d, 0.0);
  add_product(first, std::sqrt(s[0] * t[0]), pair.u[0], pair.v[0]);
  add_product(first, -std::sqrt(s[1] * t[1]) * phase, pair.u[1], pair.v[1]);
  ComplexVector second(d * d, 0.0);
  add_product(second, std::sqrt(s[0] * t[1]), pair.u[0], pair.v[1]);
  add_product(second, std::sqrt(s[1] * t[0]), pair.u[1], pair.v[0]);

  ComplexMatrix tau(d * d, d * d);
  add_projector(tau, s_total, first);
  add_projector(tau, s_total, second);
  return tau;
}

DensityMatrix mixture_of(const std::array<double, 2>& w, const std::array<ComplexVector, 2>& vecs) {
  const double total = w[0] + w[1];
  ComplexMatrix m(vecs[0].size(), vecs[0].size());
  for (std::size_t i = 0; i < 2; ++i) add_projector(m, w[i] / total, vecs[i]);
  return DensityMatrix(std::move(m));
}

}  // namespace

Coupling rank2_coupling(const RankTwoPair& pair) {
  ComplexMatrix tau = rank2_block(pair);
  tau *= 1.0 / (pair.s[0] + pair.s[1]);
  const std::size_t d = pair.u[0].size();
  return Coupling(DensityMatrix(std::move(tau), Dims{d, d}), mixture_of(pair.s, pair.u), mixture_of(pair.t, pair.v));
}

TransportPlan mass_split(const Distribution& s, const Distribution& t) {
  require_same_length(s, t);
  const std::size_t n = s.size();
  TransportPlan plan{n, std::vector<double>(n * n, 0.0), std::vector<double>(n, 1.0), std::nullopt};
  std::vector<double> c(n, 1.0);
  std::vector<double> gap(n);
  // side: +1 for s_i > t_i, -1 for s_i < t_i, 0 once settled.
  std::vector<int> side(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    gap[i] = std::abs(s[i] - t[i]);
    if (gap[i] < 1e-12) {
      plan.at(i, i) = 1.0;
    } else {
      side[i] = s[i] > t[i] ? 1 : -1;
    }
  }
  auto open_on = [&](int which) {
    return std::any_of(side.begin(), side.end(), [which](int v) { return v == which; });
  };
  while (open_on(1) || open_on(-1)) {
    std::size_t k = n;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
      if (side[i] != 0 && c[i] * gap[i] < best) {
        best = c[i] * gap[i];
        k = i;
      }
    }
    std::size_t partner = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (side[i] == -side[k]) {
        partner = i;
        break;
      }
    }
    if (partner == n) {
      // Rounding leftovers: the remaining weight c_k * gap_k is at the 1e-15
      // level and stays on the diagonal.
      plan.at(k, k) += c[k];
      side[k] = 0;
      continue;
    }
    plan.at(k, partner) += c[k];
    const double back = std::min(c[k] * gap[k] / gap[partner], c[partner]);
    plan.at(partner, k) += back;
    c[partner] -= back;
    c[k] = 0.0;
    side[k] = 0;
    if (c[partner] <= 0.0) {
      c[partner] = 0.0;
      side[partner] = 0;
    }
  }
  return plan;
}

double balance_residual(const TransportPlan& plan, const Distribution& s, const Distribution& t) {
  double worst = 0.0;
  for (std::size_t i = 0; i < plan.n; ++i) {
    for (std::size_t j = 0; j < plan.n; ++j) {
      const double lhs = plan(i, j) * s[i] + plan(j, i) * s[j];
      const double rhs = plan(i, j) * t[i] + plan(j, i) * t[j];
      worst = std::max(worst, std::abs(lhs - rhs));
    }
  }
  return worst;
}

Coupling general_coupling(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim()) throw Error(ErrorKind::DimensionMismatch, "general_coupling needs equal dimensions");
  const std::size_t d = rho.dim();
  const auto aligned = qstate::uhlmann_aligned(rho, sigma);
  const Distribution s(aligned.s);
  const Distribution t(aligned.t);
  const TransportPlan x = mass_split(s, t);

  ComplexMatrix tau(d * d, d * d);
  for (std::size_t i = 0; i < d; ++i) {
    const double mass = s[i] * x(i, i);
    if (mass < 1e-12) continue;
    ComplexVector psi(d * d, 0.0);
    add_product(psi, 1.0, aligned.u[i], aligned.v[i]);
    add_projector(tau, mass, psi);
  }
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i + 1; j < d; ++j) {
      const double mass = s[i] * x(i, j) + s[j] * x(j, i);
      if (mass < 1e-12) continue;
      RankTwoPair pair;
      pair.s = {s[i] * x(i, j), s[j] * x(j, i)};
      pair.t = {t[i] * x(i, j), t[j] * x(j, i)};
      pair.u = {aligned.u[i], aligned.u[j]};
      pair.v = {aligned.v[i], aligned.v[j]};
      tau += rank2_block(pair);
    }
  }
  const double total = tau.trace().real();
  if (!(total > 0.0)) throw Error(ErrorKind::NumericalFailure, "assembled coupling has no mass");
  tau *= 1.0 / total;
  return Coupling(DensityMatrix(std::move(tau), Dims{d, d}), rho, sigma);
}

Ensemble::Ensemble(std::vector<EnsembleMember> members) : members_(std::move(members)) {
  if (members_.empty()) throw Error(ErrorKind::InvalidInput, "empty ensemble");
  double total = 0.0;
  for (const auto& m : members_) {
    if (m.state.dim() != members_.front().state.dim()) {
      throw Error(ErrorKind::DimensionMismatch, "ensemble members differ in dimension");
    }
    if (!(m.weight >= 0.0)) throw Error(ErrorKind::InvalidDistribution, "negative ensemble weight");
    total += m.weight;
  }
  if (std::abs(total - 1.0) > 1e-9) throw Error(ErrorKind::InvalidDistribution, "ensemble weights do not sum to 1");
}

DensityMatrix Ensemble::mixture() const {
  const std::size_t n = members_.front().state.dim();
  ComplexMatrix m(n, n);
  for (const auto& member : members_) add_projector(m, member.weight, member.state.vec());
  return DensityMatrix(std::move(m), members_.front().state.dims());
}

double Ensemble::average_cost(const ComplexMatrix& h) const {
  double total = 0.0;
  for (const auto& member : members_) {
    const auto& v = member.state.vec();
    total += member.weight * linalg::inner(v, h * std::span<const Complex>(v)).real();
  }
  return total;
}

namespace {

// Real coordinates of (psi, Tr(H psi), 1) for a pure state psi.
std::vector<double> embed(const ComplexVector& v, const ComplexMatrix& h) {
  const std::size_t n = v.size();
  std::vector<double> out;
  out.reserve(n * n + 2);
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(std::norm(v[i]));
    for (std::size_t j = i + 1; j < n; ++j) {
      const Complex z = v[i] * std::conj(v[j]);
      out.push_back(z.real());
      out.push_back(z.imag());
    }
  }
  out.push_back(linalg::inner(v, h * std::span<const Complex>(v)).real());
  out.push_back(1.0);
  return out;
}

// A nonzero c with sum_i c_i points[i] = 0, or empty if the points are
// linearly independent. Gaussian elimination with partial pivoting.
std::vector<double> null_combination(const std::vector<std::vector<double>>& points) {
  const std::size_t cols = points.size();
  const std::size_t rows = points.front().size();
  std::vector<std::vector<double>> a(rows, std::vector<double>(cols));
  double scale = 0.0;
  for (std::size_t j = 0; j < cols; ++j) {
    for (std::size_t i = 0; i < rows; ++i) {
      a[i][j] = points[j][i];
      scale = std::max(scale, std::abs(a[i][j]));
    }
  }
  const double eps = 1e-11 * std::max(scale, 1.0);
  std::vector<std::size_t> pivot_col;
  std::size_t r = 0;
  std::size_t free_col = cols;
  for (std::size_t j = 0; j < cols; ++j) {
    std::size_t best = r;
    for (std::size_t i = r; i < rows; ++i) {
      if (std::abs(a[i][j]) > std::abs(a[best][j])) best = i;
    }
    if (r >= rows || std::abs(a[best][j]) <= eps) {
      free_col = j;
      break;
    }
    std::swap(a[r], a[best]);
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || a[i][j] == 0.0) continue;
      const double f = a[i][j] / a[r][j];
      for (std::size_t c = j; c < cols; ++c) a[i][c] -= f * a[r][c];
    }
    pivot_col.push_back(j);
    ++r;
  }
  if (free_col == cols) return {};
  std::vector<double> c(cols, 0.0);
  c[free_col] = 1.0;
  for (std::size_t p = 0; p < pivot_col.size(); ++p) c[pivot_col[p]] = -a[p][free_col] / a[p][pivot_col[p]];
  return c;
}

}  // namespace

Ensemble caratheodory_reduce(const Ensemble& ensemble, const ComplexMatrix& h) {
  const std::size_t n = ensemble.members().front().state.dim();
  if (h.rows() != n || h.cols() != n) throw Error(ErrorKind::DimensionMismatch, "cost operator does not match states");
  const auto d = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(n))));
  const std::size_t limit = d * d * d * d + 1;
  if (ensemble.size() <= limit) return ensemble;

  std::vector<EnsembleMember> members;
  for (const auto& m : ensemble.members()) {
    if (m.weight > 0.0) members.push_back(m);
  }
  std::vector<std::vector<double>> points;
  for (const auto& m : members) points.push_back(embed(m.state.vec(), h));

  while (members.size() > 1) {
    std::vector<double> c = null_combination(points);
    if (c.empty()) break;
    if (std::none_of(c.begin(), c.end(), [](double v) { return v > 0.0; })) {
      for (auto& v : c) v = -v;
    }
    std::size_t drop = members.size();
    double step = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (c[i] > 0.0 && members[i].weight / c[i] < step) {
        step = members[i].weight / c[i];
        drop = i;
      }
    }
    for (std::size_t i = 0; i < c.size(); ++i) members[i].weight = std::max(members[i].weight - step * c[i], 0.0);
    members[drop].weight = 0.0;
    std::vector<EnsembleMember> kept;
    std::vector<std::vector<double>> kept_points;
    for (std::size_t i = 0; i < members.size(); ++i) {
      if (members[i].weight > 0.0) {
        kept.push_back(std::move(members[i]));
        kept_points.push_back(std::move(points[i]));
      }
    }
    members = std::move(kept);
    points = std::move(kept_points);
  }
  double total = 0.0;
  for (const auto& m : members) total += m.weight;
  for (auto& m : members) m.weight /= total;
  return Ensemble(std::move(members));
}

FidelityBoundReport check_fidelity_bound(const DensityMatrix& rho_ab) {
  const auto [rho_a, rho_b] = marginals(rho_ab);
  const auto stats = qstate::symmetry_stats(DensityMatrix(rho_ab.mat(), Dims{rho_a.dim(), rho_b.dim()}));
  FidelityBoundReport out{};
  out.fidelity = qstate::fidelity(rho_a, rho_b);
  out.distance_pq = std::abs(stats.antisym() - stats.sym());
  out.slack = out.fidelity - out.distance_pq;
  return out;
}

DistanceBoundReport check_distance_bound(const DensityMatrix& rho_ab) {
  const auto [rho_a, rho_b] = marginals(rho_ab);
  const auto stats = qstate::symmetry_stats(DensityMatrix(rho_ab.mat(), Dims{rho_a.dim(), rho_b.dim()}));
  DistanceBoundReport out{};
  out.distance = qstate::trace_distance(rho_a, rho_b);
  out.fidelity_pq = 2.0 * std::sqrt(std::max(stats.antisym(), 0.0) * std::max(stats.sym(), 0.0));
  out.slack = out.fidelity_pq - out.distance;
  return out;
}

}  // namespace qcoupling::coupling
