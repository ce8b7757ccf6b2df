// Copyright 2026 The ptmoments Authors
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

// Entanglement criteria as pure functions of moments or spectra.
//
// Every verdict carries two numbers. `margin` is the raw signed distance
// to the boundary in the criterion's own units. `score` is the same
// quantity made scale-free (relative to the size of the terms that
// cancel), and it is `score` that is compared with the decision
// tolerance. Moments of large noisy states are tiny, so an absolute
// threshold on `margin` would be meaningless there.

#include "ptm/linalg.hpp"
#include "ptm/precision.hpp"
#include "ptm/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace ptm {

enum class Status { entangled, inconclusive };

inline const char* to_string(Status s) { return s == Status::entangled ? "Entangled" : "Inconclusive"; }

template <class Real>
struct Verdict {
  Status status = Status::inconclusive;
  Real margin{0};
  Real score{0};
  std::vector<Real> witness;  // criterion-specific payload, may be empty
  std::string detail;

  bool entangled() const { return status == Status::entangled; }
};

namespace detail {

template <class Real>
Verdict<Real> decide(Real margin, Real score, const Real& tol) {
  Verdict<Real> v;
  v.margin = std::move(margin);
  v.score = std::move(score);
  v.status = v.score > tol ? Status::entangled : Status::inconclusive;
  return v;
}

}  // namespace detail

/// [H]_{ij} = p_{i+j+1} for 0-based i, j < (m+1)/2.
template <class Real>
struct HankelMatrix {
  int order = 0;  // m, odd
  SymmetricMatrix<Real> entries;

  HankelMatrix(const MomentVector<Real>& p, int m) : order(m), entries((m + 1) / 2) {
    if (m < 1 || m % 2 == 0)
      throw std::invalid_argument("Hankel matrix needs an odd order, got m = " + std::to_string(m));
    if (p.size() < m)
      throw std::invalid_argument("Hankel matrix of order " + std::to_string(m) + " needs moments up to p_" +
                                  std::to_string(m));
    const int dim = (m + 1) / 2;
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) entries(i, j) = p.p(i + j + 1);
  }

  int dim() const { return entries.size; }

  /// c^T H c
  Real quadratic_form(const std::vector<Real>& c) const {
    if (static_cast<int>(c.size()) != dim()) throw std::invalid_argument("quadratic_form: dimension mismatch");
    Real s(0);
    for (int i = 0; i < dim(); ++i)
      for (int j = 0; j < dim(); ++j) s += c[static_cast<size_t>(i)] * entries(i, j) * c[static_cast<size_t>(j)];
    return s;
  }
};

/// (k,l,m)-PPT: entangled if p_l > p_k^x p_m^{1-x}, x = (m-l)/(m-k).
/// Score is the margin relative to the Hoelder bound.
template <class Real>
Verdict<Real> klm_ppt(const MomentVector<Real>& p, int k, int l, int m, Real tol = default_tolerance<Real>()) {
  using std::exp;
  using std::log;
  if (!(1 <= k && k < l && l < m)) throw std::invalid_argument("klm_ppt: need 1 <= k < l < m");
  if (m > p.size()) throw std::invalid_argument("klm_ppt: moment p_" + std::to_string(m) + " not available");
  const Real& pk = p.p(k);
  const Real& pm = p.p(m);
  if (!(pk > Real(0)) || !(pm > Real(0)))
    throw std::domain_error("klm_ppt: p_k and p_m must be positive");
  const Real x = Real(m - l) / Real(m - k);
  const Real bound = exp(x * log(pk) + (Real(1) - x) * log(pm));
  const Real margin = p.p(l) - bound;
  auto v = detail::decide(margin, Real(margin / bound), tol);
  v.witness = {Real(k), Real(l), Real(m)};
  return v;
}

/// Stieltjes-m: entangled if the order-m Hankel matrix is not PSD.
/// Margin is -(min eigenvalue of H). The decision uses the min eigenvalue
/// of D H D with D = diag(|H_ii|^{-1/2}), which has the same inertia.
template <class Real>
Verdict<Real> stieltjes(const MomentVector<Real>& p, int m, Real tol = default_tolerance<Real>()) {
  using std::abs;
  using std::sqrt;
  if (m % 2 == 0)
    throw std::invalid_argument("stieltjes: order m must be odd, got " + std::to_string(m));
  const HankelMatrix<Real> h(p, m);
  const int dim = h.dim();
  std::vector<Real> scale(static_cast<size_t>(dim));
  for (int i = 0; i < dim; ++i) {
    const Real d = abs(h.entries(i, i));
    scale[static_cast<size_t>(i)] = d > Real(0) ? Real(1) / sqrt(d) : Real(1);
  }
  SymmetricMatrix<Real> normalized(dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      normalized(i, j) = scale[static_cast<size_t>(i)] * h.entries(i, j) * scale[static_cast<size_t>(j)];
  const Real raw_min = symmetric_eigenvalues(h.entries).front();
  const Real normalized_min = symmetric_eigenvalues(std::move(normalized)).front();
  return detail::decide(Real(-raw_min), Real(-normalized_min), tol);
}

/// p_3-PPT, i.e. Stieltjes-3.
template <class Real>
Verdict<Real> p3_ppt(const MomentVector<Real>& p, Real tol = default_tolerance<Real>()) {
  return stieltjes(p, 3, tol);
}

/// Elementary symmetric polynomials e_0..e_m from power sums.
template <class Real>
std::vector<Real> elementary_symmetric(const MomentVector<Real>& p, int m) {
  if (m < 1 || m > p.size()) throw std::invalid_argument("elementary_symmetric: need 1 <= m <= len(p)");
  std::vector<Real> e(static_cast<size_t>(m + 1), Real(0));
  e[0] = Real(1);
  for (int j = 1; j <= m; ++j) {
    Real s(0);
    for (int i = 1; i <= j; ++i) {
      const Real term = e[static_cast<size_t>(j - i)] * p.p(i);
      if (i % 2 == 1) s += term;
      else s -= term;
    }
    e[static_cast<size_t>(j)] = s / Real(j);
  }
  return e;
}

/// Descartes-m: entangled if some e_j < 0 for j <= m. Margin is
/// max_j(-e_j); each e_j is scored against the magnitude of the terms in
/// its Newton recursion. Witness holds the worst j.
template <class Real>
Verdict<Real> descartes(const MomentVector<Real>& p, int m, Real tol = default_tolerance<Real>()) {
  using std::abs;
  const auto e = elementary_symmetric(p, m);
  Real margin = -e[1];
  Real score(0);
  int worst = 1;
  bool first = true;
  for (int j = 1; j <= m; ++j) {
    Real scale(0);
    for (int i = 1; i <= j; ++i) scale += abs(e[static_cast<size_t>(j - i)] * p.p(i));
    scale /= Real(j);
    const Real ej = e[static_cast<size_t>(j)];
    const Real s = scale > Real(0) ? Real(-ej / scale) : Real(0);
    if (-ej > margin) margin = -ej;
    if (first || s > score) {
      score = s;
      worst = j;
      first = false;
    }
  }
  auto v = detail::decide(margin, score, tol);
  v.witness = {Real(worst)};
  return v;
}

/// Lower bound on the log-negativity from Schatten moments p~_l, p~_m:
/// log2(p~_l)/x - ((1-x)/x) log2(p~_m), x = (m-l)/(m-1).
template <class Real>
Real negativity_lower_bound(const std::vector<Real>& schatten, int l, int m) {
  using std::log2;
  if (!(1 < l && l < m)) throw std::invalid_argument("negativity_lower_bound: need 1 < l < m");
  if (m > static_cast<int>(schatten.size()))
    throw std::invalid_argument("negativity_lower_bound: Schatten moment " + std::to_string(m) + " not available");
  const Real& pl = schatten[static_cast<size_t>(l - 1)];
  const Real& pm = schatten[static_cast<size_t>(m - 1)];
  if (!(pl > Real(0)) || !(pm > Real(0)))
    throw std::domain_error("negativity_lower_bound: moments must be positive");
  const Real x = Real(m - l) / Real(m - 1);
  return log2(pl) / x - ((Real(1) - x) / x) * log2(pm);
}

/// Coefficients (ascending) of f(x) = prod over the other distinct
/// eigenvalues of (x - lambda_i), padded to (m+1)/2 entries. For the most
/// negative eigenvalue lambda_1 this gives c^T H_m c = mu_1 lambda_1 f(lambda_1)^2.
template <class Real>
std::vector<Real> stieltjes_witness(const Spectrum<Real>& s, int m, Real merge_tol = Real(1e-12)) {
  const auto distinct = s.merged(merge_tol);
  if (distinct.entries.empty() || !(distinct.entries.front().lambda < Real(0)))
    throw std::invalid_argument("stieltjes_witness: spectrum has no negative eigenvalue");
  const int count = static_cast<int>(distinct.entries.size());
  if (m % 2 == 0) throw std::invalid_argument("stieltjes_witness: order m must be odd");
  if (m < 2 * count - 1)
    throw std::invalid_argument("stieltjes_witness: m = " + std::to_string(m) + " is below 2N-1 = " +
                                std::to_string(2 * count - 1));
  std::vector<Real> c{Real(1)};
  for (int i = 1; i < count; ++i) {
    const Real& root = distinct.entries[static_cast<size_t>(i)].lambda;
    std::vector<Real> next(c.size() + 1, Real(0));
    for (size_t d = 0; d < c.size(); ++d) {
      next[d + 1] += c[d];
      next[d] -= root * c[d];
    }
    c = std::move(next);
  }
  c.resize(static_cast<size_t>((m + 1) / 2), Real(0));
  return c;
}

/// Entangled if F > 1/2.
template <class Real>
Verdict<Real> fidelity_criterion(const Real& fidelity, Real tol = default_tolerance<Real>()) {
  if (fidelity < Real(-1e-12) || fidelity > Real(1) + Real(1e-12))
    throw std::invalid_argument("fidelity_criterion: fidelity outside [0,1]");
  const Real margin = fidelity - Real(1) / 2;
  return detail::decide(margin, margin, tol);
}

/// Entangled if a marginal is less pure than the global state.
template <class Real>
Verdict<Real> purity_criterion(const Real& global_purity, const Real& subsystem_purity,
                               Real tol = default_tolerance<Real>()) {
  if (!(global_purity > Real(0)) || !(subsystem_purity > Real(0)) || global_purity > Real(1) + Real(1e-12) ||
      subsystem_purity > Real(1) + Real(1e-12))
    throw std::invalid_argument("purity_criterion: purities must lie in (0,1]");
  const Real margin = global_purity - subsystem_purity;
  return detail::decide(margin, Real(margin / global_purity), tol);
}

/// Entangled if rho^Gamma has a negative eigenvalue. Scored relative to
/// the largest |eigenvalue|.
template <class Real>
Verdict<Real> ppt_verdict(const Spectrum<Real>& s, Real tol = default_tolerance<Real>()) {
  const Real margin = -s.min_eigenvalue();
  const Real top = s.max_abs_eigenvalue();
  return detail::decide(margin, top > Real(0) ? Real(margin / top) : Real(0), tol);
}

}  // namespace ptm
