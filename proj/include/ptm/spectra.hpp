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

// Partial-transpose spectra with exact multiplicities, and PT moments
// evaluated from them in configurable precision.

#include "ptm/precision.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ptm {

/// PT moments p_1..p_m, and the matching Schatten moments when known.
template <class Real>
struct MomentVector {
  std::vector<Real> values;    // values[k-1] = p_k
  std::vector<Real> schatten;  // schatten[k-1] = sum |lambda|^k, may be empty

  int size() const { return static_cast<int>(values.size()); }

  const Real& p(int k) const {
    if (k < 1 || k > size())
      throw std::out_of_range("moment p_" + std::to_string(k) + " not available (have " +
                              std::to_string(size()) + ")");
    return values[static_cast<size_t>(k - 1)];
  }

  const Real& ptilde(int k) const {
    if (k < 1 || k > static_cast<int>(schatten.size()))
      throw std::out_of_range("Schatten moment " + std::to_string(k) + " not available");
    return schatten[static_cast<size_t>(k - 1)];
  }
};

template <class Real>
struct SpectrumEntry {
  Real lambda;
  BigInt mu;
};

/// Eigenvalues of rho^Gamma with exact multiplicities on 2^n dimensions.
template <class Real>
struct Spectrum {
  int n = 0;
  std::vector<SpectrumEntry<Real>> entries;

  BigInt total_multiplicity() const {
    BigInt s = 0;
    for (const auto& e : entries) s += e.mu;
    return s;
  }

  Real trace() const {
    Real s(0);
    for (const auto& e : entries) s += to_real<Real>(e.mu) * e.lambda;
    return s;
  }

  /// Smallest eigenvalue among entries of nonzero multiplicity.
  Real min_eigenvalue() const {
    bool seen = false;
    Real best(0);
    for (const auto& e : entries) {
      if (e.mu == 0) continue;
      if (!seen || e.lambda < best) best = e.lambda;
      seen = true;
    }
    if (!seen) throw std::logic_error("empty spectrum");
    return best;
  }

  Real max_abs_eigenvalue() const {
    using std::abs;
    Real best(0);
    for (const auto& e : entries)
      if (e.mu != 0 && abs(e.lambda) > best) best = abs(e.lambda);
    return best;
  }

  /// Entries of nonzero multiplicity merged within `tol` (absolute),
  /// ascending by eigenvalue. Each cluster keeps its smallest eigenvalue.
  Spectrum merged(const Real& tol) const {
    std::vector<SpectrumEntry<Real>> sorted;
    for (const auto& e : entries)
      if (e.mu != 0) sorted.push_back(e);
    std::sort(sorted.begin(), sorted.end(),
              [](const auto& a, const auto& b) { return a.lambda < b.lambda; });
    Spectrum out;
    out.n = n;
    // Chain clustering: compare against the previous member, not the head.
    Real tail(0);
    for (const auto& e : sorted) {
      if (!out.entries.empty() && e.lambda - tail <= tol) {
        out.entries.back().mu += e.mu;
      } else {
        out.entries.push_back(e);
      }
      tail = e.lambda;
    }
    return out;
  }

  /// Builds a multiplicity-one spectrum from plain eigenvalues.
  static Spectrum from_eigenvalues(int qubits, std::span<const double> eigenvalues) {
    Spectrum s;
    s.n = qubits;
    for (double v : eigenvalues) s.entries.push_back({Real(v), BigInt(1)});
    return s;
  }
};

inline BigInt binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  BigInt r = 1;
  for (int i = 1; i <= k; ++i) {
    r *= (n - k + i);
    r /= i;
  }
  return r;
}

inline BigInt pow2(int e) { return BigInt(1) << e; }

/// Locally depolarized GHZ_n across the balanced cut: lambda_j for
/// j = 0..n with multiplicity C(n,j) - 2 delta_{j,n/2}, then lambda_+ and
/// lambda_- with multiplicity one.
template <class Real>
Spectrum<Real> ghz_local_spectrum(int n, const Real& eps) {
  using std::pow;
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("ghz_local_spectrum: n must be even and >= 2");
  if (eps < Real(0) || eps > Real(1)) throw std::invalid_argument("ghz_local_spectrum: eps outside [0,1]");
  const Real keep = Real(1) - eps / 2;
  const Real flip = eps / 2;
  // Integer powers; pow(0, 0) must be 1.
  auto ipow = [](const Real& base, int e) {
    Real r(1);
    Real b = base;
    while (e > 0) {
      if (e & 1) r *= b;
      b *= b;
      e >>= 1;
    }
    return r;
  };
  std::vector<Real> keep_pow(static_cast<size_t>(n + 1)), flip_pow(static_cast<size_t>(n + 1));
  for (int j = 0; j <= n; ++j) {
    keep_pow[j] = ipow(keep, j);
    flip_pow[j] = ipow(flip, j);
  }
  Spectrum<Real> s;
  s.n = n;
  for (int j = 0; j <= n; ++j) {
    Real lambda = (keep_pow[n - j] * flip_pow[j] + keep_pow[j] * flip_pow[n - j]) / 2;
    BigInt mu = binomial(n, j) - (j == n / 2 ? 2 : 0);
    s.entries.push_back({lambda, mu});
  }
  const Real center = keep_pow[n / 2] * flip_pow[n / 2];
  const Real coherence = ipow(Real(1) - eps, n) / 2;
  s.entries.push_back({center + coherence, BigInt(1)});
  s.entries.push_back({center - coherence, BigInt(1)});
  return s;
}

/// Globally depolarized stabilizer state with r Bell pairs across the cut.
template <class Real>
Spectrum<Real> stab_global_spectrum(int n, int r, const Real& eps) {
  if (n < 1) throw std::invalid_argument("stab_global_spectrum: n must be positive");
  if (r < 0 || 2 * r > n) throw std::invalid_argument("stab_global_spectrum: need 0 <= r <= n/2");
  if (eps < Real(0) || eps > Real(1)) throw std::invalid_argument("stab_global_spectrum: eps outside [0,1]");
  const Real floor = eps / to_real<Real>(pow2(n));
  const Real peak = (Real(1) - eps) / to_real<Real>(pow2(r));
  Spectrum<Real> s;
  s.n = n;
  s.entries.push_back({floor + peak, (pow2(2 * r) + pow2(r)) / 2});
  s.entries.push_back({floor - peak, (pow2(2 * r) - pow2(r)) / 2});
  s.entries.push_back({floor, pow2(n) - pow2(2 * r)});
  return s;
}

/// p_k = sum mu lambda^k and p~_k = sum mu |lambda|^k for k = 1..m_max.
/// Terms are summed from smallest to largest magnitude.
template <class Real>
MomentVector<Real> moments_from_spectrum(const Spectrum<Real>& s, int m_max) {
  using std::abs;
  if (m_max < 1) throw std::invalid_argument("moments_from_spectrum: m_max must be >= 1");
  MomentVector<Real> out;
  out.values.reserve(static_cast<size_t>(m_max));
  out.schatten.reserve(static_cast<size_t>(m_max));

  std::vector<std::pair<Real, Real>> terms;  // (mu, lambda), mu as Real
  for (const auto& e : s.entries)
    if (e.mu != 0) terms.emplace_back(to_real<Real>(e.mu), e.lambda);

  std::vector<Real> power(terms.size(), Real(1));
  std::vector<Real> signed_terms(terms.size()), abs_terms(terms.size());
  for (int k = 1; k <= m_max; ++k) {
    for (size_t i = 0; i < terms.size(); ++i) {
      power[i] *= terms[i].second;
      signed_terms[i] = terms[i].first * power[i];
      abs_terms[i] = abs(signed_terms[i]);
    }
    auto by_magnitude = [](const Real& a, const Real& b) { return abs(a) < abs(b); };
    std::vector<Real> sorted = signed_terms;
    std::sort(sorted.begin(), sorted.end(), by_magnitude);
    Real sum(0);
    for (const auto& t : sorted) sum += t;
    std::sort(abs_terms.begin(), abs_terms.end());
    Real abs_sum(0);
    for (const auto& t : abs_terms) abs_sum += t;
    out.values.push_back(sum);
    out.schatten.push_back(abs_sum);
  }
  return out;
}

/// Number of distinct eigenvalues after merging within `tol` (absolute).
template <class Real>
int distinct_count(const Spectrum<Real>& s, const Real& tol) {
  return static_cast<int>(s.merged(tol).entries.size());
}

/// 1 - (2^{2-2/n} + 1)^{-1/2}.
inline double ppt_threshold_ghz(int n) {
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("ppt_threshold_ghz: n must be even and >= 2");
  return 1.0 - 1.0 / std::sqrt(std::pow(2.0, 2.0 - 2.0 / n) + 1.0);
}

}  // namespace ptm
