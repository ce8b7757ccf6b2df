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

// Shor-Laflamme and Rains enumerators, PT-moment weight enumerators
// (brute force), and the character fast path for stabilizer states.

#include "ptm/dense.hpp"
#include "ptm/pauli.hpp"
#include "ptm/precision.hpp"
#include "ptm/spectra.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace ptm {

inline constexpr std::uint64_t kDefaultBruteBudget = std::uint64_t{1} << 26;

// ---------------------------------------------------------------------------
// Shor-Laflamme enumerators

/// a_0..a_n with a_i = 2^-n sum_{wt P = i} Tr[rho P]^2.
template <class Real = double>
struct SLVector {
  int n = 0;
  std::vector<Real> values;

  Real sum() const {
    Real s(0);
    for (const auto& v : values) s += v;
    return s;
  }
};

enum class SLMode { dense, stabilizer_count };

/// Sums Tr[rho P]^2 over all 4^n Paulis.
inline SLVector<double> sl_enumerators(const DenseOperator& rho, int cap = 8) {
  detail::check_dense_cap(rho.n, cap, "sl_enumerators");
  const int n = rho.n;
  SLVector<double> out{n, std::vector<double>(static_cast<size_t>(n + 1), 0.0)};
  const Mask full = full_mask(n);
  const double norm = 1.0 / static_cast<double>(rho.dim());
  for (Mask x = 0; x <= full; ++x) {
    for (Mask z = 0; z <= full; ++z) {
      const PauliString p(n, x, z, static_cast<unsigned>(std::popcount(x & z)));
      const double c = std::norm(pauli_expectation(rho, p));
      out.values[static_cast<size_t>(weight(p))] += c * norm;
    }
  }
  return out;
}

/// Weight histogram of the 2^n group elements.
inline std::vector<std::uint64_t> weight_counts(const StabilizerGroup& g) {
  std::vector<std::uint64_t> counts(static_cast<size_t>(g.n() + 1), 0);
  for (const auto& s : enumerate_group(g)) ++counts[static_cast<size_t>(weight(s))];
  return counts;
}

/// Weight distribution of the group divided by 2^n.
template <class Real = double>
SLVector<Real> sl_enumerators(const StabilizerGroup& g) {
  const auto counts = weight_counts(g);
  SLVector<Real> out{g.n(), {}};
  const Real order = to_real<Real>(pow2(g.n()));
  for (auto c : counts) out.values.push_back(Real(c) / order);
  return out;
}

/// Exact enumerators of GHZ_n: even-weight Z strings plus 2^{n-1}
/// X-type elements of full weight.
template <class Real = double>
SLVector<Real> ghz_sl_vector(int n) {
  if (n < 1) throw std::invalid_argument("ghz_sl_vector: n must be positive");
  SLVector<Real> out{n, std::vector<Real>(static_cast<size_t>(n + 1), Real(0))};
  const Real order = to_real<Real>(pow2(n));
  for (int i = 0; i <= n; ++i) {
    BigInt count = (i % 2 == 0) ? binomial(n, i) : BigInt(0);
    if (i == n) count += pow2(n - 1);
    out.values[static_cast<size_t>(i)] = to_real<Real>(count) / order;
  }
  return out;
}

namespace detail {

template <class Real>
Real ipow(Real base, int e) {
  Real r(1);
  while (e > 0) {
    if (e & 1) r *= base;
    base *= base;
    e >>= 1;
  }
  return r;
}

}  // namespace detail

/// a_i -> a_i (1-eps)^{2i}.
template <class Real>
SLVector<Real> sl_decay(const SLVector<Real>& a, const Real& eps) {
  SLVector<Real> out = a;
  const Real q = (Real(1) - eps) * (Real(1) - eps);
  Real f(1);
  for (auto& v : out.values) {
    v *= f;
    f *= q;
  }
  return out;
}

/// Tr[rho_eps^2] = sum_i a_i (1-eps)^{2i}.
template <class Real>
Real noisy_purity(const SLVector<Real>& a, const Real& eps) {
  return sl_decay(a, eps).sum();
}

/// Average Tr[rho_A^2] over all A with |A| = s:
/// 2^{n-s}/C(n,s) sum_i C(n-i, s-i) a_i (1-eps)^{2i}.
template <class Real>
Real average_subsystem_purity(const SLVector<Real>& a, const Real& eps, int s) {
  const int n = a.n;
  if (s < 0 || s > n) throw std::invalid_argument("average_subsystem_purity: size out of range");
  const auto decayed = sl_decay(a, eps);
  Real sum(0);
  for (int i = 0; i <= s; ++i) sum += to_real<Real>(binomial(n - i, s - i)) * decayed.values[static_cast<size_t>(i)];
  return sum * to_real<Real>(pow2(n - s)) / to_real<Real>(binomial(n, s));
}

/// Rains' balanced-cut purity (|A| = n/2).
template <class Real>
Real rains_subsystem_purity(const SLVector<Real>& a, const Real& eps) {
  if (a.n % 2 != 0) throw std::invalid_argument("rains_subsystem_purity: n must be even");
  return average_subsystem_purity(a, eps, a.n / 2);
}

/// Tr[rho_A^2] of a locally depolarized stabilizer state for one specific
/// A: 2^{-|A|} sum over elements supported in A of (1-eps)^{2 wt}.
template <class Real>
Real subsystem_purity(const StabilizerGroup& g, Mask a, const Real& eps) {
  const Real q = (Real(1) - eps) * (Real(1) - eps);
  std::vector<std::uint64_t> counts(static_cast<size_t>(g.n() + 1), 0);
  for (const auto& s : enumerate_group(g))
    if (((s.x | s.z) & ~a) == 0) ++counts[static_cast<size_t>(weight(s))];
  Real sum(0);
  for (int w = 0; w <= g.n(); ++w) sum += Real(counts[static_cast<size_t>(w)]) * detail::ipow(q, w);
  return sum / to_real<Real>(pow2(std::popcount(a)));
}

/// Fidelity of the locally depolarized pure state with the clean one:
/// sum_i a_i (1-eps)^i.
template <class Real>
Real fidelity_from_enumerators(const SLVector<Real>& a, const Real& eps) {
  Real sum(0);
  Real f(1);
  for (const auto& v : a.values) {
    sum += v * f;
    f *= (Real(1) - eps);
  }
  return sum;
}

/// GHZ_n fidelity in closed form, 1/2[(1-eps/2)^n + (1-eps)^n + s (eps/2)^n].
/// `s` = +1 agrees with the enumerator sum for even n; s = -1 is the
/// variant that vanishes at eps = 1, reported for comparison.
inline double ghz_fidelity_closed_form(int n, double eps, int trailing_sign = +1) {
  return 0.5 * (std::pow(1.0 - eps / 2.0, n) + std::pow(1.0 - eps, n) + trailing_sign * std::pow(eps / 2.0, n));
}

// ---------------------------------------------------------------------------
// PT-moment weight enumerators

inline int phi_index(std::complex<int> v) {
  if (v == std::complex<int>(1, 0)) return 0;
  if (v == std::complex<int>(-1, 0)) return 1;
  if (v == std::complex<int>(0, 1)) return 2;
  if (v == std::complex<int>(0, -1)) return 3;
  throw std::invalid_argument("phi_index: value is not a unit");
}

inline constexpr std::array<std::complex<int>, 4> kPhiValues{
    std::complex<int>{1, 0}, std::complex<int>{-1, 0}, std::complex<int>{0, 1}, std::complex<int>{0, -1}};

/// c[theta][phi][w], theta index 0 -> +1, 1 -> -1; phi ordered +1, -1, +i, -i.
struct QWETable {
  int n = 0;
  int k = 0;
  Bipartition bip;
  std::array<std::array<std::vector<double>, 4>, 2> c;

  double& at(int theta, int phi_idx, int w) { return c[theta > 0 ? 0 : 1][static_cast<size_t>(phi_idx)][static_cast<size_t>(w)]; }
  double at(int theta, int phi_idx, int w) const {
    return c[theta > 0 ? 0 : 1][static_cast<size_t>(phi_idx)][static_cast<size_t>(w)];
  }
};

/// Exhaustive k-tuple sum with normalization 2^{-n(k-1)}. Only tuples with
/// phi != 0 contribute, so P_k is fixed by the first k-1 factors.
inline QWETable qwe_bruteforce(const DenseOperator& rho, const Bipartition& bip, int k,
                               std::uint64_t budget = kDefaultBruteBudget) {
  const int n = rho.n;
  if (k < 1) throw std::invalid_argument("qwe_bruteforce: k must be >= 1");
  if (bip.n != n) throw std::invalid_argument("qwe_bruteforce: qubit counts differ");
  if (2 * n * k >= 63 || (std::uint64_t{1} << (2 * n * k)) > budget)
    throw std::length_error("qwe_bruteforce: 4^(n k) exceeds the work budget");

  const std::uint64_t paulis = std::uint64_t{1} << (2 * n);
  auto make = [n](std::uint64_t code) {
    const Mask x = code & full_mask(n);
    const Mask z = code >> n;
    return PauliString(n, x, z, static_cast<unsigned>(std::popcount(x & z)));
  };
  std::vector<PauliString> basis(paulis);
  std::vector<double> coeff(paulis);
  for (std::uint64_t c = 0; c < paulis; ++c) {
    basis[c] = make(c);
    coeff[c] = pauli_expectation(rho, basis[c]).real();
  }

  QWETable t;
  t.n = n;
  t.k = k;
  t.bip = bip;
  for (auto& row : t.c)
    for (auto& col : row) col.assign(static_cast<size_t>(n * k + 1), 0.0);

  const std::uint64_t tuples = k == 1 ? 1 : (std::uint64_t{1} << (2 * n * (k - 1)));
  std::vector<std::uint64_t> idx(static_cast<size_t>(std::max(k - 1, 0)), 0);
  for (std::uint64_t it = 0; it < tuples; ++it) {
    std::uint64_t rest = it;
    for (auto& i : idx) {
      i = rest & (paulis - 1);
      rest >>= 2 * n;
    }
    std::vector<PauliString> tuple;
    tuple.reserve(static_cast<size_t>(k));
    double prod = 1.0;
    std::uint64_t xor_code = 0;
    for (auto i : idx) {
      tuple.push_back(basis[i]);
      prod *= coeff[i];
      xor_code ^= i;
    }
    if (prod == 0.0) continue;
    tuple.push_back(basis[xor_code]);
    prod *= coeff[xor_code];
    if (prod == 0.0) continue;
    const auto ph = phi(tuple);
    if (ph == std::complex<int>(0, 0)) continue;
    int th = 1;
    int w = 0;
    for (const auto& p : tuple) {
      th *= theta(p, bip);
      w += weight(p);
    }
    t.at(th, phi_index(ph), w) += prod;
  }
  const double norm = std::ldexp(1.0, -n * (k - 1));
  for (auto& row : t.c)
    for (auto& col : row)
      for (auto& v : col) v *= norm;
  return t;
}

/// sum_{theta,phi} theta phi sum_w (1-eps)^w c_w; the imaginary part must cancel.
inline double noisy_pt_moment(const QWETable& t, double eps) {
  std::complex<double> sum = 0;
  for (int ti = 0; ti < 2; ++ti) {
    const double th = ti == 0 ? 1.0 : -1.0;
    for (int pi = 0; pi < 4; ++pi) {
      const std::complex<double> ph(kPhiValues[static_cast<size_t>(pi)].real(), kPhiValues[static_cast<size_t>(pi)].imag());
      double poly = 0.0;
      double f = 1.0;
      for (double v : t.c[static_cast<size_t>(ti)][static_cast<size_t>(pi)]) {
        poly += v * f;
        f *= (1.0 - eps);
      }
      sum += th * ph * poly;
    }
  }
  if (std::abs(sum.imag()) > 1e-9)
    throw std::runtime_error("noisy_pt_moment: residual imaginary part " + std::to_string(sum.imag()));
  return sum.real();
}

/// Exact stabilizer tuple counts C_w^{(k,+)} and C_w^{(k,-)}.
struct CWTable {
  int n = 0;
  int k = 0;
  Bipartition bip;
  std::vector<BigInt> plus;   // w = 0..nk
  std::vector<BigInt> minus;

  std::vector<BigInt> difference() const {
    std::vector<BigInt> d(plus.size());
    for (size_t w = 0; w < plus.size(); ++w) d[w] = plus[w] - minus[w];
    return d;
  }

  bool operator==(const CWTable& o) const {
    return n == o.n && k == o.k && bip.a_mask == o.bip.a_mask && plus == o.plus && minus == o.minus;
  }
};

/// Exhaustive count over (S_2..S_k) in S^{k-1} with P_1 = prod S_i.
/// Work is split over threads by the first tuple entry; per-thread
/// counters are summed exactly.
inline CWTable cw_bruteforce(const StabilizerGroup& g, const Bipartition& bip, int k,
                             std::uint64_t budget = kDefaultBruteBudget, unsigned threads = 0) {
  const int n = g.n();
  if (k < 1) throw std::invalid_argument("cw_bruteforce: k must be >= 1");
  if (bip.n != n) throw std::invalid_argument("cw_bruteforce: qubit counts differ");
  if (n * (k - 1) >= 63 || (std::uint64_t{1} << (n * (k - 1))) > budget)
    throw std::length_error("cw_bruteforce: 2^(n(k-1)) exceeds the work budget");

  const auto elements = enumerate_group(g);
  const std::uint64_t order = elements.size();
  std::vector<int> wt(order), th(order);
  for (std::uint64_t b = 0; b < order; ++b) {
    wt[b] = weight(elements[b]);
    th[b] = theta(elements[b], bip);
  }
  const int width = n * k + 1;
  CWTable out{n, k, bip, std::vector<BigInt>(static_cast<size_t>(width), 0),
              std::vector<BigInt>(static_cast<size_t>(width), 0)};
  if (k == 1) {
    out.plus[0] = 1;
    return out;
  }

  // Each chunk fixes S_2 and iterates the remaining k-2 entries.
  const std::uint64_t inner = std::uint64_t{1} << (n * (k - 2));
  auto run_chunk = [&](std::uint64_t first, std::vector<std::uint64_t>& plus, std::vector<std::uint64_t>& minus) {
    for (std::uint64_t it = 0; it < inner; ++it) {
      std::uint64_t rest = it;
      std::uint64_t acc = first;
      int sign = th[first];
      int w = wt[first];
      for (int j = 0; j < k - 2; ++j) {
        const std::uint64_t b = rest & (order - 1);
        rest >>= n;
        acc ^= b;
        sign *= th[b];
        w += wt[b];
      }
      sign *= th[acc];
      w += wt[acc];
      (sign > 0 ? plus : minus)[static_cast<size_t>(w)] += 1;
    }
  };

  unsigned workers = threads != 0 ? threads : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, order));
  std::vector<std::vector<std::uint64_t>> plus(workers, std::vector<std::uint64_t>(static_cast<size_t>(width), 0));
  std::vector<std::vector<std::uint64_t>> minus = plus;
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < workers; ++t) {
      pool.emplace_back([&, t] {
        for (std::uint64_t first = t; first < order; first += workers) run_chunk(first, plus[t], minus[t]);
      });
    }
  }
  for (unsigned t = 0; t < workers; ++t) {
    for (int w = 0; w < width; ++w) {
      out.plus[static_cast<size_t>(w)] += plus[t][static_cast<size_t>(w)];
      out.minus[static_cast<size_t>(w)] += minus[t][static_cast<size_t>(w)];
    }
  }
  return out;
}

/// Stabilizer path: sum_w (C+ - C-)(1-eps)^w / 2^{n(k-1)}.
template <class Real>
Real noisy_pt_moment(const CWTable& t, const Real& eps) {
  Real sum(0);
  Real f(1);
  for (size_t w = 0; w < t.plus.size(); ++w) {
    sum += to_real<Real>(t.plus[w] - t.minus[w]) * f;
    f *= (Real(1) - eps);
  }
  return sum / to_real<Real>(pow2(t.n * (t.k - 1)));
}

// ---------------------------------------------------------------------------
// Character fast path

/// Integer polynomial, coefficients ascending.
struct IntPoly {
  std::vector<BigInt> coeffs;

  IntPoly() = default;
  explicit IntPoly(std::vector<BigInt> c) : coeffs(std::move(c)) { trim(); }

  static IntPoly from_ints(std::initializer_list<long long> c) {
    std::vector<BigInt> v;
    for (auto x : c) v.emplace_back(x);
    return IntPoly(std::move(v));
  }

  void trim() {
    while (!coeffs.empty() && coeffs.back() == 0) coeffs.pop_back();
  }

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }

  BigInt coeff(int i) const {
    return i >= 0 && i < static_cast<int>(coeffs.size()) ? coeffs[static_cast<size_t>(i)] : BigInt(0);
  }

  template <class Real>
  Real evaluate(const Real& z) const {
    Real acc(0);
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * z + to_real<Real>(*it);
    return acc;
  }

  friend IntPoly operator*(const IntPoly& a, const IntPoly& b) {
    if (a.coeffs.empty() || b.coeffs.empty()) return {};
    std::vector<BigInt> c(a.coeffs.size() + b.coeffs.size() - 1, 0);
    for (size_t i = 0; i < a.coeffs.size(); ++i) {
      if (a.coeffs[i] == 0) continue;
      for (size_t j = 0; j < b.coeffs.size(); ++j) c[i + j] += a.coeffs[i] * b.coeffs[j];
    }
    return IntPoly(std::move(c));
  }

  IntPoly& operator+=(const IntPoly& o) {
    if (coeffs.size() < o.coeffs.size()) coeffs.resize(o.coeffs.size(), 0);
    for (size_t i = 0; i < o.coeffs.size(); ++i) coeffs[i] += o.coeffs[i];
    trim();
    return *this;
  }

  IntPoly scaled(const BigInt& s) const {
    IntPoly out = *this;
    for (auto& c : out.coeffs) c *= s;
    out.trim();
    return out;
  }

  IntPoly pow(int e) const {
    IntPoly result = IntPoly::from_ints({1});
    IntPoly base = *this;
    while (e > 0) {
      if (e & 1) result = result * base;
      e >>= 1;
      if (e > 0) base = base * base;
    }
    return result;
  }

  bool operator==(const IntPoly& o) const { return coeffs == o.coeffs; }
  bool operator<(const IntPoly& o) const {
    const size_t len = std::max(coeffs.size(), o.coeffs.size());
    for (size_t i = 0; i < len; ++i) {
      const BigInt a = coeff(static_cast<int>(i));
      const BigInt b = o.coeff(static_cast<int>(i));
      if (a != b) return a < b;
    }
    return false;
  }

  std::string str() const {
    std::ostringstream os;
    bool first = true;
    for (size_t i = 0; i < coeffs.size(); ++i) {
      const BigInt& c = coeffs[i];
      if (c == 0) continue;
      if (!first) os << (c < 0 ? " - " : " + ");
      else if (c < 0) os << "-";
      const BigInt mag = c < 0 ? BigInt(-c) : c;
      if (i == 0 || mag != 1) os << mag;
      if (i >= 1) os << "z";
      if (i >= 2) os << "^" << i;
      first = false;
    }
    return first ? "0" : os.str();
  }
};

struct PolyWithMultiplicity {
  IntPoly poly;
  BigInt multiplicity;
};

/// Distinct character transforms with multiplicities, in order of first
/// occurrence over characters v = 0, 1, ... (so the trivial character
/// comes first). `minus` carries theta, `plus` does not.
struct CharacterPolynomials {
  int n = 0;
  Bipartition bip;
  std::vector<PolyWithMultiplicity> minus;
  std::vector<PolyWithMultiplicity> plus;
};

namespace detail {

// In-place Walsh-Hadamard transform (unnormalized).
inline void walsh_hadamard(std::vector<std::int64_t>& f) {
  const size_t len = f.size();
  for (size_t h = 1; h < len; h <<= 1)
    for (size_t i = 0; i < len; i += h << 1)
      for (size_t j = i; j < i + h; ++j) {
        const std::int64_t a = f[j];
        const std::int64_t b = f[j + h];
        f[j] = a + b;
        f[j + h] = a - b;
      }
}

// For each weight w, transform the indicator of weight w (times theta
// when signed) to get coefficient w of every character's polynomial.
inline std::vector<PolyWithMultiplicity> character_transform(const std::vector<int>& wt, const std::vector<int>& th,
                                                              int n, bool signed_by_theta) {
  const size_t order = wt.size();
  std::vector<std::vector<std::int64_t>> coeff(static_cast<size_t>(n + 1));
  for (int w = 0; w <= n; ++w) {
    auto& f = coeff[static_cast<size_t>(w)];
    f.assign(order, 0);
    bool any = false;
    for (size_t b = 0; b < order; ++b) {
      if (wt[b] != w) continue;
      f[b] = signed_by_theta ? th[b] : 1;
      any = true;
    }
    if (any) walsh_hadamard(f);
  }
  std::map<IntPoly, size_t> index;
  std::vector<PolyWithMultiplicity> out;
  for (size_t v = 0; v < order; ++v) {
    std::vector<BigInt> c(static_cast<size_t>(n + 1));
    for (int w = 0; w <= n; ++w) c[static_cast<size_t>(w)] = coeff[static_cast<size_t>(w)][v];
    IntPoly p(std::move(c));
    auto [it, inserted] = index.emplace(p, out.size());
    if (inserted) out.push_back({std::move(p), BigInt(1)});
    else out[it->second].multiplicity += 1;
  }
  return out;
}

}  // namespace detail

/// alpha_v(z) = sum_S chi_v(S) theta(S) z^wt(S) and beta_v(z) without theta,
/// with chi_v(prod g_i^{b_i}) = (-1)^{v.b}.
inline CharacterPolynomials character_polys(const StabilizerGroup& g, const Bipartition& bip, int max_qubits = 16) {
  const int n = g.n();
  if (n > max_qubits)
    throw std::invalid_argument("character_polys: n = " + std::to_string(n) + " exceeds the cap of " +
                                std::to_string(max_qubits));
  if (bip.n != n) throw std::invalid_argument("character_polys: qubit counts differ");
  const auto elements = enumerate_group(g);
  std::vector<int> wt(elements.size()), th(elements.size());
  for (size_t b = 0; b < elements.size(); ++b) {
    wt[b] = weight(elements[b]);
    th[b] = theta(elements[b], bip);
  }
  return {n, bip, detail::character_transform(wt, th, n, true), detail::character_transform(wt, th, n, false)};
}

namespace detail {

inline std::vector<BigInt> power_sum_coefficients(const std::vector<PolyWithMultiplicity>& set, int n, int k) {
  IntPoly total;
  for (const auto& [poly, mult] : set) total += poly.pow(k).scaled(mult);
  const BigInt order = pow2(n);
  std::vector<BigInt> out(static_cast<size_t>(n * k + 1), 0);
  for (int w = 0; w <= n * k; ++w) {
    const BigInt c = total.coeff(w);
    if (c % order != 0)
      throw std::logic_error("cw_fourier: coefficient of z^" + std::to_string(w) + " is not divisible by 2^n");
    out[static_cast<size_t>(w)] = c / order;
  }
  return out;
}

}  // namespace detail

/// Tuple counts from (1/2^n) sum_i m_i poly_i(z)^k for both sets.
inline CWTable cw_fourier(const CharacterPolynomials& cp, int k) {
  if (k < 1) throw std::invalid_argument("cw_fourier: k must be >= 1");
  const auto diff = detail::power_sum_coefficients(cp.minus, cp.n, k);
  const auto total = detail::power_sum_coefficients(cp.plus, cp.n, k);
  CWTable out{cp.n, k, cp.bip, {}, {}};
  for (size_t w = 0; w < diff.size(); ++w) {
    const BigInt twice_plus = total[w] + diff[w];
    if (twice_plus % 2 != 0 || total[w] < 0 || twice_plus < 0 || total[w] - diff[w] < 0)
      throw std::logic_error("cw_fourier: inconsistent counts at w = " + std::to_string(w));
    out.plus.push_back(twice_plus / 2);
    out.minus.push_back((total[w] - diff[w]) / 2);
  }
  return out;
}

inline CWTable cw_fourier(const StabilizerGroup& g, const Bipartition& bip, int k) {
  return cw_fourier(character_polys(g, bip), k);
}

/// p_k(eps) = 2^{-nk} sum_i m_i alpha_i(1-eps)^k. Evaluates the character
/// form directly, which avoids the cancellation in the expanded counts.
template <class Real>
Real noisy_pt_moment(const CharacterPolynomials& cp, int k, const Real& eps) {
  const Real z = Real(1) - eps;
  Real sum(0);
  for (const auto& [poly, mult] : cp.minus) sum += to_real<Real>(mult) * detail::ipow(poly.template evaluate<Real>(z), k);
  return sum / to_real<Real>(pow2(cp.n * k));
}

/// p_1..p_{m_max} of the locally depolarized stabilizer state.
template <class Real>
MomentVector<Real> enumerator_moments(const CharacterPolynomials& cp, const Real& eps, int m_max) {
  MomentVector<Real> out;
  for (int k = 1; k <= m_max; ++k) out.values.push_back(noisy_pt_moment(cp, k, eps));
  return out;
}

// ---------------------------------------------------------------------------
// Six-qubit AME fixtures

struct FixtureReport {
  bool ok = true;
  std::vector<std::string> lines;
};

namespace detail {

using PolySet = std::map<IntPoly, BigInt>;

inline PolySet to_set(const std::vector<PolyWithMultiplicity>& v) {
  PolySet s;
  for (const auto& [p, m] : v) s[p] += m;
  return s;
}

// {c0, c4, c6, multiplicity}
inline PolySet ame_set(std::initializer_list<std::array<long long, 4>> rows) {
  PolySet s;
  for (const auto& r : rows) s[IntPoly::from_ints({r[0], 0, 0, 0, r[1], 0, r[2]})] = r[3];
  return s;
}

inline std::string describe(const PolySet& s) {
  std::ostringstream os;
  os << "{";
  bool first = true;
  for (const auto& [p, m] : s) {
    os << (first ? "" : ", ") << "(" << p.str() << ") x" << m;
    first = false;
  }
  os << "}";
  return os.str();
}

inline void compare_sets(FixtureReport& r, const std::string& label, const PolySet& got, const PolySet& want) {
  const bool same = got == want;
  r.ok = r.ok && same;
  r.lines.push_back((same ? "ok   " : "FAIL ") + label + ": " + describe(got));
  if (!same) r.lines.push_back("     expected " + describe(want));
}

}  // namespace detail

/// Published minus-sets per cut size |A| = 0..3, keyed by size.
inline std::map<int, detail::PolySet> ame_published_minus_sets() {
  using detail::ame_set;
  std::map<int, detail::PolySet> m;
  m[0] = ame_set({{1, 45, 18, 1}, {1, 5, -6, 18}, {1, -3, 2, 45}});
  m[1] = ame_set({{1, 25, 6, 3}, {1, 1, -2, 45}, {1, -7, 6, 15}, {1, -15, -18, 1}});
  m[2] = ame_set({{1, 13, 2, 9}, {1, 5, -6, 12}, {1, -3, 2, 36}, {1, -11, -6, 6}, {1, -3, 18, 1}});
  m[3] = ame_set({{1, 9, -2, 18}, {1, 1, 6, 18}, {1, -7, -2, 27}, {1, 9, -18, 1}});
  return m;
}

inline detail::PolySet ame_published_plus_set() { return ame_published_minus_sets().at(0); }

/// Checks the AME character polynomials for A = {}, {1}, {1,2}, {1,2,3}
/// against the published sets, and the plus-set sum identity for k <= 4.
inline FixtureReport ame_fixture_check() {
  FixtureReport r;
  const auto g = state_catalog(CatalogState::ame6, 6);
  const auto minus_sets = ame_published_minus_sets();
  const auto plus_set = ame_published_plus_set();
  for (int size = 0; size <= 3; ++size) {
    const auto bip = Bipartition::leading(6, size);
    const auto cp = character_polys(g, bip);
    const std::string cut = std::to_string(size) + "|" + std::to_string(6 - size);
    detail::compare_sets(r, "minus-set " + cut, detail::to_set(cp.minus), minus_sets.at(size));
    detail::compare_sets(r, "plus-set  " + cut, detail::to_set(cp.plus), plus_set);
    for (int k = 1; k <= 4; ++k) {
      const auto table = cw_fourier(cp, k);
      IntPoly sum;
      for (const auto& [p, m] : plus_set) sum += p.pow(k).scaled(m);
      bool same = true;
      for (int w = 0; w <= 6 * k; ++w) same = same && (sum.coeff(w) == 64 * (table.plus[static_cast<size_t>(w)] + table.minus[static_cast<size_t>(w)]));
      r.ok = r.ok && same;
      r.lines.push_back(std::string(same ? "ok   " : "FAIL ") + "C+ + C- sum identity " + cut + " k=" + std::to_string(k));
    }
  }
  return r;
}

}  // namespace ptm
