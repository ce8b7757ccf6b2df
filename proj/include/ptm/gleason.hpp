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

// Quantum MacWilliams transform and the invariant subspaces holding pure
// and type-II enumerator vectors. Exact rational arithmetic throughout;
// doubles appear only at the reconstruction boundary.

#include "ptm/enumerators.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace ptm {

using Rational = boost::multiprecision::cpp_rational;
using RationalVector = std::vector<Rational>;

/// Dense row-major rational matrix.
struct RationalMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<Rational> data;

  RationalMatrix(int r, int c) : rows(r), cols(c), data(static_cast<size_t>(r) * c, Rational(0)) {}

  static RationalMatrix identity(int size) {
    RationalMatrix m(size, size);
    for (int i = 0; i < size; ++i) m(i, i) = 1;
    return m;
  }

  Rational& operator()(int i, int j) { return data[static_cast<size_t>(i) * cols + j]; }
  const Rational& operator()(int i, int j) const { return data[static_cast<size_t>(i) * cols + j]; }

  friend RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b) {
    if (a.cols != b.rows) throw std::invalid_argument("RationalMatrix: shape mismatch");
    RationalMatrix c(a.rows, b.cols);
    for (int i = 0; i < a.rows; ++i)
      for (int k = 0; k < a.cols; ++k) {
        if (a(i, k) == 0) continue;
        for (int j = 0; j < b.cols; ++j) c(i, j) += a(i, k) * b(k, j);
      }
    return c;
  }

  RationalVector apply(const RationalVector& v) const {
    if (static_cast<int>(v.size()) != cols) throw std::invalid_argument("RationalMatrix: vector size mismatch");
    RationalVector out(static_cast<size_t>(rows), Rational(0));
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) out[static_cast<size_t>(i)] += (*this)(i, j) * v[static_cast<size_t>(j)];
    return out;
  }

  bool operator==(const RationalMatrix& o) const { return rows == o.rows && cols == o.cols && data == o.data; }
};

/// M_{ij} = [x^i] (1+3x)^{n-j} (1-x)^j / 2^n.
inline RationalMatrix macwilliams(int n) {
  if (n < 1) throw std::invalid_argument("macwilliams: n must be >= 1");
  RationalMatrix m(n + 1, n + 1);
  const Rational scale = Rational(1) / Rational(pow2(n));
  for (int j = 0; j <= n; ++j) {
    const IntPoly col = IntPoly::from_ints({1, 3}).pow(n - j) * IntPoly::from_ints({1, -1}).pow(j);
    for (int i = 0; i <= n; ++i) m(i, j) = Rational(col.coeff(i)) * scale;
  }
  return m;
}

/// (-1)^j M_{ij}.
inline RationalMatrix ttilde(int n) {
  RationalMatrix m = macwilliams(n);
  for (int i = 0; i <= n; ++i)
    for (int j = 1; j <= n; j += 2) m(i, j) = -m(i, j);
  return m;
}

/// c_i = sum_j a_j b_{i-j}.
inline RationalVector sl_convolve(const RationalVector& a, const RationalVector& b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("sl_convolve: empty vector");
  RationalVector c(a.size() + b.size() - 1, Rational(0));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  return c;
}

inline SLVector<double> sl_convolve(const SLVector<double>& a, const SLVector<double>& b) {
  SLVector<double> c{a.n + b.n, std::vector<double>(a.values.size() + b.values.size() - 1, 0.0)};
  for (size_t i = 0; i < a.values.size(); ++i)
    for (size_t j = 0; j < b.values.size(); ++j) c.values[i + j] += a.values[i] * b.values[j];
  return c;
}

inline RationalVector sl_zero_state() { return {Rational(1, 2), Rational(1, 2)}; }
inline RationalVector sl_bell() { return {Rational(1, 4), Rational(0), Rational(3, 4)}; }
inline RationalVector sl_ame6() {
  return {Rational(1, 64), 0, 0, 0, Rational(45, 64), 0, Rational(18, 64)};
}

namespace detail {

inline RationalVector sl_power(const RationalVector& a, int times) {
  RationalVector out{Rational(1)};
  for (int i = 0; i < times; ++i) out = sl_convolve(out, a);
  return out;
}

}  // namespace detail

/// Enumerators of Bell^{(x) i} (x) |0>^{(x) n-2i} for i = 0..floor(n/2).
inline std::vector<RationalVector> pure_kernel_basis(int n) {
  if (n < 1) throw std::invalid_argument("pure_kernel_basis: n must be >= 1");
  std::vector<RationalVector> basis;
  for (int i = 0; 2 * i <= n; ++i)
    basis.push_back(sl_convolve(detail::sl_power(sl_bell(), i), detail::sl_power(sl_zero_state(), n - 2 * i)));
  return basis;
}

/// Enumerators of AME^{(x) i} (x) Bell^{(x) (n-6i)/2} for i = 0..floor(n/6).
inline std::vector<RationalVector> type2_kernel_basis(int n) {
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("type2_kernel_basis: n must be even and >= 2");
  std::vector<RationalVector> basis;
  for (int i = 0; 6 * i <= n; ++i)
    basis.push_back(sl_convolve(detail::sl_power(sl_ame6(), i), detail::sl_power(sl_bell(), (n - 6 * i) / 2)));
  return basis;
}

/// Rank by exact Gaussian elimination.
inline int rational_rank(RationalMatrix m) {
  int rank = 0;
  for (int col = 0; col < m.cols && rank < m.rows; ++col) {
    int pivot = -1;
    for (int r = rank; r < m.rows; ++r)
      if (m(r, col) != 0) {
        pivot = r;
        break;
      }
    if (pivot < 0) continue;
    for (int c = 0; c < m.cols; ++c) std::swap(m(rank, c), m(pivot, c));
    for (int r = 0; r < m.rows; ++r) {
      if (r == rank || m(r, col) == 0) continue;
      const Rational f = m(r, col) / m(rank, col);
      for (int c = col; c < m.cols; ++c) m(r, c) -= f * m(rank, c);
    }
    ++rank;
  }
  return rank;
}

inline int basis_rank(const std::vector<RationalVector>& basis) {
  if (basis.empty()) return 0;
  RationalMatrix m(static_cast<int>(basis.size()), static_cast<int>(basis.front().size()));
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) m(i, j) = basis[static_cast<size_t>(i)][static_cast<size_t>(j)];
  return rational_rank(std::move(m));
}

/// All odd-weight entries within tol of zero.
template <class Real>
bool is_type2(const SLVector<Real>& a, double tol = 1e-12) {
  using std::abs;
  for (size_t i = 1; i < a.values.size(); i += 2)
    if (abs(a.values[i]) > tol) return false;
  return true;
}

struct Reconstruction {
  SLVector<double> values;
  RationalVector exact;        // full vector as an exact rational combination
  RationalVector coordinates;  // in the kernel basis
  double residual = 0.0;       // Euclidean norm over the known entries
};

/// Solves for the kernel coordinates matching the known entries (least
/// squares, exact rationals) and returns the full vector.
inline Reconstruction reconstruct_enumerators(const std::map<int, double>& known, int n, bool type2) {
  const auto basis = type2 ? type2_kernel_basis(n) : pure_kernel_basis(n);
  const int dim = static_cast<int>(basis.size());
  for (const auto& [w, v] : known)
    if (w < 0 || w > n) throw std::invalid_argument("reconstruct_enumerators: weight " + std::to_string(w) + " outside 0..n");
  if (static_cast<int>(known.size()) < dim)
    throw std::invalid_argument("reconstruct_enumerators: " + std::to_string(known.size()) +
                                " known entries for a kernel of dimension " + std::to_string(dim));

  const int rows = static_cast<int>(known.size());
  RationalMatrix b(rows, dim);
  RationalVector y;
  int r = 0;
  for (const auto& [w, v] : known) {
    if (!std::isfinite(v)) throw std::invalid_argument("reconstruct_enumerators: non-finite input");
    for (int j = 0; j < dim; ++j) b(r, j) = basis[static_cast<size_t>(j)][static_cast<size_t>(w)];
    y.push_back(Rational(v));  // doubles are dyadic, so this is exact
    ++r;
  }
  const int rank = rational_rank(b);
  if (rank < dim) {
    std::ostringstream os;
    os << "reconstruct_enumerators: the known weights {";
    bool first = true;
    for (const auto& [w, v] : known) {
      os << (first ? "" : ",") << w;
      first = false;
    }
    os << "} determine only " << rank << " of " << dim << " kernel coordinates (deficiency " << dim - rank << ")";
    throw std::invalid_argument(os.str());
  }

  // Normal equations B^T B c = B^T y, solved by Gauss-Jordan.
  RationalMatrix normal(dim, dim + 1);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j)
      for (int k = 0; k < rows; ++k) normal(i, j) += b(k, i) * b(k, j);
    for (int k = 0; k < rows; ++k) normal(i, dim) += b(k, i) * y[static_cast<size_t>(k)];
  }
  for (int col = 0; col < dim; ++col) {
    int pivot = col;
    while (normal(pivot, col) == 0) ++pivot;
    for (int c = 0; c <= dim; ++c) std::swap(normal(col, c), normal(pivot, c));
    const Rational lead = normal(col, col);
    for (int c = col; c <= dim; ++c) normal(col, c) /= lead;
    for (int rr = 0; rr < dim; ++rr) {
      if (rr == col || normal(rr, col) == 0) continue;
      const Rational f = normal(rr, col);
      for (int c = col; c <= dim; ++c) normal(rr, c) -= f * normal(col, c);
    }
  }

  Reconstruction out;
  for (int j = 0; j < dim; ++j) out.coordinates.push_back(normal(j, dim));
  out.exact.assign(static_cast<size_t>(n + 1), Rational(0));
  for (int j = 0; j < dim; ++j)
    for (int i = 0; i <= n; ++i) out.exact[static_cast<size_t>(i)] += out.coordinates[static_cast<size_t>(j)] * basis[static_cast<size_t>(j)][static_cast<size_t>(i)];
  out.values.n = n;
  for (const auto& v : out.exact) out.values.values.push_back(static_cast<double>(v));

  double res2 = 0.0;
  double norm2 = 0.0;
  r = 0;
  for (const auto& [w, v] : known) {
    const double d = static_cast<double>(out.exact[static_cast<size_t>(w)] - y[static_cast<size_t>(r)]);
    res2 += d * d;
    norm2 += v * v;
    ++r;
  }
  out.residual = std::sqrt(res2);
  if (out.residual > 1e-8 * std::sqrt(norm2))
    throw std::invalid_argument("reconstruct_enumerators: known entries are inconsistent with the kernel (residual " +
                                std::to_string(out.residual) + ")");
  return out;
}

inline RationalVector to_rational(const SLVector<double>& a) {
  RationalVector out;
  for (double v : a.values) out.push_back(Rational(v));
  return out;
}

struct GleasonReport {
  bool ok = true;
  std::vector<std::string> lines;
};

/// Exact fixture checks for one n: M^2 = 1, kernel memberships and
/// dimensions, and for n = 6 the AME reconstruction from two entries.
inline GleasonReport gleason_checks(int n) {
  GleasonReport r;
  auto check = [&r](bool cond, const std::string& what) {
    r.ok = r.ok && cond;
    r.lines.push_back(std::string(cond ? "ok   " : "FAIL ") + what);
  };
  const auto m = macwilliams(n);
  check(m * m == RationalMatrix::identity(n + 1), "M^2 = 1 (n=" + std::to_string(n) + ")");
  const auto pure = pure_kernel_basis(n);
  bool fixed = true;
  for (const auto& v : pure) fixed = fixed && m.apply(v) == v;
  check(fixed, "M v = v for the pure kernel basis");
  check(basis_rank(pure) == (n + 2) / 2 && static_cast<int>(pure.size()) == (n + 2) / 2,
        "pure kernel dimension " + std::to_string(pure.size()));
  if (n % 2 == 0) {
    const auto t = ttilde(n);
    const auto type2 = type2_kernel_basis(n);
    bool both = true;
    for (const auto& v : type2) both = both && m.apply(v) == v && t.apply(v) == v;
    check(both, "M v = T v = v for the type-II kernel basis");
    check(basis_rank(type2) == (n + 6) / 6 && static_cast<int>(type2.size()) == (n + 6) / 6,
          "type-II kernel dimension " + std::to_string(type2.size()));
  }
  if (n == 6) {
    const auto rec = reconstruct_enumerators({{0, 1.0 / 64.0}, {2, 0.0}}, 6, true);
    check(rec.exact == sl_ame6(), "AME reconstruction from {a_0, a_2}");
  }
  return r;
}

}  // namespace ptm
