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

// Self-contained symmetric / Hermitian eigensolvers.
//
//  * symmetric_eigenvalues: cyclic Jacobi for small real symmetric matrices
//    in any floating type (used on Hankel matrices in extended precision).
//  * hermitian_eigensystem: Householder reduction to real tridiagonal form
//    followed by implicit QL, for dense complex Hermitian matrices.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <vector>

namespace ptm {

/// Row-major square matrix of arbitrary real scalars.
template <class Real>
struct SymmetricMatrix {
  int size = 0;
  std::vector<Real> data;

  explicit SymmetricMatrix(int n = 0) : size(n), data(static_cast<size_t>(n) * n, Real(0)) {}
  Real& operator()(int i, int j) { return data[static_cast<size_t>(i) * size + j]; }
  const Real& operator()(int i, int j) const { return data[static_cast<size_t>(i) * size + j]; }
};

/// Eigenvalues of a real symmetric matrix, ascending. Cyclic Jacobi with
/// the classical rotation formulas; relative accuracy is close to the
/// working epsilon, which is what the Hankel tests need.
template <class Real>
std::vector<Real> symmetric_eigenvalues(SymmetricMatrix<Real> a) {
  using std::abs;
  using std::sqrt;
  const int n = a.size;
  const Real eps = std::numeric_limits<Real>::epsilon();
  Real total(0);
  for (const auto& v : a.data) total += v * v;

  for (int sweep = 0; sweep < 100; ++sweep) {
    Real off(0);
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (off <= eps * eps * total || off == Real(0)) break;

    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const Real apq = a(p, q);
        if (apq == Real(0)) continue;
        const Real theta = (a(q, q) - a(p, p)) / (2 * apq);
        Real t = Real(1) / (abs(theta) + sqrt(theta * theta + Real(1)));
        if (theta < Real(0)) t = -t;
        const Real c = Real(1) / sqrt(t * t + Real(1));
        const Real s = t * c;
        for (int k = 0; k < n; ++k) {
          const Real akp = a(k, p);
          const Real akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const Real apk = a(p, k);
          const Real aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<Real> out(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) out[static_cast<size_t>(i)] = a(i, i);
  std::sort(out.begin(), out.end());
  return out;
}

struct HermitianEigensystem {
  Eigen::VectorXd values;     // ascending
  Eigen::MatrixXcd vectors;   // columns; empty unless requested
};

namespace detail {

// Implicit QL on a real symmetric tridiagonal matrix (diagonal d,
// subdiagonal e with e[i] coupling i and i+1). Rotations are accumulated
// into z when it is non-empty.
inline void tridiagonal_ql(std::vector<double>& d, std::vector<double>& e, Eigen::MatrixXd* z) {
  const int n = static_cast<int>(d.size());
  if (n == 0) return;
  e.resize(static_cast<size_t>(n), 0.0);
  e[static_cast<size_t>(n - 1)] = 0.0;
  // Deflate against the matrix norm as well: with a zero diagonal pair the
  // local test alone never fires.
  double anorm = 0.0;
  for (int i = 0; i < n; ++i) anorm = std::max(anorm, std::abs(d[i]) + std::abs(e[i]));
  const double floor = std::numeric_limits<double>::epsilon() * anorm;
  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= std::numeric_limits<double>::epsilon() * dd || std::abs(e[m]) <= floor) break;
      }
      if (m != l) {
        if (++iter > 200) throw std::runtime_error("tridiagonal QL failed to converge");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        int i;
        for (i = m - 1; i >= l; --i) {
          double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
          if (z != nullptr) {
            for (int k = 0; k < n; ++k) {
              f = (*z)(k, i + 1);
              (*z)(k, i + 1) = s * (*z)(k, i) + c * f;
              (*z)(k, i) = c * (*z)(k, i) - s * f;
            }
          }
        }
        if (r == 0.0 && i >= l) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
}

}  // namespace detail

/// Full eigendecomposition of a Hermitian matrix. The input is used as
/// given; callers symmetrize beforehand.
inline HermitianEigensystem hermitian_eigensystem(Eigen::MatrixXcd a, bool want_vectors) {
  using cd = std::complex<double>;
  const int n = static_cast<int>(a.rows());
  Eigen::MatrixXcd q;
  if (want_vectors) q = Eigen::MatrixXcd::Identity(n, n);

  // Householder: zero column k below the subdiagonal.
  for (int k = 0; k + 2 < n; ++k) {
    const int len = n - k - 1;
    Eigen::VectorXcd x = a.col(k).tail(len);
    const double xnorm = x.norm();
    if (xnorm == 0.0) continue;
    const cd x0 = x(0);
    const cd phase = std::abs(x0) == 0.0 ? cd(1.0) : x0 / std::abs(x0);
    const cd alpha = -phase * xnorm;
    Eigen::VectorXcd v = x;
    v(0) -= alpha;
    const double vnorm = v.norm();
    if (vnorm == 0.0) continue;
    v /= vnorm;

    auto block = a.bottomRightCorner(len, len);
    Eigen::VectorXcd p = block * v;
    const cd kappa = v.dot(p);  // v^H p, real for Hermitian blocks
    Eigen::VectorXcd w = p - kappa * v;
    block -= 2.0 * (v * w.adjoint() + w * v.adjoint());

    a.col(k).tail(len).setZero();
    a(k + 1, k) = alpha;
    a.row(k).tail(len).setZero();
    a(k, k + 1) = std::conj(alpha);

    if (want_vectors) {
      auto qcols = q.rightCols(len);
      Eigen::VectorXcd qv = qcols * v;
      qcols -= 2.0 * qv * v.adjoint();
    }
  }

  // Diagonal phase transform makes the subdiagonal real and nonnegative.
  std::vector<double> d(static_cast<size_t>(n)), e(static_cast<size_t>(n), 0.0);
  std::vector<cd> phases(static_cast<size_t>(n), cd(1.0));
  for (int i = 0; i < n; ++i) d[i] = a(i, i).real();
  for (int i = 0; i + 1 < n; ++i) {
    const cd sub = a(i + 1, i);
    const double mag = std::abs(sub);
    e[i] = mag;
    phases[i + 1] = mag == 0.0 ? phases[i] : phases[i] * sub / mag;
  }

  Eigen::MatrixXd z;
  if (want_vectors) z = Eigen::MatrixXd::Identity(n, n);
  detail::tridiagonal_ql(d, e, want_vectors ? &z : nullptr);

  std::vector<int> order(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int x, int y) { return d[x] < d[y]; });

  HermitianEigensystem out;
  out.values.resize(n);
  for (int i = 0; i < n; ++i) out.values(i) = d[order[i]];
  if (want_vectors) {
    Eigen::MatrixXcd dz(n, n);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) dz(r, c) = phases[r] * z(r, order[c]);
    out.vectors = q * dz;
  }
  return out;
}

}  // namespace ptm
