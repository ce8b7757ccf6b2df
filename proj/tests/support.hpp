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

// Independent oracles shared by the unit tests and the acceptance run.
// Nothing here calls into the ptm routines under test except plain types.

#pragma once

#include "ptm/dense.hpp"
#include "ptm/pauli.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <complex>
#include <random>
#include <vector>

namespace ptm::testing {

using Eigen::MatrixXcd;

/// Random density matrix of the given rank from a complex Ginibre matrix.
inline DenseOperator random_state(int n, int rank, std::mt19937_64& rng) {
  const Eigen::Index dim = Eigen::Index{1} << n;
  std::normal_distribution<double> g(0.0, 1.0);
  MatrixXcd G(dim, rank);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (int j = 0; j < rank; ++j) G(i, j) = {g(rng), g(rng)};
  MatrixXcd rho = G * G.adjoint();
  rho /= rho.trace().real();
  return DenseOperator(n, rho);
}

/// Pauli matrix built as an explicit Kronecker product, qubit 0 leftmost.
inline MatrixXcd pauli_kron(const PauliString& p) {
  const std::complex<double> I(0, 1);
  MatrixXcd out = MatrixXcd::Identity(1, 1);
  for (int a = 0; a < p.n; ++a) {
    MatrixXcd s(2, 2);
    switch (p.letter(a)) {
      case 'I': s << 1, 0, 0, 1; break;
      case 'X': s << 0, 1, 1, 0; break;
      case 'Y': s << 0, -I, I, 0; break;
      default: s << 1, 0, 0, -1; break;
    }
    MatrixXcd next(out.rows() * 2, out.cols() * 2);
    for (Eigen::Index r = 0; r < out.rows(); ++r)
      for (Eigen::Index c = 0; c < out.cols(); ++c) next.block(2 * r, 2 * c, 2, 2) = out(r, c) * s;
    out = next;
  }
  static const std::complex<double> units[] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  return units[p.pattern_phase()] * out;
}

/// Partial transpose by explicit per-qubit digit swapping.
inline MatrixXcd pt_oracle(const MatrixXcd& rho, int n, Mask a_mask) {
  const Eigen::Index dim = rho.rows();
  MatrixXcd out(dim, dim);
  std::vector<int> ri(static_cast<size_t>(n)), ci(static_cast<size_t>(n));
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) {
      for (int a = 0; a < n; ++a) {
        ri[static_cast<size_t>(a)] = static_cast<int>((i >> (n - 1 - a)) & 1);
        ci[static_cast<size_t>(a)] = static_cast<int>((j >> (n - 1 - a)) & 1);
        if ((a_mask >> a) & 1u) std::swap(ri[static_cast<size_t>(a)], ci[static_cast<size_t>(a)]);
      }
      Eigen::Index r = 0, c = 0;
      for (int a = 0; a < n; ++a) {
        r = 2 * r + ri[static_cast<size_t>(a)];
        c = 2 * c + ci[static_cast<size_t>(a)];
      }
      out(r, c) = rho(i, j);
    }
  }
  return out;
}

/// Local depolarizing channel from its Kraus form, one qubit at a time.
inline MatrixXcd depolarize_oracle(const MatrixXcd& rho, int n, double eps) {
  MatrixXcd cur = rho;
  for (int a = 0; a < n; ++a) {
    MatrixXcd next = (1.0 - 3.0 * eps / 4.0) * cur;
    for (Mask z : {Mask{0}, Mask{1}}) {
      for (Mask x : {Mask{0}, Mask{1}}) {
        if (x == 0 && z == 0) continue;
        const PauliString p(n, x << a, z << a, static_cast<unsigned>(x & z));
        const MatrixXcd P = pauli_kron(p);
        next += (eps / 4.0) * P * cur * P.adjoint();
      }
    }
    cur = next;
  }
  return cur;
}

/// Ascending eigenvalues from Eigen's self-adjoint solver.
inline std::vector<double> eigen_oracle(const MatrixXcd& h) {
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(h, Eigen::EigenvaluesOnly);
  std::vector<double> out(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(out.begin(), out.end());
  return out;
}

/// Tr[(rho^Gamma)^k] for k = 1..m from oracle eigenvalues.
inline std::vector<double> pt_moments_oracle(const MatrixXcd& rho, int n, Mask a_mask, int m) {
  const auto ev = eigen_oracle(pt_oracle(rho, n, a_mask));
  std::vector<double> p(static_cast<size_t>(m), 0.0);
  for (double l : ev) {
    double pw = 1.0;
    for (int k = 1; k <= m; ++k) {
      pw *= l;
      p[static_cast<size_t>(k - 1)] += pw;
    }
  }
  return p;
}

/// Pure stabilizer state as a projector: prod (1 + S_i)/2 with Kronecker
/// generator matrices.
inline MatrixXcd stabilizer_projector(const StabilizerGroup& g) {
  const Eigen::Index dim = Eigen::Index{1} << g.n();
  MatrixXcd proj = MatrixXcd::Identity(dim, dim);
  for (const auto& s : g.generators())
    proj = proj * (MatrixXcd::Identity(dim, dim) + pauli_kron(s)) / 2.0;
  return proj;
}

inline std::vector<StabilizerGroup> catalog_up_to(int n_max) {
  std::vector<StabilizerGroup> out;
  for (int n = 1; n <= n_max; ++n) {
    out.push_back(state_catalog(CatalogState::ghz, n));
    out.push_back(state_catalog(CatalogState::zero, n));
    if (n % 2 == 0) out.push_back(state_catalog(CatalogState::bell_pairs, n));
    if (n == 6) out.push_back(state_catalog(CatalogState::ame6, n));
  }
  return out;
}

}  // namespace ptm::testing
