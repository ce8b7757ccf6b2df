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

// Dense reference engine. Qubit 0 is the most significant bit of a basis
// index, so qubit a of an n-qubit index i is bit (n-1-a).

#include "ptm/linalg.hpp"
#include "ptm/pauli.hpp"
#include "ptm/spectra.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace ptm {

using Complex = std::complex<double>;

inline constexpr int kDefaultDenseCap = 12;

/// 2^n x 2^n complex matrix on n qubits.
struct DenseOperator {
  int n = 0;
  Eigen::MatrixXcd m;

  DenseOperator() = default;
  DenseOperator(int qubits, Eigen::MatrixXcd entries) : n(qubits), m(std::move(entries)) {
    const Eigen::Index dim = Eigen::Index{1} << qubits;
    if (m.rows() != dim || m.cols() != dim)
      throw std::invalid_argument("DenseOperator: matrix is not 2^n x 2^n");
  }

  static DenseOperator zeros(int qubits) {
    const Eigen::Index dim = Eigen::Index{1} << qubits;
    return DenseOperator(qubits, Eigen::MatrixXcd::Zero(dim, dim));
  }

  static DenseOperator maximally_mixed(int qubits) {
    const Eigen::Index dim = Eigen::Index{1} << qubits;
    return DenseOperator(qubits, Eigen::MatrixXcd::Identity(dim, dim) / static_cast<double>(dim));
  }

  Eigen::Index dim() const { return m.rows(); }
  Complex trace() const { return m.trace(); }
  double purity() const { return (m * m).trace().real(); }
};

namespace detail {

inline void check_dense_cap(int n, int cap, const char* what) {
  if (n > cap)
    throw std::invalid_argument(std::string(what) + ": n = " + std::to_string(n) +
                                " exceeds the dense cap of " + std::to_string(cap));
}

// Qubit mask -> basis-index mask (qubit a is index bit n-1-a).
inline std::uint64_t index_mask(Mask qubits, int n) {
  std::uint64_t out = 0;
  for (int a = 0; a < n; ++a)
    if ((qubits >> a) & 1u) out |= std::uint64_t{1} << (n - 1 - a);
  return out;
}

inline Complex i_power(unsigned e) {
  static const Complex kUnits[] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  return kUnits[e & 3u];
}

inline void check_eps(double eps, const char* what) {
  if (!(eps >= 0.0 && eps <= 1.0))
    throw std::invalid_argument(std::string(what) + ": eps must lie in [0,1]");
}

}  // namespace detail

/// Column action of a Pauli: P|j> = amplitude(j) |j ^ flip>.
struct PauliAction {
  std::uint64_t flip = 0;
  std::uint64_t sign_mask = 0;
  Complex global{1, 0};

  explicit PauliAction(const PauliString& p)
      : flip(detail::index_mask(p.x, p.n)),
        sign_mask(detail::index_mask(p.z, p.n)),
        global(detail::i_power(p.phase_exp)) {}

  Complex amplitude(std::uint64_t j) const {
    return (std::popcount(sign_mask & j) & 1) ? -global : global;
  }
};

inline DenseOperator pauli_dense(const PauliString& p) {
  DenseOperator out = DenseOperator::zeros(p.n);
  const PauliAction act(p);
  for (std::uint64_t j = 0; j < static_cast<std::uint64_t>(out.dim()); ++j)
    out.m(static_cast<Eigen::Index>(j ^ act.flip), static_cast<Eigen::Index>(j)) = act.amplitude(j);
  return out;
}

/// Tr[rho P] in O(2^n).
inline Complex pauli_expectation(const DenseOperator& rho, const PauliString& p) {
  if (rho.n != p.n) throw std::invalid_argument("pauli_expectation: qubit counts differ");
  const PauliAction act(p);
  Complex sum = 0;
  for (std::uint64_t j = 0; j < static_cast<std::uint64_t>(rho.dim()); ++j)
    sum += rho.m(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j ^ act.flip)) * act.amplitude(j);
  return sum;
}

/// out += coeff * P
inline void add_pauli(DenseOperator& out, const PauliString& p, Complex coeff) {
  const PauliAction act(p);
  for (std::uint64_t j = 0; j < static_cast<std::uint64_t>(out.dim()); ++j)
    out.m(static_cast<Eigen::Index>(j ^ act.flip), static_cast<Eigen::Index>(j)) += coeff * act.amplitude(j);
}

/// Projector sum_S S / 2^n onto the stabilizer state.
inline DenseOperator state_from_group(const StabilizerGroup& g, int cap = kDefaultDenseCap) {
  detail::check_dense_cap(g.n(), cap, "state_from_group");
  DenseOperator out = DenseOperator::zeros(g.n());
  const double norm = 1.0 / static_cast<double>(out.dim());
  for (const auto& s : enumerate_group(g)) add_pauli(out, s, norm);
  return out;
}

/// (1-eps)|psi-><psi-| + eps/4 with |psi-> = (|01> - |10>)/sqrt 2.
inline DenseOperator werner_state(double eps) {
  detail::check_eps(eps, "werner_state");
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(4);
  psi(1) = 1.0 / std::sqrt(2.0);
  psi(2) = -1.0 / std::sqrt(2.0);
  Eigen::MatrixXcd m = (1.0 - eps) * (psi * psi.adjoint()) + (eps / 4.0) * Eigen::MatrixXcd::Identity(4, 4);
  return DenseOperator(2, std::move(m));
}

/// Single-qubit depolarizing channel applied to every qubit.
inline DenseOperator depolarize_local(const DenseOperator& rho, double eps) {
  detail::check_eps(eps, "depolarize_local");
  DenseOperator out = rho;
  const Eigen::Index dim = rho.dim();
  for (int a = 0; a < rho.n; ++a) {
    const Eigen::Index bit = Eigen::Index{1} << (rho.n - 1 - a);
    Eigen::MatrixXcd next(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
      for (Eigen::Index j = 0; j < dim; ++j) {
        if (((i ^ j) & bit) != 0) {
          next(i, j) = (1.0 - eps) * out.m(i, j);
        } else {
          next(i, j) = (1.0 - eps / 2.0) * out.m(i, j) + (eps / 2.0) * out.m(i ^ bit, j ^ bit);
        }
      }
    }
    out.m = std::move(next);
  }
  return out;
}

/// Same channel via Pauli coefficients: Tr[rho P] -> (1-eps)^wt(P) Tr[rho P].
/// Costs O(8^n); intended as an oracle for small n.
inline DenseOperator depolarize_local_pauli(const DenseOperator& rho, double eps, int cap = 8) {
  detail::check_eps(eps, "depolarize_local_pauli");
  detail::check_dense_cap(rho.n, cap, "depolarize_local_pauli");
  const int n = rho.n;
  DenseOperator out = DenseOperator::zeros(n);
  const double norm = 1.0 / static_cast<double>(rho.dim());
  const Mask full = full_mask(n);
  for (Mask x = 0; x <= full; ++x) {
    for (Mask z = 0; z <= full; ++z) {
      // Hermitian phase, so rho = 2^-n sum_P Tr[rho P] P.
      const PauliString p(n, x, z, static_cast<unsigned>(std::popcount(x & z)));
      const Complex c = pauli_expectation(rho, p);
      if (c == Complex(0)) continue;
      add_pauli(out, p, c * norm * std::pow(1.0 - eps, weight(p)));
    }
  }
  return out;
}

/// (1-eps) rho + eps Tr[rho] 1/2^n.
inline DenseOperator depolarize_global(const DenseOperator& rho, double eps) {
  detail::check_eps(eps, "depolarize_global");
  DenseOperator out = rho;
  out.m *= (1.0 - eps);
  const Complex shift = eps * rho.trace() / static_cast<double>(rho.dim());
  for (Eigen::Index i = 0; i < rho.dim(); ++i) out.m(i, i) += shift;
  return out;
}

/// <a,b|rho^Gamma|a',b'> = <a',b|rho|a,b'>: swap the A bits of row and column.
inline DenseOperator partial_transpose(const DenseOperator& rho, const Bipartition& bip) {
  if (bip.n != rho.n) throw std::invalid_argument("partial_transpose: qubit counts differ");
  const auto amask = static_cast<Eigen::Index>(detail::index_mask(bip.a_mask, rho.n));
  DenseOperator out = DenseOperator::zeros(rho.n);
  const Eigen::Index dim = rho.dim();
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) {
      const Eigen::Index swap = (i ^ j) & amask;
      out.m(i ^ swap, j ^ swap) = rho.m(i, j);
    }
  }
  return out;
}

/// Reduced operator on the qubits in `keep` (ordering preserved).
inline DenseOperator partial_trace(const DenseOperator& rho, Mask keep) {
  const int n = rho.n;
  std::vector<int> kept, traced;
  for (int a = 0; a < n; ++a) ((keep >> a) & 1u ? kept : traced).push_back(a);
  const int nk = static_cast<int>(kept.size());
  const int nt = static_cast<int>(traced.size());
  auto spread = [n](const std::vector<int>& qubits, std::uint64_t local) {
    // local bit (size-1-t) corresponds to qubits[t]
    const int size = static_cast<int>(qubits.size());
    std::uint64_t idx = 0;
    for (int t = 0; t < size; ++t)
      if ((local >> (size - 1 - t)) & 1u) idx |= std::uint64_t{1} << (n - 1 - qubits[static_cast<size_t>(t)]);
    return idx;
  };
  DenseOperator out = DenseOperator::zeros(nk);
  const std::uint64_t kdim = std::uint64_t{1} << nk;
  const std::uint64_t tdim = std::uint64_t{1} << nt;
  for (std::uint64_t r = 0; r < kdim; ++r) {
    const std::uint64_t rr = spread(kept, r);
    for (std::uint64_t c = 0; c < kdim; ++c) {
      const std::uint64_t cc = spread(kept, c);
      Complex sum = 0;
      for (std::uint64_t t = 0; t < tdim; ++t) {
        const std::uint64_t tt = spread(traced, t);
        sum += rho.m(static_cast<Eigen::Index>(rr | tt), static_cast<Eigen::Index>(cc | tt));
      }
      out.m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = sum;
    }
  }
  return out;
}

/// Ascending eigenvalues of a Hermitian operator. Rejects inputs whose
/// anti-Hermitian part exceeds 1e-12 of the largest entry.
inline std::vector<double> hermitian_eigenvalues(const DenseOperator& op) {
  const double scale = op.m.cwiseAbs().maxCoeff();
  const double skew = (op.m - op.m.adjoint()).cwiseAbs().maxCoeff();
  if (skew > 1e-12 * std::max(scale, 1e-300) && skew > 0.0)
    throw std::invalid_argument("hermitian_eigenvalues: operator is not Hermitian (deviation " +
                                std::to_string(skew) + ")");
  Eigen::MatrixXcd sym = (op.m + op.m.adjoint()) / 2.0;
  const auto sys = hermitian_eigensystem(std::move(sym), false);
  return {sys.values.data(), sys.values.data() + sys.values.size()};
}

/// p_k and p~_k from the eigenvalues of rho^Gamma.
inline MomentVector<double> pt_moments(const DenseOperator& rho, const Bipartition& bip, int m_max) {
  if (m_max < 1) throw std::invalid_argument("pt_moments: m_max must be >= 1");
  const auto eig = hermitian_eigenvalues(partial_transpose(rho, bip));
  return moments_from_spectrum(Spectrum<double>::from_eigenvalues(rho.n, eig), m_max);
}

inline std::vector<double> schatten_moments(const DenseOperator& rho, const Bipartition& bip, int m_max) {
  return pt_moments(rho, bip, m_max).schatten;
}

/// PT spectrum with unit multiplicities.
inline Spectrum<double> pt_spectrum(const DenseOperator& rho, const Bipartition& bip) {
  const auto eig = hermitian_eigenvalues(partial_transpose(rho, bip));
  return Spectrum<double>::from_eigenvalues(rho.n, eig);
}

inline double log_negativity(const DenseOperator& rho, const Bipartition& bip) {
  double norm = 0.0;
  for (double v : hermitian_eigenvalues(partial_transpose(rho, bip))) norm += std::abs(v);
  return std::log2(norm);
}

/// Tr[rho Psi] for the stabilizer state of g, as 2^-n sum_S Tr[rho S].
inline double fidelity_pure(const DenseOperator& rho, const StabilizerGroup& g) {
  if (rho.n != g.n()) throw std::invalid_argument("fidelity_pure: qubit counts differ");
  Complex sum = 0;
  for (const auto& s : enumerate_group(g)) sum += pauli_expectation(rho, s);
  return sum.real() / static_cast<double>(rho.dim());
}

/// Kronecker product a (x) b, with a's qubits first.
inline DenseOperator tensor(const DenseOperator& a, const DenseOperator& b) {
  const Eigen::Index db = b.dim();
  Eigen::MatrixXcd m(a.dim() * db, a.dim() * db);
  for (Eigen::Index i = 0; i < a.dim(); ++i)
    for (Eigen::Index j = 0; j < a.dim(); ++j) m.block(i * db, j * db, db, db) = a.m(i, j) * b.m;
  return DenseOperator(a.n + b.n, std::move(m));
}

}  // namespace ptm
