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

#include <algorithm>
#include <bit>
#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ptm {

/// Largest qubit count representable by the 64-bit symplectic masks.
inline constexpr int kMaxQubits = 64;

/// Bit `a` of a mask refers to qubit `a` (0-based). Qubit 0 is the leftmost
/// tensor factor and the most significant bit of a dense basis index.
using Mask = std::uint64_t;

inline Mask full_mask(int n) { return n >= 64 ? ~Mask{0} : ((Mask{1} << n) - 1); }

/// n-qubit Pauli operator i^phase_exp * prod_a X^{x_a} Z^{z_a}.
///
/// `phase_exp` is relative to the X^x Z^z product, not to the Hermitian
/// pattern letters: the operator XZ has phase_exp 0 and equals -iY.
/// `pattern_phase()` gives the exponent relative to the letters I/X/Y/Z.
struct PauliString {
  int n = 0;
  Mask x = 0;
  Mask z = 0;
  unsigned phase_exp = 0;

  PauliString() = default;
  PauliString(int qubits, Mask x_mask, Mask z_mask, unsigned phase = 0)
      : n(qubits), x(x_mask), z(z_mask), phase_exp(phase & 3u) {
    if (qubits < 0 || qubits > kMaxQubits)
      throw std::invalid_argument("PauliString: qubit count out of range");
    if (((x_mask | z_mask) & ~full_mask(qubits)) != 0)
      throw std::invalid_argument("PauliString: mask has bits beyond n");
  }

  static PauliString identity(int n) { return PauliString(n, 0, 0, 0); }

  /// Parses an optional sign ("+", "-", "i", "-i") followed by n letters
  /// from {I, X, Y, Z, _}. Letters denote Hermitian Paulis, so "Y" is
  /// stored as x=z=1 with phase_exp 1.
  static PauliString parse(std::string_view text) {
    unsigned sign = 0;
    if (text.starts_with("+i")) {
      sign = 1;
      text.remove_prefix(2);
    } else if (text.starts_with("-i")) {
      sign = 3;
      text.remove_prefix(2);
    } else if (text.starts_with("i")) {
      sign = 1;
      text.remove_prefix(1);
    } else if (text.starts_with("+")) {
      text.remove_prefix(1);
    } else if (text.starts_with("-")) {
      sign = 2;
      text.remove_prefix(1);
    }
    const int n = static_cast<int>(text.size());
    if (n > kMaxQubits) throw std::invalid_argument("PauliString: too many qubits");
    Mask xm = 0, zm = 0;
    unsigned ys = 0;
    for (int a = 0; a < n; ++a) {
      const Mask bit = Mask{1} << a;
      switch (text[static_cast<size_t>(a)]) {
        case 'I':
        case '_':
          break;
        case 'X':
          xm |= bit;
          break;
        case 'Z':
          zm |= bit;
          break;
        case 'Y':
          xm |= bit;
          zm |= bit;
          ++ys;
          break;
        default:
          throw std::invalid_argument("PauliString: bad letter in '" + std::string(text) + "'");
      }
    }
    return PauliString(n, xm, zm, sign + ys);
  }

  int y_count() const { return std::popcount(x & z); }

  /// Exponent e such that the operator is i^e times the tensor product of
  /// the Hermitian letters.
  unsigned pattern_phase() const {
    return (phase_exp + 4u - static_cast<unsigned>(y_count() % 4)) & 3u;
  }

  bool is_hermitian() const { return (phase_exp & 1u) == static_cast<unsigned>(y_count() & 1); }
  bool is_identity_pattern() const { return x == 0 && z == 0; }
  bool same_pattern(const PauliString& o) const { return n == o.n && x == o.x && z == o.z; }

  char letter(int a) const {
    const bool xb = (x >> a) & 1u;
    const bool zb = (z >> a) & 1u;
    return xb ? (zb ? 'Y' : 'X') : (zb ? 'Z' : 'I');
  }

  /// Letters with a sign prefix from {+, -, +i, -i}.
  std::string str() const {
    static constexpr const char* kSigns[] = {"+", "+i", "-", "-i"};
    std::string out = kSigns[pattern_phase()];
    for (int a = 0; a < n; ++a) out.push_back(letter(a));
    return out;
  }

  friend bool operator==(const PauliString&, const PauliString&) = default;
};

/// Number of non-identity tensor factors.
inline int weight(const PauliString& p) { return std::popcount(p.x | p.z); }

inline bool commutes(const PauliString& p, const PauliString& q) {
  return ((std::popcount(p.x & q.z) + std::popcount(p.z & q.x)) & 1) == 0;
}

/// Operator product p*q with exact phase tracking:
/// X^x1 Z^z1 X^x2 Z^z2 = (-1)^{|z1 & x2|} X^{x1^x2} Z^{z1^z2}.
inline PauliString multiply(const PauliString& p, const PauliString& q) {
  if (p.n != q.n) throw std::invalid_argument("multiply: qubit counts differ");
  const unsigned swaps = static_cast<unsigned>(std::popcount(p.z & q.x));
  return PauliString(p.n, p.x ^ q.x, p.z ^ q.z, p.phase_exp + q.phase_exp + 2u * swaps);
}

/// Subset A of the qubits; the complement is B.
struct Bipartition {
  int n = 0;
  Mask a_mask = 0;

  Bipartition() = default;
  Bipartition(int qubits, Mask a) : n(qubits), a_mask(a) {
    if (qubits < 0 || qubits > kMaxQubits) throw std::invalid_argument("Bipartition: bad n");
    if ((a & ~full_mask(qubits)) != 0)
      throw std::invalid_argument("Bipartition: A contains qubits beyond n");
  }

  /// A = {first, ..., first+size-1} in 0-based qubit indices.
  static Bipartition leading(int n, int size) {
    if (size < 0 || size > n) throw std::invalid_argument("Bipartition: size out of range");
    return Bipartition(n, full_mask(size));
  }

  /// Builds A from 1-based qubit labels.
  static Bipartition from_labels(int n, std::span<const int> labels) {
    Mask a = 0;
    for (int label : labels) {
      if (label < 1 || label > n)
        throw std::invalid_argument("Bipartition: qubit label " + std::to_string(label) +
                                    " outside 1.." + std::to_string(n));
      a |= Mask{1} << (label - 1);
    }
    return Bipartition(n, a);
  }

  Mask b_mask() const { return full_mask(n) & ~a_mask; }
  Bipartition complement() const { return Bipartition(n, b_mask()); }
  int a_size() const { return std::popcount(a_mask); }
};

/// (-1)^{number of qubits in A carrying a Y}. Phase is ignored.
inline int theta(const PauliString& p, const Bipartition& bip) {
  return (std::popcount(p.x & p.z & bip.a_mask) & 1) ? -1 : 1;
}

/// Normalized trace of the ordered product, in {0, +-1, +-i}.
inline std::complex<int> phi(std::span<const PauliString> ps) {
  if (ps.empty()) return {1, 0};
  PauliString acc = ps.front();
  for (size_t i = 1; i < ps.size(); ++i) acc = multiply(acc, ps[i]);
  if (!acc.is_identity_pattern()) return {0, 0};
  static constexpr std::complex<int> kUnits[] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  return kUnits[acc.phase_exp];
}

class invalid_group : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Abelian group of Hermitian Paulis generated by n independent commuting
/// generators, not containing -1. Construction validates all of this.
class StabilizerGroup {
 public:
  StabilizerGroup(int n, std::vector<PauliString> generators)
      : n_(n), generators_(std::move(generators)) {
    validate();
  }

  int n() const { return n_; }
  const std::vector<PauliString>& generators() const { return generators_; }

  /// Element for generator subset `subset` (bit i selects generator i),
  /// multiplied in ascending generator order.
  PauliString element(std::uint64_t subset) const {
    PauliString acc = PauliString::identity(n_);
    for (int i = 0; i < n_; ++i) {
      if ((subset >> i) & 1u) acc = multiply(acc, generators_[static_cast<size_t>(i)]);
    }
    return acc;
  }

 private:
  void validate() const {
    if (n_ < 1 || n_ > kMaxQubits) throw invalid_group("StabilizerGroup: qubit count out of range");
    if (static_cast<int>(generators_.size()) != n_)
      throw invalid_group("StabilizerGroup: need exactly n generators, got " +
                          std::to_string(generators_.size()));
    for (const auto& g : generators_) {
      if (g.n != n_) throw invalid_group("StabilizerGroup: generator has wrong qubit count");
      if (!g.is_hermitian())
        throw invalid_group("StabilizerGroup: generator " + g.str() + " is not Hermitian");
    }
    for (size_t i = 0; i < generators_.size(); ++i)
      for (size_t j = i + 1; j < generators_.size(); ++j)
        if (!commutes(generators_[i], generators_[j]))
          throw invalid_group("StabilizerGroup: generators " + generators_[i].str() + " and " +
                              generators_[j].str() + " anticommute");

    // Gaussian elimination over GF(2) with phases carried along. A generator
    // that reduces to the identity pattern is dependent; a nontrivial phase
    // on that identity means -1 lies in the group.
    std::vector<PauliString> basis;
    std::vector<int> pivots;
    for (const auto& g : generators_) {
      PauliString r = g;
      for (size_t b = 0; b < basis.size(); ++b) {
        const int bit = pivots[b];
        const bool set = bit < 64 ? ((r.x >> bit) & 1u) : ((r.z >> (bit - 64)) & 1u);
        if (set) r = multiply(r, basis[b]);
      }
      if (r.is_identity_pattern()) {
        if (r.phase_exp != 0) throw invalid_group("StabilizerGroup: -1 is in the group");
        throw invalid_group("StabilizerGroup: generators are not independent");
      }
      const int pivot = r.x != 0 ? std::countr_zero(r.x) : 64 + std::countr_zero(r.z);
      basis.push_back(r);
      pivots.push_back(pivot);
    }
  }

  int n_;
  std::vector<PauliString> generators_;
};

/// All 2^n group elements ordered by generator subset bitmask.
inline std::vector<PauliString> enumerate_group(const StabilizerGroup& g) {
  const int n = g.n();
  if (n > 30) throw std::invalid_argument("enumerate_group: 2^n elements is too many");
  const std::uint64_t order = std::uint64_t{1} << n;
  std::vector<PauliString> out(order);
  out[0] = PauliString::identity(n);
  // Gray-code style: element(b) = element(b without its top bit) * g_top
  // keeps the ascending-generator multiplication order.
  for (std::uint64_t b = 1; b < order; ++b) {
    const int top = 63 - std::countl_zero(b);
    const std::uint64_t rest = b & ~(std::uint64_t{1} << top);
    out[b] = multiply(out[rest], g.generators()[static_cast<size_t>(top)]);
    if (out[b].is_identity_pattern())
      throw invalid_group("enumerate_group: " + std::string(out[b].phase_exp ? "-1" : "identity") +
                          " reached by a nonempty generator product");
  }
  return out;
}

enum class CatalogState { ghz, zero, bell_pairs, ame6 };

inline std::optional<CatalogState> parse_catalog_state(std::string_view name) {
  if (name == "ghz") return CatalogState::ghz;
  if (name == "zero") return CatalogState::zero;
  if (name == "bell_pairs" || name == "bell") return CatalogState::bell_pairs;
  if (name == "ame6" || name == "ame") return CatalogState::ame6;
  return std::nullopt;
}

inline std::string to_string(CatalogState s) {
  switch (s) {
    case CatalogState::ghz:
      return "ghz";
    case CatalogState::zero:
      return "zero";
    case CatalogState::bell_pairs:
      return "bell_pairs";
    case CatalogState::ame6:
      return "ame6";
  }
  return "?";
}

inline StabilizerGroup state_catalog(CatalogState name, int n) {
  std::vector<PauliString> gens;
  switch (name) {
    case CatalogState::ghz: {
      if (n < 1) throw std::invalid_argument("ghz needs n >= 1");
      gens.emplace_back(n, full_mask(n), 0);
      for (int i = 0; i + 1 < n; ++i) gens.emplace_back(n, 0, Mask{3} << i);
      break;
    }
    case CatalogState::zero: {
      if (n < 1) throw std::invalid_argument("zero needs n >= 1");
      for (int i = 0; i < n; ++i) gens.emplace_back(n, 0, Mask{1} << i);
      break;
    }
    case CatalogState::bell_pairs: {
      if (n < 2 || n % 2 != 0) throw std::invalid_argument("bell_pairs needs an even n >= 2");
      for (int i = 0; i < n; i += 2) {
        gens.emplace_back(n, Mask{3} << i, 0);
        gens.emplace_back(n, 0, Mask{3} << i);
      }
      break;
    }
    case CatalogState::ame6: {
      if (n != 6) throw std::invalid_argument("ame6 requires n = 6");
      // Cyclic [[5,1,3]] stabilizers on qubits 2..6, then the logical
      // operators paired with qubit 1.
      for (const char* s : {"IXZZXI", "IIXZZX", "IXIXZZ", "IZXIXZ", "XXXXXX", "ZZZZZZ"})
        gens.push_back(PauliString::parse(s));
      break;
    }
  }
  return StabilizerGroup(n, std::move(gens));
}

namespace detail {

// Rank over GF(2) of 64-bit rows (destructive).
inline int gf2_rank(std::vector<std::uint64_t> rows) {
  int rank = 0;
  for (int bit = 0; bit < 64 && !rows.empty(); ++bit) {
    const std::uint64_t m = std::uint64_t{1} << bit;
    auto it = std::find_if(rows.begin(), rows.end(), [m](std::uint64_t r) { return (r & m) != 0; });
    if (it == rows.end()) continue;
    const std::uint64_t pivot = *it;
    rows.erase(it);
    for (auto& r : rows)
      if (r & m) r ^= pivot;
    ++rank;
  }
  return rank;
}

// Packs the B-side symplectic bits of p into one word (x bits low, z high).
inline std::uint64_t restrict_to(const PauliString& p, Mask side, int side_size) {
  std::uint64_t out = 0;
  int k = 0;
  for (int a = 0; a < p.n; ++a) {
    if (!((side >> a) & 1u)) continue;
    out |= ((p.x >> a) & 1u) << k;
    out |= ((p.z >> a) & 1u) << (k + side_size);
    ++k;
  }
  return out;
}

}  // namespace detail

/// Number of Bell pairs shared across A|B: |A| - log2 |S_A|, where S_A is
/// the subgroup supported on A. log2 |S_A| = n - rank of the generators
/// projected onto B.
inline int bell_pair_rank(const StabilizerGroup& g, const Bipartition& bip) {
  if (bip.n != g.n()) throw std::invalid_argument("bell_pair_rank: qubit counts differ");
  const Mask b = bip.b_mask();
  const int b_size = std::popcount(b);
  if (2 * b_size > 64) {
    // Symmetric in A and B; project onto the smaller side instead.
    return bell_pair_rank(g, bip.complement());
  }
  std::vector<std::uint64_t> rows;
  for (const auto& gen : g.generators()) rows.push_back(detail::restrict_to(gen, b, b_size));
  const int local_dim = g.n() - detail::gf2_rank(std::move(rows));
  return bip.a_size() - local_dim;
}

}  // namespace ptm
