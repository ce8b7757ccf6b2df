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

#include "ptm/dense.hpp"
#include "ptm/enumerators.hpp"
#include "ptm/spectra.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace ptm;
namespace T = ptm::testing;

namespace {

const double kGrid[] = {0.0, 0.05, 0.2, 0.37, 0.5, 0.8, 1.0};

void check_sl(const SLVector<double>& a, const std::vector<double>& want, double tol = 1e-12) {
  REQUIRE(a.values.size() == want.size());
  for (size_t i = 0; i < want.size(); ++i) CHECK(std::abs(a.values[i] - want[i]) < tol);
}

std::vector<double> scaled(std::vector<double> v, double s) {
  for (auto& x : v) x /= s;
  return v;
}

std::vector<BigInt> big(std::initializer_list<long long> v) {
  std::vector<BigInt> out;
  for (auto x : v) out.emplace_back(x);
  return out;
}

detail::PolySet as_set(const std::vector<PolyWithMultiplicity>& v) { return detail::to_set(v); }

}  // namespace

TEST_CASE("Shor-Laflamme enumerators of catalog states") {
  const auto ame = state_catalog(CatalogState::ame6, 6);
  const auto want_ame = scaled({1, 0, 0, 0, 45, 0, 18}, 64);
  check_sl(sl_enumerators(state_from_group(ame)), want_ame);
  check_sl(sl_enumerators(ame), want_ame);

  check_sl(sl_enumerators(state_catalog(CatalogState::ghz, 2)), {0.25, 0.0, 0.75});
  const auto want_ghz4 = scaled({1, 0, 6, 0, 9}, 16);
  check_sl(sl_enumerators(state_from_group(state_catalog(CatalogState::ghz, 4))), want_ghz4);
  check_sl(sl_enumerators(state_catalog(CatalogState::ghz, 4)), want_ghz4);
  check_sl(ghz_sl_vector(4), want_ghz4);
  for (int n = 1; n <= 10; ++n) {
    const auto counted = sl_enumerators(state_catalog(CatalogState::ghz, n));
    check_sl(ghz_sl_vector(n), counted.values);
    CHECK(counted.sum() == doctest::Approx(1.0));
  }
}

TEST_CASE("noise decay of the enumerators") {
  const auto a = ghz_sl_vector(4);
  const auto d = sl_decay(a, 0.5);
  CHECK(d.values[2] == doctest::Approx(a.values[2] * std::pow(0.5, 4)));
  check_sl(sl_decay(a, 0.0), a.values);

  const auto g = state_catalog(CatalogState::ghz, 6);
  const auto rho = depolarize_local(state_from_group(g), 0.2);
  CHECK(noisy_purity(sl_enumerators(g), 0.2) == doctest::Approx(rho.purity()).epsilon(1e-12));
}

TEST_CASE("subsystem purities") {
  CHECK(rains_subsystem_purity(sl_enumerators(state_catalog(CatalogState::ghz, 2)), 0.0) == doctest::Approx(0.5));
  CHECK(rains_subsystem_purity(sl_enumerators(state_catalog(CatalogState::zero, 2)), 0.0) == doctest::Approx(1.0));

  const auto g = state_catalog(CatalogState::ghz, 4);
  const auto rho = depolarize_local(state_from_group(g), 0.1);
  double avg = 0.0;
  int count = 0;
  for (Mask a = 0; a < 16; ++a) {
    if (std::popcount(a) != 2) continue;
    const double exact = partial_trace(rho, a).purity();
    CHECK(subsystem_purity<double>(g, a, 0.1) == doctest::Approx(exact).epsilon(1e-12));
    avg += exact;
    ++count;
  }
  CHECK(rains_subsystem_purity(sl_enumerators(g), 0.1) == doctest::Approx(avg / count).epsilon(1e-12));

  for (const auto& grp : T::catalog_up_to(5)) {
    const auto clean = state_from_group(grp);
    for (double eps : {0.0, 0.3}) {
      const auto noisy = depolarize_local(clean, eps);
      for (int s = 0; s <= grp.n(); ++s) {
        double mean = 0.0;
        int members = 0;
        for (Mask a = 0; a <= full_mask(grp.n()); ++a) {
          if (std::popcount(a) != s) continue;
          mean += partial_trace(noisy, a).purity();
          ++members;
        }
        CHECK(average_subsystem_purity(sl_enumerators(grp), eps, s) == doctest::Approx(mean / members).epsilon(1e-10));
      }
    }
  }
  CHECK_THROWS_AS(rains_subsystem_purity(ghz_sl_vector(3), 0.1), std::invalid_argument);
}

TEST_CASE("fidelity from enumerators") {
  const auto ame = sl_enumerators(state_catalog(CatalogState::ame6, 6));
  CHECK(fidelity_from_enumerators(ame, 0.0) == doctest::Approx(1.0));
  const auto bell = state_catalog(CatalogState::ghz, 2);
  CHECK(fidelity_from_enumerators(sl_enumerators(bell), 0.5) == doctest::Approx(0.4375));
  CHECK(fidelity_pure(depolarize_local(state_from_group(bell), 0.5), bell) == doctest::Approx(0.4375));
  // Root near 0.145 for the AME state.
  CHECK(fidelity_from_enumerators(ame, 0.14) > 0.5);
  CHECK(fidelity_from_enumerators(ame, 0.15) < 0.5);
  for (const auto& g : T::catalog_up_to(6)) {
    const auto rho = state_from_group(g);
    for (double eps : {0.1, 0.6})
      CHECK(fidelity_from_enumerators(sl_enumerators(g), eps) ==
            doctest::Approx(fidelity_pure(depolarize_local(rho, eps), g)).epsilon(1e-12));
  }
}

TEST_CASE("GHZ fidelity closed forms") {
  for (int n : {2, 4, 6, 8})
    for (double eps : kGrid)
      CHECK(ghz_fidelity_closed_form(n, eps, +1) == doctest::Approx(fidelity_from_enumerators(ghz_sl_vector(n), eps)));
  CHECK(std::abs(ghz_fidelity_closed_form(4, 1.0, -1)) < 1e-15);
  CHECK(ghz_fidelity_closed_form(2, 0.5, -1) == doctest::Approx(0.375));
}

TEST_CASE("QWE at k = 2 is the Shor-Laflamme vector") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 10; ++trial) {
    const auto rho = T::random_state(2, 1 + trial % 4, rng);
    const auto t = qwe_bruteforce(rho, Bipartition::leading(2, 1), 2);
    const auto a = sl_enumerators(rho);
    for (int i = 0; i <= 2; ++i) CHECK(t.at(+1, 0, 2 * i) == doctest::Approx(a.values[static_cast<size_t>(i)]).epsilon(1e-12));
    double rest = 0.0;
    for (int th : {1, -1})
      for (int ph = 0; ph < 4; ++ph)
        for (int w = 0; w <= 4; ++w)
          if (!(th == 1 && ph == 0 && w % 2 == 0)) rest += std::abs(t.at(th, ph, w));
    CHECK(rest < 1e-14);
  }
}

TEST_CASE("QWE reconstruction of the Bell state") {
  const auto bell = state_from_group(state_catalog(CatalogState::ghz, 2));
  const auto bip = Bipartition::leading(2, 1);
  const auto t = qwe_bruteforce(bell, bip, 3);
  for (double eps : kGrid)
    CHECK(noisy_pt_moment(t, eps) == doctest::Approx(pt_moments(depolarize_local(bell, eps), bip, 3).p(3)).epsilon(1e-12));

  const auto mixed = qwe_bruteforce(DenseOperator::maximally_mixed(2), bip, 3);
  double off = 0.0;
  for (int th : {1, -1})
    for (int ph = 0; ph < 4; ++ph)
      for (int w = 0; w <= 6; ++w)
        if (!(th == 1 && ph == 0 && w == 0)) off += std::abs(mixed.at(th, ph, w));
  CHECK(off < 1e-15);
  CHECK(mixed.at(1, 0, 0) == doctest::Approx(1.0 / 16.0));
  CHECK_THROWS_AS(qwe_bruteforce(bell, bip, 3, 100), std::length_error);
}

TEST_CASE("QWE reconstruction on random states") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    const auto rho = T::random_state(2, 1 + trial % 4, rng);
    const auto bip = Bipartition::leading(2, 1);
    for (int k : {2, 3}) {
      const auto t = qwe_bruteforce(rho, bip, k);
      for (double eps : kGrid) {
        const auto noisy = T::depolarize_oracle(rho.m, 2, eps);
        const double want = T::pt_moments_oracle(noisy, 2, bip.a_mask, k)[static_cast<size_t>(k - 1)];
        CHECK(std::abs(noisy_pt_moment(t, eps) - want) < 1e-9);
      }
    }
  }
}

TEST_CASE("imaginary parts cancel between conjugate phases") {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 10; ++trial) {
    const auto rho = T::random_state(2, 2, rng);
    const auto t = qwe_bruteforce(rho, Bipartition::leading(2, 1), 3);
    for (double eps : kGrid) {
      double imag = 0.0;
      double z = 1.0;
      for (int w = 0; w <= 6; ++w) {
        for (int th : {1, -1}) imag += th * (t.at(th, 2, w) - t.at(th, 3, w)) * z;
        z *= 1.0 - eps;
      }
      CHECK(std::abs(imag) < 1e-12);
    }
  }
}

TEST_CASE("stabilizer tuple counts for the Bell state") {
  const auto g = state_catalog(CatalogState::ghz, 2);
  const auto bip = Bipartition::leading(2, 1);
  const auto k2 = cw_bruteforce(g, bip, 2);
  CHECK(k2.plus == big({1, 0, 0, 0, 3}));
  CHECK(k2.minus == big({0, 0, 0, 0, 0}));
  const auto k3 = cw_bruteforce(g, bip, 3);
  CHECK(k3.plus == big({1, 0, 0, 0, 9, 0, 0}));
  CHECK(k3.minus == big({0, 0, 0, 0, 0, 0, 6}));
  CHECK(cw_fourier(g, bip, 3).difference() == big({1, 0, 0, 0, 9, 0, -6}));

  const auto none = cw_bruteforce(g, Bipartition::leading(2, 0), 3);
  for (const auto& c : none.minus) CHECK(c == 0);
  CHECK_THROWS_AS(cw_bruteforce(state_catalog(CatalogState::ame6, 6), bip.complement(), 3), std::invalid_argument);
  CHECK_THROWS_AS(cw_bruteforce(state_catalog(CatalogState::ghz, 8), Bipartition::leading(8, 4), 5, 1000),
                  std::length_error);
}

TEST_CASE("tuple counts cover every tuple") {
  for (const auto& g : T::catalog_up_to(5)) {
    for (int k = 1; k <= 3; ++k) {
      const auto t = cw_bruteforce(g, Bipartition::leading(g.n(), g.n() / 2), k);
      BigInt total = 0;
      for (size_t w = 0; w < t.plus.size(); ++w) total += t.plus[w] + t.minus[w];
      CHECK(total == pow2(g.n() * (k - 1)));
    }
  }
}

TEST_CASE("character polynomials of the Bell state") {
  const auto cp = character_polys(state_catalog(CatalogState::ghz, 2), Bipartition::leading(2, 1));
  detail::PolySet minus{{IntPoly::from_ints({1, 0, 1}), 3}, {IntPoly::from_ints({1, 0, -3}), 1}};
  detail::PolySet plus{{IntPoly::from_ints({1, 0, 3}), 1}, {IntPoly::from_ints({1, 0, -1}), 3}};
  CHECK(as_set(cp.minus) == minus);
  CHECK(as_set(cp.plus) == plus);
  CHECK(cp.plus.front().poly == IntPoly::from_ints({1, 0, 3}));
  CHECK(cw_fourier(cp, 1).plus == big({1, 0, 0}));
}

TEST_CASE("character polynomial bookkeeping") {
  for (const auto& g : T::catalog_up_to(6)) {
    const int n = g.n();
    for (int s = 0; s <= n; ++s) {
      const auto cp = character_polys(g, Bipartition::leading(n, s));
      for (const auto* set : {&cp.minus, &cp.plus}) {
        BigInt mult = 0;
        for (const auto& [poly, m] : *set) {
          mult += m;
          CHECK(poly.coeff(0) == 1);
        }
        CHECK(mult == pow2(n));
      }
      // The trivial character of the plus set is the weight enumerator.
      const auto counts = weight_counts(g);
      const auto& head = cp.plus.front().poly;
      for (int w = 0; w <= n; ++w) CHECK(head.coeff(w) == BigInt(counts[static_cast<size_t>(w)]));
    }
  }
}

TEST_CASE("AME character sets") {
  const auto ame = state_catalog(CatalogState::ame6, 6);
  const auto cp = character_polys(ame, Bipartition::leading(6, 3));
  CHECK(as_set(cp.minus).count(IntPoly::from_ints({1, 0, 0, 0, 9, 0, -18})) == 1);
  CHECK(as_set(cp.plus) == ame_published_plus_set());
  const auto published = ame_published_minus_sets();
  // The sets depend only on |A|.
  for (Mask a = 0; a < 64; ++a) {
    const int size = std::popcount(a);
    const int key = std::min(size, 6 - size);
    CHECK(as_set(character_polys(ame, Bipartition(6, a)).minus) == published.at(key));
  }
  CHECK(ame_fixture_check().ok);
  CHECK(cw_fourier(ame, Bipartition::leading(6, 1), 3) == cw_bruteforce(ame, Bipartition::leading(6, 1), 3));
}

TEST_CASE("fast counts equal exhaustive counts") {
  for (const auto& g : T::catalog_up_to(6)) {
    const int n = g.n();
    for (int s = 0; s <= n; ++s) {
      const auto bip = Bipartition::leading(n, s);
      const auto cp = character_polys(g, bip);
      for (int k = 1; k <= 4; ++k) CHECK(cw_fourier(cp, k) == cw_bruteforce(g, bip, k));
    }
  }
}

TEST_CASE("stabilizer moments match dense PT moments") {
  const auto bell = state_catalog(CatalogState::ghz, 2);
  const auto bip = Bipartition::leading(2, 1);
  const auto t3 = cw_bruteforce(bell, bip, 3);
  CHECK(noisy_pt_moment(t3, 0.0) == doctest::Approx(0.25));
  CHECK(noisy_pt_moment(t3, 1.0) == doctest::Approx(std::ldexp(1.0, -4)));

  for (const auto& g : T::catalog_up_to(4)) {
    const int n = g.n();
    const auto clean = state_from_group(g);
    for (Mask a = 0; a <= full_mask(n); ++a) {
      const Bipartition cut(n, a);
      const auto cp = character_polys(g, cut);
      for (double eps : kGrid) {
        const auto want = T::pt_moments_oracle(depolarize_local(clean, eps).m, n, a, 5);
        for (int k = 1; k <= 5; ++k) {
          const double w = want[static_cast<size_t>(k - 1)];
          CHECK(std::abs(noisy_pt_moment(cw_fourier(cp, k), eps) - w) < 1e-9);
          CHECK(std::abs(noisy_pt_moment(cp, k, eps) - w) < 1e-9);
        }
      }
    }
  }
}

TEST_CASE("integer polynomials") {
  const auto p = IntPoly::from_ints({1, 0, 1});
  CHECK((p * p) == IntPoly::from_ints({1, 0, 2, 0, 1}));
  CHECK(p.pow(3) == p * p * p);
  CHECK(p.evaluate(2.0) == doctest::Approx(5.0));
  CHECK(IntPoly::from_ints({1, 0, 0, 0, 9, 0, -6}).str() == "1 + 9z^4 - 6z^6");
  CHECK(IntPoly::from_ints({1, 0, 0}).degree() == 0);
}
