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

#include "ptm/criteria.hpp"
#include "ptm/spectra.hpp"
#include "ptm/thresholds.hpp"

#include <doctest.h>

#include <cmath>

using namespace ptm;

namespace {

NoisyState ghz(int n) { return NoisyState::balanced(CatalogState::ghz, n, NoiseKind::local); }

NoisyState ame(int size) {
  return NoisyState::with_cut(CatalogState::ame6, Bipartition::leading(6, size), NoiseKind::local);
}

bool fires_at(const CriterionSpec& spec, const NoisyState& s, ModelKind model, double eps) {
  if (model == ModelKind::dense) return CriterionEvaluator<double>(s, model).evaluate(spec, eps, 1e-10).entangled();
  const CriterionEvaluator<Float60> ev(s, model);
  return ev.evaluate(spec, Float60(eps), Float60(tolerance_for_digits(60))).entangled();
}

}  // namespace

TEST_CASE("criterion names parse and print") {
  for (const char* name : {"ppt", "fidelity", "purity", "stieltjes:7", "descartes:4", "klm:3,6,7"})
    CHECK(CriterionSpec::parse(name).name() == name);
  CHECK(CriterionSpec::parse("p3ppt").name() == "stieltjes:3");
  CHECK(CriterionSpec::parse("klm:3,4,5").moment_order() == 5);
  for (const char* bad : {"stieltjes:4", "klm:3,4", "klm:4,3,5", "descartes:0", "nope", "stieltjes:x"})
    CHECK_THROWS_AS(CriterionSpec::parse(bad), std::invalid_argument);
}

TEST_CASE("model selection") {
  CHECK(default_model(CriterionSpec::ppt(), ghz(8)) == ModelKind::analytic_spectrum);
  CHECK(default_model(CriterionSpec::stieltjes(5), ame(1)) == ModelKind::enumerator);
  CHECK(default_model(CriterionSpec::ppt(), ame(1)) == ModelKind::dense);
  const auto global = NoisyState::with_cut(CatalogState::ame6, Bipartition::leading(6, 2), NoiseKind::global);
  CHECK(default_model(CriterionSpec::klm(1, 2, 3), global) == ModelKind::analytic_spectrum);
  CHECK_THROWS_AS(CriterionEvaluator<double>(ame(1), ModelKind::analytic_spectrum), std::invalid_argument);
  CHECK_THROWS_AS(CriterionEvaluator<double>(ghz(12), ModelKind::dense), std::invalid_argument);
  const CriterionEvaluator<double> ev(ame(1), ModelKind::enumerator);
  CHECK_FALSE(ev.supports(CriterionSpec::ppt()));
  CHECK_THROWS_AS(ev.evaluate(CriterionSpec::ppt(), 0.1, 1e-10), std::invalid_argument);
}

TEST_CASE("models agree on moments") {
  const CriterionEvaluator<double> dense(ghz(4), ModelKind::dense);
  const CriterionEvaluator<double> analytic(ghz(4), ModelKind::analytic_spectrum);
  const CriterionEvaluator<double> counted(ghz(4), ModelKind::enumerator);
  for (double eps : {0.0, 0.2, 0.7}) {
    const auto a = dense.moments(eps, 7);
    const auto b = analytic.moments(eps, 7);
    const auto c = counted.moments(eps, 7);
    for (int k = 1; k <= 7; ++k) {
      CHECK(std::abs(a.p(k) - b.p(k)) < 1e-10);
      CHECK(std::abs(a.p(k) - c.p(k)) < 1e-10);
    }
    CHECK(dense.fidelity(eps) == doctest::Approx(counted.fidelity(eps)).epsilon(1e-12));
    CHECK(dense.purities(eps).first == doctest::Approx(counted.purities(eps).first).epsilon(1e-12));
    CHECK(dense.purities(eps).second == doctest::Approx(counted.purities(eps).second).epsilon(1e-12));
  }
}

TEST_CASE("GHZ PPT thresholds follow the closed form") {
  for (int n = 2; n <= 12; n += 2) {
    const auto r = epsilon_max(CriterionSpec::ppt(), ghz(n));
    CHECK(std::abs(r.eps_max - ppt_threshold_ghz(n)) < 1e-8);
    CHECK(r.model == "analytic_spectrum");
    CHECK(r.digits_used == 60);
  }
  CHECK(std::abs(epsilon_max(CriterionSpec::ppt(), ghz(4), ModelKind::dense).eps_max - ppt_threshold_ghz(4)) < 1e-8);
}

TEST_CASE("GHZ_2 fidelity threshold") {
  // Root of (1 + 3(1-eps)^2)/4 = 1/2.
  const auto r = epsilon_max(CriterionSpec::fidelity(), ghz(2));
  CHECK(std::abs(r.eps_max - (1.0 - 1.0 / std::sqrt(3.0))) < 1e-8);
}

TEST_CASE("AME anchors") {
  CHECK(std::abs(epsilon_max(CriterionSpec::fidelity(), ame(1)).eps_max - 0.145) < 0.005);
  CHECK(std::abs(epsilon_max(CriterionSpec::klm(3, 4, 5), ame(1)).eps_max - 0.367) < 0.005);
  const double ppt[] = {0.52, 0.47, 0.40};
  for (int size = 1; size <= 3; ++size)
    CHECK(std::abs(epsilon_max(CriterionSpec::ppt(), ame(size)).eps_max - ppt[size - 1]) < 0.01);
}

TEST_CASE("Stieltjes-3 equals the p3 condition") {
  for (int n : {2, 6, 20}) {
    const auto r = epsilon_max(CriterionSpec::stieltjes(3), ghz(n));
    // Independent bisection on p_2^2 - p_3.
    double lo = 0.0, hi = 1.0;
    while (hi - lo > 1e-12) {
      const double mid = 0.5 * (lo + hi);
      const auto p = moments_from_spectrum(ghz_local_spectrum<Float60>(n, Float60(mid)), 3);
      (p.p(2) * p.p(2) > p.p(3) ? lo : hi) = mid;
    }
    CHECK(std::abs(r.eps_max - 0.5 * (lo + hi)) < 2e-9);
  }
}

TEST_CASE("fidelity thresholds scale like 1/n") {
  double lo = 1e9, hi = 0.0;
  for (int n : {10, 20, 50, 100, 200}) {
    const double scaled = n * epsilon_max(CriterionSpec::fidelity(), ghz(n)).eps_max;
    lo = std::min(lo, scaled);
    hi = std::max(hi, scaled);
  }
  CHECK(lo > 0.5);
  CHECK(hi < 2.0);
  CHECK(hi / lo < 1.5);
}

TEST_CASE("results bracket the crossing") {
  const struct {
    CriterionSpec spec;
    NoisyState state;
  } cases[] = {{CriterionSpec::ppt(), ghz(6)},
               {CriterionSpec::stieltjes(5), ghz(10)},
               {CriterionSpec::klm(3, 4, 5), ame(1)},
               {CriterionSpec::descartes(6), ame(2)},
               {CriterionSpec::purity(), ame(3)},
               {CriterionSpec::ppt(), ame(2)}};
  for (const auto& c : cases) {
    const auto r = epsilon_max(c.spec, c.state);
    const auto model = default_model(c.spec, c.state);
    CHECK_FALSE(r.never_fires);
    CHECK(r.eps_max > 0.0);
    CHECK(fires_at(c.spec, c.state, model, r.eps_max - 10 * r.bracket));
    CHECK_FALSE(fires_at(c.spec, c.state, model, r.eps_max + 10 * r.bracket));
  }
}

TEST_CASE("Stieltjes dominates klm at equal order") {
  const std::vector<CriterionSpec> triples{CriterionSpec::klm(1, 2, 3), CriterionSpec::klm(3, 4, 5),
                                           CriterionSpec::klm(1, 3, 5), CriterionSpec::klm(5, 6, 7),
                                           CriterionSpec::klm(3, 6, 7), CriterionSpec::klm(3, 5, 7)};
  std::vector<NoisyState> states{ghz(4), ghz(6), ghz(8), ame(1), ame(2), ame(3)};
  for (const auto& s : states) {
    for (const auto& t : triples) {
      const double st = epsilon_max(CriterionSpec::stieltjes(t.m), s).eps_max;
      const double klm = epsilon_max(t, s).eps_max;
      CHECK(klm >= 0.0);
      CHECK(st >= klm - 1e-8);
    }
  }
}

TEST_CASE("Stieltjes against Descartes at equal order") {
  int violations = 0;
  for (const auto& s : {ghz(4), ghz(8), ame(1), ame(2), ame(3)}) {
    for (int m : {3, 5, 7}) {
      const double st = epsilon_max(CriterionSpec::stieltjes(m), s).eps_max;
      const double de = epsilon_max(CriterionSpec::descartes(m), s).eps_max;
      if (st < de - 1e-8) {
        ++violations;
        MESSAGE("descartes above stieltjes: " << s.describe() << " m=" << m << " " << de << " > " << st);
      }
    }
  }
  MESSAGE("stieltjes < descartes cases: " << violations);
}

TEST_CASE("n = 300 thresholds") {
  const auto st = epsilon_max(CriterionSpec::stieltjes(5), ghz(300));
  const auto klm = epsilon_max(CriterionSpec::klm(3, 4, 5), ghz(300));
  CHECK(std::abs(st.eps_max - 0.016) < 0.002);
  CHECK(std::abs(klm.eps_max - 0.016) < 0.002);
}

TEST_CASE("global noise thresholds") {
  const auto s = NoisyState::with_cut(CatalogState::bell_pairs, Bipartition::from_labels(6, std::vector<int>{1, 3}),
                                      NoiseKind::global);
  const auto r = epsilon_max(CriterionSpec::ppt(), s);
  CHECK(std::abs(r.eps_max - (1.0 - 1.0 / (std::ldexp(1.0, 4) + 1.0))) < 1e-8);
  const auto d = epsilon_max(CriterionSpec::ppt(), s, ModelKind::dense);
  CHECK(std::abs(d.eps_max - r.eps_max) < 1e-8);
}

TEST_CASE("dense and reduced models give the same thresholds") {
  CHECK(std::abs(epsilon_max(CriterionSpec::stieltjes(5), ghz(4), ModelKind::dense).eps_max -
                 epsilon_max(CriterionSpec::stieltjes(5), ghz(4), ModelKind::analytic_spectrum).eps_max) < 1e-6);
  CHECK(std::abs(epsilon_max(CriterionSpec::klm(3, 4, 5), ame(2), ModelKind::dense).eps_max -
                 epsilon_max(CriterionSpec::klm(3, 4, 5), ame(2), ModelKind::enumerator).eps_max) < 1e-6);
  CHECK(std::abs(epsilon_max(CriterionSpec::purity(), ame(3), ModelKind::dense).eps_max -
                 epsilon_max(CriterionSpec::purity(), ame(3), ModelKind::enumerator).eps_max) < 1e-6);
}

TEST_CASE("bisection driver edge cases") {
  ThresholdOptions opt;
  const auto two_windows = [](double e) { return e <= 0.2 || (e >= 0.5 && e <= 0.6); };
  const auto r = detail::bisect_threshold(two_windows, opt);
  CHECK(r.scan_flips == 3);
  CHECK(std::abs(r.eps_max - 0.6) < 1e-9);
  opt.strict_monotone = true;
  CHECK_THROWS_AS(detail::bisect_threshold(two_windows, opt), non_monotone_error);

  const auto never = detail::bisect_threshold([](double) { return false; }, ThresholdOptions{});
  CHECK(never.never_fires);
  CHECK(never.eps_max == 0.0);
  const auto always = detail::bisect_threshold([](double) { return true; }, ThresholdOptions{});
  CHECK(always.eps_max == 1.0);
  CHECK_FALSE(always.never_fires);

  ThresholdOptions loose;
  loose.bracket = 1e-4;
  const auto coarse = detail::bisect_threshold([](double e) { return e < 0.3; }, loose);
  CHECK(std::abs(coarse.eps_max - 0.3) < 1e-4);
}

TEST_CASE("klm with even outer indices never fires") {
  const auto r = epsilon_max(CriterionSpec::klm(2, 3, 4), ame(1));
  CHECK(r.never_fires);
  CHECK(r.eps_max == 0.0);
}

TEST_CASE("sweeps are ordered and reproducible") {
  const std::vector<CriterionSpec> crit{CriterionSpec::ppt(), CriterionSpec::stieltjes(3), CriterionSpec::fidelity()};
  const auto one = sweep_fig1({4, 2}, crit, {}, 1);
  const auto many = sweep_fig1({4, 2}, crit, {}, 3);
  REQUIRE(one.size() == 6);
  REQUIRE(many.size() == one.size());
  for (size_t i = 0; i < one.size(); ++i) {
    CHECK(one[i].criterion == many[i].criterion);
    CHECK(one[i].n == many[i].n);
    CHECK(one[i].result.eps_max == many[i].result.eps_max);
  }
  CHECK(one.front().n == 2);
  CHECK_THROWS_AS(sweep_fig1({2}, {}), std::invalid_argument);
  CHECK_THROWS_AS(sweep_fig1({3}, crit), std::invalid_argument);
  CHECK_THROWS_AS(sweep_fig2(2, 5), std::invalid_argument);

  const auto fig2 = sweep_fig2(3, 5);
  int ppt_rows = 0;
  for (const auto& row : fig2) {
    if (row.kind != "ppt") continue;
    ++ppt_rows;
    const double want = row.cut == "1|5" ? 0.52 : row.cut == "2|4" ? 0.47 : 0.40;
    CHECK(std::abs(row.result.eps_max - want) < 0.01);
  }
  CHECK(ppt_rows == 3);
}
