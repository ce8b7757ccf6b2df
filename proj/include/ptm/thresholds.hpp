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

// Noise thresholds: the largest depolarizing strength at which a criterion
// still fires, found by a coarse scan followed by bisection.

#include "ptm/criteria.hpp"
#include "ptm/dense.hpp"
#include "ptm/enumerators.hpp"
#include "ptm/pauli.hpp"
#include "ptm/precision.hpp"
#include "ptm/spectra.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

namespace ptm {

enum class CriterionKind { ppt, stieltjes, descartes, klm, fidelity, purity };
enum class ModelKind { dense, analytic_spectrum, enumerator };
enum class NoiseKind { local, global };

inline const char* to_string(ModelKind m) {
  switch (m) {
    case ModelKind::dense:
      return "dense";
    case ModelKind::analytic_spectrum:
      return "analytic_spectrum";
    case ModelKind::enumerator:
      return "enumerator";
  }
  return "?";
}

inline const char* to_string(NoiseKind k) { return k == NoiseKind::local ? "local" : "global"; }

struct CriterionSpec {
  CriterionKind kind = CriterionKind::ppt;
  int k = 0;
  int l = 0;
  int m = 0;  // order for stieltjes / descartes, last index for klm

  static CriterionSpec ppt() { return {CriterionKind::ppt}; }
  static CriterionSpec fidelity() { return {CriterionKind::fidelity}; }
  static CriterionSpec purity() { return {CriterionKind::purity}; }
  static CriterionSpec stieltjes(int m) { return {CriterionKind::stieltjes, 0, 0, m}; }
  static CriterionSpec descartes(int m) { return {CriterionKind::descartes, 0, 0, m}; }
  static CriterionSpec klm(int k, int l, int m) { return {CriterionKind::klm, k, l, m}; }

  /// Highest moment order the criterion consumes (0 if none).
  int moment_order() const {
    switch (kind) {
      case CriterionKind::stieltjes:
      case CriterionKind::descartes:
      case CriterionKind::klm:
        return m;
      default:
        return 0;
    }
  }

  std::string name() const {
    switch (kind) {
      case CriterionKind::ppt:
        return "ppt";
      case CriterionKind::fidelity:
        return "fidelity";
      case CriterionKind::purity:
        return "purity";
      case CriterionKind::stieltjes:
        return "stieltjes:" + std::to_string(m);
      case CriterionKind::descartes:
        return "descartes:" + std::to_string(m);
      case CriterionKind::klm:
        return "klm:" + std::to_string(k) + "," + std::to_string(l) + "," + std::to_string(m);
    }
    return "?";
  }

  std::string family() const {
    const std::string full = name();
    return full.substr(0, full.find(':'));
  }

  /// Parses ppt, p3ppt, fidelity, purity, stieltjes:M, descartes:M, klm:K,L,M.
  static CriterionSpec parse(const std::string& text) {
    auto number = [&text](std::string_view s) {
      int v = 0;
      const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
        throw std::invalid_argument("malformed criterion '" + text + "'");
      return v;
    };
    if (text == "ppt") return ppt();
    if (text == "p3ppt") return stieltjes(3);
    if (text == "fidelity") return fidelity();
    if (text == "purity") return purity();
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("unknown criterion '" + text + "'");
    const std::string head = text.substr(0, colon);
    const std::string_view args = std::string_view(text).substr(colon + 1);
    if (head == "stieltjes") {
      const int m = number(args);
      if (m < 1 || m % 2 == 0) throw std::invalid_argument("stieltjes order must be odd, got " + std::to_string(m));
      return stieltjes(m);
    }
    if (head == "descartes") {
      const int m = number(args);
      if (m < 1) throw std::invalid_argument("descartes order must be positive");
      return descartes(m);
    }
    if (head == "klm") {
      const auto c1 = args.find(',');
      const auto c2 = c1 == std::string_view::npos ? c1 : args.find(',', c1 + 1);
      if (c1 == std::string_view::npos || c2 == std::string_view::npos)
        throw std::invalid_argument("klm needs three indices, got '" + text + "'");
      const int k = number(args.substr(0, c1));
      const int l = number(args.substr(c1 + 1, c2 - c1 - 1));
      const int m = number(args.substr(c2 + 1));
      if (!(1 <= k && k < l && l < m)) throw std::invalid_argument("klm needs 1 <= k < l < m");
      return klm(k, l, m);
    }
    throw std::invalid_argument("unknown criterion '" + text + "'");
  }

  auto key() const { return std::make_tuple(static_cast<int>(kind), m, k, l); }
};

/// A catalog stabilizer state under local or global depolarizing noise,
/// with the cut to test. Explicit qubit masks exist only for n <= 64;
/// larger states are described by the size of A alone.
struct NoisyState {
  CatalogState state = CatalogState::ghz;
  int n = 2;
  int a_size = 1;
  Mask a_mask = 1;
  NoiseKind noise = NoiseKind::local;

  static NoisyState with_cut(CatalogState state, const Bipartition& bip, NoiseKind noise) {
    return {state, bip.n, bip.a_size(), bip.a_mask, noise};
  }

  /// A = the first n/2 qubits.
  static NoisyState balanced(CatalogState state, int n, NoiseKind noise) {
    if (n < 2 || n % 2 != 0) throw std::invalid_argument("balanced cut needs an even n >= 2");
    return {state, n, n / 2, n <= kMaxQubits ? full_mask(n / 2) : Mask{0}, noise};
  }

  bool has_mask() const { return n <= kMaxQubits; }

  Bipartition bip() const {
    if (!has_mask()) throw std::invalid_argument("no explicit bipartition for n > 64");
    return Bipartition(n, a_mask);
  }

  std::string cut() const { return std::to_string(a_size) + "|" + std::to_string(n - a_size); }

  std::string describe() const {
    return to_string(state) + "_" + std::to_string(n) + " " + cut() + " " + to_string(noise);
  }
};

inline constexpr int kDenseModelCap = 10;

/// Picks the cheapest model that supports the criterion exactly.
inline ModelKind default_model(const CriterionSpec& spec, const NoisyState& s) {
  if (s.noise == NoiseKind::global) return ModelKind::analytic_spectrum;
  const bool balanced_ghz = s.state == CatalogState::ghz && s.n % 2 == 0 && 2 * s.a_size == s.n;
  if (balanced_ghz) return ModelKind::analytic_spectrum;
  if (spec.kind == CriterionKind::ppt || s.n > 16) return ModelKind::dense;
  return ModelKind::enumerator;
}

/// Evaluates criteria for one state and one model at a given noise level,
/// in `Real` arithmetic. Expensive per-state data is prepared once.
template <class Real>
class CriterionEvaluator {
 public:
  CriterionEvaluator(NoisyState state, ModelKind model) : state_(std::move(state)), model_(model) {
    if (state_.a_size < 0 || state_.a_size > state_.n) throw std::invalid_argument("evaluator: cut size out of range");
    // GHZ under local noise is fully analytic and may exceed the 64-qubit
    // Pauli mask width, so the group is only built when needed.
    if (!(model_ == ModelKind::analytic_spectrum && state_.noise == NoiseKind::local))
      group_ = std::make_shared<StabilizerGroup>(state_catalog(state_.state, state_.n));
    switch (model_) {
      case ModelKind::dense:
        detail::check_dense_cap(state_.n, kDenseModelCap, "dense model");
        clean_ = std::make_shared<DenseOperator>(state_from_group(*group_));
        break;
      case ModelKind::analytic_spectrum:
        if (state_.noise == NoiseKind::local) {
          if (state_.state != CatalogState::ghz || state_.n % 2 != 0 || 2 * state_.a_size != state_.n)
            throw std::invalid_argument(
                "analytic model under local noise covers GHZ states with even n and a balanced cut only");
        } else {
          rank_ = bell_pair_rank(*group_, state_.bip());
        }
        break;
      case ModelKind::enumerator:
        if (state_.noise != NoiseKind::local)
          throw std::invalid_argument("enumerator model covers local noise only");
        chars_ = std::make_shared<CharacterPolynomials>(character_polys(*group_, state_.bip()));
        break;
    }
  }

  const NoisyState& state() const { return state_; }
  ModelKind model() const { return model_; }

  bool supports(const CriterionSpec& spec) const {
    return !(model_ == ModelKind::enumerator && spec.kind == CriterionKind::ppt);
  }

  Verdict<Real> evaluate(const CriterionSpec& spec, const Real& eps, const Real& tol) const {
    if (!supports(spec))
      throw std::invalid_argument("model " + std::string(to_string(model_)) + " cannot evaluate " + spec.name());
    switch (spec.kind) {
      case CriterionKind::fidelity:
        return fidelity_criterion(fidelity(eps), tol);
      case CriterionKind::purity: {
        const auto [global, sub] = purities(eps);
        return purity_criterion(global, sub, tol);
      }
      case CriterionKind::ppt:
        return ppt_verdict(spectrum(eps), tol);
      case CriterionKind::stieltjes:
        return stieltjes(moments(eps, spec.m), spec.m, tol);
      case CriterionKind::descartes:
        return descartes(moments(eps, spec.m), spec.m, tol);
      case CriterionKind::klm:
        return klm_ppt(moments(eps, spec.m), spec.k, spec.l, spec.m, tol);
    }
    throw std::logic_error("unreachable");
  }

  MomentVector<Real> moments(const Real& eps, int m_max) const {
    if (model_ == ModelKind::enumerator) return enumerator_moments(*chars_, eps, m_max);
    return moments_from_spectrum(spectrum(eps), m_max);
  }

  Spectrum<Real> spectrum(const Real& eps) const {
    switch (model_) {
      case ModelKind::dense: {
        const auto s = pt_spectrum(noisy_dense(to_double(eps)), state_.bip());
        Spectrum<Real> out;
        out.n = s.n;
        for (const auto& e : s.entries) out.entries.push_back({Real(e.lambda), e.mu});
        return out;
      }
      case ModelKind::analytic_spectrum:
        if (state_.noise == NoiseKind::local) return ghz_local_spectrum<Real>(state_.n, eps);
        return stab_global_spectrum<Real>(state_.n, rank_, eps);
      case ModelKind::enumerator:
        break;
    }
    throw std::invalid_argument("enumerator model has no spectrum");
  }

  Real fidelity(const Real& eps) const {
    if (model_ == ModelKind::dense) return Real(fidelity_pure(noisy_dense(to_double(eps)), *group_));
    if (state_.noise == NoiseKind::global)
      return (Real(1) - eps) + eps / to_real<Real>(pow2(state_.n));
    return fidelity_from_enumerators(sl_vector(), eps);
  }

  /// (global purity, smaller marginal purity across the cut).
  std::pair<Real, Real> purities(const Real& eps) const {
    const Mask a = state_.a_mask;
    const Mask b = full_mask(state_.n) & ~a;
    if (model_ == ModelKind::dense) {
      const auto rho = noisy_dense(to_double(eps));
      const double pa = partial_trace(rho, a).purity();
      const double pb = partial_trace(rho, b).purity();
      return {Real(rho.purity()), Real(std::min(pa, pb))};
    }
    const int na = state_.a_size;
    const int nb = state_.n - na;
    if (state_.noise == NoiseKind::global) {
      // rho_X = (1-eps) rho_X^clean + eps 1/2^{|X|}; clean marginals are
      // flat on 2^r states.
      const Real keep = Real(1) - eps;
      auto marginal = [&](int size) {
        const Real dim = to_real<Real>(pow2(size));
        return keep * keep / to_real<Real>(pow2(rank_)) + (Real(2) * keep * eps + eps * eps) / dim;
      };
      const Real dim = to_real<Real>(pow2(state_.n));
      const Real global = keep * keep + (Real(2) * keep * eps + eps * eps) / dim;
      return {global, std::min(marginal(na), marginal(nb))};
    }
    const Real global = noisy_purity(sl_vector(), eps);
    if (model_ == ModelKind::analytic_spectrum) {
      // Balanced GHZ: the averaged balanced-cut form.
      return {global, rains_subsystem_purity(sl_vector(), eps)};
    }
    return {global, std::min(subsystem_purity<Real>(*group_, a, eps), subsystem_purity<Real>(*group_, b, eps))};
  }

 private:
  DenseOperator noisy_dense(double eps) const {
    return state_.noise == NoiseKind::local ? depolarize_local(*clean_, eps) : depolarize_global(*clean_, eps);
  }

  const SLVector<Real>& sl_vector() const {
    std::call_once(sl_once_->flag, [this] {
      sl_once_->value = state_.state == CatalogState::ghz ? ghz_sl_vector<Real>(state_.n) : sl_enumerators<Real>(*group_);
    });
    return sl_once_->value;
  }

  struct LazySL {
    std::once_flag flag;
    SLVector<Real> value;
  };

  NoisyState state_;
  ModelKind model_;
  int rank_ = 0;
  std::shared_ptr<StabilizerGroup> group_;
  std::shared_ptr<DenseOperator> clean_;
  std::shared_ptr<CharacterPolynomials> chars_;
  std::shared_ptr<LazySL> sl_once_ = std::make_shared<LazySL>();
};

struct ThresholdOptions {
  double bracket = 1e-9;
  int grid_points = 64;
  unsigned digits = kDefaultDigits;  // for extended-precision models
  bool strict_monotone = false;      // error when the scan flips more than once
};

struct ThresholdResult {
  double eps_max = 0.0;
  int iterations = 0;
  double bracket = 0.0;
  std::string criterion;
  std::string state;
  std::string model;
  bool never_fires = false;
  int scan_flips = 0;          // verdict changes seen on the coarse grid
  unsigned digits_used = 0;    // 0 for double-precision models
};

class non_monotone_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

// Fires-at-eps predicate. For software floats the verdict is checked at
// twice the precision with the same tolerance and escalated on
// disagreement, up to the ladder ceiling.
template <class Real>
class FiringPredicate {
 public:
  FiringPredicate(const CriterionEvaluator<Real>& ev, CriterionSpec spec, double tol) : ev_(ev), spec_(spec), tol_(tol) {}

  bool operator()(double eps) const {
    try {
      return ev_.evaluate(spec_, Real(eps), Real(tol_)).entangled();
    } catch (const std::domain_error&) {
      // Fractional powers of a nonpositive moment: the test does not apply.
      return false;
    }
  }

 private:
  const CriterionEvaluator<Real>& ev_;
  CriterionSpec spec_;
  double tol_;
};

template <class Pred>
ThresholdResult bisect_threshold(const Pred& fires, const ThresholdOptions& opt) {
  ThresholdResult r;
  r.bracket = opt.bracket;
  const int pts = std::max(opt.grid_points, 2);
  std::vector<bool> scan(static_cast<size_t>(pts));
  for (int i = 0; i < pts; ++i) scan[static_cast<size_t>(i)] = fires(static_cast<double>(i) / (pts - 1));
  for (int i = 1; i < pts; ++i) r.scan_flips += scan[static_cast<size_t>(i)] != scan[static_cast<size_t>(i - 1)];
  int last = -1;
  for (int i = 0; i < pts; ++i)
    if (scan[static_cast<size_t>(i)]) last = i;
  if (last < 0) {
    r.never_fires = true;
    r.eps_max = 0.0;
    return r;
  }
  if (opt.strict_monotone && (r.scan_flips > 1 || !scan.front()))
    throw non_monotone_error("threshold scan is not monotone (" + std::to_string(r.scan_flips) +
                             " verdict changes on the grid); inspect the grid manually");
  if (last == pts - 1) {
    r.eps_max = 1.0;
    return r;
  }
  double lo = static_cast<double>(last) / (pts - 1);
  double hi = static_cast<double>(last + 1) / (pts - 1);
  while (hi - lo > opt.bracket) {
    const double mid = 0.5 * (lo + hi);
    (fires(mid) ? lo : hi) = mid;
    ++r.iterations;
  }
  r.eps_max = 0.5 * (lo + hi);
  return r;
}

}  // namespace detail

/// Threshold with a caller-supplied evaluator in `Real`.
template <class Real>
ThresholdResult epsilon_max(const CriterionEvaluator<Real>& ev, const CriterionSpec& spec,
                            const ThresholdOptions& opt, double tol) {
  const detail::FiringPredicate<Real> fires(ev, spec, tol);
  auto r = detail::bisect_threshold(fires, opt);
  r.criterion = spec.name();
  r.state = ev.state().describe();
  r.model = to_string(ev.model());
  r.digits_used = std::is_floating_point_v<Real> ? 0u : digits_of<Real>();
  return r;
}

/// Threshold for a catalog state. Analytic and enumerator models run in
/// extended precision; if the verdicts at D and 2D digits disagree at the
/// located threshold the computation is repeated at the higher rung.
inline ThresholdResult epsilon_max(const CriterionSpec& spec, const NoisyState& state,
                                   std::optional<ModelKind> model = std::nullopt, ThresholdOptions opt = {}) {
  const ModelKind chosen = model.value_or(default_model(spec, state));
  if (chosen == ModelKind::dense) {
    const CriterionEvaluator<double> ev(state, chosen);
    return epsilon_max(ev, spec, opt, 1e-10);
  }
  const double tol = tolerance_for_digits(opt.digits);
  unsigned digits = ladder_rung(opt.digits);
  for (;;) {
    auto run = [&](auto tag) {
      using Real = typename decltype(tag)::type;
      const CriterionEvaluator<Real> ev(state, chosen);
      return epsilon_max(ev, spec, opt, tol);
    };
    ThresholdResult r = with_precision(digits, run);
    if (digits >= kMaxDigits) return r;
    // Cross-check both sides of the bracket at the next rung.
    const unsigned next = ladder_rung(digits + 1);
    const bool stable = with_precision(next, [&](auto tag) {
      using Real = typename decltype(tag)::type;
      const CriterionEvaluator<Real> ev(state, chosen);
      const detail::FiringPredicate<Real> fires(ev, spec, tol);
      if (r.never_fires) return !fires(0.0);
      const double below = std::max(0.0, r.eps_max - r.bracket);
      const double above = std::min(1.0, r.eps_max + r.bracket);
      return fires(below) && (r.eps_max >= 1.0 || !fires(above));
    });
    if (stable) return r;
    digits = next;
  }
}

// ---------------------------------------------------------------------------
// Sweeps

struct SweepRow {
  std::string family;     // ghz or ame6
  int n = 0;
  std::string cut;        // "a|b"
  std::string criterion;  // full name, e.g. klm:3,4,5
  std::string kind;       // criterion family
  int m = 0;              // max moment order, 0 for references
  std::string model;
  ThresholdResult result;
};

namespace detail {

struct SweepItem {
  CriterionSpec spec;
  NoisyState state;
  std::optional<ModelKind> model;
};

inline std::vector<SweepRow> run_items(const std::vector<SweepItem>& items, const ThresholdOptions& opt,
                                       unsigned threads) {
  std::vector<SweepRow> rows(items.size());
  std::atomic<size_t> next{0};
  std::vector<std::string> errors(items.size());
  auto work = [&] {
    for (size_t i = next++; i < items.size(); i = next++) {
      const auto& it = items[i];
      try {
        auto r = epsilon_max(it.spec, it.state, it.model, opt);
        SweepRow row;
        row.family = to_string(it.state.state);
        row.n = it.state.n;
        row.cut = it.state.cut();
        row.criterion = it.spec.name();
        row.kind = it.spec.family();
        row.m = it.spec.moment_order();
        row.model = r.model;
        row.result = std::move(r);
        rows[i] = std::move(row);
      } catch (const std::exception& e) {
        errors[i] = it.spec.name() + " on " + it.state.describe() + ": " + e.what();
      }
    }
  };
  const unsigned workers = std::max(1u, threads != 0 ? threads : std::thread::hardware_concurrency());
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(work);
  }
  for (const auto& e : errors)
    if (!e.empty()) throw std::runtime_error("sweep failed: " + e);
  std::sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
    return std::make_tuple(a.family, a.n, a.cut, a.kind, a.m, a.criterion) <
           std::make_tuple(b.family, b.n, b.cut, b.kind, b.m, b.criterion);
  });
  return rows;
}

}  // namespace detail

inline std::vector<CriterionSpec> fig1_default_criteria() {
  return {CriterionSpec::ppt(),          CriterionSpec::fidelity(),     CriterionSpec::purity(),
          CriterionSpec::descartes(3),   CriterionSpec::descartes(5),   CriterionSpec::descartes(7),
          CriterionSpec::stieltjes(3),   CriterionSpec::stieltjes(5),   CriterionSpec::stieltjes(7),
          CriterionSpec::klm(1, 2, 3),   CriterionSpec::klm(3, 4, 5),   CriterionSpec::klm(5, 6, 7),
          CriterionSpec::klm(3, 6, 7)};
}

inline std::vector<int> fig1_default_sizes() { return {2, 4, 6, 8, 10, 12, 16, 20, 30, 50, 100, 200, 300}; }

/// GHZ_n under local noise, balanced cut, one row per (n, criterion).
inline std::vector<SweepRow> sweep_fig1(const std::vector<int>& sizes, const std::vector<CriterionSpec>& criteria,
                                        const ThresholdOptions& opt = {}, unsigned threads = 0) {
  if (criteria.empty()) throw std::invalid_argument("sweep_fig1: empty criteria list");
  std::vector<detail::SweepItem> items;
  for (int n : sizes) {
    if (n < 2 || n % 2 != 0) throw std::invalid_argument("sweep_fig1: n must be even and >= 2, got " + std::to_string(n));
    const auto s = NoisyState::balanced(CatalogState::ghz, n, NoiseKind::local);
    for (const auto& c : criteria) items.push_back({c, s, ModelKind::analytic_spectrum});
  }
  return detail::run_items(items, opt, threads);
}

/// Six-qubit AME under local noise for cuts 1|5, 2|4, 3|3: stieltjes(m)
/// for odd m, descartes(m) and klm(m-2,m-1,m) for every m in range, plus
/// ppt, fidelity and purity references.
inline std::vector<SweepRow> sweep_fig2(int m_min = 3, int m_max = 30, const ThresholdOptions& opt = {},
                                        unsigned threads = 0) {
  if (m_min < 3 || m_max > 30 || m_min > m_max) throw std::invalid_argument("sweep_fig2: m range must lie in 3..30");
  std::vector<detail::SweepItem> items;
  for (int size = 1; size <= 3; ++size) {
    const auto s = NoisyState::with_cut(CatalogState::ame6, Bipartition::leading(6, size), NoiseKind::local);
    items.push_back({CriterionSpec::ppt(), s, ModelKind::dense});
    items.push_back({CriterionSpec::fidelity(), s, ModelKind::enumerator});
    items.push_back({CriterionSpec::purity(), s, ModelKind::enumerator});
    for (int m = m_min; m <= m_max; ++m) {
      if (m % 2 == 1) items.push_back({CriterionSpec::stieltjes(m), s, ModelKind::enumerator});
      items.push_back({CriterionSpec::descartes(m), s, ModelKind::enumerator});
      items.push_back({CriterionSpec::klm(m - 2, m - 1, m), s, ModelKind::enumerator});
    }
  }
  return detail::run_items(items, opt, threads);
}

}  // namespace ptm
