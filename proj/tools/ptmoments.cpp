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

// ptmoments: PT moments, entanglement verdicts, noise thresholds and
// weight enumerators for catalog stabilizer states.
//
// Exit codes: 0 success (or Entangled for `criterion`), 1 Inconclusive,
// 2 invalid input or runtime error.

#include "ptm/criteria.hpp"
#include "ptm/dense.hpp"
#include "ptm/enumerators.hpp"
#include "ptm/gleason.hpp"
#include "ptm/pauli.hpp"
#include "ptm/precision.hpp"
#include "ptm/spectra.hpp"
#include "ptm/thresholds.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

namespace {

using json = nlohmann::ordered_json;

constexpr int kExitInconclusive = 1;
constexpr int kExitError = 2;

struct usage_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Formatting and output

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

template <class Real>
std::string fmt(const Real& v) {
  if constexpr (std::is_floating_point_v<Real>) {
    return fmt(static_cast<double>(v));
  } else {
    return v.str(12);
  }
}

/// Quotes a CSV cell when it holds a comma or a quote (criterion names do).
std::string csv_cell(const std::string& cell) {
  if (cell.find_first_of(",\"") == std::string::npos) return cell;
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

/// Rows of string cells with a header; rendered as CSV or JSON.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> notes;  // CSV comment lines / JSON "notes"

  std::string csv() const {
    std::ostringstream os;
    os << "# schema=1\n";
    for (const auto& n : notes) os << "# " << n << "\n";
    auto line = [&os](const std::vector<std::string>& cells) {
      for (size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << csv_cell(cells[i]);
      os << "\n";
    };
    line(header);
    for (const auto& r : rows) line(r);
    return os.str();
  }

  std::string to_json() const {
    json j;
    j["schema"] = 1;
    if (!notes.empty()) j["notes"] = notes;
    json arr = json::array();
    for (const auto& r : rows) {
      json obj;
      for (size_t i = 0; i < header.size(); ++i) obj[header[i]] = r[i];
      arr.push_back(obj);
    }
    j["rows"] = arr;
    return j.dump(2) + "\n";
  }
};

/// Writes to a temporary sibling and renames it into place, so a failed
/// run never leaves a partial file behind. Empty path means stdout.
void emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write to " + path);
    out << text;
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw std::runtime_error("write failed for " + path);
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw std::runtime_error("cannot move output into " + path);
  }
}

// ---------------------------------------------------------------------------
// Shared options

struct StateOptions {
  std::string state = "ghz";
  int n = 0;
  std::string bip;
  int bip_size = -1;
  std::string noise = "local:0";
  std::string model = "auto";
  int digits = 0;
};

struct Noise {
  ptm::NoiseKind kind = ptm::NoiseKind::local;
  std::optional<double> eps;
};

Noise parse_noise(const std::string& text, bool need_eps) {
  Noise out;
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  if (kind == "local") out.kind = ptm::NoiseKind::local;
  else if (kind == "global") out.kind = ptm::NoiseKind::global;
  else throw usage_error("noise must be local:EPS or global:EPS, got '" + text + "'");
  if (colon != std::string::npos) {
    const std::string value = text.substr(colon + 1);
    size_t used = 0;
    double eps = 0.0;
    try {
      eps = std::stod(value, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != value.size() || value.empty()) throw usage_error("malformed noise strength '" + value + "'");
    if (!(eps >= 0.0 && eps <= 1.0)) throw usage_error("noise strength must lie in [0,1]");
    out.eps = eps;
  }
  if (need_eps && !out.eps) throw usage_error("noise needs a strength, e.g. local:0.1");
  return out;
}

unsigned resolve_digits(int flag) {
  unsigned digits = ptm::kDefaultDigits;
  if (const char* env = std::getenv("PTML_PRECISION_DIGITS"); env != nullptr && *env != '\0') {
    try {
      const long v = std::stol(env);
      if (v <= 0) throw usage_error("");
      digits = static_cast<unsigned>(v);
    } catch (const std::exception&) {
      throw usage_error(std::string("PTML_PRECISION_DIGITS must be a positive integer, got '") + env + "'");
    }
  }
  if (flag > 0) digits = static_cast<unsigned>(flag);
  if (flag < 0) throw usage_error("--digits must be positive");
  if (digits > ptm::kMaxDigits)
    throw usage_error("precision of " + std::to_string(digits) + " digits exceeds the maximum of " +
                      std::to_string(ptm::kMaxDigits));
  return digits;
}

struct ResolvedState {
  ptm::CatalogState state;
  int n;
  ptm::NoisyState noisy;
  Noise noise;
};

ResolvedState resolve_state(const StateOptions& o, bool need_eps) {
  const auto cat = ptm::parse_catalog_state(o.state);
  if (!cat) throw usage_error("unknown state '" + o.state + "' (ghz, zero, bell_pairs, ame6)");
  int n = o.n;
  if (*cat == ptm::CatalogState::ame6) {
    if (n != 0 && n != 6) throw usage_error("ame6 requires n = 6");
    n = 6;
  }
  if (n <= 0) throw usage_error("--n is required for state " + o.state);
  if (*cat == ptm::CatalogState::bell_pairs && n % 2 != 0) throw usage_error("bell_pairs requires an even n");

  const Noise noise = parse_noise(o.noise, need_eps);
  ptm::NoisyState noisy;
  if (!o.bip.empty()) {
    if (n > ptm::kMaxQubits) throw usage_error("explicit --bip lists need n <= 64");
    std::vector<int> labels;
    std::stringstream ss(o.bip);
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        size_t used = 0;
        labels.push_back(std::stoi(item, &used));
        if (used != item.size()) throw usage_error("");
      } catch (const std::exception&) {
        throw usage_error("malformed --bip entry '" + item + "'");
      }
    }
    noisy = ptm::NoisyState::with_cut(*cat, ptm::Bipartition::from_labels(n, labels), noise.kind);
  } else {
    const int size = o.bip_size >= 0 ? o.bip_size : n / 2;
    if (size > n) throw usage_error("--bip-size exceeds n");
    if (n <= ptm::kMaxQubits) {
      noisy = ptm::NoisyState::with_cut(*cat, ptm::Bipartition::leading(n, size), noise.kind);
    } else {
      if (2 * size != n) throw usage_error("for n > 64 only the balanced cut is available");
      noisy = ptm::NoisyState::balanced(*cat, n, noise.kind);
    }
  }
  return {*cat, n, noisy, noise};
}

ptm::ModelKind resolve_model(const std::string& name, const ptm::NoisyState& s,
                             const std::optional<ptm::CriterionSpec>& spec, bool prefer_dense) {
  if (name == "dense") return ptm::ModelKind::dense;
  if (name == "analytic" || name == "analytic_spectrum") return ptm::ModelKind::analytic_spectrum;
  if (name == "enumerator") return ptm::ModelKind::enumerator;
  if (name != "auto") throw usage_error("unknown model '" + name + "' (auto, dense, analytic, enumerator)");
  if (prefer_dense && s.n <= ptm::kDenseModelCap) return ptm::ModelKind::dense;
  return ptm::default_model(spec.value_or(ptm::CriterionSpec::stieltjes(3)), s);
}

void add_state_options(CLI::App* cmd, StateOptions& o, bool with_eps_default = true) {
  cmd->add_option("--state", o.state, "ghz | zero | bell_pairs | ame6")->capture_default_str();
  cmd->add_option("--n", o.n, "number of qubits");
  cmd->add_option("--bip", o.bip, "A side as 1-based qubit list, e.g. 1,2,3");
  cmd->add_option("--bip-size", o.bip_size, "A = {1..s}; ignored when --bip is given");
  cmd->add_option("--noise", o.noise, with_eps_default ? "local:EPS | global:EPS" : "local | global")
      ->capture_default_str();
  cmd->add_option("--model", o.model, "auto | dense | analytic | enumerator")->capture_default_str();
  cmd->add_option("--digits", o.digits, "extended precision digits (overrides PTML_PRECISION_DIGITS)");
}

// ---------------------------------------------------------------------------
// Subcommands

int cmd_moments(const StateOptions& o, int k_max, const std::string& format, const std::string& out) {
  if (k_max < 1) throw usage_error("--k-max must be >= 1");
  const auto rs = resolve_state(o, true);
  const auto model = resolve_model(o.model, rs.noisy, std::nullopt, true);
  const unsigned digits = resolve_digits(o.digits);
  Table t;
  t.header = {"k", "p_k", "schatten_k"};
  t.notes.push_back("state=" + rs.noisy.describe() + " eps=" + fmt(*rs.noise.eps) + " model=" + ptm::to_string(model));
  auto fill = [&](auto tag) {
    using Real = typename decltype(tag)::type;
    const ptm::CriterionEvaluator<Real> ev(rs.noisy, model);
    const auto p = ev.moments(Real(*rs.noise.eps), k_max);
    for (int k = 1; k <= k_max; ++k) {
      const bool has_schatten = static_cast<int>(p.schatten.size()) >= k;
      t.rows.push_back({std::to_string(k), fmt(p.p(k)), has_schatten ? fmt(p.ptilde(k)) : ""});
    }
  };
  if (model == ptm::ModelKind::dense) fill(ptm::TypeTag<double>{});
  else ptm::with_precision(digits, fill);
  emit(format == "json" ? t.to_json() : t.csv(), out);
  return 0;
}

int cmd_criterion(const StateOptions& o, const std::string& name, const std::string& format) {
  const auto spec = ptm::CriterionSpec::parse(name);
  const auto rs = resolve_state(o, true);
  const auto model = resolve_model(o.model, rs.noisy, spec, true);
  const unsigned digits = resolve_digits(o.digits);
  std::string status, margin, score;
  auto run = [&](auto tag, double tol) {
    using Real = typename decltype(tag)::type;
    const ptm::CriterionEvaluator<Real> ev(rs.noisy, model);
    const auto v = ev.evaluate(spec, Real(*rs.noise.eps), Real(tol));
    status = ptm::to_string(v.status);
    margin = fmt(v.margin);
    score = fmt(v.score);
  };
  if (model == ptm::ModelKind::dense) run(ptm::TypeTag<double>{}, 1e-10);
  else ptm::with_precision(digits, [&](auto tag) { run(tag, ptm::tolerance_for_digits(digits)); });
  if (format == "json") {
    json j;
    j["criterion"] = spec.name();
    j["state"] = rs.noisy.describe();
    j["eps"] = *rs.noise.eps;
    j["model"] = ptm::to_string(model);
    j["status"] = status;
    j["margin"] = margin;
    j["score"] = score;
    std::cout << j.dump() << "\n";
  } else {
    std::cout << status << " margin=" << margin << " score=" << score << " criterion=" << spec.name()
              << " model=" << ptm::to_string(model) << "\n";
  }
  return status == "Entangled" ? 0 : kExitInconclusive;
}

Table threshold_table(const std::vector<ptm::SweepRow>& rows) {
  Table t;
  t.header = {"family", "n", "cut", "criterion", "kind", "m", "model", "eps_max", "iterations", "bracket",
              "never_fires", "scan_flips", "digits"};
  for (const auto& r : rows) {
    t.rows.push_back({r.family, std::to_string(r.n), r.cut, r.criterion, r.kind, r.m ? std::to_string(r.m) : "-",
                      r.model, fmt(r.result.eps_max), std::to_string(r.result.iterations), fmt(r.result.bracket),
                      r.result.never_fires ? "true" : "false", std::to_string(r.result.scan_flips),
                      std::to_string(r.result.digits_used)});
  }
  return t;
}

ptm::ThresholdOptions threshold_options(double bracket, unsigned digits) {
  ptm::ThresholdOptions opt;
  if (!(bracket > 0.0 && bracket < 0.5)) throw usage_error("--bracket must lie in (0, 0.5)");
  opt.bracket = bracket;
  opt.digits = digits;
  return opt;
}

int cmd_threshold(const StateOptions& o, const std::vector<std::string>& names, double bracket,
                  const std::string& format, const std::string& out) {
  if (names.empty()) throw usage_error("at least one --criterion is required");
  const auto rs = resolve_state(o, false);
  const unsigned digits = resolve_digits(o.digits);
  const auto opt = threshold_options(bracket, digits);
  std::vector<ptm::SweepRow> rows;
  for (const auto& name : names) {
    const auto spec = ptm::CriterionSpec::parse(name);
    const auto model = resolve_model(o.model, rs.noisy, spec, false);
    ptm::SweepRow row;
    row.family = ptm::to_string(rs.state);
    row.n = rs.n;
    row.cut = rs.noisy.cut();
    row.criterion = spec.name();
    row.kind = spec.family();
    row.m = spec.moment_order();
    row.result = ptm::epsilon_max(spec, rs.noisy, model, opt);
    row.model = row.result.model;
    rows.push_back(std::move(row));
  }
  emit(format == "json" ? threshold_table(rows).to_json() : threshold_table(rows).csv(), out);
  return 0;
}

std::vector<std::string> split_list(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep))
    if (!item.empty()) out.push_back(item);
  return out;
}

int cmd_sweep(const std::string& preset, const std::optional<std::string>& criteria, const std::string& n_list,
              int m_min, int m_max, double bracket, int digits_flag, unsigned threads, const std::string& format,
              const std::string& out) {
  const unsigned digits = resolve_digits(digits_flag);
  const auto opt = threshold_options(bracket, digits);
  std::vector<ptm::SweepRow> rows;
  if (preset == "fig1") {
    std::vector<ptm::CriterionSpec> specs = ptm::fig1_default_criteria();
    if (criteria) {
      specs.clear();
      // Criteria are separated by ';' since klm indices use ','.
      for (const auto& c : split_list(*criteria, ';')) specs.push_back(ptm::CriterionSpec::parse(c));
      if (specs.empty()) throw usage_error("empty criteria list");
    }
    std::vector<int> sizes = ptm::fig1_default_sizes();
    if (!n_list.empty()) {
      sizes.clear();
      for (const auto& s : split_list(n_list, ',')) {
        try {
          sizes.push_back(std::stoi(s));
        } catch (const std::exception&) {
          throw usage_error("malformed --n-list entry '" + s + "'");
        }
      }
      if (sizes.empty()) throw usage_error("empty --n-list");
    }
    rows = ptm::sweep_fig1(sizes, specs, opt, threads);
  } else if (preset == "fig2") {
    if (criteria) throw usage_error("--criteria is not configurable for the fig2 preset");
    rows = ptm::sweep_fig2(m_min, m_max, opt, threads);
  } else {
    throw usage_error("unknown preset '" + preset + "' (fig1, fig2)");
  }
  emit(format == "json" ? threshold_table(rows).to_json() : threshold_table(rows).csv(), out);
  return 0;
}

int cmd_enumerators(const StateOptions& o, int k, const std::string& method, std::uint64_t budget,
                    const std::string& format, const std::string& out) {
  if (k < 1) throw usage_error("--k must be >= 1");
  if (method != "brute" && method != "fourier" && method != "both")
    throw usage_error("--method must be brute, fourier or both");
  const auto rs = resolve_state(o, false);
  const auto g = ptm::state_catalog(rs.state, rs.n);
  const auto bip = rs.noisy.bip();
  std::optional<ptm::CWTable> brute, fourier;
  if (method != "fourier") {
    try {
      brute = ptm::cw_bruteforce(g, bip, k, budget);
    } catch (const std::length_error& e) {
      throw usage_error(std::string(e.what()) + "; use --method fourier");
    }
  }
  if (method != "brute") fourier = ptm::cw_fourier(g, bip, k);
  const ptm::CWTable& table = fourier ? *fourier : *brute;

  Table t;
  t.header = {"w", "C_plus", "C_minus", "difference"};
  t.notes.push_back("state=" + ptm::to_string(rs.state) + "_" + std::to_string(rs.n) + " cut=" + rs.noisy.cut() +
                    " k=" + std::to_string(k) + " method=" + method);
  ptm::IntPoly diff(table.difference());
  t.notes.push_back("difference polynomial: " + diff.str());
  if (brute && fourier) t.notes.push_back(std::string("agreement: ") + (*brute == *fourier ? "true" : "false"));
  for (size_t w = 0; w < table.plus.size(); ++w) {
    if (table.plus[w] == 0 && table.minus[w] == 0) continue;
    t.rows.push_back({std::to_string(w), table.plus[w].str(), table.minus[w].str(),
                      ptm::BigInt(table.plus[w] - table.minus[w]).str()});
  }
  emit(format == "json" ? t.to_json() : t.csv(), out);
  return (brute && fourier && !(*brute == *fourier)) ? kExitError : 0;
}

int cmd_gleason(int n) {
  if (n < 1 || n > 24) throw usage_error("--n must lie in 1..24");
  auto report = ptm::gleason_checks(n);
  for (const auto& l : report.lines) std::cout << l << "\n";
  if (n == 6) {
    const auto fx = ptm::ame_fixture_check();
    for (const auto& l : fx.lines) std::cout << l << "\n";
    report.ok = report.ok && fx.ok;
  }
  std::cout << (report.ok ? "PASS" : "FAIL") << "\n";
  return report.ok ? 0 : kExitError;
}

int cmd_fidelity(const StateOptions& o, const std::string& format) {
  const auto rs = resolve_state(o, true);
  if (rs.noise.kind != ptm::NoiseKind::local) throw usage_error("fidelity is reported for local noise only");
  const double eps = *rs.noise.eps;
  Table t;
  t.header = {"form", "fidelity"};
  const auto a = rs.state == ptm::CatalogState::ghz ? ptm::ghz_sl_vector<double>(rs.n)
                                                    : ptm::sl_enumerators<double>(ptm::state_catalog(rs.state, rs.n));
  t.rows.push_back({"enumerator", fmt(ptm::fidelity_from_enumerators(a, eps))});
  if (rs.state == ptm::CatalogState::ghz) {
    t.rows.push_back({"closed_form_plus", fmt(ptm::ghz_fidelity_closed_form(rs.n, eps, +1))});
    t.rows.push_back({"closed_form_minus", fmt(ptm::ghz_fidelity_closed_form(rs.n, eps, -1))});
  }
  std::cout << (format == "json" ? t.to_json() : t.csv());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PT-moment entanglement criteria, thresholds and weight enumerators"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string format = "csv";
  std::string out;
  app.add_option("--format", format, "csv | json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();

  StateOptions st;
  int k_max = 4;
  auto* moments = app.add_subcommand("moments", "PT moments p_k and Schatten moments");
  add_state_options(moments, st);
  moments->add_option("--k-max", k_max, "highest moment order")->capture_default_str();
  moments->add_option("--out", out, "output file (default stdout)");

  std::string crit_name;
  auto* criterion = app.add_subcommand("criterion", "evaluate one criterion; exit 0 Entangled, 1 Inconclusive");
  add_state_options(criterion, st);
  criterion->add_option("--name", crit_name, "ppt | p3ppt | stieltjes:M | descartes:M | klm:K,L,M | fidelity | purity")
      ->required();

  std::vector<std::string> thr_names;
  double bracket = 1e-9;
  auto* threshold = app.add_subcommand("threshold", "noise threshold eps_max for one state");
  add_state_options(threshold, st, false);
  threshold->add_option("--criterion", thr_names, "criterion name (repeatable)");
  threshold->add_option("--bracket", bracket, "bisection bracket width")->capture_default_str();
  threshold->add_option("--out", out, "output file (default stdout)");

  std::string preset;
  std::optional<std::string> sweep_criteria;
  std::string n_list;
  int m_min = 3, m_max = 30, sweep_digits = 0;
  unsigned threads = 0;
  auto* sweep = app.add_subcommand("sweep", "threshold sweeps (presets fig1, fig2)");
  sweep->add_option("--preset", preset, "fig1 | fig2")->required();
  sweep->add_option("--criteria", sweep_criteria, "fig1 criteria separated by ';'");
  sweep->add_option("--n-list", n_list, "fig1 qubit counts, comma separated");
  sweep->add_option("--m-min", m_min, "fig2 smallest order")->capture_default_str();
  sweep->add_option("--m-max", m_max, "fig2 largest order")->capture_default_str();
  sweep->add_option("--bracket", bracket, "bisection bracket width")->capture_default_str();
  sweep->add_option("--digits", sweep_digits, "extended precision digits");
  sweep->add_option("--threads", threads, "worker threads (0 = hardware)");
  sweep->add_option("--out", out, "output file (default stdout)");

  int k = 3;
  std::string method = "fourier";
  std::uint64_t budget = ptm::kDefaultBruteBudget;
  auto* enumerators = app.add_subcommand("enumerators", "stabilizer tuple counts C_w^(k,+-)");
  add_state_options(enumerators, st);
  enumerators->add_option("--k", k, "moment order")->capture_default_str();
  enumerators->add_option("--method", method, "brute | fourier | both")->capture_default_str();
  enumerators->add_option("--budget", budget, "brute-force work budget")->capture_default_str();
  enumerators->add_option("--out", out, "output file (default stdout)");

  int gleason_n = 6;
  auto* gleason = app.add_subcommand("gleason", "exact MacWilliams / kernel fixture checks");
  gleason->add_option("--n", gleason_n, "number of qubits")->capture_default_str();

  auto* fidelity = app.add_subcommand("fidelity", "fidelity of a locally depolarized catalog state");
  add_state_options(fidelity, st);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitError;
  }

  try {
    if (moments->parsed()) return cmd_moments(st, k_max, format, out);
    if (criterion->parsed()) return cmd_criterion(st, crit_name, format);
    if (threshold->parsed()) return cmd_threshold(st, thr_names, bracket, format, out);
    if (sweep->parsed())
      return cmd_sweep(preset, sweep_criteria, n_list, m_min, m_max, bracket, sweep_digits, threads, format, out);
    if (enumerators->parsed()) return cmd_enumerators(st, k, method, budget, format, out);
    if (gleason->parsed()) return cmd_gleason(gleason_n);
    if (fidelity->parsed()) return cmd_fidelity(st, format);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
