#pragma once

// Tiered invariant suites behind `monogamy verify`.

#include "monogamy/correlations.hpp"
#include "monogamy/measures.hpp"
#include "monogamy/montecarlo.hpp"
#include "monogamy/named_states.hpp"

#include <json.hpp>

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

namespace monogamy {

// Ceiling on E_12 + E_13: the reported W-type value plus slack.
inline constexpr double kEfSumCeiling = 1.20175 + 1e-6;
inline constexpr double kEfSumReported = 1.20175;
inline constexpr double kEfSumSampledBound = 1.18819;

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct VerifyReport {
  std::string tier;
  std::uint64_t seed = 0;
  std::vector<CheckResult> checks;

  bool all_passed() const {
    for (const auto& c : checks) {
      if (!c.passed) return false;
    }
    return !checks.empty();
  }
};

namespace detail {

inline std::string fmt_value(const char* label, double v) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%s=%.10g", label, v);
  return buf;
}

inline CheckResult within(std::string name, const char* label, double value, double target, double tol) {
  const bool ok = std::abs(value - target) <= tol;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%s=%.10g target=%.10g tol=%.1e", label, value, target, tol);
  return {std::move(name), ok, buf};
}

inline CheckResult at_most(std::string name, const char* label, double value, double bound) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%s=%.10g bound=%.10g", label, value, bound);
  return {std::move(name), value <= bound, buf};
}

inline CheckResult zero_count(std::string name, std::uint64_t count) {
  return {std::move(name), count == 0, "violations=" + std::to_string(count)};
}

inline void named_state_checks(std::vector<CheckResult>& out) {
  const auto wp = monogamy_report(*named_state("w-paper"));
  const double s1 = von_neumann_entropy(reduced_state(*named_state("w-paper"), {0}));
  out.push_back(within("w-paper E12+E13", "e_sum", wp.eof_sum(), kEfSumReported, 5e-5));
  out.push_back(within("w-paper S1", "s1", s1, 1.0, 1e-9));

  const auto ghz = monogamy_report(*named_state("ghz"));
  out.push_back(within("ghz tau_EF", "tau_ef", ghz.tau_ef, 1.0, 1e-9));
  out.push_back(at_most("ghz pair EF", "max_e", std::max(ghz.pair_measures[0].eof, ghz.pair_measures[1].eof), 1e-9));
  out.push_back(within("ghz C1|23", "c_bipart", ghz.bipartition_concurrence, 1.0, 1e-9));

  const auto prod = monogamy_report(*named_state("product"));
  const double prod_max = std::max({prod.bipartition_concurrence, prod.concurrence_sum(), prod.eof_sum(),
                                    std::abs(prod.ckw_residual), std::abs(prod.tau_ef)});
  out.push_back(at_most("product all zero", "max_measure", prod_max, 1e-12));

  const auto w = monogamy_report(*named_state("w"));
  out.push_back(within("w CKW residual", "ckw", w.ckw_residual, 0.0, 1e-9));
  out.push_back({"w tau_EF positive", w.tau_ef > 0.0, fmt_value("tau_ef", w.tau_ef)});
}

inline void convexity_checks(std::vector<CheckResult>& out, std::uint64_t seed) {
  constexpr int kGrid = 10000;
  constexpr double kTol = 1e-12;
  double worst_slope = 0.0;
  double prev = ef_squared_from_concurrence_squared(1.0 / kGrid) * kGrid;
  for (int i = 2; i <= kGrid; ++i) {
    const double x = static_cast<double>(i) / kGrid;
    const double g = ef_squared_from_concurrence_squared(x) / x;
    worst_slope = std::max(worst_slope, prev - g);
    prev = g;
  }
  out.push_back(at_most("slope E_F^2(C^2)/C^2 nondecreasing", "max_drop", worst_slope, kTol));

  SeededRng rng(seed, 0xc0de);
  double worst_convex = -1.0;
  double worst_concave = -1.0;
  for (int k = 0; k < kGrid; ++k) {
    const double a = rng.uniform();
    const double b = rng.uniform();
    const double t = rng.uniform();
    const double m = t * a + (1.0 - t) * b;
    const double convex_gap = ef_squared_from_concurrence_squared(m) -
                              (t * ef_squared_from_concurrence_squared(a) +
                               (1.0 - t) * ef_squared_from_concurrence_squared(b));
    const double concave_gap =
        (t * ef_from_concurrence_squared(a) + (1.0 - t) * ef_from_concurrence_squared(b)) -
        ef_from_concurrence_squared(m);
    worst_convex = std::max(worst_convex, convex_gap);
    worst_concave = std::max(worst_concave, concave_gap);
  }
  out.push_back(at_most("E_F^2 convex in C^2", "max_gap", worst_convex, kTol));
  out.push_back(at_most("E_F concave in C^2", "max_gap", worst_concave, kTol));
}

inline void correlation_sweep_checks(std::vector<CheckResult>& out, std::uint64_t seed, std::optional<int> workers) {
  RunConfig cfg;
  cfg.n_qubits = 3;
  cfg.n_samples = 1000;
  cfg.seed = seed;
  cfg.compute_correlations = true;
  cfg.worker_hint = workers;
  const RunSummary s = run_sweep(cfg);
  out.push_back(zero_count("3q x1e3 CKW positivity", s.violation_counts.at("ckw_residual")));
  out.push_back(zero_count("3q x1e3 tau_EF positivity", s.violation_counts.at("tau_ef")));
  out.push_back(at_most("3q x1e3 KW identity", "max_abs", s.residuals.at("kw_res").max_abs, 1e-3));
  out.push_back(at_most("3q x1e3 conservation law", "max_abs", s.residuals.at("cons_res").max_abs, 2e-3));
  out.push_back(at_most("3q x1e3 2S1 identity", "max_abs", s.residuals.at("two_s1_res").max_abs, 2e-3));
  out.push_back(at_most("3q x1e3 EF-sum ceiling", "max_e_sum", s.maxima.at("e_sum").value, kEfSumCeiling));
}

inline void large_sweep_checks(std::vector<CheckResult>& out, std::uint64_t seed, std::optional<int> workers) {
  RunConfig cfg;
  cfg.n_qubits = 3;
  cfg.n_samples = 1000000;
  cfg.seed = seed;
  cfg.worker_hint = workers;
  const RunSummary s3 = run_sweep(cfg);
  out.push_back(zero_count("3q x1e6 CKW positivity", s3.violation_counts.at("ckw_residual")));
  out.push_back(zero_count("3q x1e6 tau_EF positivity", s3.violation_counts.at("tau_ef")));
  const double best = s3.maxima.at("e_sum").value;
  char buf[128];
  std::snprintf(buf, sizeof buf, "max_e_sum=%.10g interval=[1.15, 1.20175]", best);
  out.push_back({"3q x1e6 EF-sum extremal interval", best >= 1.15 && best <= kEfSumReported, buf});
  out.push_back(at_most("3q x1e6 EF-sum ceiling", "max_e_sum", best, kEfSumCeiling));

  cfg.n_qubits = 4;
  cfg.n_samples = 100000;
  const RunSummary s4 = run_sweep(cfg);
  out.push_back(zero_count("4q x1e5 CKW positivity", s4.violation_counts.at("ckw_residual")));
  out.push_back(zero_count("4q x1e5 tau_EF positivity", s4.violation_counts.at("tau_ef")));
}

}  // namespace detail

/// quick: named states, convexity suite, 1e3 samples with correlations.
/// full:  quick plus 1e6 three-qubit and 1e5 four-qubit samples.
inline VerifyReport run_verification(const std::string& tier, std::uint64_t seed,
                                     std::optional<int> workers = std::nullopt) {
  if (tier != "quick" && tier != "full") throw std::invalid_argument("tier must be quick or full");
  VerifyReport report{tier, seed, {}};
  detail::named_state_checks(report.checks);
  detail::convexity_checks(report.checks, seed);
  detail::correlation_sweep_checks(report.checks, seed, workers);
  if (tier == "full") detail::large_sweep_checks(report.checks, seed, workers);
  return report;
}

inline void print_verify_table(std::ostream& out, const VerifyReport& r) {
  std::size_t width = 0;
  for (const auto& c : r.checks) width = std::max(width, c.name.size());
  for (const auto& c : r.checks) {
    out << (c.passed ? "PASS  " : "FAIL  ") << c.name << std::string(width - c.name.size() + 2, ' ') << c.detail
        << '\n';
  }
  std::size_t failed = 0;
  for (const auto& c : r.checks) failed += c.passed ? 0 : 1;
  out << r.checks.size() - failed << '/' << r.checks.size() << " checks passed (tier " << r.tier << ", seed "
      << r.seed << ")\n";
}

inline nlohmann::json verify_to_json(const VerifyReport& r) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : r.checks) checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  return {{"tier", r.tier}, {"seed", r.seed}, {"all_passed", r.all_passed()}, {"checks", checks}};
}

}  // namespace monogamy
