#pragma once

// Seeded Haar sweeps over pure states with streaming aggregation.
//
// Sample i is drawn from the stream (seed, i), so a run's output depends only
// on its RunConfig: worker count changes scheduling, never results. Records
// are emitted in sample order; aggregates are max/count reductions.

#include "monogamy/correlations.hpp"
#include "monogamy/measures.hpp"
#include "monogamy/state_io.hpp"
#include "monogamy/statekit.hpp"

#include <json.hpp>

#include <chrono>
#include <cstdint>
#include <exception>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

namespace monogamy {

/// Residuals below this count as inequality violations.
inline constexpr double kResidualFloor = -1e-9;

struct RunConfig {
  int n_qubits = 3;
  std::uint64_t n_samples = 1000;
  std::uint64_t seed = 0;
  int focus_qubit = 0;
  bool compute_correlations = false;
  int histogram_bins = 100;
  std::optional<int> worker_hint;
  ClassicalCorrelationOptions correlation_options{};

  void validate() const {
    if (n_qubits < 3 || n_qubits > kMaxQubits) throw std::invalid_argument("n_qubits must be in [3, 8]");
    if (n_samples == 0) throw std::invalid_argument("n_samples must be positive");
    if (focus_qubit < 0 || focus_qubit >= n_qubits) throw std::invalid_argument("focus qubit out of range");
    if (compute_correlations && n_qubits != 3) {
      throw std::invalid_argument("correlation identities are defined for three qubits only");
    }
    if (histogram_bins < 1) throw std::invalid_argument("histogram_bins must be positive");
    if (worker_hint && *worker_hint < 1) throw std::invalid_argument("worker count must be positive");
  }
};

struct CorrelationFields {
  double j12 = 0.0, j13 = 0.0, j_sum = 0.0;
  double d12 = 0.0, d13 = 0.0, d_sum = 0.0;
  double kw_res = 0.0, cons_res = 0.0, two_s1_res = 0.0;
};

/// Every measure computed for one sampled state. "12"/"13" name the focus
/// qubit's first and second partner; sums run over all partners.
struct SampleRecord {
  std::uint64_t sample_index = 0;
  std::vector<PairMeasures> pairs;
  double c_sum = 0.0, c2_sum = 0.0, e_sum = 0.0, e2_sum = 0.0;
  double c_bipart = 0.0, e_bipart = 0.0, s1 = 0.0;
  double ckw_residual = 0.0, tau_ef = 0.0;
  std::optional<CorrelationFields> correlations;

  double c12() const { return pairs.at(0).concurrence; }
  double c13() const { return pairs.at(1).concurrence; }
  double e12() const { return pairs.at(0).eof; }
  double e13() const { return pairs.at(1).eof; }
};

inline SampleRecord compute_record(const PureState& psi, std::uint64_t sample_index, const RunConfig& config) {
  const MonogamyReport report = monogamy_report(psi, config.focus_qubit);
  SampleRecord r;
  r.sample_index = sample_index;
  r.pairs = report.pair_measures;
  r.c_sum = report.concurrence_sum();
  r.c2_sum = report.concurrence_sq_sum();
  r.e_sum = report.eof_sum();
  r.e2_sum = report.eof_sq_sum();
  r.c_bipart = report.bipartition_concurrence;
  r.e_bipart = report.bipartition_eof;
  const int keep[] = {config.focus_qubit};
  r.s1 = von_neumann_entropy(reduced_state(psi, keep));
  r.ckw_residual = report.ckw_residual;
  r.tau_ef = report.tau_ef;
  if (config.compute_correlations) {
    const IdentityReport ids = identity_report(psi, config.focus_qubit, config.correlation_options);
    CorrelationFields f;
    f.j12 = ids.classical[0];
    f.j13 = ids.classical[1];
    f.j_sum = ids.classical_sum();
    f.d12 = ids.discord[0];
    f.d13 = ids.discord[1];
    f.d_sum = ids.discord_sum();
    f.kw_res = ids.kw_residual;
    f.cons_res = ids.conservation_residual;
    f.two_s1_res = ids.two_s1_residual;
    r.correlations = f;
  }
  return r;
}

inline PureState sample_state(const RunConfig& config, std::uint64_t sample_index) {
  SeededRng rng(config.seed, sample_index);
  return haar_random_pure(config.n_qubits, rng);
}

/// Named scalar fields of a record, as used by the CSV header and scatter
/// exports. Returns nullopt for unknown names or absent correlation data.
inline std::optional<double> record_field(const SampleRecord& r, const std::string& name) {
  static const std::map<std::string, double (*)(const SampleRecord&)> base = {
      {"sample_index", [](const SampleRecord& s) { return static_cast<double>(s.sample_index); }},
      {"c12", [](const SampleRecord& s) { return s.c12(); }},
      {"c13", [](const SampleRecord& s) { return s.c13(); }},
      {"c2_12", [](const SampleRecord& s) { return s.pairs.at(0).concurrence_sq; }},
      {"c2_13", [](const SampleRecord& s) { return s.pairs.at(1).concurrence_sq; }},
      {"c_sum", [](const SampleRecord& s) { return s.c_sum; }},
      {"c2_sum", [](const SampleRecord& s) { return s.c2_sum; }},
      {"e12", [](const SampleRecord& s) { return s.e12(); }},
      {"e13", [](const SampleRecord& s) { return s.e13(); }},
      {"e2_12", [](const SampleRecord& s) { return s.pairs.at(0).eof_sq; }},
      {"e2_13", [](const SampleRecord& s) { return s.pairs.at(1).eof_sq; }},
      {"e_sum", [](const SampleRecord& s) { return s.e_sum; }},
      {"e2_sum", [](const SampleRecord& s) { return s.e2_sum; }},
      {"c_bipart", [](const SampleRecord& s) { return s.c_bipart; }},
      {"e_bipart", [](const SampleRecord& s) { return s.e_bipart; }},
      {"s1", [](const SampleRecord& s) { return s.s1; }},
      {"ckw_residual", [](const SampleRecord& s) { return s.ckw_residual; }},
      {"tau_ef", [](const SampleRecord& s) { return s.tau_ef; }},
  };
  static const std::map<std::string, double CorrelationFields::*> corr = {
      {"j12", &CorrelationFields::j12},         {"j13", &CorrelationFields::j13},
      {"j_sum", &CorrelationFields::j_sum},     {"d12", &CorrelationFields::d12},
      {"d13", &CorrelationFields::d13},         {"d_sum", &CorrelationFields::d_sum},
      {"kw_res", &CorrelationFields::kw_res},   {"cons_res", &CorrelationFields::cons_res},
      {"two_s1_res", &CorrelationFields::two_s1_res},
  };
  if (auto it = base.find(name); it != base.end()) return it->second(r);
  if (auto it = corr.find(name); it != corr.end()) {
    if (!r.correlations) return std::nullopt;
    return (*r.correlations).*(it->second);
  }
  return std::nullopt;
}

inline bool is_record_field(const std::string& name) {
  SampleRecord probe;
  probe.pairs.resize(2);
  probe.correlations = CorrelationFields{};
  return record_field(probe, name).has_value();
}

// ---------------------------------------------------------------------------
// histograms

struct Histogram {
  std::vector<double> edges;  // bins + 1 entries
  std::vector<std::uint64_t> counts;

  std::uint64_t total() const {
    std::uint64_t t = 0;
    for (auto c : counts) t += c;
    return t;
  }
};

/// Fixed-range histogram; bins are half-open except the last. Values outside
/// [lo, hi] land in the nearest end bin so counts always sum to the input size.
class HistogramAccumulator {
 public:
  HistogramAccumulator(int bins, double lo, double hi) : lo_(lo), hi_(hi) {
    if (bins < 1) throw std::invalid_argument("histogram needs at least one bin");
    if (!(hi > lo)) throw std::invalid_argument("histogram range must be non-empty");
    hist_.counts.assign(static_cast<std::size_t>(bins), 0);
    hist_.edges.resize(static_cast<std::size_t>(bins) + 1);
    for (int i = 0; i <= bins; ++i) hist_.edges[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / bins;
  }

  void add(double v) {
    if (!std::isfinite(v)) throw std::invalid_argument("histogram values must be finite");
    const auto bins = static_cast<long long>(hist_.counts.size());
    auto bin = static_cast<long long>(std::floor((v - lo_) / (hi_ - lo_) * static_cast<double>(bins)));
    bin = std::clamp(bin, 0LL, bins - 1);
    ++hist_.counts[static_cast<std::size_t>(bin)];
  }

  const Histogram& result() const { return hist_; }

 private:
  double lo_;
  double hi_;
  Histogram hist_;
};

inline Histogram histogram(std::span<const double> values, int bins, double lo, double hi) {
  if (values.empty()) return {};
  HistogramAccumulator acc(bins, lo, hi);
  for (double v : values) acc.add(v);
  return acc.result();
}

// ---------------------------------------------------------------------------
// scatter exports

struct ScatterTable {
  std::string x_field;
  std::string y_field;
  std::vector<std::pair<double, double>> rows;
};

inline ScatterTable scatter_export(std::span<const SampleRecord> records, const std::string& x_field,
                                   const std::string& y_field) {
  if (!is_record_field(x_field)) throw std::invalid_argument("unknown record field: " + x_field);
  if (!is_record_field(y_field)) throw std::invalid_argument("unknown record field: " + y_field);
  ScatterTable t{x_field, y_field, {}};
  t.rows.reserve(records.size());
  for (const auto& r : records) {
    const auto x = record_field(r, x_field);
    const auto y = record_field(r, y_field);
    if (!x || !y) throw std::invalid_argument("records lack correlation fields");
    t.rows.emplace_back(*x, *y);
  }
  return t;
}

inline void write_scatter_csv(std::ostream& out, const ScatterTable& t) {
  out << t.x_field << ',' << t.y_field << '\n';
  char buf[64];
  for (const auto& [x, y] : t.rows) {
    std::snprintf(buf, sizeof buf, "%.9g,%.9g\n", x, y);
    out << buf;
  }
}

// ---------------------------------------------------------------------------
// sweep

struct Extremum {
  double value = -std::numeric_limits<double>::infinity();
  std::uint64_t sample_index = 0;
  std::optional<PureState> state;

  void offer(double v, std::uint64_t index) {
    if (v > value || (v == value && index < sample_index)) {
      value = v;
      sample_index = index;
    }
  }
};

struct TopSample {
  double value = 0.0;
  std::uint64_t sample_index = 0;
  double s1 = 0.0;
};

struct ResidualStats {
  double min = std::numeric_limits<double>::infinity();
  double max_abs = 0.0;

  void add(double v) {
    min = std::min(min, v);
    max_abs = std::max(max_abs, std::abs(v));
  }
};

struct RunSummary {
  RunConfig config;
  std::uint64_t samples_completed = 0;
  std::map<std::string, Extremum> maxima;
  std::map<std::string, Histogram> histograms;
  std::map<std::string, std::uint64_t> violation_counts;
  std::map<std::string, ResidualStats> residuals;
  std::vector<TopSample> top_e_sum;  // descending, at most kTopSamples
  double wall_seconds = 0.0;
  double samples_per_second = 0.0;

  static constexpr std::size_t kTopSamples = 100;

  std::uint64_t total_violations() const {
    std::uint64_t t = 0;
    for (const auto& [name, c] : violation_counts) t += c;
    return t;
  }
};

/// Raised when a sweep cannot complete; reports how far it got.
class SweepError : public std::runtime_error {
 public:
  SweepError(const std::string& what, std::uint64_t completed)
      : std::runtime_error(what + " (" + std::to_string(completed) + " samples completed)"),
        completed_(completed) {}
  std::uint64_t samples_completed() const { return completed_; }

 private:
  std::uint64_t completed_;
};

using RecordSink = std::function<void(const SampleRecord&)>;

namespace detail {

inline const std::vector<std::string>& sum_fields() {
  static const std::vector<std::string> f = {"c_sum", "c2_sum", "e_sum", "e2_sum"};
  return f;
}
inline const std::vector<std::string>& unit_fields() {
  static const std::vector<std::string> f = {"c12", "c13", "e12", "e13", "c_bipart", "s1"};
  return f;
}

class SweepAggregator {
 public:
  explicit SweepAggregator(const RunConfig& config) : config_(config) {
    for (const auto& name : sum_fields()) hist_.emplace(name, HistogramAccumulator(config.histogram_bins, 0.0, 2.0));
    for (const auto& name : unit_fields()) hist_.emplace(name, HistogramAccumulator(config.histogram_bins, 0.0, 1.0));
    if (config.compute_correlations) {
      hist_.emplace("j_sum", HistogramAccumulator(config.histogram_bins, 0.0, 2.0));
      hist_.emplace("d_sum", HistogramAccumulator(config.histogram_bins, 0.0, 2.0));
    }
    summary_.violation_counts = {{"ckw_residual", 0}, {"tau_ef", 0}};
    summary_.config = config;
  }

  void add(const SampleRecord& r) {
    for (auto& [name, acc] : hist_) acc.add(*record_field(r, name));
    for (const auto& name : sum_fields()) summary_.maxima[name].offer(*record_field(r, name), r.sample_index);
    summary_.residuals["ckw_residual"].add(r.ckw_residual);
    summary_.residuals["tau_ef"].add(r.tau_ef);
    if (r.ckw_residual < kResidualFloor) ++summary_.violation_counts["ckw_residual"];
    if (r.tau_ef < kResidualFloor) ++summary_.violation_counts["tau_ef"];
    if (r.correlations) {
      const auto& c = *r.correlations;
      summary_.maxima["j_sum"].offer(c.j_sum, r.sample_index);
      summary_.maxima["d_sum"].offer(c.d_sum, r.sample_index);
      summary_.residuals["kw_res"].add(c.kw_res);
      summary_.residuals["cons_res"].add(c.cons_res);
      summary_.residuals["two_s1_res"].add(c.two_s1_res);
    }
    offer_top(r);
    ++summary_.samples_completed;
  }

  RunSummary finish() && {
    for (auto& [name, acc] : hist_) summary_.histograms.emplace(name, acc.result());
    for (auto& [name, ext] : summary_.maxima) ext.state = sample_state(config_, ext.sample_index);
    return std::move(summary_);
  }

 private:
  void offer_top(const SampleRecord& r) {
    auto& top = summary_.top_e_sum;
    const TopSample s{r.e_sum, r.sample_index, r.s1};
    auto before = [](const TopSample& a, const TopSample& b) {
      return a.value > b.value || (a.value == b.value && a.sample_index < b.sample_index);
    };
    if (top.size() == RunSummary::kTopSamples && !before(s, top.back())) return;
    top.insert(std::upper_bound(top.begin(), top.end(), s, before), s);
    if (top.size() > RunSummary::kTopSamples) top.pop_back();
  }

  RunConfig config_;
  std::map<std::string, HistogramAccumulator> hist_;
  RunSummary summary_;
};

}  // namespace detail

/// Runs the sweep described by `config`, handing each record to `sink` in
/// sample order.
inline RunSummary run_sweep(const RunConfig& config, const RecordSink& sink = {}) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  const int workers = std::max(1, config.worker_hint.value_or(static_cast<int>(std::thread::hardware_concurrency())));
  constexpr std::uint64_t kBlock = 4096;

  detail::SweepAggregator agg(config);
  std::vector<std::optional<SampleRecord>> block;
  std::uint64_t done = 0;
  try {
    for (std::uint64_t first = 0; first < config.n_samples; first += kBlock) {
      const std::uint64_t count = std::min(kBlock, config.n_samples - first);
      block.assign(count, std::nullopt);
      auto work = [&](std::uint64_t lo, std::uint64_t hi) {
        for (std::uint64_t k = lo; k < hi; ++k) {
          block[k] = compute_record(sample_state(config, first + k), first + k, config);
        }
      };
      const auto used = std::min<std::uint64_t>(static_cast<std::uint64_t>(workers), count);
      if (used <= 1) {
        work(0, count);
      } else {
        std::vector<std::thread> threads;
        std::vector<std::exception_ptr> errors(used);
        for (std::uint64_t w = 0; w < used; ++w) {
          threads.emplace_back([&, w] {
            try {
              work(count * w / used, count * (w + 1) / used);
            } catch (...) {
              errors[w] = std::current_exception();
            }
          });
        }
        for (auto& t : threads) t.join();
        for (auto& e : errors) {
          if (e) std::rethrow_exception(e);
        }
      }
      for (const auto& r : block) {
        agg.add(*r);
        if (sink) sink(*r);
        ++done;
      }
    }
  } catch (const std::bad_alloc&) {
    throw SweepError("sweep ran out of memory", done);
  }

  RunSummary summary = std::move(agg).finish();
  summary.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  summary.samples_per_second =
      summary.wall_seconds > 0.0 ? static_cast<double>(done) / summary.wall_seconds : 0.0;
  return summary;
}

enum class ExtremalObjective { ef_sum, c_sum };

struct ExtremalResult {
  double value = 0.0;
  std::uint64_t sample_index = 0;
  PureState state;
};

/// Best sampled value of the pair-EF or pair-concurrence sum.
inline ExtremalResult extremal_search(RunConfig config, ExtremalObjective objective) {
  config.compute_correlations = false;
  const RunSummary s = run_sweep(config);
  const Extremum& best = s.maxima.at(objective == ExtremalObjective::ef_sum ? "e_sum" : "c_sum");
  return {best.value, best.sample_index, *best.state};
}

// ---------------------------------------------------------------------------
// serialization

inline std::string records_csv_header(bool with_correlations) {
  std::string h = "sample_index,c12,c13,c_sum,c2_sum,e12,e13,e_sum,e2_sum,c_bipart,e_bipart,s1,ckw_residual,tau_ef";
  if (with_correlations) h += ",j12,j13,j_sum,d12,d13,d_sum,kw_res,cons_res,two_s1_res";
  return h;
}

inline std::string format_record_csv(const SampleRecord& r) {
  std::string line = std::to_string(r.sample_index);
  char buf[32];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof buf, ",%.9g", v);
    line += buf;
  };
  for (double v : {r.c12(), r.c13(), r.c_sum, r.c2_sum, r.e12(), r.e13(), r.e_sum, r.e2_sum, r.c_bipart,
                   r.e_bipart, r.s1, r.ckw_residual, r.tau_ef}) {
    put(v);
  }
  if (r.correlations) {
    const auto& c = *r.correlations;
    for (double v : {c.j12, c.j13, c.j_sum, c.d12, c.d13, c.d_sum, c.kw_res, c.cons_res, c.two_s1_res}) put(v);
  }
  return line;
}

/// Deterministic summary document: identical configs give identical bytes.
/// Timing lives in run_info_to_json.
inline nlohmann::json summary_to_json(const RunSummary& s) {
  using nlohmann::json;
  json maxima = json::object();
  json states = json::object();
  for (const auto& [name, e] : s.maxima) {
    maxima[name] = {{"value", e.value}, {"sample_index", e.sample_index}};
    if (e.state) states[name] = state_to_json(*e.state);
  }
  json hist = json::object();
  for (const auto& [name, h] : s.histograms) hist[name] = {{"edges", h.edges}, {"counts", h.counts}};
  json residuals = json::object();
  for (const auto& [name, r] : s.residuals) residuals[name] = {{"min", r.min}, {"max_abs", r.max_abs}};
  json top = json::array();
  for (const auto& t : s.top_e_sum) top.push_back({{"value", t.value}, {"sample_index", t.sample_index}, {"s1", t.s1}});
  return {{"seed", s.config.seed},
          {"n_samples", s.config.n_samples},
          {"n_qubits", s.config.n_qubits},
          {"focus_qubit", s.config.focus_qubit},
          {"with_correlations", s.config.compute_correlations},
          {"samples_completed", s.samples_completed},
          {"maxima", maxima},
          {"argmax_states", states},
          {"violation_counts", s.violation_counts},
          {"residuals", residuals},
          {"top_e_sum", top},
          {"histograms", hist}};
}

inline nlohmann::json run_info_to_json(const RunSummary& s) {
  return {{"samples_completed", s.samples_completed},
          {"wall_seconds", s.wall_seconds},
          {"samples_per_second", s.samples_per_second},
          {"workers", s.config.worker_hint.value_or(static_cast<int>(std::thread::hardware_concurrency()))}};
}

/// FNV-1a over the deterministic summary document.
inline std::uint64_t summary_fingerprint(const RunSummary& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : summary_to_json(s).dump()) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace monogamy
