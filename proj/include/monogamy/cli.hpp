#pragma once

// Command implementations for the `monogamy` executable.
//
// Exit codes: 0 success, 1 verification failure, 2 inequality violation in a
// sweep, 64 usage error, 65 malformed or unphysical input state, 70 internal
// error, 73 output files could not be written.

#include "monogamy/correlations.hpp"
#include "monogamy/measures.hpp"
#include "monogamy/montecarlo.hpp"
#include "monogamy/named_states.hpp"
#include "monogamy/state_io.hpp"
#include "monogamy/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace monogamy::cli {

enum ExitCode : int {
  kOk = 0,
  kVerifyFailed = 1,
  kViolation = 2,
  kUsage = 64,
  kDataError = 65,
  kSoftware = 70,
  kCantCreate = 73,
};

/// Default seed: $MONOGAMY_DEFAULT_SEED when set and numeric, otherwise 0.
inline std::uint64_t default_seed() {
  if (const char* env = std::getenv("MONOGAMY_DEFAULT_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
    }
  }
  return 0;
}

struct SweepOptions {
  int qubits = 3;
  std::uint64_t samples = 100000;
  std::uint64_t seed = 0;
  int focus = 0;
  bool with_correlations = false;
  bool records = false;
  int bins = 100;
  std::string out = ".";
  std::optional<int> workers;
};

struct CheckStateOptions {
  std::optional<std::string> named;
  std::optional<std::string> state_file;
  int focus = 0;
  std::string out = ".";
};

struct VerifyOptions {
  std::string tier = "quick";
  std::uint64_t seed = 0;
  std::optional<std::string> out;
  std::optional<int> workers;
};

namespace detail {

inline bool write_file(const std::filesystem::path& path, const std::string& content, std::ostream& err) {
  std::ofstream f(path, std::ios::binary);
  f << content;
  if (!f) {
    err << "error: cannot write " << path.string() << '\n';
    return false;
  }
  return true;
}

inline bool ensure_dir(const std::string& dir, std::ostream& err) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    err << "error: cannot create directory " << dir << ": " << ec.message() << '\n';
    return false;
  }
  return true;
}

inline std::string num(double v, int digits = 9) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace detail

inline int cmd_sweep(const SweepOptions& opt, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  cfg.n_qubits = opt.qubits;
  cfg.n_samples = opt.samples;
  cfg.seed = opt.seed;
  cfg.focus_qubit = opt.focus;
  cfg.compute_correlations = opt.with_correlations;
  cfg.histogram_bins = opt.bins;
  cfg.worker_hint = opt.workers;
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  if (!detail::ensure_dir(opt.out, err)) return kCantCreate;
  const std::filesystem::path dir(opt.out);

  std::ofstream records;
  RecordSink sink;
  if (opt.records) {
    records.open(dir / "records.csv", std::ios::binary);
    if (!records) {
      err << "error: cannot write " << (dir / "records.csv").string() << '\n';
      return kCantCreate;
    }
    records << records_csv_header(cfg.compute_correlations) << '\n';
    sink = [&records](const SampleRecord& r) { records << format_record_csv(r) << '\n'; };
  }

  RunSummary summary;
  try {
    summary = run_sweep(cfg, sink);
  } catch (const SweepError& e) {
    err << "error: " << e.what() << '\n';
    return kSoftware;
  }
  if (opt.records) {
    records.close();
    if (!records) {
      err << "error: failed writing records.csv\n";
      return kCantCreate;
    }
  }
  if (!detail::write_file(dir / "summary.json", summary_to_json(summary).dump(2) + "\n", err) ||
      !detail::write_file(dir / "run_info.json", run_info_to_json(summary).dump(2) + "\n", err)) {
    return kCantCreate;
  }

  out << "samples      " << summary.samples_completed << " (" << cfg.n_qubits << " qubits, seed " << cfg.seed
      << ")\n";
  for (const auto& [name, e] : summary.maxima) {
    out << "max " << name << std::string(10 - std::min<std::size_t>(name.size(), 9), ' ') << detail::num(e.value)
        << "  (sample " << e.sample_index << ")\n";
  }
  for (const auto& [name, c] : summary.violation_counts) out << "violations " << name << "  " << c << '\n';
  out << "wrote " << (dir / "summary.json").string() << '\n';
  return summary.total_violations() == 0 ? kOk : kViolation;
}

inline nlohmann::json check_state_json(const PureState& psi, const std::string& source, int focus) {
  using nlohmann::json;
  const MonogamyReport m = monogamy_report(psi, focus);
  const int keep[] = {focus};
  const double s_focus = von_neumann_entropy(reduced_state(psi, keep));
  json pairs = json::array();
  for (const auto& p : m.pair_measures) {
    pairs.push_back({{"partner", p.partner},
                     {"concurrence", p.concurrence},
                     {"concurrence_sq", p.concurrence_sq},
                     {"eof", p.eof},
                     {"eof_sq", p.eof_sq}});
  }
  json residuals = {{"ckw_residual", m.ckw_residual}, {"tau_ef", m.tau_ef}};
  if (m.tau_f) residuals["tau_f"] = *m.tau_f;
  json j = {{"source", source},
            {"state", state_to_json(psi)},
            {"n_qubits", psi.n_qubits()},
            {"focus_qubit", focus},
            {"s_focus", s_focus},
            {"bipartition",
             {{"concurrence", m.bipartition_concurrence},
              {"concurrence_sq", m.bipartition_concurrence_sq},
              {"eof", m.bipartition_eof}}},
            {"pairs", pairs},
            {"sums",
             {{"c_sum", m.concurrence_sum()},
              {"c2_sum", m.concurrence_sq_sum()},
              {"e_sum", m.eof_sum()},
              {"e2_sum", m.eof_sq_sum()}}},
            {"residuals", residuals}};
  if (psi.n_qubits() == 3) {
    const IdentityReport ids = identity_report(psi, focus);
    j["correlations"] = {{"partners", ids.partners},
                         {"classical_measured_on_partner", ids.classical},
                         {"mutual_information", ids.mutual},
                         {"discord_measured_on_partner", ids.discord},
                         {"kw_residual", ids.kw_residual},
                         {"conservation_residual", ids.conservation_residual},
                         {"two_s1_residual", ids.two_s1_residual}};
  }
  return j;
}

inline void print_check_state(std::ostream& out, const nlohmann::json& j) {
  using detail::num;
  const int f = j["focus_qubit"].get<int>();
  out << "state        " << j["source"].get<std::string>() << " (" << j["n_qubits"].get<int>() << " qubits, focus "
      << f << ")\n";
  out << "S_focus      " << num(j["s_focus"].get<double>()) << '\n';
  out << "C_focus|rest " << num(j["bipartition"]["concurrence"].get<double>()) << '\n';
  out << "E_focus|rest " << num(j["bipartition"]["eof"].get<double>()) << '\n';
  out << "pair   C            C^2          E_F          E_F^2\n";
  for (const auto& p : j["pairs"]) {
    out << f << ',' << p["partner"].get<int>() << "    " << num(p["concurrence"].get<double>()) << "  "
        << num(p["concurrence_sq"].get<double>()) << "  " << num(p["eof"].get<double>()) << "  "
        << num(p["eof_sq"].get<double>()) << '\n';
  }
  const auto& s = j["sums"];
  out << "C sum        " << num(s["c_sum"].get<double>()) << '\n';
  out << "C^2 sum      " << num(s["c2_sum"].get<double>()) << '\n';
  out << "E_F sum      " << num(s["e_sum"].get<double>()) << '\n';
  out << "E_F^2 sum    " << num(s["e2_sum"].get<double>()) << '\n';
  const auto& r = j["residuals"];
  out << "ckw_residual " << num(r["ckw_residual"].get<double>()) << '\n';
  out << "tau_ef       " << num(r["tau_ef"].get<double>()) << '\n';
  if (r.contains("tau_f")) out << "tau_f        " << num(r["tau_f"].get<double>()) << '\n';
  if (j.contains("correlations")) {
    const auto& c = j["correlations"];
    const auto p = c["partners"];
    for (std::size_t k = 0; k < 2; ++k) {
      const std::string pair = std::to_string(f) + "," + std::to_string(p[k].get<int>());
      out << "J<-(" << pair << ")    " << num(c["classical_measured_on_partner"][k].get<double>())
          << "   (measurement on " << p[k].get<int>() << ")\n";
      out << "D<-(" << pair << ")    " << num(c["discord_measured_on_partner"][k].get<double>()) << '\n';
    }
    out << "kw_residual  " << num(c["kw_residual"].get<double>()) << '\n';
    out << "conservation " << num(c["conservation_residual"].get<double>()) << '\n';
    out << "two_s1       " << num(c["two_s1_residual"].get<double>()) << '\n';
  }
}

inline int cmd_check_state(const CheckStateOptions& opt, std::ostream& out, std::ostream& err) {
  if (opt.named.has_value() == opt.state_file.has_value()) {
    err << "error: check-state needs exactly one of --named or --state\n";
    return kUsage;
  }
  std::optional<PureState> psi;
  std::string source;
  if (opt.named) {
    psi = named_state(*opt.named);
    if (!psi) {
      err << "error: unknown named state '" << *opt.named << "'\n";
      return kUsage;
    }
    source = "named:" + *opt.named;
  } else {
    try {
      psi = load_state(*opt.state_file);
    } catch (const StateFormatError& e) {
      err << "error: " << *opt.state_file;
      if (e.line() > 0) err << ':' << e.line() << ':' << e.column();
      err << ": " << e.what() << '\n';
      return kDataError;
    } catch (const std::invalid_argument& e) {
      err << "error: " << *opt.state_file << ": " << e.what() << '\n';
      return kDataError;
    }
    source = "file:" + *opt.state_file;
  }
  if (psi->n_qubits() < 3) {
    err << "error: monogamy analysis needs at least 3 qubits, state has " << psi->n_qubits() << '\n';
    return kDataError;
  }
  if (opt.focus < 0 || opt.focus >= psi->n_qubits()) {
    err << "error: focus qubit out of range\n";
    return kUsage;
  }
  const nlohmann::json report = check_state_json(*psi, source, opt.focus);
  print_check_state(out, report);
  if (!detail::ensure_dir(opt.out, err)) return kCantCreate;
  const auto path = std::filesystem::path(opt.out) / "check_state.json";
  if (!detail::write_file(path, report.dump(2) + "\n", err)) return kCantCreate;
  out << "wrote " << path.string() << '\n';
  return kOk;
}

inline int cmd_verify(const VerifyOptions& opt, std::ostream& out, std::ostream& err) {
  VerifyReport report;
  try {
    report = run_verification(opt.tier, opt.seed, opt.workers);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  print_verify_table(out, report);
  if (opt.out) {
    if (!detail::ensure_dir(*opt.out, err)) return kCantCreate;
    if (!detail::write_file(std::filesystem::path(*opt.out) / "verify.json", verify_to_json(report).dump(2) + "\n",
                            err)) {
      return kCantCreate;
    }
  }
  return report.all_passed() ? kOk : kVerifyFailed;
}

/// Parses argv and dispatches to a subcommand.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Entanglement monogamy measures for few-qubit pure states"};
  app.require_subcommand(1);

  SweepOptions sweep;
  sweep.seed = default_seed();
  std::optional<int> sweep_workers;
  auto* sweep_cmd = app.add_subcommand("sweep", "Seeded Haar sweep; writes summary.json (and records.csv)");
  sweep_cmd->add_option("--qubits", sweep.qubits, "Number of qubits (3-8)")->check(CLI::Range(3, kMaxQubits));
  sweep_cmd->add_option("--samples", sweep.samples, "Number of Haar samples")->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--seed", sweep.seed, "Base seed (default $MONOGAMY_DEFAULT_SEED or 0)");
  sweep_cmd->add_option("--focus", sweep.focus, "Focus qubit index")->check(CLI::NonNegativeNumber);
  sweep_cmd->add_flag("--with-correlations", sweep.with_correlations, "Compute J, D and identity residuals");
  sweep_cmd->add_flag("--records", sweep.records, "Write per-sample records.csv");
  sweep_cmd->add_option("--bins", sweep.bins, "Histogram bins")->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--out", sweep.out, "Output directory");
  sweep_cmd->add_option("--workers", sweep_workers, "Worker threads")->check(CLI::PositiveNumber);

  CheckStateOptions check;
  std::string named, state_file;
  auto* check_cmd = app.add_subcommand("check-state", "Report all measures and identities for one state");
  auto* named_opt = check_cmd->add_option("--named", named, "ghz | w | w-paper | product | bell-pair-embedded");
  auto* state_opt = check_cmd->add_option("--state", state_file, "JSON state file");
  named_opt->excludes(state_opt);
  check_cmd->add_option("--focus", check.focus, "Focus qubit index")->check(CLI::NonNegativeNumber);
  check_cmd->add_option("--out", check.out, "Directory for check_state.json");

  VerifyOptions verify;
  verify.seed = default_seed();
  std::string verify_out;
  std::optional<int> verify_workers;
  auto* verify_cmd = app.add_subcommand("verify", "Run the tiered invariant suites");
  verify_cmd->add_option("--tier", verify.tier, "quick | full")->check(CLI::IsMember({"quick", "full"}));
  verify_cmd->add_option("--seed", verify.seed, "Base seed (default $MONOGAMY_DEFAULT_SEED or 0)");
  auto* verify_out_opt = verify_cmd->add_option("--out", verify_out, "Directory for verify.json");
  verify_cmd->add_option("--workers", verify_workers, "Worker threads")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kUsage;
  }

  try {
    if (sweep_cmd->parsed()) {
      sweep.workers = sweep_workers;
      return cmd_sweep(sweep, out, err);
    }
    if (check_cmd->parsed()) {
      if (named_opt->count() > 0) check.named = named;
      if (state_opt->count() > 0) check.state_file = state_file;
      return cmd_check_state(check, out, err);
    }
    if (verify_cmd->parsed()) {
      if (verify_out_opt->count() > 0) verify.out = verify_out;
      verify.workers = verify_workers;
      return cmd_verify(verify, out, err);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kSoftware;
  }
  return kUsage;
}

}  // namespace monogamy::cli
