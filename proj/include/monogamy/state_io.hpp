#pragma once

// JSON state files: {"n_qubits": int, "amplitudes": [[re, im], ...]},
// amplitudes in qubit-0-most-significant order.

#include "monogamy/statekit.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace monogamy {

/// Malformed or unphysical state file. `line` and `column` are 1-based and
/// zero when the problem is not tied to a source position.
class StateFormatError : public std::runtime_error {
 public:
  StateFormatError(const std::string& what, std::size_t line = 0, std::size_t column = 0)
      : std::runtime_error(what), line_(line), column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

inline nlohmann::json state_to_json(const PureState& psi) {
  nlohmann::json amps = nlohmann::json::array();
  for (Eigen::Index i = 0; i < psi.dim(); ++i) {
    amps.push_back({psi[i].real(), psi[i].imag()});
  }
  return {{"n_qubits", psi.n_qubits()}, {"amplitudes", std::move(amps)}};
}

inline PureState state_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw StateFormatError("state must be a JSON object");
  if (!j.contains("n_qubits") || !j["n_qubits"].is_number_integer()) {
    throw StateFormatError("missing integer field \"n_qubits\"");
  }
  if (!j.contains("amplitudes") || !j["amplitudes"].is_array()) {
    throw StateFormatError("missing array field \"amplitudes\"");
  }
  const auto n = j["n_qubits"].get<long long>();
  if (n < 1 || n > kMaxQubits) {
    throw StateFormatError("n_qubits must be in [1, 8], got " + std::to_string(n));
  }
  const auto& amps = j["amplitudes"];
  const std::size_t expected = std::size_t{1} << n;
  if (amps.size() != expected) {
    throw StateFormatError("expected " + std::to_string(expected) + " amplitudes, got " +
                           std::to_string(amps.size()));
  }
  Vector v(static_cast<Eigen::Index>(expected));
  for (std::size_t i = 0; i < expected; ++i) {
    const auto& a = amps[i];
    if (!a.is_array() || a.size() != 2 || !a[0].is_number() || !a[1].is_number()) {
      throw StateFormatError("amplitude " + std::to_string(i) + " must be a [re, im] pair");
    }
    v(static_cast<Eigen::Index>(i)) = cplx(a[0].get<double>(), a[1].get<double>());
  }
  const double norm = v.norm();
  if (std::abs(norm - 1.0) > kNormTolerance) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "state is not normalized: norm = " << norm;
    throw StateFormatError(msg.str());
  }
  return PureState(static_cast<int>(n), std::move(v));
}

namespace detail {

inline std::pair<std::size_t, std::size_t> line_and_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i < text.size() && i + 1 < byte; ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

}  // namespace detail

inline PureState parse_state(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const auto [line, column] = detail::line_and_column(text, e.byte);
    throw StateFormatError("JSON syntax error at line " + std::to_string(line) + ", column " +
                               std::to_string(column),
                           line, column);
  }
  return state_from_json(j);
}

inline PureState load_state(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw StateFormatError("cannot open state file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_state(buffer.str());
}

}  // namespace monogamy
