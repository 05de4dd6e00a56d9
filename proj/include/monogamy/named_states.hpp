#pragma once

// Catalog of three-qubit reference states.

#include "monogamy/statekit.hpp"

#include <optional>
#include <string>
#include <vector>

namespace monogamy {

inline const std::vector<std::string>& named_state_names() {
  static const std::vector<std::string> names = {"ghz", "w", "w-paper", "product", "bell-pair-embedded"};
  return names;
}

/// ghz:                (|000> + |111>)/sqrt2
/// w:                  (|100> + |010> + |001>)/sqrt3
/// w-paper:            sqrt(1/2)|100> + (|010> + |001>)/2, the W-type state with S_1 = 1
/// product:            |000>
/// bell-pair-embedded: (|00> + |11>)/sqrt2 on qubits 0,1, times |0>
inline std::optional<PureState> named_state(const std::string& name) {
  Vector a = Vector::Zero(8);
  const double r2 = std::sqrt(0.5);
  if (name == "ghz") {
    a(0b000) = r2;
    a(0b111) = r2;
  } else if (name == "w") {
    const double r3 = 1.0 / std::sqrt(3.0);
    a(0b100) = r3;
    a(0b010) = r3;
    a(0b001) = r3;
  } else if (name == "w-paper") {
    a(0b100) = r2;
    a(0b010) = 0.5;
    a(0b001) = 0.5;
  } else if (name == "product") {
    a(0b000) = 1.0;
  } else if (name == "bell-pair-embedded") {
    a(0b000) = r2;
    a(0b110) = r2;
  } else {
    return std::nullopt;
  }
  return PureState(3, std::move(a));
}

}  // namespace monogamy
