#pragma once

// Concurrence, entanglement of formation and the monogamy residuals built on
// them. All entropic quantities are in bits.

#include "monogamy/statekit.hpp"

#include <optional>
#include <vector>

namespace monogamy {

namespace detail {

inline void check_focus(const PureState& psi, int focus_qubit) {
  if (psi.n_qubits() < 3) throw std::invalid_argument("monogamy measures need at least 3 qubits");
  if (focus_qubit < 0 || focus_qubit >= psi.n_qubits()) {
    throw std::invalid_argument("focus qubit out of range");
  }
}

inline double clamp_unit(double x, const char* what) {
  if (!(x >= -1e-12 && x <= 1.0 + 1e-12)) {
    throw std::invalid_argument(std::string(what) + " must lie in [0, 1]");
  }
  return std::clamp(x, 0.0, 1.0);
}

// Eigenvalues of rho below this are treated as outside its support when
// forming the Wootters matrix; their square roots would otherwise leak
// ~1e-8 of rounding noise into the concurrence.
inline constexpr double kSupportTolerance = 1e-13;

inline Eigen::Matrix4cd spin_flip() {
  Eigen::Matrix4cd y = Eigen::Matrix4cd::Zero();
  y(0, 3) = -1.0;
  y(1, 2) = 1.0;
  y(2, 1) = 1.0;
  y(3, 0) = -1.0;
  return y;
}

}  // namespace detail

/// -x log2 x - (1-x) log2 (1-x), zero at both endpoints.
inline double binary_entropy(double x) {
  x = detail::clamp_unit(x, "binary_entropy argument");
  if (x == 0.0 || x == 1.0) return 0.0;
  return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

/// Entanglement of formation of a two-qubit state with concurrence c:
/// h((1 + sqrt(1 - c^2)) / 2). Evaluated through the small root
/// (1 - sqrt(1 - c^2)) / 2 = c^2 / (2 (1 + sqrt(1 - c^2))) to avoid cancellation.
inline double ef_from_concurrence(double c) {
  c = detail::clamp_unit(c, "concurrence");
  const double root = std::sqrt(std::max(0.0, 1.0 - c * c));
  return binary_entropy(c * c / (2.0 * (1.0 + root)));
}

/// E_F as a function of the squared concurrence x = C^2.
inline double ef_from_concurrence_squared(double x) {
  x = detail::clamp_unit(x, "squared concurrence");
  return ef_from_concurrence(std::sqrt(x));
}

/// E_F^2 as a function of x = C^2. Convex in x, which is what makes the
/// squared EF monogamous.
inline double ef_squared_from_concurrence_squared(double x) {
  const double e = ef_from_concurrence_squared(x);
  return e * e;
}

/// Squared concurrence between qubit k and the rest of a pure state,
/// 4 det(rho_k).
inline double concurrence_squared_pure_bipartition(const PureState& psi, int qubit_k) {
  if (qubit_k < 0 || qubit_k >= psi.n_qubits()) throw std::invalid_argument("qubit index out of range");
  const int keep[] = {qubit_k};
  const DensityMatrix rho = reduced_state(psi, keep);
  const double det = rho(0, 0).real() * rho(1, 1).real() - std::norm(rho(0, 1));
  return std::clamp(4.0 * det, 0.0, 1.0);
}

inline double concurrence_pure_bipartition(const PureState& psi, int qubit_k) {
  return std::sqrt(concurrence_squared_pure_bipartition(psi, qubit_k));
}

/// Wootters concurrence max(0, l1 - l2 - l3 - l4) of a two-qubit state.
///
/// The l_i are square roots of the eigenvalues of sqrt(rho) rho~ sqrt(rho),
/// rho~ = (Y x Y) rho* (Y x Y). That Hermitian matrix is assembled in the
/// eigenbasis of rho restricted to its support, tau tau^dagger with
/// tau = D V^dagger (Y x Y) V* D, so structurally zero l_i stay exactly zero.
inline double concurrence_two_qubit_mixed(const DensityMatrix& rho) {
  if (rho.dim() != 4) throw std::invalid_argument("concurrence_two_qubit_mixed: expected a 4x4 state");
  const Eigen::Matrix4cd m = 0.5 * (rho.matrix() + rho.matrix().adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> solver(m);
  if (solver.info() != Eigen::Success) throw NumericalError("eigensolver failed in concurrence");

  std::vector<Eigen::Index> support;
  for (Eigen::Index i = 0; i < 4; ++i) {
    if (clamp_eigenvalue(solver.eigenvalues()(i)) > detail::kSupportTolerance) support.push_back(i);
  }
  const auto rank = static_cast<Eigen::Index>(support.size());
  if (rank == 0) throw NumericalError("density matrix has empty support");

  Matrix weighted(4, rank);
  for (Eigen::Index k = 0; k < rank; ++k) {
    const Eigen::Index i = support[static_cast<std::size_t>(k)];
    weighted.col(k) = std::sqrt(solver.eigenvalues()(i)) * solver.eigenvectors().col(i);
  }
  const Matrix tau = weighted.adjoint() * detail::spin_flip() * weighted.conjugate();
  const Matrix gram = tau * tau.adjoint();
  const auto mu = hermitian_eigenvalues(0.5 * (gram + gram.adjoint()));
  double c = std::sqrt(std::max(0.0, mu.front()));
  for (std::size_t i = 1; i < mu.size(); ++i) c -= std::sqrt(std::max(0.0, mu[i]));
  return std::clamp(c, 0.0, 1.0);
}

/// Concurrence of the two-qubit reduced state of qubits a and b.
inline double pair_concurrence(const PureState& psi, int a, int b) {
  if (a == b) throw std::invalid_argument("pair_concurrence: qubits must differ");
  const int keep[] = {std::min(a, b), std::max(a, b)};
  return concurrence_two_qubit_mixed(reduced_state(psi, keep));
}

struct PairMeasures {
  int partner = -1;
  double concurrence = 0.0;
  double concurrence_sq = 0.0;
  double eof = 0.0;
  double eof_sq = 0.0;

  static PairMeasures from_concurrence(int partner, double c) {
    const double e = ef_from_concurrence(c);
    return {partner, c, c * c, e, e * e};
  }
};

struct MonogamyReport {
  int focus_qubit = 0;
  double bipartition_concurrence = 0.0;  // C_{focus|rest}
  double bipartition_concurrence_sq = 0.0;
  double bipartition_eof = 0.0;
  double ckw_residual = 0.0;
  double tau_ef = 0.0;
  // Three-qubit states with focus 0 only; equals tau_ef there.
  std::optional<double> tau_f;
  std::vector<PairMeasures> pair_measures;  // one per partner, increasing qubit index

  double concurrence_sum() const {
    double s = 0.0;
    for (const auto& p : pair_measures) s += p.concurrence;
    return s;
  }
  double concurrence_sq_sum() const {
    double s = 0.0;
    for (const auto& p : pair_measures) s += p.concurrence_sq;
    return s;
  }
  double eof_sum() const {
    double s = 0.0;
    for (const auto& p : pair_measures) s += p.eof;
    return s;
  }
  double eof_sq_sum() const {
    double s = 0.0;
    for (const auto& p : pair_measures) s += p.eof_sq;
    return s;
  }
};

inline std::vector<PairMeasures> pair_measures_for(const PureState& psi, int focus_qubit) {
  std::vector<PairMeasures> pairs;
  for (int q = 0; q < psi.n_qubits(); ++q) {
    if (q == focus_qubit) continue;
    pairs.push_back(PairMeasures::from_concurrence(q, pair_concurrence(psi, focus_qubit, q)));
  }
  return pairs;
}

inline MonogamyReport monogamy_report(const PureState& psi, int focus_qubit = 0) {
  detail::check_focus(psi, focus_qubit);
  MonogamyReport r;
  r.focus_qubit = focus_qubit;
  r.bipartition_concurrence_sq = concurrence_squared_pure_bipartition(psi, focus_qubit);
  r.bipartition_concurrence = std::sqrt(r.bipartition_concurrence_sq);
  r.bipartition_eof = ef_from_concurrence_squared(r.bipartition_concurrence_sq);
  r.pair_measures = pair_measures_for(psi, focus_qubit);
  r.ckw_residual = r.bipartition_concurrence_sq - r.concurrence_sq_sum();
  r.tau_ef = r.bipartition_eof * r.bipartition_eof - r.eof_sq_sum();
  if (psi.n_qubits() == 3 && focus_qubit == 0) r.tau_f = r.tau_ef;
  return r;
}

/// C^2_{focus|rest} - sum_i C^2_{focus,i}. Nonnegative for every pure state.
inline double ckw_residual(const PureState& psi, int focus_qubit = 0) {
  return monogamy_report(psi, focus_qubit).ckw_residual;
}

/// E_F^2_{focus|rest} - sum_i E_F^2_{focus,i}. Nonnegative for every pure state.
inline double squared_ef_residual(const PureState& psi, int focus_qubit = 0) {
  return monogamy_report(psi, focus_qubit).tau_ef;
}

/// E_F^2(1|23) - E_F^2(12) - E_F^2(13) for three qubits.
inline double tau_f(const PureState& psi) {
  if (psi.n_qubits() != 3) throw std::invalid_argument("tau_f is defined for three qubits");
  return squared_ef_residual(psi, 0);
}

}  // namespace monogamy
