#pragma once

// One-way classical correlation, discord, and the pure three-qubit identities
// linking them to entanglement of formation.
//
// J<-(A|B) = max over projective measurements on B of
//            S(rho_A) - sum_x p_x S(rho_A^x).
// The maximum is located by a (theta, phi) grid over the Bloch sphere
// followed by Nelder-Mead refinement from the best grid cells.

#include "monogamy/measures.hpp"
#include "monogamy/nelder_mead.hpp"
#include "monogamy/statekit.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <vector>

namespace monogamy {

enum class MeasuredSide { first, second };

struct ClassicalCorrelationOptions {
  int theta_steps = 32;
  int phi_steps = 64;
  int refine_starts = 3;
  NelderMeadOptions simplex{};
};

struct ClassicalCorrelationResult {
  double value = 0.0;
  MeasurementBasis argmax_basis;
  int optimizer_iterations = 0;
  bool converged = false;
  double grid_value = 0.0;  // best value found by the grid stage alone
};

namespace detail {

inline double entropy_2x2(double a, double d, cplx b) {
  const double mean = 0.5 * (a + d);
  const double radius = std::hypot(0.5 * (a - d), std::abs(b));
  const double ev[] = {mean + radius, mean - radius};
  return spectrum_entropy(ev);
}

/// Evaluates S(rho_unmeasured) - sum_x p_x S(rho_unmeasured^x) for one basis
/// without allocating; the hot loop of the optimizer.
class MeasurementObjective {
 public:
  MeasurementObjective(const DensityMatrix& rho, MeasuredSide side) {
    if (rho.dim() != 4) throw std::invalid_argument("classical correlation needs a two-qubit state");
    // Reorder so the measured qubit is the second tensor factor.
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        rho_(i, j) = side == MeasuredSide::second ? rho(i, j) : rho(swap_index(i), swap_index(j));
      }
    }
    const double a = (rho_(0, 0) + rho_(1, 1)).real();
    const double d = (rho_(2, 2) + rho_(3, 3)).real();
    const cplx b = rho_(0, 2) + rho_(1, 3);
    unmeasured_entropy_ = std::clamp(entropy_2x2(a, d, b), 0.0, 1.0);
  }

  double unmeasured_entropy() const { return unmeasured_entropy_; }

  double operator()(double theta, double phi) const {
    const double c = std::cos(0.5 * theta);
    const double s = std::sin(0.5 * theta);
    const cplx e = std::polar(1.0, phi);
    const std::array<std::array<cplx, 2>, 2> kets{{{cplx(c), e * s}, {cplx(s), -e * c}}};
    double conditional = 0.0;
    for (const auto& v : kets) {
      // sigma(a, a') = sum_{b, b'} v_b conj(v_b') rho((a, b'), (a', b))
      cplx sigma[2][2] = {{0.0, 0.0}, {0.0, 0.0}};
      for (int ra = 0; ra < 2; ++ra) {
        for (int ca = 0; ca < 2; ++ca) {
          cplx acc = 0.0;
          for (int b = 0; b < 2; ++b) {
            for (int bp = 0; bp < 2; ++bp) {
              acc += v[static_cast<std::size_t>(b)] * std::conj(v[static_cast<std::size_t>(bp)]) *
                     rho_(2 * ra + bp, 2 * ca + b);
            }
          }
          sigma[ra][ca] = acc;
        }
      }
      const double p = sigma[0][0].real() + sigma[1][1].real();
      if (p < kNegligibleProbability) continue;
      const cplx off = 0.5 * (sigma[0][1] + std::conj(sigma[1][0])) / p;
      conditional += p * entropy_2x2(sigma[0][0].real() / p, sigma[1][1].real() / p, off);
    }
    return unmeasured_entropy_ - conditional;
  }

 private:
  static int swap_index(int i) { return ((i & 1) << 1) | (i >> 1); }

  Eigen::Matrix4cd rho_;
  double unmeasured_entropy_ = 0.0;
};

}  // namespace detail

/// Entropy reduction of the unmeasured qubit for a fixed measurement basis.
inline double measurement_information_gain(const DensityMatrix& rho_ab, MeasuredSide side,
                                           const MeasurementBasis& basis) {
  return detail::MeasurementObjective(rho_ab, side)(basis.theta(), basis.phi());
}

inline ClassicalCorrelationResult classical_correlation(const DensityMatrix& rho_ab, MeasuredSide side,
                                                        const ClassicalCorrelationOptions& opt = {}) {
  if (opt.theta_steps < 2 || opt.phi_steps < 1 || opt.refine_starts < 0) {
    throw std::invalid_argument("classical_correlation: invalid grid options");
  }
  const detail::MeasurementObjective objective(rho_ab, side);

  struct Candidate {
    double value;
    double theta;
    double phi;
  };
  const double dtheta = std::numbers::pi / (opt.theta_steps - 1);
  const double dphi = 2.0 * std::numbers::pi / opt.phi_steps;
  std::vector<Candidate> grid;
  grid.reserve(static_cast<std::size_t>(opt.theta_steps * opt.phi_steps));
  for (int i = 0; i < opt.theta_steps; ++i) {
    // At the poles every phi names the same basis.
    const bool pole = i == 0 || i == opt.theta_steps - 1;
    for (int j = 0; j < (pole ? 1 : opt.phi_steps); ++j) {
      const double theta = i * dtheta;
      const double phi = j * dphi;
      grid.push_back({objective(theta, phi), theta, phi});
    }
  }
  const auto starts = std::min<std::size_t>(static_cast<std::size_t>(opt.refine_starts), grid.size());
  std::partial_sort(grid.begin(), grid.begin() + static_cast<std::ptrdiff_t>(std::max<std::size_t>(starts, 1)),
                    grid.end(), [](const Candidate& a, const Candidate& b) { return a.value > b.value; });

  ClassicalCorrelationResult result;
  result.grid_value = grid.front().value;
  Candidate best = grid.front();
  bool all_converged = true;
  for (std::size_t k = 0; k < starts; ++k) {
    const auto refined = nelder_mead<2>(
        [&](const std::array<double, 2>& x) { return -objective(x[0], x[1]); },
        {grid[k].theta, grid[k].phi}, {dtheta, dphi}, opt.simplex);
    result.optimizer_iterations += refined.iterations;
    all_converged = all_converged && refined.converged;
    if (-refined.value > best.value) best = {-refined.value, refined.x[0], refined.x[1]};
  }
  result.value = std::max(0.0, best.value);
  result.argmax_basis = MeasurementBasis::from_angles(best.theta, best.phi);
  result.converged = all_converged;
  return result;
}

/// S(rho_A) + S(rho_B) - S(rho_AB).
inline double mutual_information(const DensityMatrix& rho_ab) {
  if (rho_ab.dim() != 4) throw std::invalid_argument("mutual_information needs a two-qubit state");
  const DensityMatrix a = partial_trace(rho_ab, 2, {0});
  const DensityMatrix b = partial_trace(rho_ab, 2, {1});
  return von_neumann_entropy(a) + von_neumann_entropy(b) - von_neumann_entropy(rho_ab);
}

namespace detail {

inline constexpr double kDiscordFloor = 1e-6;

inline double discord_from(double mutual, double classical) {
  const double d = mutual - classical;
  return (d < 0.0 && d > -kDiscordFloor) ? 0.0 : d;
}

}  // namespace detail

/// Mutual information minus one-way classical correlation, measuring `side`.
inline double quantum_discord(const DensityMatrix& rho_ab, MeasuredSide side,
                              const ClassicalCorrelationOptions& opt = {}) {
  return detail::discord_from(mutual_information(rho_ab), classical_correlation(rho_ab, side, opt).value);
}

/// Correlations of a focus qubit with its two partners in a pure three-qubit
/// state. Pair (focus, p) quantities with an arrow measure the partner p.
struct IdentityReport {
  int focus_qubit = 0;
  std::array<int, 2> partners{1, 2};
  double s_focus = 0.0;
  std::array<double, 2> eof{};         // E_{focus,p}
  std::array<double, 2> classical{};   // J<-_{focus,p}, measurement on p
  std::array<double, 2> mutual{};      // I(focus : p)
  std::array<double, 2> discord{};     // D<-_{focus,p}, measurement on p

  // S_f - E_{f,p0} - J<-_{f,p1}
  double kw_residual = 0.0;
  // (E_{f,p0} + E_{f,p1}) - (D<-_{f,p0} + D<-_{f,p1})
  double conservation_residual = 0.0;
  // J<-_{f,p0} + J<-_{f,p1} + E_{f,p0} + E_{f,p1} - 2 S_f
  double two_s1_residual = 0.0;

  double eof_sum() const { return eof[0] + eof[1]; }
  double classical_sum() const { return classical[0] + classical[1]; }
  double discord_sum() const { return discord[0] + discord[1]; }
};

namespace detail {

inline void check_three_qubits(const PureState& psi, int focus_qubit) {
  if (psi.n_qubits() != 3) throw std::invalid_argument("identity checks need a three-qubit pure state");
  if (focus_qubit < 0 || focus_qubit > 2) throw std::invalid_argument("focus qubit out of range");
}

inline std::array<int, 2> partners_of(int focus_qubit) {
  std::array<int, 2> p{};
  int k = 0;
  for (int q = 0; q < 3; ++q) {
    if (q != focus_qubit) p[static_cast<std::size_t>(k++)] = q;
  }
  return p;
}

struct PairState {
  DensityMatrix rho;
  MeasuredSide partner_side;
};

inline PairState pair_state(const PureState& psi, int focus_qubit, int partner) {
  const int keep[] = {std::min(focus_qubit, partner), std::max(focus_qubit, partner)};
  return {reduced_state(psi, keep), partner > focus_qubit ? MeasuredSide::second : MeasuredSide::first};
}

}  // namespace detail

inline IdentityReport identity_report(const PureState& psi, int focus_qubit = 0,
                                      const ClassicalCorrelationOptions& opt = {}) {
  detail::check_three_qubits(psi, focus_qubit);
  IdentityReport r;
  r.focus_qubit = focus_qubit;
  r.partners = detail::partners_of(focus_qubit);
  const int focus_keep[] = {focus_qubit};
  r.s_focus = von_neumann_entropy(reduced_state(psi, focus_keep));
  for (std::size_t k = 0; k < 2; ++k) {
    const auto pair = detail::pair_state(psi, focus_qubit, r.partners[k]);
    r.eof[k] = ef_from_concurrence(concurrence_two_qubit_mixed(pair.rho));
    r.classical[k] = classical_correlation(pair.rho, pair.partner_side, opt).value;
    r.mutual[k] = mutual_information(pair.rho);
    r.discord[k] = detail::discord_from(r.mutual[k], r.classical[k]);
  }
  r.kw_residual = r.s_focus - r.eof[0] - r.classical[1];
  r.conservation_residual = r.eof_sum() - r.discord_sum();
  r.two_s1_residual = r.classical_sum() + r.eof_sum() - 2.0 * r.s_focus;
  return r;
}

/// S_1 - E_12 - J<-_13, measurement on qubit 3 (index 2).
inline double kw_residual(const PureState& psi, const ClassicalCorrelationOptions& opt = {}) {
  detail::check_three_qubits(psi, 0);
  const auto p12 = detail::pair_state(psi, 0, 1);
  const auto p13 = detail::pair_state(psi, 0, 2);
  const double s1 = von_neumann_entropy(reduced_state(psi, {0}));
  return s1 - ef_from_concurrence(concurrence_two_qubit_mixed(p12.rho)) -
         classical_correlation(p13.rho, p13.partner_side, opt).value;
}

/// (E_12 + E_13) - (D<-_12 + D<-_13), discord measured on qubits 2 and 3.
inline double conservation_residual(const PureState& psi, const ClassicalCorrelationOptions& opt = {}) {
  return identity_report(psi, 0, opt).conservation_residual;
}

/// J<-_12 + J<-_13 + E_12 + E_13 - 2 S_1.
inline double two_s1_identity_residual(const PureState& psi, const ClassicalCorrelationOptions& opt = {}) {
  return identity_report(psi, 0, opt).two_s1_residual;
}

}  // namespace monogamy
