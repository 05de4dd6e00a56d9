#pragma once

// State representation and measurement mechanics for small qubit registers.
//
// Conventions: qubit 0 is the most significant bit of the computational-basis
// index, so the amplitude of |q0 q1 ... q(n-1)> sits at index
// q0*2^(n-1) + ... + q(n-1). Entropies are in bits.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace monogamy {

using cplx = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

inline constexpr int kMaxQubits = 8;
inline constexpr double kNormTolerance = 1e-12;
inline constexpr double kHermitianTolerance = 1e-12;
inline constexpr double kTraceTolerance = 1e-12;
// Eigenvalues in [-kEigenvalueFloor, 0) are rounding noise and clamp to 0.
inline constexpr double kEigenvalueFloor = 1e-10;
inline constexpr double kNegligibleProbability = 1e-12;

/// Raised when a quantity that must be physical (e.g. a density-matrix
/// eigenvalue) is out of range by more than rounding noise.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline int qubits_for_dim(Eigen::Index dim) {
  int n = 0;
  while ((Eigen::Index{1} << n) < dim) ++n;
  if ((Eigen::Index{1} << n) != dim) {
    throw std::invalid_argument("dimension " + std::to_string(dim) + " is not a power of two");
  }
  return n;
}

inline double max_hermitian_defect(const Matrix& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

// Bit of `index` belonging to qubit `q` in an n-qubit register.
inline std::size_t qubit_bit(std::size_t index, int q, int n) {
  return (index >> (n - 1 - q)) & 1u;
}

inline void validate_keep(std::span<const int> keep, int n_qubits) {
  if (keep.empty()) throw std::invalid_argument("keep list must be non-empty");
  for (std::size_t i = 0; i < keep.size(); ++i) {
    if (keep[i] < 0 || keep[i] >= n_qubits) {
      throw std::invalid_argument("qubit index " + std::to_string(keep[i]) + " out of range");
    }
    if (i > 0 && keep[i] <= keep[i - 1]) {
      throw std::invalid_argument("keep list must be strictly increasing");
    }
  }
}

// For every basis index, the sub-index formed by the kept qubits (in list
// order, first kept qubit most significant) and by the discarded qubits.
struct IndexSplit {
  std::vector<std::size_t> kept;
  std::vector<std::size_t> discarded;
  std::size_t kept_dim = 1;
};

inline IndexSplit split_indices(int n_qubits, std::span<const int> keep) {
  std::vector<bool> is_kept(static_cast<std::size_t>(n_qubits), false);
  for (int q : keep) is_kept[static_cast<std::size_t>(q)] = true;
  const std::size_t dim = std::size_t{1} << n_qubits;
  IndexSplit split;
  split.kept.resize(dim);
  split.discarded.resize(dim);
  split.kept_dim = std::size_t{1} << keep.size();
  for (std::size_t i = 0; i < dim; ++i) {
    std::size_t k = 0;
    std::size_t d = 0;
    for (int q = 0; q < n_qubits; ++q) {
      const std::size_t bit = qubit_bit(i, q, n_qubits);
      if (is_kept[static_cast<std::size_t>(q)]) {
        k = (k << 1) | bit;
      } else {
        d = (d << 1) | bit;
      }
    }
    split.kept[i] = k;
    split.discarded[i] = d;
  }
  return split;
}

}  // namespace detail

/// Clamp a density-matrix eigenvalue to [0, 1], rejecting values that are
/// negative beyond rounding noise.
inline double clamp_eigenvalue(double lambda) {
  if (lambda < -kEigenvalueFloor) {
    throw NumericalError("eigenvalue " + std::to_string(lambda) + " is below the noise floor");
  }
  return std::clamp(lambda, 0.0, 1.0);
}

/// Eigenvalues of a Hermitian matrix in descending order.
///
/// The input must be Hermitian within 1e-10 entrywise; it is symmetrized
/// before the solve. 2x2 inputs use the closed form.
inline std::vector<double> hermitian_eigenvalues(const Matrix& h) {
  if (h.rows() != h.cols() || h.rows() == 0) {
    throw std::invalid_argument("hermitian_eigenvalues: matrix must be square and non-empty");
  }
  if (detail::max_hermitian_defect(h) > 1e-10) {
    throw std::invalid_argument("hermitian_eigenvalues: matrix is not Hermitian");
  }
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(h.rows()));
  if (h.rows() == 1) {
    out.push_back(h(0, 0).real());
  } else if (h.rows() == 2) {
    const double a = h(0, 0).real();
    const double d = h(1, 1).real();
    const cplx b = 0.5 * (h(0, 1) + std::conj(h(1, 0)));
    const double mean = 0.5 * (a + d);
    const double radius = std::hypot(0.5 * (a - d), std::abs(b));
    out = {mean + radius, mean - radius};
  } else {
    const Matrix sym = 0.5 * (h + h.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(sym, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw NumericalError("Hermitian eigensolver failed");
    const auto& ev = solver.eigenvalues();
    for (Eigen::Index i = ev.size(); i-- > 0;) out.push_back(ev(i));
  }
  return out;
}

/// Normalized amplitude vector over n qubits.
class PureState {
 public:
  PureState(int n_qubits, Vector amplitudes) : n_qubits_(n_qubits), amplitudes_(std::move(amplitudes)) {
    if (n_qubits_ < 1 || n_qubits_ > kMaxQubits) {
      throw std::invalid_argument("n_qubits must be in [1, " + std::to_string(kMaxQubits) + "]");
    }
    if (amplitudes_.size() != (Eigen::Index{1} << n_qubits_)) {
      throw std::invalid_argument("amplitude vector length must be 2^n_qubits");
    }
    if (!amplitudes_.allFinite()) throw std::invalid_argument("amplitudes must be finite");
    const double norm = amplitudes_.norm();
    if (std::abs(norm - 1.0) > kNormTolerance) {
      throw std::invalid_argument("state is not normalized (norm " + std::to_string(norm) + ")");
    }
  }

  int n_qubits() const { return n_qubits_; }
  Eigen::Index dim() const { return amplitudes_.size(); }
  const Vector& amplitudes() const { return amplitudes_; }
  cplx operator[](Eigen::Index i) const { return amplitudes_(i); }

  friend bool operator==(const PureState& a, const PureState& b) {
    return a.n_qubits_ == b.n_qubits_ && a.amplitudes_ == b.amplitudes_;
  }

 private:
  int n_qubits_;
  Vector amplitudes_;
};

/// Hermitian, positive semidefinite, unit-trace operator on 2^k dimensions.
class DensityMatrix {
 public:
  /// Tag for results that are valid by construction (reduced states,
  /// projections); skips the eigenvalue check.
  struct Trusted {};

  explicit DensityMatrix(Matrix entries) : entries_(std::move(entries)) {
    check_shape();
    if (detail::max_hermitian_defect(entries_) > kHermitianTolerance) {
      throw std::invalid_argument("density matrix is not Hermitian");
    }
    const cplx tr = entries_.trace();
    if (std::abs(tr - 1.0) > kTraceTolerance) {
      throw std::invalid_argument("density matrix trace is not 1");
    }
    for (double lambda : hermitian_eigenvalues(entries_)) {
      if (lambda < -kEigenvalueFloor) {
        throw std::invalid_argument("density matrix has a negative eigenvalue");
      }
    }
  }

  DensityMatrix(Matrix entries, Trusted) : entries_(std::move(entries)) { check_shape(); }

  Eigen::Index dim() const { return entries_.rows(); }
  int n_qubits() const { return n_qubits_; }
  const Matrix& matrix() const { return entries_; }
  cplx operator()(Eigen::Index r, Eigen::Index c) const { return entries_(r, c); }

 private:
  void check_shape() {
    if (entries_.rows() != entries_.cols() || entries_.rows() == 0) {
      throw std::invalid_argument("density matrix must be square and non-empty");
    }
    n_qubits_ = detail::qubits_for_dim(entries_.rows());
  }

  Matrix entries_;
  int n_qubits_ = 0;
};

/// Projective single-qubit measurement. Outcome 0 projects onto
/// cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>, outcome 1 onto its complement.
class MeasurementBasis {
 public:
  MeasurementBasis() = default;

  MeasurementBasis(double theta, double phi) : theta_(theta), phi_(phi) {
    if (!(theta >= 0.0 && theta <= std::numbers::pi)) {
      throw std::invalid_argument("theta must lie in [0, pi]");
    }
    if (!(phi >= 0.0 && phi < 2.0 * std::numbers::pi)) {
      throw std::invalid_argument("phi must lie in [0, 2pi)");
    }
  }

  /// Maps arbitrary real angles onto the canonical ranges describing the
  /// same pair of projectors.
  static MeasurementBasis from_angles(double theta, double phi) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    theta = std::fmod(theta, two_pi);
    if (theta < 0.0) theta += two_pi;
    if (theta > std::numbers::pi) {
      theta = two_pi - theta;
      phi += std::numbers::pi;
    }
    phi = std::fmod(phi, two_pi);
    if (phi < 0.0) phi += two_pi;
    if (phi >= two_pi) phi = 0.0;
    return {theta, phi};
  }

  double theta() const { return theta_; }
  double phi() const { return phi_; }

  Eigen::Vector2cd ket(int outcome) const {
    const double c = std::cos(0.5 * theta_);
    const double s = std::sin(0.5 * theta_);
    const cplx phase = std::polar(1.0, phi_);
    Eigen::Vector2cd v;
    if (outcome == 0) {
      v << c, phase * s;
    } else {
      v << s, -phase * c;
    }
    return v;
  }

  Eigen::Matrix2cd projector(int outcome) const {
    const Eigen::Vector2cd v = ket(outcome);
    return v * v.adjoint();
  }

 private:
  double theta_ = 0.0;
  double phi_ = 0.0;
};

/// Reproducible random source. A (seed, stream_index) pair fully determines
/// the draw sequence; sweeps derive one stream per sample index.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed, std::uint64_t stream_index = 0)
      : seed_(seed), stream_index_(stream_index), engine_(make_engine(seed, stream_index)) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_index() const { return stream_index_; }

  SeededRng stream(std::uint64_t index) const { return SeededRng(seed_, index); }

  double normal() { return normal_(engine_); }
  double uniform() { return uniform_(engine_); }
  std::mt19937_64& engine() { return engine_; }

 private:
  static std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                      0x6d6f6e6fu};
    return std::mt19937_64(seq);
  }

  std::uint64_t seed_;
  std::uint64_t stream_index_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

/// Haar-random pure state: 2^n i.i.d. standard complex Gaussians, normalized.
inline PureState haar_random_pure(int n_qubits, SeededRng& rng) {
  if (n_qubits < 1 || n_qubits > kMaxQubits) {
    throw std::invalid_argument("haar_random_pure: n_qubits must be in [1, 8]");
  }
  const Eigen::Index dim = Eigen::Index{1} << n_qubits;
  Vector z(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    const double re = rng.normal();
    const double im = rng.normal();
    z(i) = cplx(re, im);
  }
  z.normalize();
  return PureState(n_qubits, std::move(z));
}

inline DensityMatrix density_from_pure(const PureState& psi) {
  const Vector& a = psi.amplitudes();
  return DensityMatrix(a * a.adjoint(), DensityMatrix::Trusted{});
}

/// Reduced density matrix on the `keep` qubits (strictly increasing indices).
inline DensityMatrix partial_trace(const DensityMatrix& rho, int n_qubits, std::span<const int> keep) {
  if (rho.n_qubits() != n_qubits) {
    throw std::invalid_argument("partial_trace: matrix dimension does not match n_qubits");
  }
  detail::validate_keep(keep, n_qubits);
  if (static_cast<int>(keep.size()) == n_qubits) return rho;
  const auto split = detail::split_indices(n_qubits, keep);
  const auto kd = static_cast<Eigen::Index>(split.kept_dim);
  Matrix out = Matrix::Zero(kd, kd);
  const Matrix& m = rho.matrix();
  const std::size_t dim = split.kept.size();
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      if (split.discarded[i] == split.discarded[j]) {
        out(static_cast<Eigen::Index>(split.kept[i]), static_cast<Eigen::Index>(split.kept[j])) +=
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      }
    }
  }
  return DensityMatrix(std::move(out), DensityMatrix::Trusted{});
}

inline DensityMatrix partial_trace(const DensityMatrix& rho, int n_qubits, std::initializer_list<int> keep) {
  return partial_trace(rho, n_qubits, std::span<const int>(keep.begin(), keep.size()));
}

/// Reduced state of a pure state on `keep`, computed directly from the
/// amplitudes as M M^dagger with M the (kept x discarded) reshaping.
inline DensityMatrix reduced_state(const PureState& psi, std::span<const int> keep) {
  const int n = psi.n_qubits();
  detail::validate_keep(keep, n);
  const auto split = detail::split_indices(n, keep);
  const auto kd = static_cast<Eigen::Index>(split.kept_dim);
  const Eigen::Index dd = psi.dim() / kd;
  Matrix reshaped(kd, dd);
  for (Eigen::Index i = 0; i < psi.dim(); ++i) {
    reshaped(static_cast<Eigen::Index>(split.kept[static_cast<std::size_t>(i)]),
             static_cast<Eigen::Index>(split.discarded[static_cast<std::size_t>(i)])) = psi[i];
  }
  Matrix rho = reshaped * reshaped.adjoint();
  return DensityMatrix(std::move(rho), DensityMatrix::Trusted{});
}

inline DensityMatrix reduced_state(const PureState& psi, std::initializer_list<int> keep) {
  return reduced_state(psi, std::span<const int>(keep.begin(), keep.size()));
}

/// -sum p log2 p over a probability spectrum, with 0 log 0 = 0.
inline double spectrum_entropy(std::span<const double> eigenvalues) {
  double s = 0.0;
  for (double raw : eigenvalues) {
    const double lambda = clamp_eigenvalue(raw);
    if (lambda > 0.0) s -= lambda * std::log2(lambda);
  }
  return s;
}

/// Von Neumann entropy in bits, clamped to [0, log2 dim].
inline double von_neumann_entropy(const DensityMatrix& rho) {
  const auto ev = hermitian_eigenvalues(rho.matrix());
  const double s = spectrum_entropy(ev);
  return std::clamp(s, 0.0, static_cast<double>(rho.n_qubits()));
}

struct MeasurementOutcome {
  double probability = 0.0;
  DensityMatrix state;
  // Set when probability < 1e-12; `state` is then the maximally mixed
  // placeholder and must not enter conditional-entropy averages.
  bool negligible = false;
};

/// Measures `measured_qubit` of an n-qubit state in `basis` and returns, per
/// outcome, its probability and the normalized state of the other qubits.
inline std::array<MeasurementOutcome, 2> conditional_states(const DensityMatrix& rho, int n_qubits,
                                                            int measured_qubit,
                                                            const MeasurementBasis& basis) {
  if (rho.n_qubits() != n_qubits || n_qubits < 2) {
    throw std::invalid_argument("conditional_states: need a state of at least two qubits");
  }
  if (measured_qubit < 0 || measured_qubit >= n_qubits) {
    throw std::invalid_argument("conditional_states: measured qubit out of range");
  }
  const Eigen::Index rest_dim = rho.dim() / 2;
  const int shift = n_qubits - 1 - measured_qubit;
  const std::size_t low_mask = (std::size_t{1} << shift) - 1;
  // Full index of (measured bit m, remaining index r).
  auto full = [&](std::size_t m, std::size_t r) {
    const std::size_t high = r >> shift;
    const std::size_t low = r & low_mask;
    return static_cast<Eigen::Index>((((high << 1) | m) << shift) | low);
  };
  const Matrix& m = rho.matrix();
  std::array<MeasurementOutcome, 2> out{
      MeasurementOutcome{0.0, DensityMatrix(Matrix::Identity(rest_dim, rest_dim) / double(rest_dim),
                                            DensityMatrix::Trusted{}),
                         true},
      MeasurementOutcome{0.0, DensityMatrix(Matrix::Identity(rest_dim, rest_dim) / double(rest_dim),
                                            DensityMatrix::Trusted{}),
                         true}};
  for (int x = 0; x < 2; ++x) {
    const Eigen::Matrix2cd proj = basis.projector(x);
    Matrix sigma = Matrix::Zero(rest_dim, rest_dim);
    for (Eigen::Index r = 0; r < rest_dim; ++r) {
      for (Eigen::Index c = 0; c < rest_dim; ++c) {
        cplx acc = 0.0;
        for (std::size_t a = 0; a < 2; ++a) {
          for (std::size_t b = 0; b < 2; ++b) {
            acc += proj(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) *
                   m(full(b, static_cast<std::size_t>(r)), full(a, static_cast<std::size_t>(c)));
          }
        }
        sigma(r, c) = acc;
      }
    }
    const double p = std::max(0.0, sigma.trace().real());
    out[static_cast<std::size_t>(x)].probability = p;
    if (p >= kNegligibleProbability) {
      Matrix normalized = (sigma + sigma.adjoint()) / (2.0 * p);
      out[static_cast<std::size_t>(x)].state = DensityMatrix(std::move(normalized), DensityMatrix::Trusted{});
      out[static_cast<std::size_t>(x)].negligible = false;
    }
  }
  return out;
}

}  // namespace monogamy
