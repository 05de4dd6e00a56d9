#include "monogamy/statekit.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <numeric>

namespace monogamy {
namespace {

using testing::kron;
using testing::ket;

PureState ghz3() {
  Vector a = Vector::Zero(8);
  a(0) = a(7) = std::sqrt(0.5);
  return PureState(3, a);
}

TEST(PureStateTest, RejectsWrongLengthAndNorm) {
  EXPECT_THROW(PureState(2, Vector::Zero(3)), std::invalid_argument);
  EXPECT_THROW(PureState(1, ket({1.0, 1.0})), std::invalid_argument);
  EXPECT_THROW(PureState(9, Vector::Zero(512)), std::invalid_argument);
  EXPECT_NO_THROW(PureState(1, ket({1.0, 0.0})));
}

TEST(DensityMatrixTest, ValidatesInvariants) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = 1.0;
  EXPECT_NO_THROW(DensityMatrix{m});
  Matrix not_herm = m;
  not_herm(0, 1) = 0.1;
  EXPECT_THROW(DensityMatrix{not_herm}, std::invalid_argument);
  Matrix bad_trace = 2.0 * m;
  EXPECT_THROW(DensityMatrix{bad_trace}, std::invalid_argument);
  Matrix negative(2, 2);
  negative << 1.2, 0.0, 0.0, -0.2;
  EXPECT_THROW(DensityMatrix{negative}, std::invalid_argument);
  EXPECT_THROW(DensityMatrix(Matrix::Identity(3, 3) / 3.0), std::invalid_argument);
}

TEST(HermitianEigenvaluesTest, DiagonalAndPauliX) {
  Matrix d(2, 2);
  d << 0.25, 0.0, 0.0, 0.75;
  const auto ev = hermitian_eigenvalues(d);
  EXPECT_DOUBLE_EQ(ev[0], 0.75);
  EXPECT_DOUBLE_EQ(ev[1], 0.25);

  Matrix x(2, 2);
  x << 0.0, 1.0, 1.0, 0.0;
  const auto evx = hermitian_eigenvalues(x);
  EXPECT_NEAR(evx[0], 1.0, 1e-15);
  EXPECT_NEAR(evx[1], -1.0, 1e-15);
}

TEST(HermitianEigenvaluesTest, RejectsNonHermitian) {
  Matrix m(2, 2);
  m << 0.0, 1.0, 0.0, 0.0;
  EXPECT_THROW(hermitian_eigenvalues(m), std::invalid_argument);
  EXPECT_THROW(hermitian_eigenvalues(Matrix::Zero(2, 3)), std::invalid_argument);
}

TEST(HermitianEigenvaluesTest, TraceIdentityAndOrderOnRandomMatrices) {
  std::mt19937_64 eng(11);
  for (int dim : {3, 4, 8, 16}) {
    for (int k = 0; k < 50; ++k) {
      const Matrix h = testing::random_hermitian(dim, eng);
      const auto ev = hermitian_eigenvalues(h);
      ASSERT_EQ(ev.size(), static_cast<std::size_t>(dim));
      EXPECT_NEAR(std::accumulate(ev.begin(), ev.end(), 0.0), h.trace().real(), 1e-9);
      EXPECT_TRUE(std::is_sorted(ev.begin(), ev.end(), std::greater<>()));
      // Cross-check against the general complex eigensolver.
      Eigen::ComplexEigenSolver<Matrix> general(h);
      std::vector<double> ref;
      for (Eigen::Index i = 0; i < dim; ++i) ref.push_back(general.eigenvalues()(i).real());
      std::sort(ref.begin(), ref.end(), std::greater<>());
      for (int i = 0; i < dim; ++i) EXPECT_NEAR(ev[static_cast<std::size_t>(i)], ref[static_cast<std::size_t>(i)], 1e-10);
    }
  }
}

TEST(DensityFromPureTest, Examples) {
  const auto rho0 = density_from_pure(PureState(1, ket({1.0, 0.0})));
  EXPECT_EQ(rho0(0, 0), cplx(1.0));
  EXPECT_EQ(rho0(1, 1), cplx(0.0));

  const auto bell = density_from_pure(PureState(2, testing::bell_phi_plus()));
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      const bool corner = (i == 0 || i == 3) && (j == 0 || j == 3);
      EXPECT_NEAR(std::abs(bell(i, j) - cplx(corner ? 0.5 : 0.0)), 0.0, 1e-15);
    }
  }

  SeededRng rng(5);
  for (int k = 0; k < 20; ++k) {
    const auto ev = hermitian_eigenvalues(density_from_pure(haar_random_pure(3, rng)).matrix());
    EXPECT_NEAR(ev[0], 1.0, 1e-12);
    for (std::size_t i = 1; i < ev.size(); ++i) EXPECT_NEAR(ev[i], 0.0, 1e-12);
  }
}

TEST(PartialTraceTest, Examples) {
  const auto bell = density_from_pure(PureState(2, testing::bell_phi_plus()));
  const auto half = partial_trace(bell, 2, {0});
  EXPECT_NEAR((half.matrix() - Matrix::Identity(2, 2) / 2.0).norm(), 0.0, 1e-15);

  const auto same = partial_trace(bell, 2, {0, 1});
  EXPECT_EQ(same.matrix(), bell.matrix());

  const auto g = partial_trace(density_from_pure(ghz3()), 3, {1, 2});
  Matrix expected = Matrix::Zero(4, 4);
  expected(0, 0) = expected(3, 3) = 0.5;
  EXPECT_NEAR((g.matrix() - expected).norm(), 0.0, 1e-15);
}

TEST(PartialTraceTest, RejectsBadKeepLists) {
  const auto rho = density_from_pure(ghz3());
  EXPECT_THROW(partial_trace(rho, 3, std::span<const int>{}), std::invalid_argument);
  EXPECT_THROW(partial_trace(rho, 3, {2, 1}), std::invalid_argument);
  EXPECT_THROW(partial_trace(rho, 3, {0, 3}), std::invalid_argument);
  EXPECT_THROW(partial_trace(rho, 3, {1, 1}), std::invalid_argument);
  EXPECT_THROW(partial_trace(rho, 2, {0}), std::invalid_argument);
}

TEST(PartialTraceTest, MatchesKroneckerConstructionOfProducts) {
  // rho_A x rho_B x rho_C traced to any subset gives the product of the kept factors.
  std::mt19937_64 eng(3);
  std::vector<Matrix> factors;
  for (int k = 0; k < 3; ++k) {
    Matrix g = testing::random_hermitian(2, eng);
    Matrix psd = g * g.adjoint();
    factors.push_back(psd / psd.trace().real());
  }
  const DensityMatrix rho(kron(kron(factors[0], factors[1]), factors[2]));
  EXPECT_NEAR((partial_trace(rho, 3, {0, 2}).matrix() - kron(factors[0], factors[2])).norm(), 0.0, 1e-14);
  EXPECT_NEAR((partial_trace(rho, 3, {1}).matrix() - factors[1]).norm(), 0.0, 1e-14);
}

TEST(PartialTraceTest, TracePreservedAndComposable) {
  SeededRng rng(17);
  for (int k = 0; k < 200; ++k) {
    const auto psi = haar_random_pure(4, rng);
    const auto rho = density_from_pure(psi);
    const auto r012 = partial_trace(rho, 4, {0, 1, 2});
    EXPECT_NEAR(r012.matrix().trace().real(), 1.0, 1e-10);
    const auto two_step = partial_trace(r012, 3, {0, 2});
    const auto one_step = partial_trace(rho, 4, {0, 2});
    EXPECT_NEAR((two_step.matrix() - one_step.matrix()).cwiseAbs().maxCoeff(), 0.0, 1e-10);
    const int keep[] = {0, 2};
    EXPECT_NEAR((reduced_state(psi, keep).matrix() - one_step.matrix()).cwiseAbs().maxCoeff(), 0.0, 1e-12);
  }
}

TEST(EntropyTest, Examples) {
  EXPECT_NEAR(von_neumann_entropy(density_from_pure(ghz3())), 0.0, 1e-12);
  EXPECT_NEAR(von_neumann_entropy(DensityMatrix(Matrix::Identity(2, 2) / 2.0)), 1.0, 1e-15);
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 0.75;
  d(1, 1) = 0.25;
  const double h = -0.25 * std::log2(0.25) - 0.75 * std::log2(0.75);
  EXPECT_NEAR(von_neumann_entropy(DensityMatrix(d)), h, 1e-15);
}

TEST(EntropyTest, ClampsNoiseAndRejectsNegativeSpectra) {
  EXPECT_DOUBLE_EQ(clamp_eigenvalue(-5e-11), 0.0);
  EXPECT_THROW(clamp_eigenvalue(-1e-9), NumericalError);
  Matrix bad(2, 2);
  bad << 1.001, 0.0, 0.0, -0.001;
  EXPECT_THROW(von_neumann_entropy(DensityMatrix(bad, DensityMatrix::Trusted{})), NumericalError);
}

TEST(EntropyTest, BoundsAndSchmidtSymmetry) {
  SeededRng rng(23);
  for (int k = 0; k < 1000; ++k) {
    const auto psi = haar_random_pure(3, rng);
    const double s1 = von_neumann_entropy(reduced_state(psi, {0}));
    const double s23 = von_neumann_entropy(reduced_state(psi, {1, 2}));
    EXPECT_GE(s1, -1e-9);
    EXPECT_LE(s1, 1.0 + 1e-9);
    EXPECT_LE(s23, 2.0 + 1e-9);
    EXPECT_NEAR(s1, s23, 1e-9);
  }
}

TEST(MeasurementBasisTest, ProjectorsAreCompleteOrthogonalIdempotent) {
  SeededRng rng(31);
  for (int k = 0; k < 500; ++k) {
    const MeasurementBasis b(std::numbers::pi * rng.uniform(), 2.0 * std::numbers::pi * rng.uniform() * 0.999999);
    const auto p0 = b.projector(0);
    const auto p1 = b.projector(1);
    EXPECT_NEAR((p0 + p1 - Eigen::Matrix2cd::Identity()).norm(), 0.0, 1e-12);
    EXPECT_NEAR((p0 * p1).norm(), 0.0, 1e-12);
    EXPECT_NEAR((p0 * p0 - p0).norm(), 0.0, 1e-12);
  }
  EXPECT_THROW(MeasurementBasis(-0.1, 0.0), std::invalid_argument);
  EXPECT_THROW(MeasurementBasis(0.1, 2.0 * std::numbers::pi), std::invalid_argument);
}

TEST(MeasurementBasisTest, CanonicalAnglesDescribeSameProjectors) {
  SeededRng rng(37);
  for (int k = 0; k < 500; ++k) {
    const double theta = 20.0 * (rng.uniform() - 0.5);
    const double phi = 20.0 * (rng.uniform() - 0.5);
    const auto canon = MeasurementBasis::from_angles(theta, phi);
    EXPECT_GE(canon.theta(), 0.0);
    EXPECT_LE(canon.theta(), std::numbers::pi);
    EXPECT_GE(canon.phi(), 0.0);
    EXPECT_LT(canon.phi(), 2.0 * std::numbers::pi);
    const Eigen::Vector2cd v = testing::basis_ket(theta, phi, 0);
    EXPECT_NEAR((canon.projector(0) - v * v.adjoint()).norm(), 0.0, 1e-12);
  }
}

TEST(ConditionalStatesTest, ProductStateWithPlusMeasurement) {
  const Vector plus = ket({std::sqrt(0.5), std::sqrt(0.5)});
  const auto rho = density_from_pure(PureState(2, kron(ket({1.0, 0.0}), plus)));
  const auto out = conditional_states(rho, 2, 1, MeasurementBasis(std::numbers::pi / 2, 0.0));
  EXPECT_NEAR(out[0].probability, 1.0, 1e-12);
  EXPECT_NEAR(out[1].probability, 0.0, 1e-12);
  EXPECT_FALSE(out[0].negligible);
  EXPECT_TRUE(out[1].negligible);
  EXPECT_NEAR(std::abs(out[0].state(0, 0) - 1.0), 0.0, 1e-12);
}

TEST(ConditionalStatesTest, BellComputationalBasis) {
  const auto rho = density_from_pure(PureState(2, testing::bell_phi_plus()));
  const auto out = conditional_states(rho, 2, 1, MeasurementBasis(0.0, 0.0));
  EXPECT_NEAR(out[0].probability, 0.5, 1e-12);
  EXPECT_NEAR(out[1].probability, 0.5, 1e-12);
  EXPECT_NEAR(std::abs(out[0].state(0, 0) - 1.0), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(out[1].state(1, 1) - 1.0), 0.0, 1e-12);
}

TEST(ConditionalStatesTest, BellEquatorialBasisMatchesDirectMatrices) {
  const Matrix bell = testing::projector(testing::bell_phi_plus());
  const auto out = conditional_states(DensityMatrix(bell), 2, 1, MeasurementBasis(std::numbers::pi / 2, 0.0));
  for (int x = 0; x < 2; ++x) {
    const Eigen::Vector2cd v = testing::basis_ket(std::numbers::pi / 2, 0.0, x);
    const Matrix op = kron(Matrix::Identity(2, 2), Matrix(v * v.adjoint()));
    const Matrix post = op * bell * op;
    Matrix reduced = Matrix::Zero(2, 2);
    for (int a = 0; a < 2; ++a) {
      for (int c = 0; c < 2; ++c) reduced(a, c) = post(2 * a, 2 * c) + post(2 * a + 1, 2 * c + 1);
    }
    const double p = reduced.trace().real();
    EXPECT_NEAR(out[static_cast<std::size_t>(x)].probability, 0.5, 1e-12);
    EXPECT_NEAR(p, 0.5, 1e-12);
    EXPECT_NEAR((out[static_cast<std::size_t>(x)].state.matrix() - reduced / p).norm(), 0.0, 1e-12);
    EXPECT_NEAR(von_neumann_entropy(out[static_cast<std::size_t>(x)].state), 0.0, 1e-9);
  }
}

TEST(ConditionalStatesTest, ProbabilitiesSumToOne) {
  SeededRng rng(41);
  for (int k = 0; k < 10000; ++k) {
    const int n = 2 + static_cast<int>(rng.uniform() * 2.0);
    const auto rho = density_from_pure(haar_random_pure(n, rng));
    const int q = static_cast<int>(rng.uniform() * n);
    const auto basis = MeasurementBasis::from_angles(7.0 * rng.uniform(), 7.0 * rng.uniform());
    const auto out = conditional_states(rho, n, q, basis);
    ASSERT_NEAR(out[0].probability + out[1].probability, 1.0, 1e-10);
  }
}

TEST(ConditionalStatesTest, MeasuringFirstQubitOfThree) {
  // Measuring qubit 0 of GHZ in the computational basis leaves |00> or |11>.
  const auto out = conditional_states(density_from_pure(ghz3()), 3, 0, MeasurementBasis(0.0, 0.0));
  EXPECT_NEAR(out[0].probability, 0.5, 1e-12);
  EXPECT_NEAR(std::abs(out[0].state(0, 0) - 1.0), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(out[1].state(3, 3) - 1.0), 0.0, 1e-12);
}

TEST(SeededRngTest, StreamsAreReproducibleAndDistinct) {
  SeededRng a(42, 3);
  SeededRng b(42, 3);
  SeededRng c(42, 4);
  for (int i = 0; i < 100; ++i) {
    const double x = a.normal();
    EXPECT_EQ(x, b.normal());
    EXPECT_NE(x, c.normal());
  }
  EXPECT_EQ(SeededRng(9).stream(5).stream_index(), 5u);
}

TEST(HaarTest, DeterministicAndNormalized) {
  SeededRng r1(42);
  SeededRng r2(42);
  EXPECT_EQ(haar_random_pure(3, r1), haar_random_pure(3, r2));
  SeededRng rng(1);
  for (int n = 1; n <= 8; ++n) {
    for (int k = 0; k < 50; ++k) EXPECT_LT(std::abs(haar_random_pure(n, rng).amplitudes().norm() - 1.0), 1e-12);
  }
  EXPECT_THROW(haar_random_pure(0, rng), std::invalid_argument);
  EXPECT_THROW(haar_random_pure(9, rng), std::invalid_argument);
}

TEST(HaarTest, SingleQubitBlochMeanVanishes) {
  double sum = 0.0;
  for (std::uint64_t i = 0; i < 100000; ++i) {
    SeededRng rng(8, i);
    const auto psi = haar_random_pure(1, rng);
    sum += std::norm(psi[0]) - std::norm(psi[1]);
  }
  EXPECT_LT(std::abs(sum / 100000.0), 0.01);
}

TEST(HaarTest, MarginalPurityMatchesBruteForceOracle) {
  // Frozen from tests/oracles/derive_values.py: 1e6 Gaussian-normalize draws
  // (numpy, seed 2024) give 0.66662668; the exact Haar mean is 2/3.
  constexpr double kOraclePurity = 0.6666266767918416;
  double sum = 0.0;
  constexpr int kDraws = 100000;
  for (int i = 0; i < kDraws; ++i) {
    SeededRng rng(12, static_cast<std::uint64_t>(i));
    const auto rho = reduced_state(haar_random_pure(3, rng), {0});
    sum += (rho.matrix() * rho.matrix()).trace().real();
  }
  EXPECT_NEAR(sum / kDraws, kOraclePurity, 0.005);
  EXPECT_NEAR(kOraclePurity, 2.0 / 3.0, 1e-3);
}

TEST(HaarTest, GlobalUnitaryLeavesEntropyDistributionUnchanged) {
  std::mt19937_64 eng(99);
  const Matrix u = testing::random_unitary(8, eng);
  constexpr int kSamples = 100000;
  std::vector<double> rotated, reference;
  rotated.reserve(kSamples);
  reference.reserve(kSamples);
  for (int i = 0; i < kSamples; ++i) {
    SeededRng a(1001, static_cast<std::uint64_t>(i));
    SeededRng b(2002, static_cast<std::uint64_t>(i));
    const auto psi = haar_random_pure(3, a);
    Vector turned = u * psi.amplitudes();
    turned.normalize();
    rotated.push_back(von_neumann_entropy(reduced_state(PureState(3, turned), {0})));
    reference.push_back(von_neumann_entropy(reduced_state(haar_random_pure(3, b), {0})));
  }
  // Critical value for alpha = 0.01: 1.628 sqrt((n + m) / (n m)).
  const double critical = 1.628 * std::sqrt(2.0 / kSamples);
  EXPECT_LT(testing::ks_statistic(rotated, reference), critical);
}

}  // namespace
}  // namespace monogamy
