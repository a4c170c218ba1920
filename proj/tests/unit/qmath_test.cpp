#include "crot/qmath.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"

using namespace crot;

namespace {

constexpr Qubit A = Qubit::AliceTarget;
constexpr Qubit B = Qubit::BobTarget;
constexpr Qubit b = Qubit::BobAncilla;

double max_diff(const Mat2& x, const Mat2& y) { return Matrix(x).max_abs_diff(Matrix(y)); }

StateVector random_state(std::vector<Qubit> labels, CounterRng& rng) {
  std::vector<Complex> amps(std::size_t{1} << labels.size());
  for (auto& c : amps) c = Complex(rng.normal(), rng.normal());
  return StateVector(std::move(labels), std::move(amps)).normalized();
}

}  // namespace

TEST(Kron, IdentityAndPauliProducts) {
  EXPECT_EQ(kron(Mat2::identity(), Mat2::identity()).max_abs_diff(Matrix::identity(4)), 0.0);

  const Matrix zz = kron(gates::pauli_z(), gates::pauli_z());
  const double expected[] = {1, -1, -1, 1};
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(zz(i, i), Complex(expected[i]));
    for (std::size_t j = 0; j < 4; ++j)
      if (i != j) EXPECT_EQ(zz(i, j), Complex(0.0));
  }
}

TEST(Kron, LeftOperandIsMostSignificant) {
  const StateVector s10 = StateVector::basis({A, B}, 0b10);
  const StateVector out = apply_gate(s10, kron(gates::pauli_z(), Mat2::identity()), {A, B});
  EXPECT_EQ(out.amplitude(0b10), Complex(-1.0));
}

TEST(Kron, OverflowThrows) {
  const Matrix m8 = kron(kron(Mat2::identity(), Mat2::identity()), Mat2::identity());
  EXPECT_THROW(kron(m8, Matrix::identity(4)), std::invalid_argument);
}

TEST(Kron, Associative) {
  CounterRng rng(11);
  for (int t = 0; t < 20; ++t) {
    const Matrix x = oracle::random_hermitian(rng);
    const Matrix y = kron(Matrix(oracle::random_hermitian(rng)), Matrix(oracle::random_hermitian(rng)));
    const Matrix z = oracle::random_hermitian(rng);
    EXPECT_LE(kron(kron(x, y), z).max_abs_diff(kron(x, kron(y, z))), 1e-12);
  }
}

TEST(HermitianEig2, Landmarks) {
  auto e = hermitian_eig2(gates::pauli_z());
  EXPECT_DOUBLE_EQ(e.values[0], -1.0);
  EXPECT_DOUBLE_EQ(e.values[1], 1.0);

  e = hermitian_eig2(Mat2::identity());
  EXPECT_DOUBLE_EQ(e.values[0], 1.0);
  EXPECT_DOUBLE_EQ(e.values[1], 1.0);

  e = hermitian_eig2(Mat2::diag(0.25, 0.75));
  EXPECT_DOUBLE_EQ(e.values[0], 0.25);
  EXPECT_DOUBLE_EQ(e.values[1], 0.75);
}

TEST(HermitianEig2, RejectsNonHermitian) {
  Mat2 m = Mat2::identity();
  m(0, 1) = 1.0;
  EXPECT_THROW(hermitian_eig2(m), std::invalid_argument);
}

TEST(HermitianEig2, RandomReconstruction) {
  CounterRng rng(3);
  for (int t = 0; t < 500; ++t) {
    const Mat2 m = oracle::random_hermitian(rng);
    const Eig2 e = hermitian_eig2(m);
    ASSERT_LE(e.values[0], e.values[1]);
    Mat2 rebuilt;
    for (std::size_t k = 0; k < 2; ++k) {
      const auto& v = e.vectors[k];
      // m v = lambda v
      for (std::size_t i = 0; i < 2; ++i) {
        const Complex mv = m(i, 0) * v[0] + m(i, 1) * v[1];
        EXPECT_LE(std::abs(mv - e.values[k] * v[i]), 1e-10);
      }
      for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) rebuilt(i, j) += e.values[k] * v[i] * std::conj(v[j]);
    }
    EXPECT_LE(max_diff(rebuilt, m), 1e-10);
    const auto& v0 = e.vectors[0];
    const auto& v1 = e.vectors[1];
    EXPECT_NEAR(std::norm(v0[0]) + std::norm(v0[1]), 1.0, 1e-12);
    EXPECT_NEAR(std::norm(v1[0]) + std::norm(v1[1]), 1.0, 1e-12);
    EXPECT_LE(std::abs(std::conj(v0[0]) * v1[0] + std::conj(v0[1]) * v1[1]), 1e-12);
  }
}

TEST(PsdSqrt2, Landmarks) {
  EXPECT_LE(max_diff(psd_sqrt2(Mat2::diag(4.0, 1.0)), Mat2::diag(2.0, 1.0)), 1e-15);
  EXPECT_LE(max_diff(psd_sqrt2(Mat2::zero()), Mat2::zero()), 0.0);
}

TEST(PsdSqrt2, ClampsNoiseAndRejectsNegative) {
  EXPECT_NO_THROW(psd_sqrt2(Mat2::diag(-1e-13, 1.0)));
  EXPECT_THROW(psd_sqrt2(Mat2::diag(-1e-6, 1.0)), std::domain_error);
}

TEST(PsdSqrt2, RandomPsdSquares) {
  CounterRng rng(5);
  for (int t = 0; t < 100; ++t) {
    const Mat2 h = oracle::random_hermitian(rng);
    const Mat2 psd = h * h.adjoint();
    const Mat2 r = psd_sqrt2(psd);
    EXPECT_TRUE(is_hermitian(r));
    EXPECT_GE(hermitian_eig2(r).values[0], -1e-12);
    EXPECT_LE(max_diff(r * r, psd), 1e-10);
  }
}

TEST(ApplyGate, Basics) {
  CounterRng rng(9);
  const StateVector s = random_state({A, B, b}, rng);
  EXPECT_NEAR(fidelity(apply_gate(s, Mat2::identity(), {B}), s), 1.0, 1e-15);

  const StateVector zero = StateVector::basis({b}, 0);
  const StateVector flipped = apply_gate(zero, gates::pauli_x(), {b});
  EXPECT_EQ(flipped.amplitude(1), Complex(1.0));
  EXPECT_EQ(flipped.amplitude(0), Complex(0.0));

  const Matrix zz = kron(gates::pauli_z(), gates::pauli_z());
  const StateVector twice = apply_gate(apply_gate(s, zz, {A, b}), zz, {A, b});
  for (std::size_t i = 0; i < s.dim(); ++i) EXPECT_EQ(twice.amplitude(i), s.amplitude(i));
}

TEST(ApplyGate, TargetOrderMatters) {
  // CNOT with control = first target.
  Matrix cnot(4);
  cnot(0, 0) = cnot(1, 1) = 1.0;
  cnot(2, 3) = cnot(3, 2) = 1.0;
  const StateVector s = StateVector::basis({A, B}, 0b10);  // |1>_A |0>_B
  EXPECT_EQ(apply_gate(s, cnot, {A, B}).amplitude(0b11), Complex(1.0));
  EXPECT_EQ(apply_gate(s, cnot, {B, A}).amplitude(0b10), Complex(1.0));
}

TEST(ApplyGate, UnknownLabelThrows) {
  const StateVector s = StateVector::basis({A, B}, 0);
  EXPECT_THROW(apply_gate(s, Mat2::identity(), {b}), std::invalid_argument);
  EXPECT_THROW(apply_gate(s, Matrix::identity(4), {A}), std::invalid_argument);
}

TEST(ApplyGate, UnitaryPreservesNorm) {
  CounterRng rng(21);
  for (int t = 0; t < 100; ++t) {
    const StateVector s = random_state({Qubit::AliceAncilla, A, B, b}, rng);
    const Mat2 h = oracle::random_hermitian(rng);
    // exp(i h) via its eigendecomposition
    const Eig2 e = hermitian_eig2(h);
    Mat2 u;
    for (std::size_t k = 0; k < 2; ++k)
      for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
          u(i, j) += std::polar(1.0, e.values[k]) * e.vectors[k][i] * std::conj(e.vectors[k][j]);
    const Matrix gate = kron(Matrix(u), Matrix(gates::pauli_x()));
    EXPECT_NEAR(apply_gate(s, gate, {B, Qubit::AliceAncilla}).norm_squared(), 1.0, 1e-12);
  }
}

TEST(Fidelity, Basics) {
  CounterRng rng(1);
  const StateVector s = random_state({A, B}, rng);
  EXPECT_NEAR(fidelity(s, s), 1.0, 1e-15);
  EXPECT_EQ(fidelity(StateVector::basis({b}, 0), StateVector::basis({b}, 1)), 0.0);
  EXPECT_NEAR(fidelity(s, s.scaled(std::polar(1.0, 1.234))), 1.0, 1e-15);
  EXPECT_THROW(fidelity(s, StateVector::basis({b}, 0)), std::invalid_argument);
}

TEST(StateVector, ReorderAndContract) {
  CounterRng rng(4);
  const StateVector s = random_state({A, B, b}, rng);
  const std::vector<Qubit> order = {b, A, B};
  const StateVector r = s.reordered(order);
  const std::vector<Qubit> back_order = {A, B, b};
  const StateVector back = r.reordered(back_order);
  for (std::size_t i = 0; i < s.dim(); ++i) EXPECT_EQ(back.amplitude(i), s.amplitude(i));
  // amplitude |A B b> = |1 0 1> sits at index 0b110 after moving b to the front.
  EXPECT_EQ(r.amplitude(0b110), s.amplitude(0b101));

  const StateVector c0 = s.contract(b, {1.0, 0.0});
  EXPECT_EQ(c0.labels(), (std::vector<Qubit>{A, B}));
  for (std::size_t ab = 0; ab < 4; ++ab) EXPECT_EQ(c0.amplitude(ab), s.amplitude(ab << 1));
}

TEST(StateVector, NormalizationInvariant) {
  CounterRng rng(8);
  for (int t = 0; t < 50; ++t) {
    std::vector<Complex> amps(8);
    for (auto& c : amps) c = Complex(10 * rng.normal(), 10 * rng.normal());
    const StateVector s = StateVector({A, B, b}, amps).normalized();
    EXPECT_NEAR(s.norm_squared(), 1.0, 1e-12);
  }
  EXPECT_THROW(StateVector({A, B}, std::vector<Complex>(4)).normalized(), std::domain_error);
  EXPECT_THROW(StateVector({A, A}, std::vector<Complex>(4)), std::invalid_argument);
}
