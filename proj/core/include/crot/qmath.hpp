#pragma once

// Dense complex linear algebra sized for this protocol: 2x2 operators,
// registers of at most four qubits (dimension 16).

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace crot {

using Complex = std::complex<double>;

inline constexpr std::size_t kMaxDim = 16;

/// Qubits of the four-qubit register. Alice holds the ancilla `a` and the
/// target `A`; Bob holds the target `B` and the ancilla `b`.
enum class Qubit : std::uint8_t { AliceAncilla, AliceTarget, BobTarget, BobAncilla };

char qubit_char(Qubit q);  // 'a', 'A', 'B', 'b'
std::string qubit_string(std::span<const Qubit> labels);

/// Row-major 2x2 complex matrix.
struct Mat2 {
  std::array<Complex, 4> m{};

  Complex& operator()(std::size_t r, std::size_t c) { return m[2 * r + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return m[2 * r + c]; }

  static Mat2 identity();
  static Mat2 zero() { return {}; }
  static Mat2 diag(Complex d0, Complex d1);

  Complex trace() const { return m[0] + m[3]; }
  Complex det() const { return m[0] * m[3] - m[1] * m[2]; }
  Mat2 adjoint() const;

  friend Mat2 operator+(const Mat2& a, const Mat2& b);
  friend Mat2 operator-(const Mat2& a, const Mat2& b);
  friend Mat2 operator*(const Mat2& a, const Mat2& b);
  friend Mat2 operator*(Complex s, const Mat2& a);
};

namespace gates {
Mat2 pauli_x();
Mat2 pauli_z();
}  // namespace gates

/// Square complex matrix of power-of-two dimension <= kMaxDim, row-major.
class Matrix {
 public:
  explicit Matrix(std::size_t dim);
  Matrix(const Mat2& m);  // NOLINT(google-explicit-constructor)

  static Matrix identity(std::size_t dim);
  static Matrix diagonal(std::span<const Complex> d);

  std::size_t dim() const { return dim_; }
  Complex& operator()(std::size_t r, std::size_t c) { return data_[r * dim_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return data_[r * dim_ + c]; }

  Matrix adjoint() const;
  friend Matrix operator*(const Matrix& a, const Matrix& b);
  friend Matrix operator+(const Matrix& a, const Matrix& b);
  friend Matrix operator*(Complex s, const Matrix& a);

  /// Largest entrywise modulus of (this - other).
  double max_abs_diff(const Matrix& other) const;

 private:
  std::size_t dim_;
  std::vector<Complex> data_;
};

/// Tensor product; the left operand indexes the most significant qubits.
/// Throws std::invalid_argument if the product dimension exceeds kMaxDim.
Matrix kron(const Matrix& a, const Matrix& b);

bool is_hermitian(const Mat2& m, double tol = 1e-12);

struct Eig2 {
  std::array<double, 2> values;                  // ascending
  std::array<std::array<Complex, 2>, 2> vectors;  // vectors[k] pairs with values[k]
};

/// Eigendecomposition of a Hermitian 2x2 matrix (closed form).
/// Throws std::invalid_argument when `m` is not Hermitian within 1e-12.
Eig2 hermitian_eig2(const Mat2& m);

/// Unique Hermitian PSD square root. Eigenvalues in [-1e-9, 0) are clamped
/// to zero; anything more negative throws std::domain_error.
Mat2 psd_sqrt2(const Mat2& m);

/// Pure state of up to four labelled qubits. Amplitude index bit order
/// follows `labels()`: the first label is the most significant bit.
class StateVector {
 public:
  StateVector(std::vector<Qubit> labels, std::vector<Complex> amplitudes);

  /// |bits> over `labels`, e.g. basis({A, B}, 0b01) = |0>_A |1>_B.
  static StateVector basis(std::vector<Qubit> labels, std::size_t index);

  std::size_t dim() const { return amps_.size(); }
  std::size_t num_qubits() const { return labels_.size(); }
  const std::vector<Qubit>& labels() const { return labels_; }
  std::span<const Complex> amplitudes() const { return amps_; }
  Complex amplitude(std::size_t index) const { return amps_.at(index); }

  bool has(Qubit q) const;
  /// Bit position (0 = least significant) of `q` in the amplitude index.
  std::size_t bit_of(Qubit q) const;

  double norm_squared() const;
  StateVector normalized() const;  // throws std::domain_error on a zero vector
  StateVector scaled(Complex s) const;

  /// Same state with the qubits reordered to `order` (a permutation of labels()).
  StateVector reordered(std::span<const Qubit> order) const;

  /// <bra|_q applied to qubit q: the (unnormalized) state of the remaining qubits.
  StateVector contract(Qubit q, const std::array<Complex, 2>& bra) const;

  friend StateVector tensor(const StateVector& left, const StateVector& right);

 private:
  std::vector<Qubit> labels_;
  std::vector<Complex> amps_;
};

/// Applies `gate` to `targets` (first target = most significant gate index).
/// Unitarity is not required. Throws std::invalid_argument on unknown labels
/// or a dimension mismatch.
StateVector apply_gate(const StateVector& state, const Matrix& gate,
                       std::span<const Qubit> targets);
StateVector apply_gate(const StateVector& state, const Matrix& gate,
                       std::initializer_list<Qubit> targets);

/// Complex inner product <u|v>; labels must match in order.
Complex inner(const StateVector& u, const StateVector& v);

/// |<u|v>|^2 for normalized states. Throws std::invalid_argument on a
/// dimension or label mismatch.
double fidelity(const StateVector& u, const StateVector& v);

}  // namespace crot
