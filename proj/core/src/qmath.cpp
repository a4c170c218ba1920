#include "crot/qmath.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace crot {

namespace {

bool is_pow2_dim(std::size_t d) { return d >= 1 && d <= kMaxDim && std::has_single_bit(d); }

void check_finite(const Complex& c) {
  if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
    throw std::domain_error("non-finite amplitude");
  }
}

}  // namespace

char qubit_char(Qubit q) {
  switch (q) {
    case Qubit::AliceAncilla: return 'a';
    case Qubit::AliceTarget: return 'A';
    case Qubit::BobTarget: return 'B';
    case Qubit::BobAncilla: return 'b';
  }
  return '?';
}

std::string qubit_string(std::span<const Qubit> labels) {
  std::string s;
  for (Qubit q : labels) s.push_back(qubit_char(q));
  return s;
}

// ---- Mat2 -------------------------------------------------------------------

Mat2 Mat2::identity() { return diag(1.0, 1.0); }

Mat2 Mat2::diag(Complex d0, Complex d1) {
  Mat2 r;
  r(0, 0) = d0;
  r(1, 1) = d1;
  return r;
}

Mat2 Mat2::adjoint() const {
  Mat2 r;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) r(i, j) = std::conj((*this)(j, i));
  return r;
}

Mat2 operator+(const Mat2& a, const Mat2& b) {
  Mat2 r;
  for (std::size_t k = 0; k < 4; ++k) r.m[k] = a.m[k] + b.m[k];
  return r;
}

Mat2 operator-(const Mat2& a, const Mat2& b) {
  Mat2 r;
  for (std::size_t k = 0; k < 4; ++k) r.m[k] = a.m[k] - b.m[k];
  return r;
}

Mat2 operator*(const Mat2& a, const Mat2& b) {
  Mat2 r;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) r(i, j) = a(i, 0) * b(0, j) + a(i, 1) * b(1, j);
  return r;
}

Mat2 operator*(Complex s, const Mat2& a) {
  Mat2 r;
  for (std::size_t k = 0; k < 4; ++k) r.m[k] = s * a.m[k];
  return r;
}

namespace gates {
Mat2 pauli_x() {
  Mat2 r;
  r(0, 1) = 1.0;
  r(1, 0) = 1.0;
  return r;
}
Mat2 pauli_z() { return Mat2::diag(1.0, -1.0); }
}  // namespace gates

// ---- Matrix -----------------------------------------------------------------

Matrix::Matrix(std::size_t dim) : dim_(dim), data_(dim * dim) {
  if (!is_pow2_dim(dim)) throw std::invalid_argument("matrix dimension must be a power of two <= 16");
}

Matrix::Matrix(const Mat2& m) : dim_(2), data_(m.m.begin(), m.m.end()) {}

Matrix Matrix::identity(std::size_t dim) {
  Matrix r(dim);
  for (std::size_t i = 0; i < dim; ++i) r(i, i) = 1.0;
  return r;
}

Matrix Matrix::diagonal(std::span<const Complex> d) {
  Matrix r(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) r(i, i) = d[i];
  return r;
}

Matrix Matrix::adjoint() const {
  Matrix r(dim_);
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j) r(i, j) = std::conj((*this)(j, i));
  return r;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("matrix dimension mismatch");
  Matrix r(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t k = 0; k < a.dim(); ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex{}) continue;
      for (std::size_t j = 0; j < a.dim(); ++j) r(i, j) += aik * b(k, j);
    }
  return r;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("matrix dimension mismatch");
  Matrix r(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j) r(i, j) = a(i, j) + b(i, j);
  return r;
}

Matrix operator*(Complex s, const Matrix& a) {
  Matrix r(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j) r(i, j) = s * a(i, j);
  return r;
}

double Matrix::max_abs_diff(const Matrix& other) const {
  if (dim_ != other.dim_) throw std::invalid_argument("matrix dimension mismatch");
  double worst = 0.0;
  for (std::size_t k = 0; k < data_.size(); ++k) worst = std::max(worst, std::abs(data_[k] - other.data_[k]));
  return worst;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  const std::size_t d = a.dim() * b.dim();
  if (d > kMaxDim) throw std::invalid_argument("kron: product dimension exceeds 16");
  Matrix r(d);
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j)
      for (std::size_t k = 0; k < b.dim(); ++k)
        for (std::size_t l = 0; l < b.dim(); ++l) r(i * b.dim() + k, j * b.dim() + l) = a(i, j) * b(k, l);
  return r;
}

// ---- Hermitian 2x2 ----------------------------------------------------------

bool is_hermitian(const Mat2& m, double tol) {
  return std::abs(m(0, 0).imag()) <= tol && std::abs(m(1, 1).imag()) <= tol &&
         std::abs(m(0, 1) - std::conj(m(1, 0))) <= tol;
}

Eig2 hermitian_eig2(const Mat2& m) {
  if (!is_hermitian(m)) throw std::invalid_argument("hermitian_eig2: matrix is not Hermitian");
  const double a = m(0, 0).real();
  const double d = m(1, 1).real();
  const Complex b = 0.5 * (m(0, 1) + std::conj(m(1, 0)));

  const double mean = 0.5 * (a + d);
  const double half_gap = 0.5 * (a - d);
  const double r = std::hypot(half_gap, std::abs(b));

  Eig2 out;
  out.values = {mean - r, mean + r};

  if (std::abs(b) <= 1e-300) {
    // Already diagonal; order basis vectors by their diagonal entry.
    if (a <= d) {
      out.vectors = {{{1.0, 0.0}, {0.0, 1.0}}};
    } else {
      out.vectors = {{{0.0, 1.0}, {1.0, 0.0}}};
    }
    out.values = {std::min(a, d), std::max(a, d)};
    return out;
  }

  // Two algebraically equivalent kernel vectors of (m - lambda0); keep the
  // better conditioned one.
  const double lambda0 = out.values[0];
  std::array<Complex, 2> u = {b, lambda0 - a};
  std::array<Complex, 2> w = {lambda0 - d, std::conj(b)};
  const double nu = std::sqrt(std::norm(u[0]) + std::norm(u[1]));
  const double nw = std::sqrt(std::norm(w[0]) + std::norm(w[1]));
  std::array<Complex, 2> v0 = nu >= nw ? u : w;
  const double n0 = std::max(nu, nw);
  v0[0] /= n0;
  v0[1] /= n0;
  out.vectors[0] = v0;
  out.vectors[1] = {-std::conj(v0[1]), std::conj(v0[0])};
  return out;
}

Mat2 psd_sqrt2(const Mat2& m) {
  const Eig2 e = hermitian_eig2(m);
  Mat2 r;
  for (std::size_t k = 0; k < 2; ++k) {
    double lambda = e.values[k];
    if (lambda < -1e-9) throw std::domain_error("psd_sqrt2: matrix has a negative eigenvalue");
    lambda = std::max(lambda, 0.0);
    const double s = std::sqrt(lambda);
    const auto& v = e.vectors[k];
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j) r(i, j) += s * v[i] * std::conj(v[j]);
  }
  // Symmetrize away rounding so the result is exactly Hermitian.
  const Complex off = 0.5 * (r(0, 1) + std::conj(r(1, 0)));
  r(0, 1) = off;
  r(1, 0) = std::conj(off);
  r(0, 0) = r(0, 0).real();
  r(1, 1) = r(1, 1).real();
  return r;
}

// ---- StateVector ------------------------------------------------------------

StateVector::StateVector(std::vector<Qubit> labels, std::vector<Complex> amplitudes)
    : labels_(std::move(labels)), amps_(std::move(amplitudes)) {
  if (labels_.empty() || labels_.size() > 4) throw std::invalid_argument("state must hold 1..4 qubits");
  if (amps_.size() != (std::size_t{1} << labels_.size()))
    throw std::invalid_argument("amplitude count does not match qubit count");
  for (std::size_t i = 0; i < labels_.size(); ++i)
    for (std::size_t j = i + 1; j < labels_.size(); ++j)
      if (labels_[i] == labels_[j]) throw std::invalid_argument("duplicate qubit label");
  for (const Complex& c : amps_) check_finite(c);
}

StateVector StateVector::basis(std::vector<Qubit> labels, std::size_t index) {
  std::vector<Complex> amps(std::size_t{1} << labels.size());
  amps.at(index) = 1.0;
  return StateVector(std::move(labels), std::move(amps));
}

bool StateVector::has(Qubit q) const { return std::find(labels_.begin(), labels_.end(), q) != labels_.end(); }

std::size_t StateVector::bit_of(Qubit q) const {
  const auto it = std::find(labels_.begin(), labels_.end(), q);
  if (it == labels_.end())
    throw std::invalid_argument(std::string("unknown qubit label '") + qubit_char(q) + "' in register " +
                                qubit_string(labels_));
  return labels_.size() - 1 - static_cast<std::size_t>(it - labels_.begin());
}

double StateVector::norm_squared() const {
  double s = 0.0;
  for (const Complex& c : amps_) s += std::norm(c);
  return s;
}

StateVector StateVector::normalized() const {
  const double n = std::sqrt(norm_squared());
  if (n == 0.0) throw std::domain_error("cannot normalize a zero state");
  return scaled(1.0 / n);
}

StateVector StateVector::scaled(Complex s) const {
  std::vector<Complex> amps(amps_);
  for (Complex& c : amps) c *= s;
  return StateVector(labels_, std::move(amps));
}

StateVector StateVector::reordered(std::span<const Qubit> order) const {
  if (order.size() != labels_.size()) throw std::invalid_argument("reorder: label count mismatch");
  std::vector<std::size_t> src_bit(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) src_bit[i] = bit_of(order[i]);
  const std::size_t n = order.size();
  std::vector<Complex> amps(amps_.size());
  for (std::size_t dst = 0; dst < amps.size(); ++dst) {
    std::size_t src = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t dst_bit = n - 1 - i;
      if ((dst >> dst_bit) & 1U) src |= std::size_t{1} << src_bit[i];
    }
    amps[dst] = amps_[src];
  }
  return StateVector(std::vector<Qubit>(order.begin(), order.end()), std::move(amps));
}

StateVector StateVector::contract(Qubit q, const std::array<Complex, 2>& bra) const {
  if (labels_.size() < 2) throw std::invalid_argument("contract: cannot remove the last qubit");
  const std::size_t bit = bit_of(q);
  std::vector<Qubit> rest;
  for (Qubit l : labels_)
    if (l != q) rest.push_back(l);
  std::vector<Complex> amps(amps_.size() / 2);
  const std::size_t low_mask = (std::size_t{1} << bit) - 1;
  for (std::size_t r = 0; r < amps.size(); ++r) {
    const std::size_t i0 = ((r & ~low_mask) << 1) | (r & low_mask);
    const std::size_t i1 = i0 | (std::size_t{1} << bit);
    amps[r] = std::conj(bra[0]) * amps_[i0] + std::conj(bra[1]) * amps_[i1];
  }
  return StateVector(std::move(rest), std::move(amps));
}

StateVector tensor(const StateVector& left, const StateVector& right) {
  std::vector<Qubit> labels = left.labels_;
  labels.insert(labels.end(), right.labels_.begin(), right.labels_.end());
  if (labels.size() > 4) throw std::invalid_argument("tensor: register exceeds four qubits");
  std::vector<Complex> amps;
  amps.reserve(left.dim() * right.dim());
  for (const Complex& l : left.amps_)
    for (const Complex& r : right.amps_) amps.push_back(l * r);
  return StateVector(std::move(labels), std::move(amps));
}

StateVector apply_gate(const StateVector& state, const Matrix& gate, std::span<const Qubit> targets) {
  const std::size_t k = targets.size();
  if (k == 0 || gate.dim() != (std::size_t{1} << k))
    throw std::invalid_argument("apply_gate: gate dimension does not match target count");
  std::vector<std::size_t> bits(k);
  std::size_t target_mask = 0;
  for (std::size_t i = 0; i < k; ++i) {
    bits[i] = state.bit_of(targets[i]);
    if (target_mask & (std::size_t{1} << bits[i])) throw std::invalid_argument("apply_gate: repeated target");
    target_mask |= std::size_t{1} << bits[i];
  }

  // Full-register index for sub-index s (first target = most significant) over base.
  auto expand = [&](std::size_t base, std::size_t s) {
    std::size_t idx = base;
    for (std::size_t i = 0; i < k; ++i)
      if ((s >> (k - 1 - i)) & 1U) idx |= std::size_t{1} << bits[i];
    return idx;
  };

  const auto in = state.amplitudes();
  std::vector<Complex> out(in.size());
  std::array<Complex, kMaxDim> local{};
  for (std::size_t base = 0; base < in.size(); ++base) {
    if (base & target_mask) continue;
    for (std::size_t s = 0; s < gate.dim(); ++s) local[s] = in[expand(base, s)];
    for (std::size_t r = 0; r < gate.dim(); ++r) {
      Complex acc{};
      for (std::size_t c = 0; c < gate.dim(); ++c) acc += gate(r, c) * local[c];
      out[expand(base, r)] = acc;
    }
  }
  return StateVector(state.labels(), std::move(out));
}

StateVector apply_gate(const StateVector& state, const Matrix& gate, std::initializer_list<Qubit> targets) {
  return apply_gate(state, gate, std::span<const Qubit>(targets.begin(), targets.size()));
}

Complex inner(const StateVector& u, const StateVector& v) {
  if (u.dim() != v.dim()) throw std::invalid_argument("inner: dimension mismatch");
  if (u.labels() != v.labels()) throw std::invalid_argument("inner: qubit labels differ");
  Complex s{};
  const auto a = u.amplitudes();
  const auto b = v.amplitudes();
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

double fidelity(const StateVector& u, const StateVector& v) {
  return std::clamp(std::norm(inner(u, v)), 0.0, 1.0);
}

}  // namespace crot
