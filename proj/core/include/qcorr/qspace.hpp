#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace qcorr {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Default absolute tolerance. Checks that compare against operands of
// unknown scale multiply it by (1 + operand norm).
inline constexpr double kDefaultTol = 1e-9;

// Structurally malformed input: bad shapes, indices out of range,
// unsatisfiable construction parameters.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A mathematical precondition failed on structurally well-formed input,
// e.g. a realization whose two families do not commute, or a state that
// is not tracial where a trace is required.
class PreconditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A finite quantum space: a finite direct sum of full matrix algebras,
// described by the list of block dimensions [n_1, ..., n_N], n_k >= 1.
// The space with all blocks equal to 1 is an ordinary finite set.
class QuantumSpace {
 public:
  explicit QuantumSpace(std::vector<int> blocks);

  int block_count() const { return static_cast<int>(blocks_.size()); }
  int block_dim(int k) const;
  const std::vector<int>& blocks() const { return blocks_; }

  // Dimension of the function algebra: sum of n_k^2.
  int algebra_dim() const { return algebra_dim_; }
  // Dimension of the underlying direct-sum Hilbert space: sum of n_k.
  int hilbert_dim() const { return hilbert_dim_; }
  // Row offset of block k inside the direct-sum Hilbert space.
  int block_offset(int k) const;

  bool is_classical() const;

  friend bool operator==(const QuantumSpace& a, const QuantumSpace& b) {
    return a.blocks_ == b.blocks_;
  }
  friend bool operator!=(const QuantumSpace& a, const QuantumSpace& b) {
    return !(a == b);
  }

 private:
  std::vector<int> blocks_;
  std::vector<int> offsets_;
  int algebra_dim_ = 0;
  int hilbert_dim_ = 0;
};

// An element of the function algebra of a QuantumSpace: one complex
// n_k x n_k matrix per block.
class AlgebraElement {
 public:
  // Zero element.
  explicit AlgebraElement(QuantumSpace space);
  // Takes ownership of the given blocks; shapes must match the space.
  AlgebraElement(QuantumSpace space, std::vector<Matrix> mats);

  static AlgebraElement unit(const QuantumSpace& space);

  const QuantumSpace& space() const { return space_; }
  Matrix& block(int k);
  const Matrix& block(int k) const;

  AlgebraElement adjoint() const;

  // Largest absolute entry across all blocks.
  double max_abs() const;
  double frobenius_norm() const;
  // Hilbert-Schmidt pairing sum_k tr(a_k^* b_k), conjugate-linear in *this.
  Complex hs_inner(const AlgebraElement& rhs) const;
  // Block-diagonal matrix on the direct-sum Hilbert space.
  Matrix embedded() const;

  AlgebraElement& operator+=(const AlgebraElement& rhs);
  AlgebraElement& operator-=(const AlgebraElement& rhs);
  AlgebraElement& operator*=(Complex c);

  friend AlgebraElement operator+(AlgebraElement lhs, const AlgebraElement& rhs) {
    lhs += rhs;
    return lhs;
  }
  friend AlgebraElement operator-(AlgebraElement lhs, const AlgebraElement& rhs) {
    lhs -= rhs;
    return lhs;
  }
  friend AlgebraElement operator*(Complex c, AlgebraElement x) {
    x *= c;
    return x;
  }
  // Blockwise product.
  friend AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b);

 private:
  void check_same_space(const AlgebraElement& rhs, const char* op) const;

  QuantumSpace space_;
  std::vector<Matrix> mats_;
};

// Matrix unit supported in block k, entry (i, j). All indices 0-based.
AlgebraElement matrix_unit(const QuantumSpace& space, int k, int i, int j);

// Kronecker product with row-major index convention:
// out((i,j),(k,l)) = a(i,k) * b(j,l) where (i,j) -> i*rows(b)+j.
Matrix kron(const Matrix& a, const Matrix& b);

// Tensor product of spaces: blocks [n_a * n_b] in lexicographic order,
// left factor major. Block (ka, kb) of the product sits at index
// ka * b.block_count() + kb.
QuantumSpace tensor_space(const QuantumSpace& a, const QuantumSpace& b);

// Elementary tensor of algebra elements, laid out per tensor_space.
AlgebraElement tensor_elem(const AlgebraElement& a, const AlgebraElement& b);

// Smallest eigenvalue across blocks after replacing each block by its
// Hermitian part.
double min_hermitian_eigenvalue(const AlgebraElement& x);

// Positivity test: every block, Hermitized, must have smallest eigenvalue
// >= -tol * (1 + largest absolute entry of the block).
bool is_positive(const AlgebraElement& x, double tol = kDefaultTol);

// Unnormalized trace of block k.
Complex block_trace(const AlgebraElement& x, int k);

// A state (or general linear functional) on a QuantumSpace given by a
// density element: omega(x) = sum_k tr(density_k * x_k).
struct StateFunctional {
  AlgebraElement density;

  explicit StateFunctional(AlgebraElement d) : density(std::move(d)) {}

  const QuantumSpace& space() const { return density.space(); }
  Complex operator()(const AlgebraElement& x) const;

  // Dimension-weighted tracial state: density_k = I / hilbert_dim, so that
  // omega(x) = sum_k tr(x_k) / sum_k n_k. Tracial and faithful.
  static StateFunctional tracial(const QuantumSpace& space);

  // max(0, -min eigenvalue) of the density.
  double positivity_defect() const;
  // |omega(1) - 1|
  double normalization_defect() const;
};

// A unit vector in the doubled direct-sum Hilbert space of a space P,
// stored dense of length hilbert_dim^2 with index (a, b) -> a*H + b.
struct EntangledVector {
  QuantumSpace space;
  Vector vec;
};

// The block-balanced maximally entangled vector of P:
// (1/sqrt(N)) * sum_l (1/sqrt(m_l)) * sum_s f_s (x) f_s,
// with f_s running over the standard basis of block l.
EntangledVector maximally_entangled_vector(const QuantumSpace& P);

// Action of an element of tensor_space(P, P) on a doubled-space vector.
// x's space must equal tensor_space(P, P) and v must have length
// hilbert_dim(P)^2.
Vector act_on_vector(const AlgebraElement& x, const QuantumSpace& P, const Vector& v);

}  // namespace qcorr
