#pragma once

#include "qcorr/qfamily.hpp"

#include <string>
#include <variant>
#include <vector>

namespace qcorr {

// The coefficient tensor of a linear map T : C(O) (x) C(O) -> C(P) (x) C(P)
// in the matrix-unit bases:
//
//   T(e^k_ij (x) e^k'_i'j') =
//     sum X(k,k',l,l',i,j,i',j',s,t,s',t') f^l_st (x) f^l'_s't',
//
// stored dense in exactly that index order. Arbitrary coefficients are
// allowed; the verdict functions decide what the tensor is.
class CorrelationTensor {
 public:
  // All coefficients zero.
  CorrelationTensor(QuantumSpace P, QuantumSpace O);

  const QuantumSpace& question_space() const { return P_; }
  const QuantumSpace& answer_space() const { return O_; }

  Complex& at(int k, int kp, int l, int lp, int i, int j, int ip, int jp, int s, int t, int sp,
              int tp);
  const Complex& at(int k, int kp, int l, int lp, int i, int j, int ip, int jp, int s, int t,
                    int sp, int tp) const;

  std::size_t size() const { return x_.size(); }
  std::vector<Complex>& raw() { return x_; }
  const std::vector<Complex>& raw() const { return x_; }

  // Evaluates T on an element of tensor_space(O, O).
  AlgebraElement apply(const AlgebraElement& z) const;
  // The same data as a BlockLinearMap from tensor_space(O, O) to
  // tensor_space(P, P), for the generic positivity machinery.
  BlockLinearMap to_map() const;

  friend bool operator==(const CorrelationTensor& a, const CorrelationTensor& b);

 private:
  std::size_t index(int k, int kp, int l, int lp, int i, int j, int ip, int jp, int s, int t,
                    int sp, int tp) const;

  QuantumSpace P_;
  QuantumSpace O_;
  std::vector<Complex> x_;
  std::vector<std::size_t> base_;  // per (k, kp, l, lp)
};

// A bipartite model producing a correlation: two families over the same
// (P, O, d) acting on separate legs (all generator pairs commute) and a
// state on M_d, either a vector or a density matrix.
struct Realization {
  QuantumFamily phi1;
  QuantumFamily phi2;
  std::variant<Vector, Matrix> state;

  bool has_vector_state() const { return std::holds_alternative<Vector>(state); }
  const Vector& xi() const;
  const Matrix& rho() const;
};

// X(...) = omega(U1 * U2) over generator pairs, U1 from phi1 indexed by the
// unprimed tuple and U2 from phi2 by the primed one. Checks the realization
// invariants first: shared spaces and d (ShapeError otherwise), normalized
// state and second-leg commutation within tol (PreconditionError, quoting
// the max commutator norm).
CorrelationTensor correlation_from_realization(const Realization& R, double tol = kDefaultTol);

struct NonsignallingReport {
  bool pass = false;
  double residual = 0.0;
  double tol = kDefaultTol;
};

// No-signalling: T(x (x) 1) must be slice (x) 1 and T(1 (x) y) must be
// 1 (x) slice, tested on matrix units with the slice taken by the
// dimension-weighted tracial state on the untouched leg. residual is the
// largest entry deviation.
NonsignallingReport is_nonsignalling(const CorrelationTensor& T, double tol = kDefaultTol);

// The weighted diagonal coefficient sum
//   sum_{k,l,i,j,s,t} X(k,k,l,l,i,j,i,j,s,t,s,t) / (n_k m_l),
// whose real part equals the number of P-blocks exactly when the tensor is
// synchronous. sync_sum returns the real part; the imaginary part is a
// defect on its own.
double sync_sum(const CorrelationTensor& T);
double sync_imag_defect(const CorrelationTensor& T);
// Per-P-block partial sums; for a synchronous tensor each equals 1.
std::vector<double> sync_sum_per_block(const CorrelationTensor& T);
// |full complex sum - block count|
double sync_defect(const CorrelationTensor& T);

// sync_defect <= tol. Cross-checks the independent entangled-vector route
// and throws std::logic_error if the two disagree beyond 1e-10 scale.
bool is_synchronous(const CorrelationTensor& T, double tol = kDefaultTol);

// <phi, T(e) phi> with phi the block-balanced maximally entangled vector
// of P and e = sum_{k,i,j} e^k_ij (x) e^k_ij / n_k. Defined for any
// coefficient tensor; equals sync_sum / block_count identically.
Complex entangled_sync_value(const CorrelationTensor& T);

// The trace construction: X(...) = tau(U1 * U2-flipped) where the second
// factor of each product takes the primed tuple with its row/column and
// output index pairs transposed. tau is given by a d x d density matrix;
// it must be a state and tracial on the *-algebra generated by the
// generators (PreconditionError quoting the worst basis pair otherwise).
// The default tau, density I/d, always qualifies.
CorrelationTensor correlation_from_trace(const QuantumFamily& F, const Matrix& tau,
                                         double tol = kDefaultTol);
CorrelationTensor correlation_from_trace(const QuantumFamily& F, double tol = kDefaultTol);

// The same coefficient formula with no traciality requirement on the
// state. What survives of the construction for a general state is exactly
// what the verdict functions report.
CorrelationTensor correlation_from_state_formula(const QuantumFamily& F, const Matrix& rho);

// max |conj(X(k,k',l,l',i,j,i',j',s,t,s',t')) - X(k,k',l,l',j,i,j',i',t,s,t',s')|,
// zero for tensors of Hermiticity-preserving maps.
double hermiticity_residual(const CorrelationTensor& T);

// Conditional probability table of a tensor over classical spaces:
// p(k,k'|l,l') with marginals and defect summary.
struct ClassicalTable {
  int n_answers = 0;    // block count of O
  int n_questions = 0;  // block count of P
  // index order (k, k', l, l'), innermost l'
  std::vector<double> p;
  std::vector<double> marginal_row;  // p_A(k|l), averaged over l'
  std::vector<double> marginal_col;  // p_B(k'|l')
  double negativity = 0.0;           // most negative entry, as a positive number
  double imag_defect = 0.0;
  double normalization_defect = 0.0;    // per question pair
  double marginal_dependence = 0.0;     // how much a marginal moves with the far question

  double at(int k, int kp, int l, int lp) const;
};

ClassicalTable classical_table(const CorrelationTensor& T, double tol = kDefaultTol);

// CSV rendering, header k,k',l,l',p, rows in table index order.
std::string classical_table_csv(const ClassicalTable& table);

// Tensor over classical spaces from a table given in the same
// (k, k', l, l') order.
CorrelationTensor correlation_from_classical_table(const QuantumSpace& P, const QuantumSpace& O,
                                                   const std::vector<double>& p);

// The d = 1 realization of a deterministic strategy: both parties answer
// question l with answer[l]. Spaces must be classical.
Realization deterministic_realization(const QuantumSpace& P, const QuantumSpace& O,
                                      const std::vector<int>& answer);

}  // namespace qcorr
