#pragma once

#include "qcorr/correlation.hpp"

namespace qcorr {

// Realization of the trace construction on the doubled index space
// C^d (x) C^d, with the vectorization convention
// (A (x) B) vec(M) = vec(A M B^T), vec row-major:
//
//   phi1 generators   gen (x) I_d
//   phi2 generators   I_d (x) opposite-gen transpose, i.e. the second leg
//                     carries the opposite family
//   state             xi = vec(I_d) / sqrt(d)
//
// The legs commute exactly and <xi, U W xi> reproduces the normalized
// trace pairing tr(U U') / d. The family must pass validate_family within
// tol (PreconditionError otherwise).
Realization gns_realization_from_trace(const QuantumFamily& F, double tol = kDefaultTol);

// Orthonormal basis (Hilbert-Schmidt) of the unital *-algebra generated by
// the given d x d matrices: adjoin adjoints and the unit, then products
// until the dimension stabilizes. cap < 0 means d^2, which can never be
// exceeded; a smaller explicit cap throws std::logic_error when passed.
std::vector<Matrix> algebra_closure(const std::vector<Matrix>& gens, int d, int cap = -1);

// max |omega(ab) - omega(ba)| over basis pairs for omega(x) = tr(rho x);
// worst, when non-null, receives the offending pair of basis indices.
double trace_check_on_algebra(const Matrix& rho, const std::vector<Matrix>& basis,
                              std::pair<int, int>* worst = nullptr);
// Vector-state variant, omega(x) = <xi, x xi>.
double trace_check_on_algebra(const Vector& xi, const std::vector<Matrix>& basis,
                              std::pair<int, int>* worst = nullptr);

struct SyncReport {
  double sync_defect = 0.0;
  bool synchronous = false;
  // Whether the structure checks below ran; they are skipped for a
  // non-synchronous input.
  bool checks_run = false;

  double wu_residual = 0.0;              // max ||W xi - U^* xi||
  double u_traciality_residual = 0.0;    // vector state on the U-algebra
  double w_traciality_residual = 0.0;    // vector state on the W-algebra
  double traciality_residual = 0.0;      // max of the two
  double reconstruction_residual = 0.0;  // |X - <xi, U (U')^* xi>| max

  bool vector_state_transfer = false;
  bool u_algebra_tracial = false;
  bool w_algebra_tracial = false;
  bool reconstruction_ok = false;

  double tol = kDefaultTol;
};

// For a homomorphism-level realization with a vector state, verifies the
// structure a synchronous correlation forces: the state carries each
// second-leg generator to the adjoint of its first-leg partner, the vector
// state is tracial on both generated algebras, and the whole tensor is
// reproduced by the trace formula on the first family alone. Families
// failing validate_family or a density-state realization are rejected with
// PreconditionError. For a non-synchronous input only sync_defect is
// filled and checks_run stays false.
SyncReport analyze_synchronous_realization(const Realization& R, double tol = kDefaultTol);

}  // namespace qcorr
