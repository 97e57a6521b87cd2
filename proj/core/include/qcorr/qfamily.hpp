#pragma once

#include "qcorr/cpmap.hpp"
#include "qcorr/qspace.hpp"

#include <array>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace qcorr {

// A quantum family of maps from a space O to a space P, indexed by M_d:
// a unital *-homomorphism C(O) -> C(P) (x) M_d, stored through its
// generator matrices.
//
// Index layout, fixed once here and used everywhere (storage, JSON, CLI
// reports): gen(k, l, i, j, s, t) is the d x d matrix coefficient of the
// image of the unit of O-block k at entry (i, j), sitting in P-block l at
// entry (s, t). That is,
//
//   Phi(e^k_ij) = sum_{l,s,t} f^l_st (x) gen(k, l, i, j, s, t),
//
// with e (resp. f) the matrix units of O (resp. P). Ranges: k < N_O,
// l < N_P, i,j < n_k, s,t < m_l. All indices 0-based.
//
// The same storage describes a POVM-type family, where the induced map is
// only required to be unital and completely positive; construction is
// shared and the two validators draw the line.
class QuantumFamily {
 public:
  // All generators zero.
  QuantumFamily(QuantumSpace P, QuantumSpace O, int d);

  const QuantumSpace& question_space() const { return P_; }
  const QuantumSpace& answer_space() const { return O_; }
  int d() const { return d_; }

  Matrix& gen(int k, int l, int i, int j, int s, int t);
  const Matrix& gen(int k, int l, int i, int j, int s, int t) const;

  friend bool operator==(const QuantumFamily& a, const QuantumFamily& b);

 private:
  std::size_t index(int k, int l, int i, int j, int s, int t) const;

  QuantumSpace P_;
  QuantumSpace O_;
  int d_;
  std::vector<Matrix> gens_;
  std::vector<std::size_t> base_;  // per (k, l) pair
};

using PovmFamily = QuantumFamily;

struct FamilyReport {
  bool pass = false;
  // max | gen(k,l,i,j,s,t)^* - gen(k,l,j,i,t,s) |
  double adjoint_residual = 0.0;
  // max over the full generator product law
  //   sum_u gen(k,l,i,j,s,u) gen(k',l,j',i',u,t)
  //     = delta_{kk'} delta_{jj'} gen(k,l,i,i',s,t)
  double product_residual = 0.0;
  // the s = t diagonal of the product law, reported separately
  double reads_residual = 0.0;
  // max_l | sum_{k,i} gen(k,l,i,i,s,t) - delta_st I_d |
  double unitality_residual = 0.0;
  // max_l | sum_{k,i,j,s,t} gen(k,l,i,j,s,t) gen(k,l,j,i,t,s) / n_k - m_l I_d |
  double block_sum_residual = 0.0;
  // (k,i,j),(k',i',j') of the worst product defect
  std::array<int, 6> worst_pair{};
  int worst_block = 0;  // P-block of the worst product defect
  // (k,l,i,j,s,t) of the worst adjoint-symmetry defect
  std::array<int, 6> adjoint_worst{};
  double tol = kDefaultTol;
};

// Checks the generator relations that make the induced map a unital
// *-homomorphism. A pass here and a pass of
// is_star_homomorphism(induced_map(F)) are two routes to the same fact.
FamilyReport validate_family(const QuantumFamily& F, double tol = kDefaultTol);

// The family as a BlockLinearMap C(O) -> C(P) (x) M_d, the codomain being
// tensor_space(P, [d]).
BlockLinearMap induced_map(const QuantumFamily& F);

// POVM-level validation: unitality plus complete positivity of the induced
// map. Every family passing validate_family passes this; not conversely.
UcpReport validate_povm(const QuantumFamily& F, double tol = kDefaultTol);

// Haar-random unitary, QR with the usual diagonal phase fix. The generator
// is taken by reference so a caller can draw several dependent samples.
Matrix haar_unitary(int n, std::mt19937_64& rng);

// Random genuine family for the given spaces and index dimension. For each
// P-block l, picks uniformly among the nonnegative multiplicity vectors c
// with sum_k c_k n_k = m_l * d, builds the standard block-diagonal
// embedding (+)_k (M_{n_k} (x) I_{c_k}) and conjugates by a Haar unitary.
// Throws ShapeError naming the first block l whose multiplicity equation
// has no solution. Deterministic in the seed.
QuantumFamily random_family(const QuantumSpace& P, const QuantumSpace& O, int d,
                            std::uint64_t seed);

// Functorial pullback: given *-homomorphisms pi : C(O1) -> C(O2) and
// rho : C(P2) -> C(P1) and a family F from O2 to P2, the family
// (rho (x) id) o Phi_F o pi from O1 to P1. Both maps must pass
// is_star_homomorphism within tol.
QuantumFamily pullback_family(const BlockLinearMap& rho, const BlockLinearMap& pi,
                              const QuantumFamily& F, double tol = kDefaultTol);

// Families over a concatenated question space split into the two parts;
// first_blocks says how many leading P-blocks belong to the first part.
std::pair<QuantumFamily, QuantumFamily> split_family(const QuantumFamily& F, int first_blocks);

// Inverse of split_family: concatenates the question spaces. The two
// families must share O and d.
QuantumFamily merge_family(const QuantumFamily& F1, const QuantumFamily& F2);

// The opposite family, gen(k,l,i,j,s,t) -> gen(k,l,j,i,t,s)^T, an
// involution that maps valid families to valid families.
QuantumFamily opposite_family(const QuantumFamily& F);

struct CommutationReport {
  bool pass = false;
  double max_commutator = 0.0;
  double tol = kDefaultTol;
};

// Whether every generator of F1 commutes with every generator of F2, the
// matrix form of the two families acting on separate legs. Requires equal
// (P, O, d).
CommutationReport commutes_second_leg(const QuantumFamily& F1, const QuantumFamily& F2,
                                      double tol = kDefaultTol);

struct SliceSpan {
  std::vector<Matrix> basis;  // orthonormal, Hilbert-Schmidt
  int dimension = 0;
  // distance of each basis adjoint from the span (max over basis)
  double adjoint_residual = 0.0;
  double unit_residual = 0.0;
};

// Orthonormal basis of the span of all generator matrices together with
// I_d, the operator system the family slices out of M_d.
SliceSpan slice_span(const QuantumFamily& F);

struct PisierDecomposition {
  int n = 0;                                   // size of the embedded matrix algebra
  std::vector<AlgebraElement> commutant_basis; // orthonormal basis of the relative commutant D
  int commutant_dim = 0;
  bool dimension_identity = false;             // n^2 * dim(D) == algebra_dim(C), exact
  // smallest singular value of Gamma : M_n (x) D -> C, e_ij (x) b -> E_ij b
  double gamma_min_singular = 0.0;
  double multiplicativity_residual = 0.0;      // of Gamma, over basis pairs
  double tol = kDefaultTol;
};

// Splits a space C carrying a unital copy of M_n as C = M_n (x) D with D
// the relative commutant of the copy. The embedding is passed as the map
// e_ij -> E_ij, i.e. a BlockLinearMap with domain [n] and codomain C; it
// must pass is_star_homomorphism within tol. Throws PreconditionError on a
// non-homomorphism or when the rank bookkeeping does not close.
PisierDecomposition pisier_decompose(const BlockLinearMap& embedding, double tol = kDefaultTol);

// Recovers the D-valued components of c under the decomposition:
// component (i, j) equals sum_k E_ki c E_jk, an element of C lying in D.
AlgebraElement pisier_component(const BlockLinearMap& embedding, const AlgebraElement& c, int i,
                                int j);

}  // namespace qcorr
