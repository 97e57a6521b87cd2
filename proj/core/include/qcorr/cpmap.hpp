#pragma once

#include "qcorr/qspace.hpp"

#include <array>
#include <vector>

namespace qcorr {

// A linear map between the function algebras of two quantum spaces, stored
// by its images of the domain matrix units: image(k, i, j) is the value on
// the unit of block k, entry (i, j).
class BlockLinearMap {
 public:
  // Zero map.
  BlockLinearMap(QuantumSpace dom, QuantumSpace cod);

  static BlockLinearMap identity(const QuantumSpace& space);

  const QuantumSpace& dom() const { return dom_; }
  const QuantumSpace& cod() const { return cod_; }

  AlgebraElement& image(int k, int i, int j);
  const AlgebraElement& image(int k, int i, int j) const;

  AlgebraElement apply(const AlgebraElement& x) const;

  // outer after inner; requires inner.cod() == outer.dom().
  friend BlockLinearMap compose(const BlockLinearMap& outer, const BlockLinearMap& inner);

 private:
  std::size_t index(int k, int i, int j) const;

  QuantumSpace dom_;
  QuantumSpace cod_;
  std::vector<AlgebraElement> images_;
  std::vector<std::size_t> block_base_;
};

// One Choi matrix per domain block k:
//   C_k = sum_{i,j} e_ij (x) image(k,i,j) embedded on the codomain sum space,
// of size (n_k * hilbert_dim(cod))^2. The map is completely positive
// exactly when every C_k is positive semidefinite.
std::vector<Matrix> choi_blocks(const BlockLinearMap& m);

struct UcpReport {
  bool pass = false;
  double min_choi_eigenvalue = 0.0;
  double unitality_defect = 0.0;
  double tol = kDefaultTol;
};

// Unital complete positivity: apply(1) = 1 within tol and every Choi block
// PSD within the scaled eigenvalue tolerance.
UcpReport is_ucp(const BlockLinearMap& m, double tol = kDefaultTol);

struct HomReport {
  bool pass = false;
  double unitality_defect = 0.0;
  double adjoint_defect = 0.0;
  double multiplicativity_defect = 0.0;
  // Domain index pair (k,i,j),(k',i',j') with the worst product defect.
  std::array<int, 6> worst_pair{};
  double tol = kDefaultTol;
};

// Unital *-homomorphism test on matrix units: unitality, compatibility with
// adjoints, and the product law
//   image(k,i,j) * image(k',i',j') = delta_{kk'} delta_{ji'} image(k,i,j').
HomReport is_star_homomorphism(const BlockLinearMap& m, double tol = kDefaultTol);

// True when the functional is tracial: each density block is a multiple of
// the identity within tol.
bool is_tracial(const StateFunctional& omega, double tol = kDefaultTol);

}  // namespace qcorr
