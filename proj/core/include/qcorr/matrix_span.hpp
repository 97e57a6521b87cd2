#pragma once

#include "qcorr/qspace.hpp"

#include <vector>

namespace qcorr {

// Relative rank cutoff shared by every span computation: singular values
// (and Gram-Schmidt residuals) below kRankTol times the dominant scale
// count as zero.
inline constexpr double kRankTol = 1e-8;

// Flatten a d x d matrix to a d^2 column, row-major.
Vector vec_rowmajor(const Matrix& m);
Matrix unvec_rowmajor(const Vector& v, int rows, int cols);

// Orthonormal basis (Hilbert-Schmidt inner product) of the span of the
// given equally sized matrices, via SVD with the relative rank cutoff.
std::vector<Matrix> orthonormal_span(const std::vector<Matrix>& mats);

// Distance from m to the span of an orthonormal family (Frobenius norm of
// the component orthogonal to the span).
double span_residual(const std::vector<Matrix>& basis, const Matrix& m);

// Extend an orthonormal family in place by the directions of the given
// candidates that stick out by more than kRankTol times the batch scale,
// the largest candidate norm. Candidates below that scale count as zero.
// Two-pass Gram-Schmidt. Returns the number of matrices added.
int grow_orthonormal(std::vector<Matrix>& basis, const std::vector<Matrix>& candidates);

// Orthonormal basis of the unital *-algebra generated by the seeds inside
// M_d: repeatedly adjoins pairwise products until the dimension stops
// growing. Dimension is bounded by d^2; cap trips a logic_error before
// that bound is passed when the caller insists on a smaller one.
std::vector<Matrix> multiplicative_closure(const std::vector<Matrix>& seeds, int d, int cap);

// max |tr(rho a b) - tr(rho b a)| over pairs from the basis; worst, when
// given, receives the offending pair of basis indices.
double trace_defect_on_basis(const Matrix& rho, const std::vector<Matrix>& basis,
                             std::pair<int, int>* worst = nullptr);
// Same for the vector functional x -> <xi, x xi>.
double trace_defect_on_basis(const Vector& xi, const std::vector<Matrix>& basis,
                             std::pair<int, int>* worst = nullptr);

}  // namespace qcorr
