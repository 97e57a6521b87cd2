#include "qcorr/matrix_span.hpp"

#include <Eigen/SVD>

#include <algorithm>

namespace qcorr {

Vector vec_rowmajor(const Matrix& m) {
  Vector v(m.size());
  Eigen::Index p = 0;
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) v[p++] = m(r, c);
  return v;
}

Matrix unvec_rowmajor(const Vector& v, int rows, int cols) {
  if (v.size() != static_cast<Eigen::Index>(rows) * cols) {
    throw ShapeError("unvec_rowmajor: length mismatch");
  }
  Matrix m(rows, cols);
  Eigen::Index p = 0;
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) m(r, c) = v[p++];
  return m;
}

std::vector<Matrix> orthonormal_span(const std::vector<Matrix>& mats) {
  if (mats.empty()) return {};
  const Eigen::Index rows = mats[0].rows();
  const Eigen::Index cols = mats[0].cols();
  Matrix stacked(rows * cols, static_cast<Eigen::Index>(mats.size()));
  for (std::size_t c = 0; c < mats.size(); ++c) {
    if (mats[c].rows() != rows || mats[c].cols() != cols) {
      throw ShapeError("orthonormal_span: matrices have mixed shapes");
    }
    stacked.col(static_cast<Eigen::Index>(c)) = vec_rowmajor(mats[c]);
  }
  Eigen::JacobiSVD<Matrix> svd(stacked, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv[0] == 0.0) return {};
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv[i] > kRankTol * sv[0]) ++rank;
  }
  std::vector<Matrix> basis;
  basis.reserve(static_cast<std::size_t>(rank));
  for (int i = 0; i < rank; ++i) {
    basis.push_back(unvec_rowmajor(svd.matrixU().col(i), static_cast<int>(rows),
                                   static_cast<int>(cols)));
  }
  return basis;
}

double span_residual(const std::vector<Matrix>& basis, const Matrix& m) {
  Matrix r = m;
  for (const Matrix& b : basis) {
    const Complex coef = (b.adjoint() * r).trace();
    r -= coef * b;
  }
  return r.norm();
}

int grow_orthonormal(std::vector<Matrix>& basis, const std::vector<Matrix>& candidates) {
  double scale = 0.0;
  for (const Matrix& cand : candidates) scale = std::max(scale, cand.norm());
  if (scale == 0.0) return 0;
  int added = 0;
  for (const Matrix& cand : candidates) {
    Matrix r = cand;
    for (int pass = 0; pass < 2; ++pass) {
      for (const Matrix& b : basis) {
        const Complex coef = (b.adjoint() * r).trace();
        r -= coef * b;
      }
    }
    if (r.norm() > kRankTol * scale) {
      basis.push_back(r / r.norm());
      ++added;
    }
  }
  return added;
}

std::vector<Matrix> multiplicative_closure(const std::vector<Matrix>& seeds, int d, int cap) {
  if (d < 1) throw ShapeError("multiplicative_closure: d must be >= 1");
  if (cap < 0) cap = d * d;
  std::vector<Matrix> start;
  start.reserve(2 * seeds.size() + 1);
  start.push_back(Matrix::Identity(d, d));
  for (const Matrix& s : seeds) {
    if (s.rows() != d || s.cols() != d) {
      throw ShapeError("multiplicative_closure: seed is not " + std::to_string(d) + "x" +
                       std::to_string(d));
    }
    start.push_back(s);
    start.push_back(s.adjoint());
  }
  std::vector<Matrix> basis = orthonormal_span(start);
  std::size_t fresh = 0;  // products involving indices >= fresh are still unseen
  while (true) {
    const std::size_t n = basis.size();
    if (static_cast<int>(n) > cap) {
      throw std::logic_error("multiplicative_closure: dimension " + std::to_string(n) +
                             " exceeded cap " + std::to_string(cap));
    }
    std::vector<Matrix> prods;
    prods.reserve(n * n - fresh * fresh);
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        if (a >= fresh || b >= fresh) prods.push_back(basis[a] * basis[b]);
      }
    }
    fresh = n;
    if (grow_orthonormal(basis, prods) == 0) break;
  }
  return basis;
}

double trace_defect_on_basis(const Matrix& rho, const std::vector<Matrix>& basis,
                             std::pair<int, int>* worst) {
  std::vector<Matrix> left;  // rho * a
  left.reserve(basis.size());
  for (const Matrix& a : basis) left.push_back(rho * a);
  double defect = 0.0;
  for (std::size_t a = 0; a < basis.size(); ++a) {
    for (std::size_t b = a + 1; b < basis.size(); ++b) {
      const Complex ab = left[a].transpose().cwiseProduct(basis[b]).sum();
      const Complex ba = left[b].transpose().cwiseProduct(basis[a]).sum();
      const double dev = std::abs(ab - ba);
      if (dev > defect) {
        defect = dev;
        if (worst) *worst = {static_cast<int>(a), static_cast<int>(b)};
      }
    }
  }
  return defect;
}

double trace_defect_on_basis(const Vector& xi, const std::vector<Matrix>& basis,
                             std::pair<int, int>* worst) {
  std::vector<Vector> fwd, adj;  // a xi and a^* xi
  fwd.reserve(basis.size());
  adj.reserve(basis.size());
  for (const Matrix& a : basis) {
    fwd.push_back(a * xi);
    adj.push_back(a.adjoint() * xi);
  }
  double defect = 0.0;
  for (std::size_t a = 0; a < basis.size(); ++a) {
    for (std::size_t b = a + 1; b < basis.size(); ++b) {
      const Complex ab = adj[a].dot(fwd[b]);
      const Complex ba = adj[b].dot(fwd[a]);
      const double dev = std::abs(ab - ba);
      if (dev > defect) {
        defect = dev;
        if (worst) *worst = {static_cast<int>(a), static_cast<int>(b)};
      }
    }
  }
  return defect;
}

}  // namespace qcorr
