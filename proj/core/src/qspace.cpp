#include "qcorr/qspace.hpp"

#include <cmath>
#include <utility>

namespace qcorr {

QuantumSpace::QuantumSpace(std::vector<int> blocks) : blocks_(std::move(blocks)) {
  if (blocks_.empty()) throw ShapeError("QuantumSpace: block list is empty");
  offsets_.reserve(blocks_.size());
  for (std::size_t k = 0; k < blocks_.size(); ++k) {
    const int n = blocks_[k];
    if (n < 1) {
      throw ShapeError("QuantumSpace: block " + std::to_string(k) +
                       " has non-positive dimension " + std::to_string(n));
    }
    offsets_.push_back(hilbert_dim_);
    hilbert_dim_ += n;
    algebra_dim_ += n * n;
  }
}

int QuantumSpace::block_dim(int k) const {
  if (k < 0 || k >= block_count()) {
    throw ShapeError("QuantumSpace: block index " + std::to_string(k) +
                     " out of range [0," + std::to_string(block_count()) + ")");
  }
  return blocks_[static_cast<std::size_t>(k)];
}

int QuantumSpace::block_offset(int k) const {
  block_dim(k);  // range check
  return offsets_[static_cast<std::size_t>(k)];
}

bool QuantumSpace::is_classical() const {
  for (int n : blocks_)
    if (n != 1) return false;
  return true;
}

AlgebraElement::AlgebraElement(QuantumSpace space) : space_(std::move(space)) {
  mats_.reserve(space_.block_count());
  for (int k = 0; k < space_.block_count(); ++k) {
    mats_.push_back(Matrix::Zero(space_.block_dim(k), space_.block_dim(k)));
  }
}

AlgebraElement::AlgebraElement(QuantumSpace space, std::vector<Matrix> mats)
    : space_(std::move(space)), mats_(std::move(mats)) {
  if (static_cast<int>(mats_.size()) != space_.block_count()) {
    throw ShapeError("AlgebraElement: expected " + std::to_string(space_.block_count()) +
                     " blocks, got " + std::to_string(mats_.size()));
  }
  for (int k = 0; k < space_.block_count(); ++k) {
    const int n = space_.block_dim(k);
    const Matrix& m = mats_[static_cast<std::size_t>(k)];
    if (m.rows() != n || m.cols() != n) {
      throw ShapeError("AlgebraElement: block " + std::to_string(k) + " must be " +
                       std::to_string(n) + "x" + std::to_string(n));
    }
  }
}

AlgebraElement AlgebraElement::unit(const QuantumSpace& space) {
  AlgebraElement e(space);
  for (int k = 0; k < space.block_count(); ++k) e.block(k).setIdentity();
  return e;
}

Matrix& AlgebraElement::block(int k) {
  space_.block_dim(k);  // range check
  return mats_[static_cast<std::size_t>(k)];
}

const Matrix& AlgebraElement::block(int k) const {
  space_.block_dim(k);
  return mats_[static_cast<std::size_t>(k)];
}

AlgebraElement AlgebraElement::adjoint() const {
  AlgebraElement out(space_);
  for (int k = 0; k < space_.block_count(); ++k) out.block(k) = block(k).adjoint();
  return out;
}

double AlgebraElement::max_abs() const {
  double m = 0.0;
  for (const Matrix& b : mats_) {
    if (b.size() > 0) m = std::max(m, b.cwiseAbs().maxCoeff());
  }
  return m;
}

double AlgebraElement::frobenius_norm() const {
  double s = 0.0;
  for (const Matrix& b : mats_) s += b.squaredNorm();
  return std::sqrt(s);
}

Complex AlgebraElement::hs_inner(const AlgebraElement& rhs) const {
  check_same_space(rhs, "hs_inner");
  Complex s = 0.0;
  for (int k = 0; k < space_.block_count(); ++k) {
    s += (block(k).adjoint() * rhs.block(k)).trace();
  }
  return s;
}

Matrix AlgebraElement::embedded() const {
  const int H = space_.hilbert_dim();
  Matrix out = Matrix::Zero(H, H);
  for (int k = 0; k < space_.block_count(); ++k) {
    const int off = space_.block_offset(k);
    const int n = space_.block_dim(k);
    out.block(off, off, n, n) = block(k);
  }
  return out;
}

void AlgebraElement::check_same_space(const AlgebraElement& rhs, const char* op) const {
  if (space_ != rhs.space_) {
    throw ShapeError(std::string("AlgebraElement::") + op + ": spaces differ");
  }
}

AlgebraElement& AlgebraElement::operator+=(const AlgebraElement& rhs) {
  check_same_space(rhs, "operator+=");
  for (std::size_t k = 0; k < mats_.size(); ++k) mats_[k] += rhs.mats_[k];
  return *this;
}

AlgebraElement& AlgebraElement::operator-=(const AlgebraElement& rhs) {
  check_same_space(rhs, "operator-=");
  for (std::size_t k = 0; k < mats_.size(); ++k) mats_[k] -= rhs.mats_[k];
  return *this;
}

AlgebraElement& AlgebraElement::operator*=(Complex c) {
  for (Matrix& b : mats_) b *= c;
  return *this;
}

AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b) {
  a.check_same_space(b, "operator*");
  AlgebraElement out(a.space_);
  for (std::size_t k = 0; k < a.mats_.size(); ++k) out.mats_[k] = a.mats_[k] * b.mats_[k];
  return out;
}

AlgebraElement matrix_unit(const QuantumSpace& space, int k, int i, int j) {
  const int n = space.block_dim(k);
  if (i < 0 || i >= n || j < 0 || j >= n) {
    throw ShapeError("matrix_unit: entry (" + std::to_string(i) + "," + std::to_string(j) +
                     ") out of range for block of dimension " + std::to_string(n));
  }
  AlgebraElement e(space);
  e.block(k)(i, j) = 1.0;
  return e;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    for (Eigen::Index c = 0; c < a.cols(); ++c) {
      out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
    }
  }
  return out;
}

QuantumSpace tensor_space(const QuantumSpace& a, const QuantumSpace& b) {
  std::vector<int> blocks;
  blocks.reserve(static_cast<std::size_t>(a.block_count()) * b.block_count());
  for (int ka = 0; ka < a.block_count(); ++ka) {
    for (int kb = 0; kb < b.block_count(); ++kb) {
      blocks.push_back(a.block_dim(ka) * b.block_dim(kb));
    }
  }
  return QuantumSpace(std::move(blocks));
}

AlgebraElement tensor_elem(const AlgebraElement& a, const AlgebraElement& b) {
  AlgebraElement out(tensor_space(a.space(), b.space()));
  for (int ka = 0; ka < a.space().block_count(); ++ka) {
    for (int kb = 0; kb < b.space().block_count(); ++kb) {
      out.block(ka * b.space().block_count() + kb) = kron(a.block(ka), b.block(kb));
    }
  }
  return out;
}

double min_hermitian_eigenvalue(const AlgebraElement& x) {
  double m = std::numeric_limits<double>::infinity();
  for (int k = 0; k < x.space().block_count(); ++k) {
    const Matrix h = 0.5 * (x.block(k) + x.block(k).adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
    m = std::min(m, es.eigenvalues().minCoeff());
  }
  return m;
}

bool is_positive(const AlgebraElement& x, double tol) {
  for (int k = 0; k < x.space().block_count(); ++k) {
    const Matrix& b = x.block(k);
    const Matrix h = 0.5 * (b + b.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
    const double scale = 1.0 + (b.size() > 0 ? b.cwiseAbs().maxCoeff() : 0.0);
    if (es.eigenvalues().minCoeff() < -tol * scale) return false;
  }
  return true;
}

Complex block_trace(const AlgebraElement& x, int k) { return x.block(k).trace(); }

Complex StateFunctional::operator()(const AlgebraElement& x) const {
  if (x.space() != space()) throw ShapeError("StateFunctional: spaces differ");
  Complex s = 0.0;
  for (int k = 0; k < space().block_count(); ++k) {
    s += (density.block(k) * x.block(k)).trace();
  }
  return s;
}

StateFunctional StateFunctional::tracial(const QuantumSpace& space) {
  AlgebraElement d = AlgebraElement::unit(space);
  d *= Complex(1.0 / space.hilbert_dim(), 0.0);
  return StateFunctional(std::move(d));
}

double StateFunctional::positivity_defect() const {
  return std::max(0.0, -min_hermitian_eigenvalue(density));
}

double StateFunctional::normalization_defect() const {
  return std::abs((*this)(AlgebraElement::unit(space())) - Complex(1.0, 0.0));
}

EntangledVector maximally_entangled_vector(const QuantumSpace& P) {
  const int H = P.hilbert_dim();
  const int N = P.block_count();
  Vector v = Vector::Zero(static_cast<Eigen::Index>(H) * H);
  for (int l = 0; l < N; ++l) {
    const int off = P.block_offset(l);
    const int m = P.block_dim(l);
    const double amp = 1.0 / (std::sqrt(static_cast<double>(N)) * std::sqrt(static_cast<double>(m)));
    for (int s = 0; s < m; ++s) {
      const int a = off + s;
      v[static_cast<Eigen::Index>(a) * H + a] = amp;
    }
  }
  return EntangledVector{P, std::move(v)};
}

Vector act_on_vector(const AlgebraElement& x, const QuantumSpace& P, const Vector& v) {
  if (x.space() != tensor_space(P, P)) {
    throw ShapeError("act_on_vector: element does not live on the doubled space");
  }
  const int H = P.hilbert_dim();
  if (v.size() != static_cast<Eigen::Index>(H) * H) {
    throw ShapeError("act_on_vector: vector length " + std::to_string(v.size()) +
                     ", expected " + std::to_string(static_cast<long>(H) * H));
  }
  const int N = P.block_count();
  Vector out = Vector::Zero(v.size());
  for (int l = 0; l < N; ++l) {
    const int ml = P.block_dim(l);
    const int ol = P.block_offset(l);
    for (int lp = 0; lp < N; ++lp) {
      const int mlp = P.block_dim(lp);
      const int olp = P.block_offset(lp);
      const Matrix& B = x.block(l * N + lp);
      for (int s = 0; s < ml; ++s) {
        for (int sp = 0; sp < mlp; ++sp) {
          Complex acc = 0.0;
          for (int t = 0; t < ml; ++t) {
            for (int tp = 0; tp < mlp; ++tp) {
              acc += B(s * mlp + sp, t * mlp + tp) *
                     v[static_cast<Eigen::Index>(ol + t) * H + (olp + tp)];
            }
          }
          out[static_cast<Eigen::Index>(ol + s) * H + (olp + sp)] += acc;
        }
      }
    }
  }
  return out;
}

}  // namespace qcorr
