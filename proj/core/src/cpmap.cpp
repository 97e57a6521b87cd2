#include "qcorr/cpmap.hpp"

#include <utility>

namespace qcorr {

BlockLinearMap::BlockLinearMap(QuantumSpace dom, QuantumSpace cod)
    : dom_(std::move(dom)), cod_(std::move(cod)) {
  block_base_.reserve(dom_.block_count());
  std::size_t base = 0;
  for (int k = 0; k < dom_.block_count(); ++k) {
    block_base_.push_back(base);
    base += static_cast<std::size_t>(dom_.block_dim(k)) * dom_.block_dim(k);
  }
  images_.assign(base, AlgebraElement(cod_));
}

BlockLinearMap BlockLinearMap::identity(const QuantumSpace& space) {
  BlockLinearMap m(space, space);
  for (int k = 0; k < space.block_count(); ++k) {
    for (int i = 0; i < space.block_dim(k); ++i) {
      for (int j = 0; j < space.block_dim(k); ++j) {
        m.image(k, i, j) = matrix_unit(space, k, i, j);
      }
    }
  }
  return m;
}

std::size_t BlockLinearMap::index(int k, int i, int j) const {
  const int n = dom_.block_dim(k);
  if (i < 0 || i >= n || j < 0 || j >= n) {
    throw ShapeError("BlockLinearMap: entry (" + std::to_string(i) + "," + std::to_string(j) +
                     ") out of range for domain block of dimension " + std::to_string(n));
  }
  return block_base_[static_cast<std::size_t>(k)] + static_cast<std::size_t>(i) * n + j;
}

AlgebraElement& BlockLinearMap::image(int k, int i, int j) { return images_[index(k, i, j)]; }

const AlgebraElement& BlockLinearMap::image(int k, int i, int j) const {
  return images_[index(k, i, j)];
}

AlgebraElement BlockLinearMap::apply(const AlgebraElement& x) const {
  if (x.space() != dom_) throw ShapeError("BlockLinearMap::apply: element not in the domain");
  AlgebraElement out(cod_);
  for (int k = 0; k < dom_.block_count(); ++k) {
    const int n = dom_.block_dim(k);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const Complex c = x.block(k)(i, j);
        if (c == Complex(0.0, 0.0)) continue;
        const AlgebraElement& img = images_[block_base_[static_cast<std::size_t>(k)] +
                                            static_cast<std::size_t>(i) * n + j];
        for (int b = 0; b < cod_.block_count(); ++b) out.block(b) += c * img.block(b);
      }
    }
  }
  return out;
}

BlockLinearMap compose(const BlockLinearMap& outer, const BlockLinearMap& inner) {
  if (inner.cod() != outer.dom()) {
    throw ShapeError("compose: codomain of the inner map differs from the outer domain");
  }
  BlockLinearMap out(inner.dom(), outer.cod());
  for (int k = 0; k < inner.dom().block_count(); ++k) {
    const int n = inner.dom().block_dim(k);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        out.image(k, i, j) = outer.apply(inner.image(k, i, j));
      }
    }
  }
  return out;
}

std::vector<Matrix> choi_blocks(const BlockLinearMap& m) {
  const int H = m.cod().hilbert_dim();
  std::vector<Matrix> out;
  out.reserve(m.dom().block_count());
  for (int k = 0; k < m.dom().block_count(); ++k) {
    const int n = m.dom().block_dim(k);
    Matrix c = Matrix::Zero(static_cast<Eigen::Index>(n) * H, static_cast<Eigen::Index>(n) * H);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        c.block(static_cast<Eigen::Index>(i) * H, static_cast<Eigen::Index>(j) * H, H, H) =
            m.image(k, i, j).embedded();
      }
    }
    out.push_back(std::move(c));
  }
  return out;
}

UcpReport is_ucp(const BlockLinearMap& m, double tol) {
  UcpReport rep;
  rep.tol = tol;
  rep.unitality_defect =
      (m.apply(AlgebraElement::unit(m.dom())) - AlgebraElement::unit(m.cod())).max_abs();
  rep.min_choi_eigenvalue = std::numeric_limits<double>::infinity();
  bool psd = true;
  for (Matrix& c : choi_blocks(m)) {
    const double scale = 1.0 + (c.size() > 0 ? c.cwiseAbs().maxCoeff() : 0.0);
    c = 0.5 * (c + c.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<Matrix> es(c, Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues().minCoeff();
    rep.min_choi_eigenvalue = std::min(rep.min_choi_eigenvalue, lo);
    if (lo < -tol * scale) psd = false;
  }
  rep.pass = psd && rep.unitality_defect <= tol;
  return rep;
}

HomReport is_star_homomorphism(const BlockLinearMap& m, double tol) {
  HomReport rep;
  rep.tol = tol;
  rep.unitality_defect =
      (m.apply(AlgebraElement::unit(m.dom())) - AlgebraElement::unit(m.cod())).max_abs();

  const QuantumSpace& dom = m.dom();
  for (int k = 0; k < dom.block_count(); ++k) {
    const int n = dom.block_dim(k);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const double a = (m.image(k, i, j).adjoint() - m.image(k, j, i)).max_abs();
        rep.adjoint_defect = std::max(rep.adjoint_defect, a);
      }
    }
  }

  for (int k = 0; k < dom.block_count(); ++k) {
    const int n = dom.block_dim(k);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const AlgebraElement& left = m.image(k, i, j);
        for (int kp = 0; kp < dom.block_count(); ++kp) {
          const int np = dom.block_dim(kp);
          for (int ip = 0; ip < np; ++ip) {
            for (int jp = 0; jp < np; ++jp) {
              AlgebraElement prod = left * m.image(kp, ip, jp);
              if (k == kp && j == ip) prod -= m.image(k, i, jp);
              const double defect = prod.max_abs();
              if (defect > rep.multiplicativity_defect) {
                rep.multiplicativity_defect = defect;
                rep.worst_pair = {k, i, j, kp, ip, jp};
              }
            }
          }
        }
      }
    }
  }

  rep.pass = rep.unitality_defect <= tol && rep.adjoint_defect <= tol &&
             rep.multiplicativity_defect <= tol;
  return rep;
}

bool is_tracial(const StateFunctional& omega, double tol) {
  const QuantumSpace& space = omega.space();
  for (int k = 0; k < space.block_count(); ++k) {
    const int n = space.block_dim(k);
    const Matrix& rho = omega.density.block(k);
    const Matrix dev = rho - (rho.trace() / static_cast<double>(n)) * Matrix::Identity(n, n);
    const double scale = 1.0 + rho.cwiseAbs().maxCoeff();
    if (dev.cwiseAbs().maxCoeff() > tol * scale) return false;
  }
  return true;
}

}  // namespace qcorr
