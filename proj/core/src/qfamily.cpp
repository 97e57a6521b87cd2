#include "qcorr/qfamily.hpp"

#include "qcorr/matrix_span.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>

#include <cmath>
#include <utility>

namespace qcorr {

QuantumFamily::QuantumFamily(QuantumSpace P, QuantumSpace O, int d)
    : P_(std::move(P)), O_(std::move(O)), d_(d) {
  if (d_ < 1) throw ShapeError("QuantumFamily: index dimension d must be >= 1");
  base_.reserve(static_cast<std::size_t>(O_.block_count()) * P_.block_count());
  std::size_t total = 0;
  for (int k = 0; k < O_.block_count(); ++k) {
    const std::size_t nk = static_cast<std::size_t>(O_.block_dim(k));
    for (int l = 0; l < P_.block_count(); ++l) {
      const std::size_t ml = static_cast<std::size_t>(P_.block_dim(l));
      base_.push_back(total);
      total += nk * nk * ml * ml;
    }
  }
  gens_.assign(total, Matrix::Zero(d_, d_));
}

std::size_t QuantumFamily::index(int k, int l, int i, int j, int s, int t) const {
  const int nk = O_.block_dim(k);
  const int ml = P_.block_dim(l);
  if (i < 0 || i >= nk || j < 0 || j >= nk) {
    throw ShapeError("QuantumFamily: answer entry (" + std::to_string(i) + "," +
                     std::to_string(j) + ") out of range for block of dimension " +
                     std::to_string(nk));
  }
  if (s < 0 || s >= ml || t < 0 || t >= ml) {
    throw ShapeError("QuantumFamily: question entry (" + std::to_string(s) + "," +
                     std::to_string(t) + ") out of range for block of dimension " +
                     std::to_string(ml));
  }
  const std::size_t within =
      ((static_cast<std::size_t>(i) * nk + j) * ml + s) * ml + t;
  return base_[static_cast<std::size_t>(k) * P_.block_count() + l] + within;
}

Matrix& QuantumFamily::gen(int k, int l, int i, int j, int s, int t) {
  return gens_[index(k, l, i, j, s, t)];
}

const Matrix& QuantumFamily::gen(int k, int l, int i, int j, int s, int t) const {
  return gens_[index(k, l, i, j, s, t)];
}

bool operator==(const QuantumFamily& a, const QuantumFamily& b) {
  if (a.P_ != b.P_ || a.O_ != b.O_ || a.d_ != b.d_) return false;
  for (std::size_t g = 0; g < a.gens_.size(); ++g) {
    if (a.gens_[g] != b.gens_[g]) return false;
  }
  return true;
}

namespace {

// Images of the answer-space matrix units inside P-block l, assembled as
// (m_l d) x (m_l d) matrices with gen(k,l,i,j,s,t) at d-block (s,t).
// Flat order follows (k, i, j).
std::vector<Matrix> assembled_block_images(const QuantumFamily& F, int l) {
  const QuantumSpace& O = F.answer_space();
  const int d = F.d();
  const int m = F.question_space().block_dim(l);
  std::vector<Matrix> out;
  out.reserve(static_cast<std::size_t>(O.algebra_dim()));
  for (int k = 0; k < O.block_count(); ++k) {
    for (int i = 0; i < O.block_dim(k); ++i) {
      for (int j = 0; j < O.block_dim(k); ++j) {
        Matrix b = Matrix::Zero(static_cast<Eigen::Index>(m) * d, static_cast<Eigen::Index>(m) * d);
        for (int s = 0; s < m; ++s) {
          for (int t = 0; t < m; ++t) {
            b.block(static_cast<Eigen::Index>(s) * d, static_cast<Eigen::Index>(t) * d, d, d) =
                F.gen(k, l, i, j, s, t);
          }
        }
        out.push_back(std::move(b));
      }
    }
  }
  return out;
}

}  // namespace

FamilyReport validate_family(const QuantumFamily& F, double tol) {
  FamilyReport rep;
  rep.tol = tol;
  const QuantumSpace& P = F.question_space();
  const QuantumSpace& O = F.answer_space();
  const int d = F.d();

  for (int k = 0; k < O.block_count(); ++k) {
    for (int l = 0; l < P.block_count(); ++l) {
      for (int i = 0; i < O.block_dim(k); ++i) {
        for (int j = 0; j < O.block_dim(k); ++j) {
          for (int s = 0; s < P.block_dim(l); ++s) {
            for (int t = 0; t < P.block_dim(l); ++t) {
              const double r =
                  (F.gen(k, l, i, j, s, t).adjoint() - F.gen(k, l, j, i, t, s)).cwiseAbs().maxCoeff();
              if (r > rep.adjoint_residual) {
                rep.adjoint_residual = r;
                rep.adjoint_worst = {k, l, i, j, s, t};
              }
            }
          }
        }
      }
    }
  }

  // Flat (k, i, j) coordinates for the worst-pair report.
  std::vector<std::array<int, 3>> coords;
  coords.reserve(static_cast<std::size_t>(O.algebra_dim()));
  for (int k = 0; k < O.block_count(); ++k) {
    for (int i = 0; i < O.block_dim(k); ++i) {
      for (int j = 0; j < O.block_dim(k); ++j) coords.push_back({k, i, j});
    }
  }

  for (int l = 0; l < P.block_count(); ++l) {
    const int m = P.block_dim(l);
    const std::vector<Matrix> B = assembled_block_images(F, l);

    Matrix u = Matrix::Zero(static_cast<Eigen::Index>(m) * d, static_cast<Eigen::Index>(m) * d);
    for (std::size_t a = 0; a < B.size(); ++a) {
      if (coords[a][1] == coords[a][2]) u += B[a];
    }
    u -= Matrix::Identity(u.rows(), u.cols());
    rep.unitality_residual = std::max(rep.unitality_residual, u.cwiseAbs().maxCoeff());

    for (std::size_t a = 0; a < B.size(); ++a) {
      const auto [k, i, j] = coords[a];
      for (std::size_t b = 0; b < B.size(); ++b) {
        const auto [kp, ip, jp] = coords[b];
        Matrix defect = B[a] * B[b];
        if (k == kp && j == ip) {
          const std::size_t target = a - static_cast<std::size_t>(j) + jp;  // (k, i, jp)
          defect -= B[target];
        }
        const double worst = defect.cwiseAbs().maxCoeff();
        if (worst > rep.product_residual) {
          rep.product_residual = worst;
          rep.worst_pair = {k, i, j, kp, ip, jp};
          rep.worst_block = l;
        }
        for (int s = 0; s < m; ++s) {
          const double diag = defect
                                  .block(static_cast<Eigen::Index>(s) * d,
                                         static_cast<Eigen::Index>(s) * d, d, d)
                                  .cwiseAbs()
                                  .maxCoeff();
          rep.reads_residual = std::max(rep.reads_residual, diag);
        }
      }
    }

    Matrix agg = Matrix::Zero(d, d);
    for (int k = 0; k < O.block_count(); ++k) {
      const double nk = O.block_dim(k);
      for (int i = 0; i < O.block_dim(k); ++i) {
        for (int j = 0; j < O.block_dim(k); ++j) {
          for (int s = 0; s < m; ++s) {
            for (int t = 0; t < m; ++t) {
              agg += (1.0 / nk) * (F.gen(k, l, i, j, s, t) * F.gen(k, l, j, i, t, s));
            }
          }
        }
      }
    }
    agg -= static_cast<double>(m) * Matrix::Identity(d, d);
    rep.block_sum_residual = std::max(rep.block_sum_residual, agg.cwiseAbs().maxCoeff());
  }

  rep.pass = rep.adjoint_residual <= tol && rep.product_residual <= tol &&
             rep.unitality_residual <= tol && rep.block_sum_residual <= tol;
  return rep;
}

BlockLinearMap induced_map(const QuantumFamily& F) {
  const QuantumSpace& P = F.question_space();
  const QuantumSpace& O = F.answer_space();
  const int d = F.d();
  const QuantumSpace cod = tensor_space(P, QuantumSpace({d}));
  BlockLinearMap m(O, cod);
  for (int k = 0; k < O.block_count(); ++k) {
    for (int i = 0; i < O.block_dim(k); ++i) {
      for (int j = 0; j < O.block_dim(k); ++j) {
        AlgebraElement img(cod);
        for (int l = 0; l < P.block_count(); ++l) {
          Matrix& blk = img.block(l);
          for (int s = 0; s < P.block_dim(l); ++s) {
            for (int t = 0; t < P.block_dim(l); ++t) {
              blk.block(static_cast<Eigen::Index>(s) * d, static_cast<Eigen::Index>(t) * d, d,
                        d) = F.gen(k, l, i, j, s, t);
            }
          }
        }
        m.image(k, i, j) = std::move(img);
      }
    }
  }
  return m;
}

UcpReport validate_povm(const QuantumFamily& F, double tol) {
  return is_ucp(induced_map(F), tol);
}

Matrix haar_unitary(int n, std::mt19937_64& rng) {
  if (n < 1) throw ShapeError("haar_unitary: n must be >= 1");
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix a(n, n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      a(r, c) = Complex(re, im) / std::sqrt(2.0);
    }
  }
  Eigen::HouseholderQR<Matrix> qr(a);
  Matrix q = qr.householderQ() * Matrix::Identity(n, n);
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int c = 0; c < n; ++c) {
    const Complex rc = r(c, c);
    const double mag = std::abs(rc);
    q.col(c) *= (mag > 0.0) ? rc / mag : Complex(1.0, 0.0);
  }
  return q;
}

namespace {

void enumerate_multiplicities(const std::vector<int>& dims, std::size_t idx, int remaining,
                              std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (idx + 1 == dims.size()) {
    if (remaining % dims[idx] == 0) {
      cur[idx] = remaining / dims[idx];
      out.push_back(cur);
    }
    return;
  }
  for (int c = 0; c * dims[idx] <= remaining; ++c) {
    cur[idx] = c;
    enumerate_multiplicities(dims, idx + 1, remaining - c * dims[idx], cur, out);
  }
}

}  // namespace

QuantumFamily random_family(const QuantumSpace& P, const QuantumSpace& O, int d,
                            std::uint64_t seed) {
  if (d < 1) throw ShapeError("random_family: index dimension d must be >= 1");
  std::mt19937_64 rng(seed);
  QuantumFamily F(P, O, d);
  for (int l = 0; l < P.block_count(); ++l) {
    const int m = P.block_dim(l);
    const int target = m * d;

    std::vector<std::vector<int>> sols;
    std::vector<int> cur(O.blocks().size(), 0);
    enumerate_multiplicities(O.blocks(), 0, target, cur, sols);
    if (sols.empty()) {
      std::string eq;
      for (std::size_t k = 0; k < O.blocks().size(); ++k) {
        if (k) eq += " + ";
        eq += std::to_string(O.blocks()[k]) + "*c" + std::to_string(k);
      }
      throw ShapeError("random_family: no nonnegative multiplicities solve " + eq + " = " +
                       std::to_string(target) + " for question block " + std::to_string(l));
    }
    const std::vector<int>& mult =
        sols[std::uniform_int_distribution<std::size_t>(0, sols.size() - 1)(rng)];

    const Matrix q = haar_unitary(target, rng);

    // Column offset of the (k, row i, copy b) basis vector in the embedded
    // sum (+)_k (M_{n_k} (x) I_{c_k}).
    std::vector<int> offset(O.blocks().size(), 0);
    for (std::size_t k = 1; k < offset.size(); ++k) {
      offset[k] = offset[k - 1] + O.blocks()[k - 1] * mult[k - 1];
    }

    for (int k = 0; k < O.block_count(); ++k) {
      const int ck = mult[static_cast<std::size_t>(k)];
      for (int i = 0; i < O.block_dim(k); ++i) {
        for (int j = 0; j < O.block_dim(k); ++j) {
          Matrix img = Matrix::Zero(target, target);
          for (int b = 0; b < ck; ++b) {
            img.noalias() += q.col(offset[static_cast<std::size_t>(k)] + i * ck + b) *
                             q.col(offset[static_cast<std::size_t>(k)] + j * ck + b).adjoint();
          }
          for (int s = 0; s < m; ++s) {
            for (int t = 0; t < m; ++t) {
              F.gen(k, l, i, j, s, t) =
                  img.block(static_cast<Eigen::Index>(s) * d, static_cast<Eigen::Index>(t) * d, d, d);
            }
          }
        }
      }
    }
  }
  return F;
}

QuantumFamily pullback_family(const BlockLinearMap& rho, const BlockLinearMap& pi,
                              const QuantumFamily& F, double tol) {
  if (pi.cod() != F.answer_space()) {
    throw ShapeError("pullback_family: pi must land in the answer space of the family");
  }
  if (rho.dom() != F.question_space()) {
    throw ShapeError("pullback_family: rho must start at the question space of the family");
  }
  const HomReport hr = is_star_homomorphism(rho, tol);
  if (!hr.pass) {
    throw PreconditionError(
        "pullback_family: rho is not a unital *-homomorphism (multiplicativity defect " +
        std::to_string(hr.multiplicativity_defect) + ")");
  }
  const HomReport hp = is_star_homomorphism(pi, tol);
  if (!hp.pass) {
    throw PreconditionError(
        "pullback_family: pi is not a unital *-homomorphism (multiplicativity defect " +
        std::to_string(hp.multiplicativity_defect) + ")");
  }

  const QuantumSpace& P1 = rho.cod();
  const QuantumSpace& O1 = pi.dom();
  const QuantumSpace& P2 = F.question_space();
  const QuantumSpace& O2 = F.answer_space();
  const int d = F.d();

  QuantumFamily out(P1, O1, d);
  for (int k1 = 0; k1 < O1.block_count(); ++k1) {
    for (int i = 0; i < O1.block_dim(k1); ++i) {
      for (int j = 0; j < O1.block_dim(k1); ++j) {
        const AlgebraElement& y = pi.image(k1, i, j);
        for (int l2 = 0; l2 < P2.block_count(); ++l2) {
          for (int s2 = 0; s2 < P2.block_dim(l2); ++s2) {
            for (int t2 = 0; t2 < P2.block_dim(l2); ++t2) {
              Matrix acc = Matrix::Zero(d, d);
              bool any = false;
              for (int k2 = 0; k2 < O2.block_count(); ++k2) {
                for (int i2 = 0; i2 < O2.block_dim(k2); ++i2) {
                  for (int j2 = 0; j2 < O2.block_dim(k2); ++j2) {
                    const Complex c = y.block(k2)(i2, j2);
                    if (c == Complex(0.0, 0.0)) continue;
                    acc += c * F.gen(k2, l2, i2, j2, s2, t2);
                    any = true;
                  }
                }
              }
              if (!any) continue;
              const AlgebraElement& z = rho.image(l2, s2, t2);
              for (int l1 = 0; l1 < P1.block_count(); ++l1) {
                for (int s = 0; s < P1.block_dim(l1); ++s) {
                  for (int t = 0; t < P1.block_dim(l1); ++t) {
                    const Complex c2 = z.block(l1)(s, t);
                    if (c2 == Complex(0.0, 0.0)) continue;
                    out.gen(k1, l1, i, j, s, t) += c2 * acc;
                  }
                }
              }
            }
          }
        }
      }
    }
  }
  return out;
}

std::pair<QuantumFamily, QuantumFamily> split_family(const QuantumFamily& F, int first_blocks) {
  const QuantumSpace& P = F.question_space();
  const int N = P.block_count();
  if (first_blocks < 1 || first_blocks >= N) {
    throw ShapeError("split_family: split point " + std::to_string(first_blocks) +
                     " must lie strictly inside the " + std::to_string(N) + " question blocks");
  }
  const QuantumSpace P1(std::vector<int>(P.blocks().begin(), P.blocks().begin() + first_blocks));
  const QuantumSpace P2(std::vector<int>(P.blocks().begin() + first_blocks, P.blocks().end()));
  const QuantumSpace& O = F.answer_space();
  QuantumFamily F1(P1, O, F.d());
  QuantumFamily F2(P2, O, F.d());
  for (int k = 0; k < O.block_count(); ++k) {
    for (int i = 0; i < O.block_dim(k); ++i) {
      for (int j = 0; j < O.block_dim(k); ++j) {
        for (int l = 0; l < N; ++l) {
          QuantumFamily& dst = (l < first_blocks) ? F1 : F2;
          const int ldst = (l < first_blocks) ? l : l - first_blocks;
          for (int s = 0; s < P.block_dim(l); ++s) {
            for (int t = 0; t < P.block_dim(l); ++t) {
              dst.gen(k, ldst, i, j, s, t) = F.gen(k, l, i, j, s, t);
            }
          }
        }
      }
    }
  }
  return {std::move(F1), std::move(F2)};
}

QuantumFamily merge_family(const QuantumFamily& F1, const QuantumFamily& F2) {
  if (F1.answer_space() != F2.answer_space() || F1.d() != F2.d()) {
    throw ShapeError("merge_family: families must share the answer space and index dimension");
  }
  std::vector<int> blocks = F1.question_space().blocks();
  const int n1 = static_cast<int>(blocks.size());
  blocks.insert(blocks.end(), F2.question_space().blocks().begin(),
                F2.question_space().blocks().end());
  const QuantumSpace& O = F1.answer_space();
  QuantumFamily out(QuantumSpace(std::move(blocks)), O, F1.d());
  const QuantumSpace& P = out.question_space();
  for (int k = 0; k < O.block_count(); ++k) {
    for (int i = 0; i < O.block_dim(k); ++i) {
      for (int j = 0; j < O.block_dim(k); ++j) {
        for (int l = 0; l < P.block_count(); ++l) {
          const QuantumFamily& src = (l < n1) ? F1 : F2;
          const int lsrc = (l < n1) ? l : l - n1;
          for (int s = 0; s < P.block_dim(l); ++s) {
            for (int t = 0; t < P.block_dim(l); ++t) {
              out.gen(k, l, i, j, s, t) = src.gen(k, lsrc, i, j, s, t);
            }
          }
        }
      }
    }
  }
  return out;
}

QuantumFamily opposite_family(const QuantumFamily& F) {
  const QuantumSpace& P = F.question_space();
  const QuantumSpace& O = F.answer_space();
  QuantumFamily out(P, O, F.d());
  for (int k = 0; k < O.block_count(); ++k) {
    for (int i = 0; i < O.block_dim(k); ++i) {
      for (int j = 0; j < O.block_dim(k); ++j) {
        for (int l = 0; l < P.block_count(); ++l) {
          for (int s = 0; s < P.block_dim(l); ++s) {
            for (int t = 0; t < P.block_dim(l); ++t) {
              out.gen(k, l, i, j, s, t) = F.gen(k, l, j, i, t, s).transpose();
            }
          }
        }
      }
    }
  }
  return out;
}

namespace {

std::vector<const Matrix*> nonzero_generators(const QuantumFamily& F) {
  std::vector<const Matrix*> out;
  const QuantumSpace& P = F.question_space();
  const QuantumSpace& O = F.answer_space();
  for (int k = 0; k < O.block_count(); ++k) {
    for (int i = 0; i < O.block_dim(k); ++i) {
      for (int j = 0; j < O.block_dim(k); ++j) {
        for (int l = 0; l < P.block_count(); ++l) {
          for (int s = 0; s < P.block_dim(l); ++s) {
            for (int t = 0; t < P.block_dim(l); ++t) {
              const Matrix& g = F.gen(k, l, i, j, s, t);
              if (g.squaredNorm() > 0.0) out.push_back(&g);
            }
          }
        }
      }
    }
  }
  return out;
}

}  // namespace

CommutationReport commutes_second_leg(const QuantumFamily& F1, const QuantumFamily& F2,
                                      double tol) {
  if (F1.question_space() != F2.question_space() || F1.answer_space() != F2.answer_space() ||
      F1.d() != F2.d()) {
    throw ShapeError("commutes_second_leg: families must share (P, O, d)");
  }
  CommutationReport rep;
  rep.tol = tol;
  const auto g1 = nonzero_generators(F1);
  const auto g2 = nonzero_generators(F2);
  for (const Matrix* a : g1) {
    for (const Matrix* b : g2) {
      const double c = ((*a) * (*b) - (*b) * (*a)).cwiseAbs().maxCoeff();
      rep.max_commutator = std::max(rep.max_commutator, c);
    }
  }
  rep.pass = rep.max_commutator <= tol;
  return rep;
}

SliceSpan slice_span(const QuantumFamily& F) {
  const int d = F.d();
  std::vector<Matrix> mats;
  mats.push_back(Matrix::Identity(d, d));
  const QuantumSpace& P = F.question_space();
  const QuantumSpace& O = F.answer_space();
  for (int k = 0; k < O.block_count(); ++k) {
    for (int i = 0; i < O.block_dim(k); ++i) {
      for (int j = 0; j < O.block_dim(k); ++j) {
        for (int l = 0; l < P.block_count(); ++l) {
          for (int s = 0; s < P.block_dim(l); ++s) {
            for (int t = 0; t < P.block_dim(l); ++t) {
              mats.push_back(F.gen(k, l, i, j, s, t));
            }
          }
        }
      }
    }
  }
  SliceSpan span;
  span.basis = orthonormal_span(mats);
  span.dimension = static_cast<int>(span.basis.size());
  for (const Matrix& b : span.basis) {
    span.adjoint_residual = std::max(span.adjoint_residual, span_residual(span.basis, b.adjoint()));
  }
  span.unit_residual = span_residual(span.basis, Matrix::Identity(d, d));
  return span;
}

PisierDecomposition pisier_decompose(const BlockLinearMap& embedding, double tol) {
  const QuantumSpace& dom = embedding.dom();
  if (dom.block_count() != 1) {
    throw ShapeError("pisier_decompose: the embedded algebra must be a single full matrix block");
  }
  const int n = dom.block_dim(0);
  const HomReport hom = is_star_homomorphism(embedding, tol);
  if (!hom.pass) {
    throw PreconditionError(
        "pisier_decompose: the embedding is not a unital *-homomorphism (unitality defect " +
        std::to_string(hom.unitality_defect) + ", multiplicativity defect " +
        std::to_string(hom.multiplicativity_defect) + ")");
  }

  const QuantumSpace& C = embedding.cod();
  const int dimC = C.algebra_dim();

  // Coordinates of C(C): matrix units, blockwise row-major.
  std::vector<AlgebraElement> units;
  units.reserve(static_cast<std::size_t>(dimC));
  for (int b = 0; b < C.block_count(); ++b) {
    for (int r = 0; r < C.block_dim(b); ++r) {
      for (int c = 0; c < C.block_dim(b); ++c) units.push_back(matrix_unit(C, b, r, c));
    }
  }
  const auto coordinates = [&C](const AlgebraElement& x) {
    Vector v(C.algebra_dim());
    Eigen::Index p = 0;
    for (int b = 0; b < C.block_count(); ++b) {
      for (int r = 0; r < C.block_dim(b); ++r) {
        for (int c = 0; c < C.block_dim(b); ++c) v[p++] = x.block(b)(r, c);
      }
    }
    return v;
  };

  // Stacked commutation conditions [c, E_ij] = 0; the nullspace is the
  // relative commutant D.
  Matrix big(static_cast<Eigen::Index>(n) * n * dimC, dimC);
  for (int q = 0; q < dimC; ++q) {
    Eigen::Index row = 0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const AlgebraElement& e = embedding.image(0, i, j);
        const Vector comm = coordinates(units[static_cast<std::size_t>(q)] * e -
                                        e * units[static_cast<std::size_t>(q)]);
        big.block(row, q, dimC, 1) = comm;
        row += dimC;
      }
    }
  }

  Eigen::JacobiSVD<Matrix> svd(big, Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double top = sv.size() > 0 ? sv[0] : 0.0;
  int rank = 0;
  for (Eigen::Index q = 0; q < sv.size(); ++q) {
    if (sv[q] > kRankTol * top) ++rank;
  }
  const int dimD = dimC - rank;

  PisierDecomposition dec;
  dec.n = n;
  dec.tol = tol;
  dec.commutant_dim = dimD;
  dec.dimension_identity = (static_cast<long>(n) * n * dimD == dimC);
  if (!dec.dimension_identity) {
    throw PreconditionError("pisier_decompose: rank bookkeeping failed, dim(C) = " +
                            std::to_string(dimC) + " but n^2 * dim(D) = " +
                            std::to_string(static_cast<long>(n) * n * dimD));
  }

  for (int q = rank; q < dimC; ++q) {
    AlgebraElement b(C);
    Eigen::Index p = 0;
    for (int blk = 0; blk < C.block_count(); ++blk) {
      for (int r = 0; r < C.block_dim(blk); ++r) {
        for (int c = 0; c < C.block_dim(blk); ++c) b.block(blk)(r, c) = svd.matrixV()(p++, q);
      }
    }
    dec.commutant_basis.push_back(std::move(b));
  }

  // Gamma : M_n (x) D -> C, e_ij (x) b -> E_ij b; full rank makes it a
  // bijection, and commutation of D with the image makes it multiplicative.
  Matrix gamma(dimC, static_cast<Eigen::Index>(n) * n * dimD);
  {
    Eigen::Index col = 0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        for (int b = 0; b < dimD; ++b) {
          gamma.col(col++) =
              coordinates(embedding.image(0, i, j) * dec.commutant_basis[static_cast<std::size_t>(b)]);
        }
      }
    }
  }
  Eigen::JacobiSVD<Matrix> gsvd(gamma);
  dec.gamma_min_singular = gsvd.singularValues().size() > 0
                               ? gsvd.singularValues()(gsvd.singularValues().size() - 1)
                               : 0.0;

  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int b = 0; b < dimD; ++b) {
        const AlgebraElement gb =
            embedding.image(0, i, j) * dec.commutant_basis[static_cast<std::size_t>(b)];
        for (int ip = 0; ip < n; ++ip) {
          for (int jp = 0; jp < n; ++jp) {
            for (int bp = 0; bp < dimD; ++bp) {
              const AlgebraElement gbp = embedding.image(0, ip, jp) *
                                         dec.commutant_basis[static_cast<std::size_t>(bp)];
              AlgebraElement defect = gb * gbp;
              if (j == ip) {
                defect -= embedding.image(0, i, jp) *
                          (dec.commutant_basis[static_cast<std::size_t>(b)] *
                           dec.commutant_basis[static_cast<std::size_t>(bp)]);
              }
              dec.multiplicativity_residual =
                  std::max(dec.multiplicativity_residual, defect.max_abs());
            }
          }
        }
      }
    }
  }
  return dec;
}

AlgebraElement pisier_component(const BlockLinearMap& embedding, const AlgebraElement& c, int i,
                                int j) {
  const QuantumSpace& dom = embedding.dom();
  if (dom.block_count() != 1) {
    throw ShapeError("pisier_component: the embedded algebra must be a single full matrix block");
  }
  const int n = dom.block_dim(0);
  if (c.space() != embedding.cod()) {
    throw ShapeError("pisier_component: element does not live in the codomain");
  }
  AlgebraElement out(embedding.cod());
  for (int k = 0; k < n; ++k) {
    out += embedding.image(0, k, i) * c * embedding.image(0, j, k);
  }
  return out;
}

}  // namespace qcorr
