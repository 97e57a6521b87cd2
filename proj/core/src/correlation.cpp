#include "qcorr/correlation.hpp"

#include "qcorr/matrix_span.hpp"

#include <cmath>
#include <cstdio>
#include <utility>

namespace qcorr {

CorrelationTensor::CorrelationTensor(QuantumSpace P, QuantumSpace O)
    : P_(std::move(P)), O_(std::move(O)) {
  const int NO = O_.block_count();
  const int NP = P_.block_count();
  base_.reserve(static_cast<std::size_t>(NO) * NO * NP * NP);
  std::size_t total = 0;
  for (int k = 0; k < NO; ++k) {
    for (int kp = 0; kp < NO; ++kp) {
      for (int l = 0; l < NP; ++l) {
        for (int lp = 0; lp < NP; ++lp) {
          base_.push_back(total);
          const std::size_t nk = static_cast<std::size_t>(O_.block_dim(k));
          const std::size_t nkp = static_cast<std::size_t>(O_.block_dim(kp));
          const std::size_t ml = static_cast<std::size_t>(P_.block_dim(l));
          const std::size_t mlp = static_cast<std::size_t>(P_.block_dim(lp));
          total += nk * nk * nkp * nkp * ml * ml * mlp * mlp;
        }
      }
    }
  }
  x_.assign(total, Complex(0.0, 0.0));
}

std::size_t CorrelationTensor::index(int k, int kp, int l, int lp, int i, int j, int ip, int jp,
                                     int s, int t, int sp, int tp) const {
  const int NO = O_.block_count();
  const int NP = P_.block_count();
  const int nk = O_.block_dim(k);
  const int nkp = O_.block_dim(kp);
  const int ml = P_.block_dim(l);
  const int mlp = P_.block_dim(lp);
  if (i < 0 || i >= nk || j < 0 || j >= nk || ip < 0 || ip >= nkp || jp < 0 || jp >= nkp) {
    throw ShapeError("CorrelationTensor: answer entry out of range");
  }
  if (s < 0 || s >= ml || t < 0 || t >= ml || sp < 0 || sp >= mlp || tp < 0 || tp >= mlp) {
    throw ShapeError("CorrelationTensor: question entry out of range");
  }
  std::size_t w = static_cast<std::size_t>(i);
  w = w * nk + j;
  w = w * nkp + ip;
  w = w * nkp + jp;
  w = w * ml + s;
  w = w * ml + t;
  w = w * mlp + sp;
  w = w * mlp + tp;
  const std::size_t slot =
      ((static_cast<std::size_t>(k) * NO + kp) * NP + l) * NP + lp;
  return base_[slot] + w;
}

Complex& CorrelationTensor::at(int k, int kp, int l, int lp, int i, int j, int ip, int jp, int s,
                               int t, int sp, int tp) {
  return x_[index(k, kp, l, lp, i, j, ip, jp, s, t, sp, tp)];
}

const Complex& CorrelationTensor::at(int k, int kp, int l, int lp, int i, int j, int ip, int jp,
                                     int s, int t, int sp, int tp) const {
  return x_[index(k, kp, l, lp, i, j, ip, jp, s, t, sp, tp)];
}

bool operator==(const CorrelationTensor& a, const CorrelationTensor& b) {
  return a.P_ == b.P_ && a.O_ == b.O_ && a.x_ == b.x_;
}

AlgebraElement CorrelationTensor::apply(const AlgebraElement& z) const {
  if (z.space() != tensor_space(O_, O_)) {
    throw ShapeError("CorrelationTensor::apply: element does not live on the doubled answer space");
  }
  const int NO = O_.block_count();
  const int NP = P_.block_count();
  AlgebraElement out(tensor_space(P_, P_));
  for (int k = 0; k < NO; ++k) {
    const int nk = O_.block_dim(k);
    for (int kp = 0; kp < NO; ++kp) {
      const int nkp = O_.block_dim(kp);
      const Matrix& zb = z.block(k * NO + kp);
      for (int i = 0; i < nk; ++i) {
        for (int j = 0; j < nk; ++j) {
          for (int ip = 0; ip < nkp; ++ip) {
            for (int jp = 0; jp < nkp; ++jp) {
              const Complex c = zb(i * nkp + ip, j * nkp + jp);
              if (c == Complex(0.0, 0.0)) continue;
              for (int l = 0; l < NP; ++l) {
                const int ml = P_.block_dim(l);
                for (int lp = 0; lp < NP; ++lp) {
                  const int mlp = P_.block_dim(lp);
                  Matrix& ob = out.block(l * NP + lp);
                  for (int s = 0; s < ml; ++s) {
                    for (int t = 0; t < ml; ++t) {
                      for (int sp = 0; sp < mlp; ++sp) {
                        for (int tp = 0; tp < mlp; ++tp) {
                          ob(s * mlp + sp, t * mlp + tp) +=
                              c * at(k, kp, l, lp, i, j, ip, jp, s, t, sp, tp);
                        }
                      }
                    }
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

BlockLinearMap CorrelationTensor::to_map() const {
  const int NO = O_.block_count();
  const int NP = P_.block_count();
  const QuantumSpace dom = tensor_space(O_, O_);
  const QuantumSpace cod = tensor_space(P_, P_);
  BlockLinearMap map(dom, cod);
  for (int k = 0; k < NO; ++k) {
    const int nk = O_.block_dim(k);
    for (int kp = 0; kp < NO; ++kp) {
      const int nkp = O_.block_dim(kp);
      for (int i = 0; i < nk; ++i) {
        for (int j = 0; j < nk; ++j) {
          for (int ip = 0; ip < nkp; ++ip) {
            for (int jp = 0; jp < nkp; ++jp) {
              AlgebraElement img(cod);
              for (int l = 0; l < NP; ++l) {
                const int ml = P_.block_dim(l);
                for (int lp = 0; lp < NP; ++lp) {
                  const int mlp = P_.block_dim(lp);
                  Matrix& ob = img.block(l * NP + lp);
                  for (int s = 0; s < ml; ++s) {
                    for (int t = 0; t < ml; ++t) {
                      for (int sp = 0; sp < mlp; ++sp) {
                        for (int tp = 0; tp < mlp; ++tp) {
                          ob(s * mlp + sp, t * mlp + tp) =
                              at(k, kp, l, lp, i, j, ip, jp, s, t, sp, tp);
                        }
                      }
                    }
                  }
                }
              }
              map.image(k * NO + kp, i * nkp + ip, j * nkp + jp) = std::move(img);
            }
          }
        }
      }
    }
  }
  return map;
}

const Vector& Realization::xi() const {
  if (!has_vector_state()) {
    throw ShapeError("Realization: state is a density matrix, not a vector");
  }
  return std::get<Vector>(state);
}

const Matrix& Realization::rho() const {
  if (has_vector_state()) {
    throw ShapeError("Realization: state is a vector, not a density matrix");
  }
  return std::get<Matrix>(state);
}

namespace {

// Enumerates generator tuples in storage order and hands them to f.
template <typename F>
void for_each_generator(const QuantumSpace& O, const QuantumSpace& P, F&& f) {
  for (int k = 0; k < O.block_count(); ++k) {
    for (int l = 0; l < P.block_count(); ++l) {
      for (int i = 0; i < O.block_dim(k); ++i) {
        for (int j = 0; j < O.block_dim(k); ++j) {
          for (int s = 0; s < P.block_dim(l); ++s) {
            for (int t = 0; t < P.block_dim(l); ++t) f(k, l, i, j, s, t);
          }
        }
      }
    }
  }
}

void check_state(const Realization& R, double tol) {
  const int d = R.phi1.d();
  if (R.has_vector_state()) {
    const Vector& xi = R.xi();
    if (xi.size() != d) {
      throw ShapeError("Realization: state vector has length " + std::to_string(xi.size()) +
                       ", expected " + std::to_string(d));
    }
    if (std::abs(xi.norm() - 1.0) > tol) {
      throw PreconditionError("Realization: state vector is not normalized, |norm - 1| = " +
                              std::to_string(std::abs(xi.norm() - 1.0)));
    }
  } else {
    const Matrix& rho = R.rho();
    if (rho.rows() != d || rho.cols() != d) {
      throw ShapeError("Realization: density matrix must be " + std::to_string(d) + "x" +
                       std::to_string(d));
    }
    const double trdev = std::abs(rho.trace() - Complex(1.0, 0.0));
    if (trdev > tol) {
      throw PreconditionError("Realization: density trace deviates from 1 by " +
                              std::to_string(trdev));
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (rho + rho.adjoint()), Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues().minCoeff();
    if (lo < -tol * (1.0 + rho.cwiseAbs().maxCoeff())) {
      throw PreconditionError("Realization: density is not positive semidefinite, min eigenvalue " +
                              std::to_string(lo));
    }
  }
}

}  // namespace

CorrelationTensor correlation_from_realization(const Realization& R, double tol) {
  if (R.phi1.question_space() != R.phi2.question_space() ||
      R.phi1.answer_space() != R.phi2.answer_space() || R.phi1.d() != R.phi2.d()) {
    throw ShapeError("correlation_from_realization: the two families must share (P, O, d)");
  }
  check_state(R, tol);
  const CommutationReport comm = commutes_second_leg(R.phi1, R.phi2, tol);
  if (!comm.pass) {
    throw PreconditionError(
        "correlation_from_realization: families do not act on separate legs, max commutator norm " +
        std::to_string(comm.max_commutator));
  }

  const QuantumSpace& P = R.phi1.question_space();
  const QuantumSpace& O = R.phi1.answer_space();
  CorrelationTensor T(P, O);

  if (R.has_vector_state()) {
    const Vector& xi = R.xi();
    std::vector<Vector> left;   // gen1^* xi
    std::vector<Vector> right;  // gen2 xi
    for_each_generator(O, P, [&](int k, int l, int i, int j, int s, int t) {
      left.push_back(R.phi1.gen(k, l, i, j, s, t).adjoint() * xi);
      right.push_back(R.phi2.gen(k, l, i, j, s, t) * xi);
    });
    std::size_t a = 0;
    for_each_generator(O, P, [&](int k, int l, int i, int j, int s, int t) {
      std::size_t b = 0;
      for_each_generator(O, P, [&](int kp, int lp, int ip, int jp, int sp, int tp) {
        T.at(k, kp, l, lp, i, j, ip, jp, s, t, sp, tp) = left[a].dot(right[b]);
        ++b;
      });
      ++a;
    });
  } else {
    const Matrix& rho = R.rho();
    std::vector<Matrix> left;  // rho * gen1
    for_each_generator(O, P, [&](int k, int l, int i, int j, int s, int t) {
      left.push_back(rho * R.phi1.gen(k, l, i, j, s, t));
    });
    std::size_t a = 0;
    for_each_generator(O, P, [&](int k, int l, int i, int j, int s, int t) {
      std::size_t b = 0;
      for_each_generator(O, P, [&](int kp, int lp, int ip, int jp, int sp, int tp) {
        T.at(k, kp, l, lp, i, j, ip, jp, s, t, sp, tp) =
            left[a].transpose().cwiseProduct(R.phi2.gen(kp, lp, ip, jp, sp, tp)).sum();
        ++b;
      });
      ++a;
    });
  }
  return T;
}

NonsignallingReport is_nonsignalling(const CorrelationTensor& T, double tol) {
  NonsignallingReport rep;
  rep.tol = tol;
  const QuantumSpace& P = T.question_space();
  const QuantumSpace& O = T.answer_space();
  const int NP = P.block_count();
  const int NO = O.block_count();
  const double hp = static_cast<double>(P.hilbert_dim());

  // Left slot: fix a matrix unit x = e^k_ij, sum the second answer leg over
  // its units, and compare against slice (x) 1.
  for (int k = 0; k < NO; ++k) {
    for (int i = 0; i < O.block_dim(k); ++i) {
      for (int j = 0; j < O.block_dim(k); ++j) {
        std::vector<Matrix> a;  // per (l, lp)
        a.reserve(static_cast<std::size_t>(NP) * NP);
        for (int l = 0; l < NP; ++l) {
          const int ml = P.block_dim(l);
          for (int lp = 0; lp < NP; ++lp) {
            const int mlp = P.block_dim(lp);
            Matrix blk = Matrix::Zero(static_cast<Eigen::Index>(ml) * mlp,
                                      static_cast<Eigen::Index>(ml) * mlp);
            for (int kp = 0; kp < NO; ++kp) {
              for (int ii = 0; ii < O.block_dim(kp); ++ii) {
                for (int s = 0; s < ml; ++s) {
                  for (int t = 0; t < ml; ++t) {
                    for (int sp = 0; sp < mlp; ++sp) {
                      for (int tp = 0; tp < mlp; ++tp) {
                        blk(s * mlp + sp, t * mlp + tp) +=
                            T.at(k, kp, l, lp, i, j, ii, ii, s, t, sp, tp);
                      }
                    }
                  }
                }
              }
            }
            a.push_back(std::move(blk));
          }
        }
        for (int l = 0; l < NP; ++l) {
          const int ml = P.block_dim(l);
          Matrix slice = Matrix::Zero(ml, ml);
          for (int lp = 0; lp < NP; ++lp) {
            const int mlp = P.block_dim(lp);
            const Matrix& blk = a[static_cast<std::size_t>(l) * NP + lp];
            for (int s = 0; s < ml; ++s) {
              for (int t = 0; t < ml; ++t) {
                for (int sp = 0; sp < mlp; ++sp) slice(s, t) += blk(s * mlp + sp, t * mlp + sp);
              }
            }
          }
          slice /= hp;
          for (int lp = 0; lp < NP; ++lp) {
            const int mlp = P.block_dim(lp);
            const Matrix& blk = a[static_cast<std::size_t>(l) * NP + lp];
            for (int s = 0; s < ml; ++s) {
              for (int t = 0; t < ml; ++t) {
                for (int sp = 0; sp < mlp; ++sp) {
                  for (int tp = 0; tp < mlp; ++tp) {
                    const Complex want = (sp == tp) ? slice(s, t) : Complex(0.0, 0.0);
                    rep.residual =
                        std::max(rep.residual, std::abs(blk(s * mlp + sp, t * mlp + tp) - want));
                  }
                }
              }
            }
          }
        }
      }
    }
  }

  // Right slot, mirrored.
  for (int kp = 0; kp < NO; ++kp) {
    for (int ip = 0; ip < O.block_dim(kp); ++ip) {
      for (int jp = 0; jp < O.block_dim(kp); ++jp) {
        std::vector<Matrix> b;
        b.reserve(static_cast<std::size_t>(NP) * NP);
        for (int l = 0; l < NP; ++l) {
          const int ml = P.block_dim(l);
          for (int lp = 0; lp < NP; ++lp) {
            const int mlp = P.block_dim(lp);
            Matrix blk = Matrix::Zero(static_cast<Eigen::Index>(ml) * mlp,
                                      static_cast<Eigen::Index>(ml) * mlp);
            for (int k = 0; k < NO; ++k) {
              for (int ii = 0; ii < O.block_dim(k); ++ii) {
                for (int s = 0; s < ml; ++s) {
                  for (int t = 0; t < ml; ++t) {
                    for (int sp = 0; sp < mlp; ++sp) {
                      for (int tp = 0; tp < mlp; ++tp) {
                        blk(s * mlp + sp, t * mlp + tp) +=
                            T.at(k, kp, l, lp, ii, ii, ip, jp, s, t, sp, tp);
                      }
                    }
                  }
                }
              }
            }
            b.push_back(std::move(blk));
          }
        }
        for (int lp = 0; lp < NP; ++lp) {
          const int mlp = P.block_dim(lp);
          Matrix slice = Matrix::Zero(mlp, mlp);
          for (int l = 0; l < NP; ++l) {
            const int ml = P.block_dim(l);
            const Matrix& blk = b[static_cast<std::size_t>(l) * NP + lp];
            for (int sp = 0; sp < mlp; ++sp) {
              for (int tp = 0; tp < mlp; ++tp) {
                for (int s = 0; s < ml; ++s) slice(sp, tp) += blk(s * mlp + sp, s * mlp + tp);
              }
            }
          }
          slice /= hp;
          for (int l = 0; l < NP; ++l) {
            const int ml = P.block_dim(l);
            const Matrix& blk = b[static_cast<std::size_t>(l) * NP + lp];
            for (int s = 0; s < ml; ++s) {
              for (int t = 0; t < ml; ++t) {
                for (int sp = 0; sp < mlp; ++sp) {
                  for (int tp = 0; tp < mlp; ++tp) {
                    const Complex want = (s == t) ? slice(sp, tp) : Complex(0.0, 0.0);
                    rep.residual =
                        std::max(rep.residual, std::abs(blk(s * mlp + sp, t * mlp + tp) - want));
                  }
                }
              }
            }
          }
        }
      }
    }
  }

  rep.pass = rep.residual <= tol;
  return rep;
}

namespace {

Complex sync_sum_complex(const CorrelationTensor& T, std::vector<Complex>* per_block = nullptr) {
  const QuantumSpace& P = T.question_space();
  const QuantumSpace& O = T.answer_space();
  Complex total = 0.0;
  if (per_block) per_block->assign(static_cast<std::size_t>(P.block_count()), Complex(0.0, 0.0));
  for (int l = 0; l < P.block_count(); ++l) {
    Complex part = 0.0;
    const int ml = P.block_dim(l);
    for (int k = 0; k < O.block_count(); ++k) {
      const int nk = O.block_dim(k);
      const double w = 1.0 / (static_cast<double>(nk) * ml);
      for (int i = 0; i < nk; ++i) {
        for (int j = 0; j < nk; ++j) {
          for (int s = 0; s < ml; ++s) {
            for (int t = 0; t < ml; ++t) {
              part += w * T.at(k, k, l, l, i, j, i, j, s, t, s, t);
            }
          }
        }
      }
    }
    if (per_block) (*per_block)[static_cast<std::size_t>(l)] = part;
    total += part;
  }
  return total;
}

}  // namespace

double sync_sum(const CorrelationTensor& T) { return sync_sum_complex(T).real(); }

double sync_imag_defect(const CorrelationTensor& T) {
  return std::abs(sync_sum_complex(T).imag());
}

std::vector<double> sync_sum_per_block(const CorrelationTensor& T) {
  std::vector<Complex> parts;
  sync_sum_complex(T, &parts);
  std::vector<double> out;
  out.reserve(parts.size());
  for (const Complex& c : parts) out.push_back(c.real());
  return out;
}

double sync_defect(const CorrelationTensor& T) {
  const Complex total = sync_sum_complex(T);
  return std::abs(total - Complex(static_cast<double>(T.question_space().block_count()), 0.0));
}

Complex entangled_sync_value(const CorrelationTensor& T) {
  const QuantumSpace& P = T.question_space();
  const QuantumSpace& O = T.answer_space();
  const int NO = O.block_count();
  AlgebraElement e(tensor_space(O, O));
  for (int k = 0; k < NO; ++k) {
    const int nk = O.block_dim(k);
    Matrix& blk = e.block(k * NO + k);
    for (int i = 0; i < nk; ++i) {
      for (int j = 0; j < nk; ++j) {
        blk(i * nk + i, j * nk + j) += 1.0 / nk;
      }
    }
  }
  const AlgebraElement y = T.apply(e);
  const EntangledVector phi = maximally_entangled_vector(P);
  const Vector w = act_on_vector(y, P, phi.vec);
  return phi.vec.dot(w);
}

bool is_synchronous(const CorrelationTensor& T, double tol) {
  const Complex total = sync_sum_complex(T);
  const double np = static_cast<double>(T.question_space().block_count());
  const Complex esv = entangled_sync_value(T);
  // The two routes compute the same number through unrelated code; a gap
  // here is a fault in this library, not in the input.
  if (std::abs(esv * np - total) > 1e-10 * (1.0 + std::abs(total))) {
    throw std::logic_error(
        "is_synchronous: entangled-vector route disagrees with the coefficient sum by " +
        std::to_string(std::abs(esv * np - total)));
  }
  return std::abs(total - Complex(np, 0.0)) <= tol;
}

CorrelationTensor correlation_from_state_formula(const QuantumFamily& F, const Matrix& rho) {
  const int d = F.d();
  if (rho.rows() != d || rho.cols() != d) {
    throw ShapeError("correlation_from_state_formula: state must be " + std::to_string(d) + "x" +
                     std::to_string(d));
  }
  const QuantumSpace& P = F.question_space();
  const QuantumSpace& O = F.answer_space();
  CorrelationTensor T(P, O);
  std::vector<Matrix> left;  // rho * gen
  for_each_generator(O, P, [&](int k, int l, int i, int j, int s, int t) {
    left.push_back(rho * F.gen(k, l, i, j, s, t));
  });
  std::size_t a = 0;
  for_each_generator(O, P, [&](int k, int l, int i, int j, int s, int t) {
    for_each_generator(O, P, [&](int kp, int lp, int ip, int jp, int sp, int tp) {
      // Second factor in the pairing: the (kp, lp) generator with both of
      // its index pairs transposed.
      T.at(k, kp, l, lp, i, j, ip, jp, s, t, sp, tp) =
          left[a].transpose().cwiseProduct(F.gen(kp, lp, jp, ip, tp, sp)).sum();
    });
    ++a;
  });
  return T;
}

CorrelationTensor correlation_from_trace(const QuantumFamily& F, const Matrix& tau, double tol) {
  const int d = F.d();
  if (tau.rows() != d || tau.cols() != d) {
    throw ShapeError("correlation_from_trace: state must be " + std::to_string(d) + "x" +
                     std::to_string(d));
  }
  const double trdev = std::abs(tau.trace() - Complex(1.0, 0.0));
  if (trdev > tol) {
    throw PreconditionError("correlation_from_trace: state trace deviates from 1 by " +
                            std::to_string(trdev));
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (tau + tau.adjoint()), Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -tol * (1.0 + tau.cwiseAbs().maxCoeff())) {
    throw PreconditionError("correlation_from_trace: state is not positive semidefinite");
  }

  std::vector<Matrix> gens;
  for_each_generator(F.answer_space(), F.question_space(),
                     [&](int k, int l, int i, int j, int s, int t) {
                       gens.push_back(F.gen(k, l, i, j, s, t));
                     });
  const std::vector<Matrix> basis = multiplicative_closure(gens, d, d * d);
  std::pair<int, int> worst{0, 0};
  const double defect = trace_defect_on_basis(tau, basis, &worst);
  if (defect > tol) {
    throw PreconditionError(
        "correlation_from_trace: state is not tracial on the generated algebra; "
        "|tau(ab) - tau(ba)| = " +
        std::to_string(defect) + " at basis pair (" + std::to_string(worst.first) + ", " +
        std::to_string(worst.second) + ") of a closure of dimension " +
        std::to_string(basis.size()));
  }
  return correlation_from_state_formula(F, tau);
}

CorrelationTensor correlation_from_trace(const QuantumFamily& F, double tol) {
  const int d = F.d();
  return correlation_from_trace(F, Matrix::Identity(d, d) / static_cast<double>(d), tol);
}

double hermiticity_residual(const CorrelationTensor& T) {
  const QuantumSpace& P = T.question_space();
  const QuantumSpace& O = T.answer_space();
  double r = 0.0;
  for (int k = 0; k < O.block_count(); ++k) {
    for (int kp = 0; kp < O.block_count(); ++kp) {
      for (int l = 0; l < P.block_count(); ++l) {
        for (int lp = 0; lp < P.block_count(); ++lp) {
          for (int i = 0; i < O.block_dim(k); ++i) {
            for (int j = 0; j < O.block_dim(k); ++j) {
              for (int ip = 0; ip < O.block_dim(kp); ++ip) {
                for (int jp = 0; jp < O.block_dim(kp); ++jp) {
                  for (int s = 0; s < P.block_dim(l); ++s) {
                    for (int t = 0; t < P.block_dim(l); ++t) {
                      for (int sp = 0; sp < P.block_dim(lp); ++sp) {
                        for (int tp = 0; tp < P.block_dim(lp); ++tp) {
                          const Complex lhs =
                              std::conj(T.at(k, kp, l, lp, i, j, ip, jp, s, t, sp, tp));
                          const Complex rhs = T.at(k, kp, l, lp, j, i, jp, ip, t, s, tp, sp);
                          r = std::max(r, std::abs(lhs - rhs));
                        }
                      }
                    }
                  }
                }
              }
            }
          }
        }
      }
    }
  }
  return r;
}

double ClassicalTable::at(int k, int kp, int l, int lp) const {
  const std::size_t idx =
      ((static_cast<std::size_t>(k) * n_answers + kp) * n_questions + l) * n_questions + lp;
  return p[idx];
}

ClassicalTable classical_table(const CorrelationTensor& T, double tol) {
  const QuantumSpace& P = T.question_space();
  const QuantumSpace& O = T.answer_space();
  if (!P.is_classical() || !O.is_classical()) {
    throw ShapeError("classical_table: both spaces must be classical (all blocks of dimension 1)");
  }
  const int NO = O.block_count();
  const int NP = P.block_count();
  ClassicalTable table;
  table.n_answers = NO;
  table.n_questions = NP;
  table.p.assign(static_cast<std::size_t>(NO) * NO * NP * NP, 0.0);
  for (int k = 0; k < NO; ++k) {
    for (int kp = 0; kp < NO; ++kp) {
      for (int l = 0; l < NP; ++l) {
        for (int lp = 0; lp < NP; ++lp) {
          const Complex v = T.at(k, kp, l, lp, 0, 0, 0, 0, 0, 0, 0, 0);
          table.imag_defect = std::max(table.imag_defect, std::abs(v.imag()));
          const double re = v.real();
          if (re < 0.0) table.negativity = std::max(table.negativity, -re);
          table.p[((static_cast<std::size_t>(k) * NO + kp) * NP + l) * NP + lp] = re;
        }
      }
    }
  }

  for (int l = 0; l < NP; ++l) {
    for (int lp = 0; lp < NP; ++lp) {
      double sum = 0.0;
      for (int k = 0; k < NO; ++k) {
        for (int kp = 0; kp < NO; ++kp) sum += table.at(k, kp, l, lp);
      }
      table.normalization_defect = std::max(table.normalization_defect, std::abs(sum - 1.0));
    }
  }

  // Row marginal p_A(k|l) must not depend on l', and symmetrically.
  table.marginal_row.assign(static_cast<std::size_t>(NO) * NP, 0.0);
  table.marginal_col.assign(static_cast<std::size_t>(NO) * NP, 0.0);
  for (int k = 0; k < NO; ++k) {
    for (int l = 0; l < NP; ++l) {
      double first = 0.0;
      for (int lp = 0; lp < NP; ++lp) {
        double m = 0.0;
        for (int kp = 0; kp < NO; ++kp) m += table.at(k, kp, l, lp);
        if (lp == 0) first = m;
        table.marginal_dependence = std::max(table.marginal_dependence, std::abs(m - first));
        table.marginal_row[static_cast<std::size_t>(k) * NP + l] += m / NP;
      }
    }
  }
  for (int kp = 0; kp < NO; ++kp) {
    for (int lp = 0; lp < NP; ++lp) {
      double first = 0.0;
      for (int l = 0; l < NP; ++l) {
        double m = 0.0;
        for (int k = 0; k < NO; ++k) m += table.at(k, kp, l, lp);
        if (l == 0) first = m;
        table.marginal_dependence = std::max(table.marginal_dependence, std::abs(m - first));
        table.marginal_col[static_cast<std::size_t>(kp) * NP + lp] += m / NP;
      }
    }
  }
  (void)tol;
  return table;
}

std::string classical_table_csv(const ClassicalTable& table) {
  std::string out = "k,k',l,l',p\n";
  char buf[96];
  for (int k = 0; k < table.n_answers; ++k) {
    for (int kp = 0; kp < table.n_answers; ++kp) {
      for (int l = 0; l < table.n_questions; ++l) {
        for (int lp = 0; lp < table.n_questions; ++lp) {
          std::snprintf(buf, sizeof(buf), "%d,%d,%d,%d,%.17g\n", k, kp, l, lp,
                        table.at(k, kp, l, lp));
          out += buf;
        }
      }
    }
  }
  return out;
}

CorrelationTensor correlation_from_classical_table(const QuantumSpace& P, const QuantumSpace& O,
                                                   const std::vector<double>& p) {
  if (!P.is_classical() || !O.is_classical()) {
    throw ShapeError("correlation_from_classical_table: both spaces must be classical");
  }
  const int NO = O.block_count();
  const int NP = P.block_count();
  if (p.size() != static_cast<std::size_t>(NO) * NO * NP * NP) {
    throw ShapeError("correlation_from_classical_table: table has " + std::to_string(p.size()) +
                     " entries, expected " + std::to_string(static_cast<long>(NO) * NO * NP * NP));
  }
  CorrelationTensor T(P, O);
  for (int k = 0; k < NO; ++k) {
    for (int kp = 0; kp < NO; ++kp) {
      for (int l = 0; l < NP; ++l) {
        for (int lp = 0; lp < NP; ++lp) {
          T.at(k, kp, l, lp, 0, 0, 0, 0, 0, 0, 0, 0) =
              p[((static_cast<std::size_t>(k) * NO + kp) * NP + l) * NP + lp];
        }
      }
    }
  }
  return T;
}

Realization deterministic_realization(const QuantumSpace& P, const QuantumSpace& O,
                                      const std::vector<int>& answer) {
  if (!P.is_classical() || !O.is_classical()) {
    throw ShapeError("deterministic_realization: both spaces must be classical");
  }
  if (answer.size() != static_cast<std::size_t>(P.block_count())) {
    throw ShapeError("deterministic_realization: need one answer per question, got " +
                     std::to_string(answer.size()));
  }
  QuantumFamily F(P, O, 1);
  for (int l = 0; l < P.block_count(); ++l) {
    const int k = answer[static_cast<std::size_t>(l)];
    if (k < 0 || k >= O.block_count()) {
      throw ShapeError("deterministic_realization: answer " + std::to_string(k) +
                       " out of range for question " + std::to_string(l));
    }
    F.gen(k, l, 0, 0, 0, 0)(0, 0) = 1.0;
  }
  Vector xi(1);
  xi[0] = 1.0;
  return Realization{F, F, xi};
}

}  // namespace qcorr
