#include "qcorr/sync.hpp"

#include "qcorr/matrix_span.hpp"

#include <cmath>
#include <utility>

namespace qcorr {

namespace {

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

void require_valid(const QuantumFamily& F, double tol, const char* who) {
  const FamilyReport rep = validate_family(F, tol);
  if (!rep.pass) {
    throw PreconditionError(std::string(who) +
                            ": family fails the generator relations; residuals adjoint " +
                            std::to_string(rep.adjoint_residual) + ", product " +
                            std::to_string(rep.product_residual) + ", unitality " +
                            std::to_string(rep.unitality_residual) + ", block aggregate " +
                            std::to_string(rep.block_sum_residual));
  }
}

}  // namespace

Realization gns_realization_from_trace(const QuantumFamily& F, double tol) {
  require_valid(F, tol, "gns_realization_from_trace");
  const QuantumSpace& P = F.question_space();
  const QuantumSpace& O = F.answer_space();
  const int d = F.d();
  const Matrix eye = Matrix::Identity(d, d);

  QuantumFamily phi1(P, O, d * d);
  QuantumFamily phi2(P, O, d * d);
  for_each_generator(O, P, [&](int k, int l, int i, int j, int s, int t) {
    phi1.gen(k, l, i, j, s, t) = kron(F.gen(k, l, i, j, s, t), eye);
    phi2.gen(k, l, i, j, s, t) = kron(eye, F.gen(k, l, j, i, t, s).transpose());
  });

  Vector xi = Vector::Zero(static_cast<Eigen::Index>(d) * d);
  const double amp = 1.0 / std::sqrt(static_cast<double>(d));
  for (int a = 0; a < d; ++a) xi[static_cast<Eigen::Index>(a) * d + a] = amp;

  return Realization{std::move(phi1), std::move(phi2), std::move(xi)};
}

std::vector<Matrix> algebra_closure(const std::vector<Matrix>& gens, int d, int cap) {
  return multiplicative_closure(gens, d, cap);
}

double trace_check_on_algebra(const Matrix& rho, const std::vector<Matrix>& basis,
                              std::pair<int, int>* worst) {
  return trace_defect_on_basis(rho, basis, worst);
}

double trace_check_on_algebra(const Vector& xi, const std::vector<Matrix>& basis,
                              std::pair<int, int>* worst) {
  return trace_defect_on_basis(xi, basis, worst);
}

SyncReport analyze_synchronous_realization(const Realization& R, double tol) {
  require_valid(R.phi1, tol, "analyze_synchronous_realization (first family)");
  require_valid(R.phi2, tol, "analyze_synchronous_realization (second family)");
  if (!R.has_vector_state()) {
    throw PreconditionError(
        "analyze_synchronous_realization: a vector state is required; purify the density "
        "matrix first");
  }

  SyncReport rep;
  rep.tol = tol;
  const CorrelationTensor T = correlation_from_realization(R, tol);
  rep.sync_defect = sync_defect(T);
  rep.synchronous = rep.sync_defect <= tol;
  if (!rep.synchronous) return rep;
  rep.checks_run = true;

  const QuantumSpace& P = R.phi1.question_space();
  const QuantumSpace& O = R.phi1.answer_space();
  const Vector& xi = R.xi();

  // The state sends each second-leg generator to the adjoint of its
  // first-leg partner.
  std::vector<Vector> left;  // gen1^* xi, reused for reconstruction below
  for_each_generator(O, P, [&](int k, int l, int i, int j, int s, int t) {
    const Vector u_adj_xi = R.phi1.gen(k, l, i, j, s, t).adjoint() * xi;
    const Vector w_xi = R.phi2.gen(k, l, i, j, s, t) * xi;
    rep.wu_residual = std::max(rep.wu_residual, (w_xi - u_adj_xi).norm());
    left.push_back(u_adj_xi);
  });
  rep.vector_state_transfer = rep.wu_residual <= tol;

  std::vector<Matrix> u_gens;
  std::vector<Matrix> w_gens;
  for_each_generator(O, P, [&](int k, int l, int i, int j, int s, int t) {
    u_gens.push_back(R.phi1.gen(k, l, i, j, s, t));
    w_gens.push_back(R.phi2.gen(k, l, i, j, s, t));
  });
  const int d = R.phi1.d();
  const std::vector<Matrix> u_basis = multiplicative_closure(u_gens, d, d * d);
  const std::vector<Matrix> w_basis = multiplicative_closure(w_gens, d, d * d);
  rep.u_traciality_residual = trace_defect_on_basis(xi, u_basis);
  rep.w_traciality_residual = trace_defect_on_basis(xi, w_basis);
  rep.traciality_residual = std::max(rep.u_traciality_residual, rep.w_traciality_residual);
  rep.u_algebra_tracial = rep.u_traciality_residual <= tol;
  rep.w_algebra_tracial = rep.w_traciality_residual <= tol;

  // The tensor must match the trace-formula pairing on the first family
  // alone: <xi, U (U')^* xi> = <U^* xi, (U')^* xi>.
  std::size_t a = 0;
  for_each_generator(O, P, [&](int k, int l, int i, int j, int s, int t) {
    std::size_t b = 0;
    for_each_generator(O, P, [&](int kp, int lp, int ip, int jp, int sp, int tp) {
      const Complex want = left[a].dot(left[b]);
      const Complex got = T.at(k, kp, l, lp, i, j, ip, jp, s, t, sp, tp);
      rep.reconstruction_residual = std::max(rep.reconstruction_residual, std::abs(got - want));
      ++b;
    });
    ++a;
  });
  rep.reconstruction_ok = rep.reconstruction_residual <= tol;

  return rep;
}

}  // namespace qcorr
