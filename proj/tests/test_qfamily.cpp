#include "qcorr/qfamily.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace {

using qcorr::AlgebraElement;
using qcorr::BlockLinearMap;
using qcorr::Complex;
using qcorr::Matrix;
using qcorr::QuantumFamily;
using qcorr::QuantumSpace;

// O = [n], P = [1], d = n, Phi = id : C(O) -> M_n.
QuantumFamily identity_family(int n) {
  QuantumFamily F(QuantumSpace({1}), QuantumSpace({n}), n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) F.gen(0, 0, i, j, 0, 0)(i, j) = 1.0;
  }
  return F;
}

// O = [1]: the unique map collapses everything onto the unit.
QuantumFamily onepoint_family(const QuantumSpace& P, int d) {
  QuantumFamily F(P, QuantumSpace({1}), d);
  for (int l = 0; l < P.block_count(); ++l) {
    for (int s = 0; s < P.block_dim(l); ++s) {
      F.gen(0, l, 0, 0, s, s) = Matrix::Identity(d, d);
    }
  }
  return F;
}

// P = [2], O = [1, 1], d = 1, assembled images A and I - A with A Hermitian
// and diag(A^2) = diag(A) but A not a projection. Adjoint symmetry, the
// diagonal product relation, unitality, and the block aggregate all hold;
// the full product relation does not.
QuantumFamily near_projection_family() {
  QuantumFamily F(QuantumSpace({2}), QuantumSpace({1, 1}), 1);
  const double h = std::sqrt(3.0) / 4.0;
  Matrix a(2, 2);
  a << 0.25, h, h, 0.25;
  for (int s = 0; s < 2; ++s) {
    for (int t = 0; t < 2; ++t) {
      F.gen(0, 0, 0, 0, s, t)(0, 0) = a(s, t);
      F.gen(1, 0, 0, 0, s, t)(0, 0) = (s == t ? 1.0 : 0.0) - a(s, t);
    }
  }
  return F;
}

// e_ij -> (e_ij (x) I_2) (+) e_ij, a unital embedding of M_2 into
// M_4 (+) M_2 whose relative commutant has dimension 2^2 + 1^2 = 5.
BlockLinearMap m2_embedding(bool conjugate, std::uint64_t seed) {
  const QuantumSpace dom({2});
  const QuantumSpace cod({4, 2});
  std::mt19937_64 rng(seed);
  const Matrix u0 = conjugate ? qcorr::haar_unitary(4, rng) : Matrix::Identity(4, 4);
  const Matrix u1 = conjugate ? qcorr::haar_unitary(2, rng) : Matrix::Identity(2, 2);
  BlockLinearMap m(dom, cod);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      Matrix e = Matrix::Zero(2, 2);
      e(i, j) = 1.0;
      AlgebraElement img(cod);
      img.block(0) = u0 * qcorr::kron(e, Matrix::Identity(2, 2)) * u0.adjoint();
      img.block(1) = u1 * e * u1.adjoint();
      m.image(0, i, j) = img;
    }
  }
  return m;
}

}  // namespace

TEST_SUITE("qfamily") {

TEST_CASE("one-point families are exactly valid") {
  const QuantumFamily F = onepoint_family(QuantumSpace({2, 1}), 3);
  const qcorr::FamilyReport rep = qcorr::validate_family(F);
  CHECK(rep.pass);
  CHECK(rep.adjoint_residual == 0.0);
  CHECK(rep.product_residual == 0.0);
  CHECK(rep.unitality_residual == 0.0);
  CHECK(rep.block_sum_residual == 0.0);
}

TEST_CASE("the identity family is exactly valid") {
  const QuantumFamily F = identity_family(3);
  const qcorr::FamilyReport rep = qcorr::validate_family(F);
  CHECK(rep.pass);
  CHECK(rep.product_residual == 0.0);
  CHECK(qcorr::is_star_homomorphism(qcorr::induced_map(F)).pass);
}

TEST_CASE("the diagonal product relation alone does not certify a homomorphism") {
  const QuantumFamily F = near_projection_family();
  const qcorr::FamilyReport rep = qcorr::validate_family(F);

  // Everything except the full product relation is satisfied.
  CHECK(rep.adjoint_residual == 0.0);
  CHECK(rep.reads_residual < 1e-15);
  CHECK(rep.unitality_residual == 0.0);
  CHECK(rep.block_sum_residual < 1e-15);

  CHECK_FALSE(rep.pass);
  CHECK(rep.product_residual == doctest::Approx(std::sqrt(3.0) / 8.0));

  // Cross-check through the generic homomorphism test on the induced map.
  CHECK_FALSE(qcorr::is_star_homomorphism(qcorr::induced_map(F)).pass);
}

TEST_CASE("a perturbed generator is caught and named") {
  QuantumFamily F = identity_family(2);
  F.gen(0, 0, 0, 1, 0, 0)(0, 0) += Complex(0.0, 1e-3);
  const qcorr::FamilyReport rep = qcorr::validate_family(F);
  CHECK_FALSE(rep.pass);
  CHECK(rep.adjoint_residual == doctest::Approx(1e-3));
  CHECK(rep.adjoint_worst == std::array<int, 6>{0, 0, 0, 1, 0, 0});
  CHECK_FALSE(qcorr::is_star_homomorphism(qcorr::induced_map(F)).pass);
}

TEST_CASE("random families are deterministic in the seed and validate") {
  const QuantumSpace P({2, 1});
  const QuantumSpace O({2, 1});
  const QuantumFamily a = qcorr::random_family(P, O, 4, 99);
  const QuantumFamily b = qcorr::random_family(P, O, 4, 99);
  const QuantumFamily c = qcorr::random_family(P, O, 4, 100);
  CHECK(a == b);
  CHECK_FALSE(a == c);

  const qcorr::FamilyReport rep = qcorr::validate_family(a);
  CHECK(rep.pass);
  CHECK(rep.adjoint_residual <= 1e-10);
  CHECK(rep.product_residual <= 1e-10);
  CHECK(rep.unitality_residual <= 1e-10);
  CHECK(rep.block_sum_residual <= 1e-10);
  CHECK(qcorr::validate_povm(a).pass);  // homomorphism level implies POVM level
}

TEST_CASE("random classical families are deterministic answer assignments") {
  const QuantumSpace P({1, 1});
  const QuantumSpace O({1, 1});
  const QuantumFamily F = qcorr::random_family(P, O, 1, 5);
  CHECK(qcorr::validate_family(F).pass);
  // The 1x1 blocks are conjugated by a phase, so the entries are the
  // answer indicators only to rounding.
  for (int l = 0; l < 2; ++l) {
    Complex sum = 0.0;
    int ones = 0;
    for (int k = 0; k < 2; ++k) {
      const Complex v = F.gen(k, l, 0, 0, 0, 0)(0, 0);
      const bool near0 = std::abs(v) <= 1e-12;
      const bool near1 = std::abs(v - Complex(1.0)) <= 1e-12;
      CHECK((near0 || near1));
      if (near1) ++ones;
      sum += v;
    }
    CHECK(ones == 1);
    CHECK(std::abs(sum - Complex(1.0)) <= 1e-12);
  }
}

TEST_CASE("unsatisfiable multiplicities are rejected with the equation") {
  try {
    qcorr::random_family(QuantumSpace({1}), QuantumSpace({2}), 3, 0);
    FAIL("expected ShapeError");
  } catch (const qcorr::ShapeError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("question block 0") != std::string::npos);
    CHECK(msg.find("2*c0") != std::string::npos);
  }
}

TEST_CASE("pullback by identity morphisms is the identity") {
  const QuantumFamily F = qcorr::random_family(QuantumSpace({2}), QuantumSpace({2}), 2, 17);
  const BlockLinearMap rho = BlockLinearMap::identity(F.question_space());
  const BlockLinearMap pi = BlockLinearMap::identity(F.answer_space());
  const QuantumFamily G = qcorr::pullback_family(rho, pi, F);
  double diff = 0.0;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      for (int s = 0; s < 2; ++s) {
        for (int t = 0; t < 2; ++t) {
          diff = std::max(diff,
                          (G.gen(0, 0, i, j, s, t) - F.gen(0, 0, i, j, s, t)).cwiseAbs().maxCoeff());
        }
      }
    }
  }
  CHECK(diff <= 1e-12);
  CHECK(qcorr::validate_family(G).pass);
}

TEST_CASE("pullback along a diagonal embedding restricts the answers") {
  // pi : C([1,1]) -> C([2]) sends the two points to the diagonal units.
  const QuantumSpace o1({1, 1});
  const QuantumSpace o2({2});
  BlockLinearMap pi(o1, o2);
  for (int k = 0; k < 2; ++k) {
    AlgebraElement img(o2);
    img.block(0)(k, k) = 1.0;
    pi.image(k, 0, 0) = img;
  }
  REQUIRE(qcorr::is_star_homomorphism(pi).pass);

  const QuantumFamily F = identity_family(2);
  const BlockLinearMap rho = BlockLinearMap::identity(F.question_space());
  const QuantumFamily G = qcorr::pullback_family(rho, pi, F);
  CHECK(G.answer_space() == o1);
  // The pulled-back generators are the diagonal units of M_2.
  for (int k = 0; k < 2; ++k) {
    Matrix want = Matrix::Zero(2, 2);
    want(k, k) = 1.0;
    CHECK((G.gen(k, 0, 0, 0, 0, 0) - want).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("pullback rejects non-homomorphisms") {
  const QuantumFamily F = identity_family(2);
  BlockLinearMap bad(F.answer_space(), F.answer_space());
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) bad.image(0, i, j) = qcorr::matrix_unit(F.answer_space(), 0, j, i);
  }
  const BlockLinearMap rho = BlockLinearMap::identity(F.question_space());
  CHECK_THROWS_AS(qcorr::pullback_family(rho, bad, F), qcorr::PreconditionError);
}

TEST_CASE("split and merge invert each other bit for bit") {
  const QuantumSpace P({2, 1, 1});
  const QuantumSpace O({2, 1});
  const QuantumFamily F = qcorr::random_family(P, O, 4, 23);
  const auto [front, back] = qcorr::split_family(F, 1);
  CHECK(front.question_space() == QuantumSpace({2}));
  CHECK(back.question_space() == QuantumSpace({1, 1}));
  const QuantumFamily G = qcorr::merge_family(front, back);
  CHECK(G == F);
}

TEST_CASE("the opposite family is a validity-preserving involution") {
  const QuantumFamily F = qcorr::random_family(QuantumSpace({2, 1}), QuantumSpace({2, 1}), 4, 31);
  const QuantumFamily op = qcorr::opposite_family(F);
  CHECK(qcorr::validate_family(op).pass);
  CHECK(qcorr::opposite_family(op) == F);

  // d = 1 classical strategies are their own opposite.
  const QuantumFamily cl = qcorr::random_family(QuantumSpace({1, 1}), QuantumSpace({1, 1}), 1, 2);
  CHECK(qcorr::opposite_family(cl) == cl);
}

TEST_CASE("second-leg commutation") {
  const QuantumFamily F = identity_family(2);
  CHECK_FALSE(qcorr::commutes_second_leg(F, F).pass);

  const QuantumFamily cl = qcorr::random_family(QuantumSpace({1, 1}), QuantumSpace({1, 1}), 1, 2);
  CHECK(qcorr::commutes_second_leg(cl, cl).pass);  // scalars always commute

  // Lift two copies onto separate tensor legs.
  QuantumFamily left(F.question_space(), F.answer_space(), 4);
  QuantumFamily right(F.question_space(), F.answer_space(), 4);
  const Matrix eye = Matrix::Identity(2, 2);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      left.gen(0, 0, i, j, 0, 0) = qcorr::kron(F.gen(0, 0, i, j, 0, 0), eye);
      right.gen(0, 0, i, j, 0, 0) = qcorr::kron(eye, F.gen(0, 0, i, j, 0, 0));
    }
  }
  const qcorr::CommutationReport rep = qcorr::commutes_second_leg(left, right);
  CHECK(rep.pass);
  CHECK(rep.max_commutator == 0.0);
}

TEST_CASE("slice spans") {
  const qcorr::SliceSpan full = qcorr::slice_span(identity_family(2));
  CHECK(full.dimension == 4);
  CHECK(full.adjoint_residual < 1e-12);
  CHECK(full.unit_residual < 1e-12);

  const qcorr::SliceSpan tiny = qcorr::slice_span(onepoint_family(QuantumSpace({2}), 3));
  CHECK(tiny.dimension == 1);
  CHECK(tiny.unit_residual < 1e-12);
}

TEST_CASE("haar unitaries are unitary and seeded") {
  std::mt19937_64 rng(77);
  const Matrix u = qcorr::haar_unitary(5, rng);
  CHECK((u.adjoint() * u - Matrix::Identity(5, 5)).cwiseAbs().maxCoeff() < 1e-12);
  std::mt19937_64 rng2(77);
  const Matrix v = qcorr::haar_unitary(5, rng2);
  CHECK((u - v).cwiseAbs().maxCoeff() == 0.0);

  std::mt19937_64 rng3(1);
  const Matrix w = qcorr::haar_unitary(1, rng3);
  CHECK(std::abs(std::abs(w(0, 0)) - 1.0) < 1e-14);
}

TEST_CASE("full matrix algebras have trivial relative commutant") {
  for (int n = 1; n <= 4; ++n) {
    const QuantumSpace s({n});
    const qcorr::PisierDecomposition dec =
        qcorr::pisier_decompose(BlockLinearMap::identity(s));
    CHECK(dec.n == n);
    CHECK(dec.commutant_dim == 1);
    CHECK(dec.dimension_identity);
    CHECK(std::abs(dec.gamma_min_singular - 1.0 / std::sqrt(double(n))) < 1e-8);
    CHECK(dec.multiplicativity_residual < 1e-10);
    // The commutant of everything is scalar.
    const Matrix b = dec.commutant_basis[0].block(0);
    CHECK((b - (b.trace() / double(n)) * Matrix::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("splitting M_4 (+) M_2 along an embedded M_2") {
  for (const bool conjugate : {false, true}) {
    CAPTURE(conjugate);
    const BlockLinearMap em = m2_embedding(conjugate, 1234);
    const qcorr::PisierDecomposition dec = qcorr::pisier_decompose(em);
    CHECK(dec.n == 2);
    CHECK(dec.commutant_dim == 5);  // 2^2 + 1^2 from multiplicities (2, 1)
    CHECK(dec.dimension_identity);
    CHECK(std::abs(dec.gamma_min_singular - 1.0 / std::sqrt(2.0)) < 1e-8);
    CHECK(dec.multiplicativity_residual < 1e-10);
  }
}

TEST_CASE("pisier rejects non-homomorphic embeddings") {
  const QuantumSpace s({2});
  BlockLinearMap bad(s, s);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) bad.image(0, i, j) = qcorr::matrix_unit(s, 0, j, i);
  }
  CHECK_THROWS_AS(qcorr::pisier_decompose(bad), qcorr::PreconditionError);
}

TEST_CASE("components reassemble the decomposition") {
  const BlockLinearMap em = m2_embedding(true, 555);
  const qcorr::PisierDecomposition dec = qcorr::pisier_decompose(em);

  // Gamma(e_ij (x) b) has (i, j) component b and no others.
  const AlgebraElement& b = dec.commutant_basis[2];
  const AlgebraElement c = em.image(0, 0, 1) * b;
  CHECK((qcorr::pisier_component(em, c, 0, 1) - b).max_abs() < 1e-10);
  CHECK(qcorr::pisier_component(em, c, 1, 0).max_abs() < 1e-10);

  // A generic element is the sum of its reassembled components.
  std::mt19937_64 rng(8);
  std::normal_distribution<double> g(0.0, 1.0);
  AlgebraElement x(em.cod());
  for (int k = 0; k < em.cod().block_count(); ++k) {
    for (int r = 0; r < em.cod().block_dim(k); ++r) {
      for (int cc = 0; cc < em.cod().block_dim(k); ++cc) {
        const double re = g(rng);
        const double im = g(rng);
        x.block(k)(r, cc) = Complex(re, im);
      }
    }
  }
  AlgebraElement rebuilt(em.cod());
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      rebuilt += em.image(0, i, j) * qcorr::pisier_component(em, x, i, j);
    }
  }
  CHECK((rebuilt - x).max_abs() < 1e-10);
}

}  // TEST_SUITE
