#include "qcorr/cpmap.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <random>

namespace {

using qcorr::AlgebraElement;
using qcorr::BlockLinearMap;
using qcorr::Complex;
using qcorr::Matrix;
using qcorr::QuantumSpace;

// x -> x^T on a single block.
BlockLinearMap transpose_map(int n) {
  const QuantumSpace s({n});
  BlockLinearMap m(s, s);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m.image(0, i, j) = qcorr::matrix_unit(s, 0, j, i);
  }
  return m;
}

// x -> (x + u x u^*) / 2 for a fixed unitary u, unital and completely
// positive but not multiplicative.
BlockLinearMap mixing_map(int n, const Matrix& u) {
  const QuantumSpace s({n});
  BlockLinearMap m(s, s);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      AlgebraElement img(s);
      Matrix e = Matrix::Zero(n, n);
      e(i, j) = 1.0;
      img.block(0) = 0.5 * (e + u * e * u.adjoint());
      m.image(0, i, j) = img;
    }
  }
  return m;
}

Eigen::VectorXd sorted_hermitian_eigs(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

}  // namespace

TEST_SUITE("cpmap") {

TEST_CASE("choi of the identity is twice the entangled projector") {
  const QuantumSpace s({2});
  const BlockLinearMap id = BlockLinearMap::identity(s);
  const std::vector<Matrix> choi = qcorr::choi_blocks(id);
  REQUIRE(choi.size() == 1);
  REQUIRE(choi[0].rows() == 4);

  Matrix want = Matrix::Zero(4, 4);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) want(i * 2 + i, j * 2 + j) = 1.0;
  }
  CHECK((choi[0] - want).cwiseAbs().maxCoeff() == 0.0);

  const Eigen::VectorXd eigs = sorted_hermitian_eigs(choi[0]);
  CHECK(std::abs(eigs[0]) < 1e-12);
  CHECK(eigs[3] == doctest::Approx(2.0));
}

TEST_CASE("choi of the transpose is the swap with eigenvalue -1") {
  const std::vector<Matrix> choi = qcorr::choi_blocks(transpose_map(2));
  REQUIRE(choi.size() == 1);
  const Eigen::VectorXd eigs = sorted_hermitian_eigs(choi[0]);
  // Swap operator: eigenvalues -1, 1, 1, 1.
  CHECK(std::abs(eigs[0] + 1.0) < 1e-12);
  CHECK(std::abs(eigs[1] - 1.0) < 1e-12);
  CHECK(std::abs(eigs[3] - 1.0) < 1e-12);

  const qcorr::UcpReport rep = qcorr::is_ucp(transpose_map(2));
  CHECK_FALSE(rep.pass);
  CHECK(rep.min_choi_eigenvalue == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(rep.unitality_defect < 1e-15);  // transposing preserves the unit
}

TEST_CASE("zero map has zero choi blocks") {
  const QuantumSpace s({2, 1});
  const BlockLinearMap zero(s, s);
  for (const Matrix& c : qcorr::choi_blocks(zero)) CHECK(c.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("identity maps pass every test") {
  const QuantumSpace s({2, 3});
  const BlockLinearMap id = BlockLinearMap::identity(s);
  CHECK(qcorr::is_ucp(id).pass);
  const qcorr::HomReport hom = qcorr::is_star_homomorphism(id);
  CHECK(hom.pass);
  CHECK(hom.unitality_defect == 0.0);
  CHECK(hom.multiplicativity_defect == 0.0);
}

TEST_CASE("transpose is positive on units but not multiplicative") {
  const qcorr::HomReport hom = qcorr::is_star_homomorphism(transpose_map(2));
  CHECK_FALSE(hom.pass);
  CHECK(hom.multiplicativity_defect == doctest::Approx(1.0));
}

TEST_CASE("unitary mixing is ucp but not a homomorphism") {
  Matrix u(2, 2);
  u << Complex(0, 0), Complex(1, 0), Complex(1, 0), Complex(0, 0);
  const BlockLinearMap m = mixing_map(2, u);
  CHECK(qcorr::is_ucp(m).pass);
  CHECK_FALSE(qcorr::is_star_homomorphism(m).pass);

  // Conjugation by u is an automorphism, so the transpose composed with it
  // keeps its Choi eigenvalue -1.
  const QuantumSpace s({2});
  BlockLinearMap conj(s, s);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      AlgebraElement img(s);
      Matrix e = Matrix::Zero(2, 2);
      e(i, j) = 1.0;
      img.block(0) = u * e * u.adjoint();
      conj.image(0, i, j) = img;
    }
  }
  const BlockLinearMap bad = compose(transpose_map(2), conj);
  const qcorr::UcpReport rep = qcorr::is_ucp(bad);
  CHECK_FALSE(rep.pass);
  CHECK(rep.min_choi_eigenvalue == doctest::Approx(-1.0));

  // Averaging the conjugation with the identity channel first restores
  // complete positivity of the composition.
  CHECK(qcorr::is_ucp(compose(transpose_map(2), m)).pass);
}

TEST_CASE("block embeddings are homomorphisms and compose") {
  // C([2]) -> C([2,2]) by repeating the block.
  const QuantumSpace dom({2});
  const QuantumSpace cod({2, 2});
  BlockLinearMap embed(dom, cod);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      AlgebraElement img(cod);
      img.block(0)(i, j) = 1.0;
      img.block(1)(i, j) = 1.0;
      embed.image(0, i, j) = img;
    }
  }
  CHECK(qcorr::is_star_homomorphism(embed).pass);
  CHECK(qcorr::is_ucp(embed).pass);

  const BlockLinearMap composed = compose(embed, BlockLinearMap::identity(dom));
  std::mt19937_64 rng(3);
  AlgebraElement x(dom);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) {
      const double re = g(rng);
      const double im = g(rng);
      x.block(0)(r, c) = Complex(re, im);
    }
  }
  CHECK((composed.apply(x) - embed.apply(x)).max_abs() < 1e-14);
  CHECK(qcorr::is_ucp(composed).pass);
}

TEST_CASE("apply is linear and respects block structure") {
  const QuantumSpace s({2, 1});
  const BlockLinearMap id = BlockLinearMap::identity(s);
  AlgebraElement x(s);
  x.block(0) << Complex(1, 2), Complex(0, -1), Complex(3, 0), Complex(0, 0);
  x.block(1) << Complex(-2, 1);
  const AlgebraElement y = id.apply(x);
  CHECK((y - x).max_abs() < 1e-15);
  const AlgebraElement z = id.apply(Complex(2.0, 0.0) * x + x);
  CHECK((z - (Complex(3.0, 0.0) * x)).max_abs() < 1e-15);
}

TEST_CASE("traciality of state functionals") {
  const QuantumSpace s({2, 3});
  CHECK(qcorr::is_tracial(qcorr::StateFunctional::tracial(s)));

  AlgebraElement biased(s);
  biased.block(0) << 0.9, 0.0, 0.0, 0.1;
  biased.block(1) = Matrix::Zero(3, 3);
  CHECK_FALSE(qcorr::is_tracial(qcorr::StateFunctional(biased)));

  // Off-diagonal density blocks are not tracial either.
  AlgebraElement offdiag(s);
  offdiag.block(0) << 0.5, 0.2, 0.2, 0.5;
  offdiag.block(1) = Matrix::Zero(3, 3);
  CHECK_FALSE(qcorr::is_tracial(qcorr::StateFunctional(offdiag)));
}

}  // TEST_SUITE
