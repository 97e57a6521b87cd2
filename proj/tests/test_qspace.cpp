#include "qcorr/qspace.hpp"

#include <doctest.h>

#include <random>

namespace {

using qcorr::AlgebraElement;
using qcorr::Complex;
using qcorr::Matrix;
using qcorr::QuantumSpace;
using qcorr::Vector;

Matrix random_matrix(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const double re = g(rng);
      const double im = g(rng);
      m(r, c) = Complex(re, im);
    }
  }
  return m;
}

qcorr::Vector vec_rm(const Matrix& m) {
  Vector v(m.rows() * m.cols());
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) v[r * m.cols() + c] = m(r, c);
  }
  return v;
}

}  // namespace

TEST_SUITE("qspace") {

TEST_CASE("block bookkeeping") {
  const QuantumSpace s({2, 1, 3});
  CHECK(s.block_count() == 3);
  CHECK(s.block_dim(0) == 2);
  CHECK(s.block_dim(2) == 3);
  CHECK(s.algebra_dim() == 4 + 1 + 9);
  CHECK(s.hilbert_dim() == 6);
  CHECK(s.block_offset(0) == 0);
  CHECK(s.block_offset(1) == 2);
  CHECK(s.block_offset(2) == 3);
  CHECK_FALSE(s.is_classical());
  CHECK(QuantumSpace({1, 1}).is_classical());
  CHECK(s == QuantumSpace({2, 1, 3}));
  CHECK(s != QuantumSpace({2, 1}));
}

TEST_CASE("malformed spaces are rejected") {
  CHECK_THROWS_AS(QuantumSpace({}), qcorr::ShapeError);
  CHECK_THROWS_AS(QuantumSpace({2, 0}), qcorr::ShapeError);
  CHECK_THROWS_AS(QuantumSpace({-1}), qcorr::ShapeError);
  CHECK_THROWS_AS(QuantumSpace({1}).block_dim(1), qcorr::ShapeError);
}

TEST_CASE("matrix units multiply like matrix units") {
  const QuantumSpace s({2, 2});
  const AlgebraElement e01 = qcorr::matrix_unit(s, 0, 0, 1);
  const AlgebraElement e11 = qcorr::matrix_unit(s, 0, 1, 1);
  const AlgebraElement f00 = qcorr::matrix_unit(s, 1, 0, 0);

  CHECK((e01 * e11 - e01).max_abs() == 0.0);
  CHECK((e11 * e01).max_abs() == 0.0);
  CHECK((e01 * f00).max_abs() == 0.0);  // different blocks annihilate
  CHECK((e01.adjoint() - qcorr::matrix_unit(s, 0, 1, 0)).max_abs() == 0.0);

  const AlgebraElement one = AlgebraElement::unit(s);
  CHECK((one * e01 - e01).max_abs() == 0.0);
  CHECK(qcorr::block_trace(one, 0) == Complex(2.0, 0.0));
}

TEST_CASE("hs_inner matches the embedded trace pairing") {
  std::mt19937_64 rng(41);
  const QuantumSpace s({2, 3});
  AlgebraElement a(s);
  AlgebraElement b(s);
  for (int k = 0; k < 2; ++k) {
    a.block(k) = random_matrix(s.block_dim(k), s.block_dim(k), rng);
    b.block(k) = random_matrix(s.block_dim(k), s.block_dim(k), rng);
  }
  const Complex direct = (a.embedded().adjoint() * b.embedded()).trace();
  CHECK(std::abs(a.hs_inner(b) - direct) < 1e-12);
  CHECK(a.frobenius_norm() == doctest::Approx(std::sqrt(a.hs_inner(a).real())));
}

TEST_CASE("kron follows the row-major vectorization convention") {
  std::mt19937_64 rng(7);
  const Matrix a = random_matrix(3, 3, rng);
  const Matrix b = random_matrix(2, 2, rng);
  const Matrix m = random_matrix(3, 2, rng);
  // (a (x) b) vec(m) = vec(a m b^T)
  const Vector lhs = qcorr::kron(a, b) * vec_rm(m);
  const Vector rhs = vec_rm(a * m * b.transpose());
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("tensor products of spaces and elements are consistent") {
  std::mt19937_64 rng(11);
  const QuantumSpace a({2, 1});
  const QuantumSpace b({3});
  const QuantumSpace ab = qcorr::tensor_space(a, b);
  REQUIRE(ab.block_count() == 2);
  CHECK(ab.block_dim(0) == 6);
  CHECK(ab.block_dim(1) == 3);

  AlgebraElement x(a);
  AlgebraElement y(b);
  for (int k = 0; k < a.block_count(); ++k) x.block(k) = random_matrix(a.block_dim(k), a.block_dim(k), rng);
  y.block(0) = random_matrix(3, 3, rng);
  const AlgebraElement xy = qcorr::tensor_elem(x, y);
  for (int ka = 0; ka < a.block_count(); ++ka) {
    const Matrix want = qcorr::kron(x.block(ka), y.block(0));
    CHECK((xy.block(ka * 1 + 0) - want).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("positivity checks") {
  const QuantumSpace s({2});
  AlgebraElement x(s);
  x.block(0) << 1.0, 0.0, 0.0, -2.0;
  CHECK(qcorr::min_hermitian_eigenvalue(x) == doctest::Approx(-2.0));
  CHECK_FALSE(qcorr::is_positive(x));
  AlgebraElement y(s);
  y.block(0) << 1.0, 0.5, 0.5, 1.0;
  CHECK(qcorr::is_positive(y));
}

TEST_CASE("the dimension-weighted tracial state") {
  std::mt19937_64 rng(5);
  const QuantumSpace s({2, 3});
  const qcorr::StateFunctional tau = qcorr::StateFunctional::tracial(s);
  CHECK(tau.positivity_defect() == 0.0);
  CHECK(tau.normalization_defect() < 1e-15);

  AlgebraElement a(s);
  AlgebraElement b(s);
  for (int k = 0; k < 2; ++k) {
    a.block(k) = random_matrix(s.block_dim(k), s.block_dim(k), rng);
    b.block(k) = random_matrix(s.block_dim(k), s.block_dim(k), rng);
  }
  CHECK(std::abs(tau(a * b) - tau(b * a)) < 1e-13);
  // Weighting: a block's unit gets mass n_k / hilbert_dim.
  CHECK(std::abs(tau(qcorr::matrix_unit(s, 0, 0, 0)) - Complex(1.0 / 5.0, 0.0)) < 1e-15);
}

TEST_CASE("maximally entangled vector is block-balanced and normalized") {
  const QuantumSpace p({2, 1});
  const qcorr::EntangledVector phi = qcorr::maximally_entangled_vector(p);
  REQUIRE(phi.vec.size() == 9);
  CHECK(std::abs(phi.vec.norm() - 1.0) < 1e-15);
  // Block 0 (dimension 2) entries 1/(sqrt 2 * sqrt 2), block 1 entry 1/sqrt 2.
  CHECK(std::abs(phi.vec[0 * 3 + 0] - Complex(0.5, 0.0)) < 1e-15);
  CHECK(std::abs(phi.vec[1 * 3 + 1] - Complex(0.5, 0.0)) < 1e-15);
  CHECK(std::abs(phi.vec[2 * 3 + 2] - Complex(1.0 / std::sqrt(2.0), 0.0)) < 1e-15);
  CHECK(std::abs(phi.vec[0 * 3 + 1]) == 0.0);
}

TEST_CASE("act_on_vector agrees with the embedded kronecker action") {
  std::mt19937_64 rng(13);
  const QuantumSpace p({2, 1});
  const int H = p.hilbert_dim();

  AlgebraElement x(p);
  AlgebraElement y(p);
  for (int k = 0; k < p.block_count(); ++k) {
    x.block(k) = random_matrix(p.block_dim(k), p.block_dim(k), rng);
    y.block(k) = random_matrix(p.block_dim(k), p.block_dim(k), rng);
  }
  const AlgebraElement xy = qcorr::tensor_elem(x, y);

  Vector v(H * H);
  for (Eigen::Index r = 0; r < v.size(); ++r) {
    const double re = std::uniform_real_distribution<double>(-1, 1)(rng);
    const double im = std::uniform_real_distribution<double>(-1, 1)(rng);
    v[r] = Complex(re, im);
  }

  const Vector got = qcorr::act_on_vector(xy, p, v);
  const Vector want = qcorr::kron(x.embedded(), y.embedded()) * v;
  CHECK((got - want).cwiseAbs().maxCoeff() < 1e-12);

  AlgebraElement wrong(p);
  CHECK_THROWS_AS(qcorr::act_on_vector(wrong, p, v), qcorr::ShapeError);
}

}  // TEST_SUITE
