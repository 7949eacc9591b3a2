#include "oracles.hpp"

#include "stiefel/errors.hpp"
#include "stiefel/numerics.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>

using namespace stiefel;

TEST_CASE("expm matches a long-double Taylor oracle up to norm 10") {
  RandomSource rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    const Index m = 1 + trial % 8;
    Matrix S = rng.gaussian(m, m);
    if (trial % 2 == 0 && m > 1) S = skew(S);
    S *= rng.uniform(0.01, 10.0) / S.norm();
    const Matrix ref = oracle::taylor_expm(S);
    CHECK((expm(S) - ref).norm() <= 1e-12 * ref.norm());
  }
}

TEST_CASE("expm edge cases") {
  CHECK((expm(Matrix::Zero(3, 3)) - Matrix::Identity(3, 3)).norm() == 0.0);
  Matrix R(2, 2);
  R << 0, M_PI, -M_PI, 0;
  CHECK((expm(R) + Matrix::Identity(2, 2)).norm() < 1e-14);
  CHECK_THROWS_AS(expm(Matrix::Zero(2, 3)), InvalidInput);
  Matrix bad = Matrix::Zero(2, 2);
  bad(0, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(expm(bad), InvalidInput);
}

TEST_CASE("expm of a skew matrix is orthogonal") {
  RandomSource rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix S = 5.0 * skew(rng.gaussian(6, 6));
    CHECK(orthonormality_error(expm(S)) < 1e-12);
  }
}

TEST_CASE("skew and sym split a matrix") {
  RandomSource rng(13);
  const Matrix X = rng.gaussian(4, 4);
  CHECK((skew(X) + sym(X) - X).norm() < 1e-15);
  CHECK((skew(X) + skew(X).transpose()).norm() == 0.0);
  CHECK((sym(X) - sym(X).transpose()).norm() == 0.0);
}

TEST_CASE("thin_q is orthonormal with a positive R diagonal") {
  RandomSource rng(14);
  const Matrix X = rng.gaussian(7, 3);
  const Matrix Q = thin_q(X);
  CHECK(orthonormality_error(Q) < 1e-14);
  const Matrix R = Q.transpose() * X;
  CHECK((Q * R - X).norm() < 1e-12);
  for (Index i = 0; i < 3; ++i) CHECK(R(i, i) > 0.0);
  CHECK(Matrix(R.triangularView<Eigen::StrictlyLower>()).norm() < 1e-12);
}

TEST_CASE("orthogonal complement handles rank deficiency") {
  RandomSource rng(15);
  Matrix X(6, 3);
  X.leftCols(2) = rng.gaussian(6, 2);
  X.col(2) = X.col(0) - 2.0 * X.col(1);
  const Matrix C = orthogonal_complement(X);
  CHECK(C.cols() == 4);
  CHECK(orthonormality_error(C) < 1e-13);
  CHECK((X.transpose() * C).norm() < 1e-12);

  const Matrix U = thin_q(rng.gaussian(5, 2));
  const Matrix P = orthonormal_completion(U);
  CHECK(P.cols() == 3);
  Matrix W(5, 5);
  W << U, P;
  CHECK(orthonormality_error(W) < 1e-13);
  // Same subspace as an SVD-based completion.
  const Matrix ref = oracle::svd_complement(U);
  CHECK((P * P.transpose() - ref * ref.transpose()).norm() < 1e-12);
  CHECK(orthonormal_completion(Matrix::Identity(3, 3)).cols() == 0);
}

TEST_CASE("project_tangent is an idempotent projection onto the tangent space") {
  RandomSource rng(16);
  for (int trial = 0; trial < 20; ++trial) {
    const Index p = 1 + trial % 4;
    const Index n = p + 1 + trial % 3;
    const Matrix U = random_stiefel(n, p, rng);
    const Matrix Z = rng.gaussian(n, p);
    const Matrix T = project_tangent(U, Z);
    CHECK((U.transpose() * T + T.transpose() * U).norm() < 1e-13);
    CHECK((project_tangent(U, T) - T).norm() < 1e-13);
    // Residual is normal: U times a symmetric matrix.
    const Matrix N = Z - T;
    CHECK((N - U * sym(U.transpose() * Z)).norm() < 1e-13);
  }
}

TEST_CASE("psd_sqrt squares back and rejects bad input") {
  RandomSource rng(17);
  const Matrix G = rng.gaussian(4, 3);
  const Matrix P = G.transpose() * G;
  const Matrix R = psd_sqrt(P);
  CHECK((R * R - P).norm() < 1e-12 * P.norm());
  CHECK((R - R.transpose()).norm() < 1e-14);
  Eigen::SelfAdjointEigenSolver<Matrix> es(R);
  CHECK(es.eigenvalues().minCoeff() >= 0.0);

  Matrix singular = Matrix::Zero(2, 2);
  singular(0, 0) = 4.0;
  CHECK((psd_sqrt(singular) - Matrix(Eigen::Vector2d(2.0, 0.0).asDiagonal())).norm() < 1e-15);

  Matrix indefinite = Matrix::Identity(2, 2);
  indefinite(1, 1) = -1.0;
  CHECK_THROWS_AS(psd_sqrt(indefinite), InvalidInput);
  Matrix asym = Matrix::Identity(2, 2);
  asym(0, 1) = 0.5;
  CHECK_THROWS_AS(psd_sqrt(asym), InvalidInput);
}

TEST_CASE("RandomSource is reproducible and splits into distinct streams") {
  RandomSource a(42), b(42), c(43);
  const Matrix x = a.gaussian(3, 3);
  CHECK(x == b.gaussian(3, 3));
  CHECK(x != c.gaussian(3, 3));
  const RandomSource root(5);
  RandomSource s1 = root.split(1), s1b = root.split(1), s2 = root.split(2);
  const double v = s1.normal();
  CHECK(v == s1b.normal());
  CHECK(v != s2.normal());
  RandomSource u(9);
  for (int i = 0; i < 100; ++i) {
    const double w = u.uniform(-2.0, 3.0);
    CHECK(w >= -2.0);
    CHECK(w < 3.0);
  }
}

TEST_CASE("random frames and skew matrices") {
  RandomSource rng(18);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix U = random_stiefel(6, 1 + trial % 6, rng);
    CHECK(orthonormality_error(U) < 1e-14);
  }
  const Matrix A = random_skew(5, rng);
  CHECK((A + A.transpose()).norm() == 0.0);
  CHECK(A.norm() > 0.0);
}
