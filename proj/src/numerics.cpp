#include "stiefel/numerics.hpp"

#include "stiefel/errors.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <string>

namespace stiefel {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

Matrix expm(const Matrix &S) {
  if (S.rows() != S.cols()) {
    throw InvalidInput("expm: matrix is " + std::to_string(S.rows()) + "x" +
                       std::to_string(S.cols()) + ", expected square");
  }
  if (S.rows() == 0) return Matrix(0, 0);
  if (!S.allFinite()) throw InvalidInput("expm: non-finite entries");
  return S.exp();
}

Matrix skew(const Matrix &X) { return 0.5 * (X - X.transpose()); }

Matrix sym(const Matrix &X) { return 0.5 * (X + X.transpose()); }

double orthonormality_error(const Matrix &X) {
  return (X.transpose() * X - Matrix::Identity(X.cols(), X.cols())).norm();
}

Matrix thin_q(const Matrix &X) {
  if (X.rows() < X.cols()) throw InvalidInput("thin_q: more columns than rows");
  Eigen::HouseholderQR<Matrix> qr(X);
  Matrix Q = qr.householderQ() * Matrix::Identity(X.rows(), X.cols());
  const Matrix R = qr.matrixQR().topRows(X.cols()).triangularView<Eigen::Upper>();
  for (Index j = 0; j < X.cols(); ++j) {
    if (R(j, j) < 0.0) Q.col(j) *= -1.0;
  }
  return Q;
}

Matrix orthogonal_complement(const Matrix &X, double rank_tol) {
  const Index n = X.rows();
  if (X.cols() == 0) return Matrix::Identity(n, n);
  Eigen::ColPivHouseholderQR<Matrix> qr(X);
  qr.setThreshold(rank_tol);
  const Index r = qr.rank();
  const Matrix Q = qr.householderQ();
  return Q.rightCols(n - r);
}

Matrix orthonormal_completion(const Matrix &U) {
  const Index n = U.rows();
  const Index p = U.cols();
  if (p > n) throw InvalidInput("orthonormal_completion: p > n");
  if (p == n) return Matrix(n, 0);
  Eigen::HouseholderQR<Matrix> qr(U);
  const Matrix Q = qr.householderQ();
  return Q.rightCols(n - p);
}

Matrix project_tangent(const Matrix &U, const Matrix &Z) {
  if (U.rows() != Z.rows() || U.cols() != Z.cols()) {
    throw InvalidInput("project_tangent: shape mismatch");
  }
  const Matrix UtZ = U.transpose() * Z;
  return U * skew(UtZ) + (Z - U * UtZ);
}

Matrix psd_sqrt(const Matrix &P) {
  if (P.rows() != P.cols()) throw InvalidInput("psd_sqrt: matrix not square");
  if (!P.allFinite()) throw InvalidInput("psd_sqrt: non-finite entries");
  if (P.rows() == 0) return Matrix(0, 0);
  const double scale = std::max(1.0, P.norm());
  if ((P - P.transpose()).norm() > 1e-10 * scale) {
    throw InvalidInput("psd_sqrt: matrix not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sym(P));
  Vector lambda = eig.eigenvalues();
  if (lambda.minCoeff() < -1e-10 * scale) {
    throw InvalidInput("psd_sqrt: matrix is indefinite");
  }
  lambda = lambda.cwiseMax(0.0).cwiseSqrt();
  const Matrix &V = eig.eigenvectors();
  return sym(V * lambda.asDiagonal() * V.transpose());
}

RandomSource::RandomSource(std::uint64_t seed) : seed_(seed), engine_(splitmix64(seed)) {}

double RandomSource::normal() { return normal_(engine_); }

double RandomSource::uniform(double lo, double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  return dist(engine_);
}

Matrix RandomSource::gaussian(Index rows, Index cols) {
  Matrix G(rows, cols);
  // Column-major fill order is part of the reproducibility contract.
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) G(i, j) = normal();
  return G;
}

RandomSource RandomSource::split(std::uint64_t stream) const {
  return RandomSource(splitmix64(seed_ ^ splitmix64(stream + 0x5851f42d4c957f2dULL)));
}

Matrix random_stiefel(Index n, Index p, RandomSource &rng) {
  if (p < 1 || n < p) {
    throw InvalidInput("random_stiefel: need n >= p >= 1, got n=" + std::to_string(n) +
                       " p=" + std::to_string(p));
  }
  return thin_q(rng.gaussian(n, p));
}

Matrix random_skew(Index p, RandomSource &rng) { return skew(rng.gaussian(p, p)) * std::sqrt(2.0); }

}  // namespace stiefel
