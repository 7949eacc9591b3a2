#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>

namespace stiefel {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Matrix exponential (Pade scaling and squaring). Throws InvalidInput on
/// non-square or non-finite input.
Matrix expm(const Matrix &S);

/// skew(X) = (X - X^T) / 2
Matrix skew(const Matrix &X);

/// sym(X) = (X + X^T) / 2
Matrix sym(const Matrix &X);

/// ||X^T X - I||_F
double orthonormality_error(const Matrix &X);

/// Thin Q factor of X with the sign convention diag(R) >= 0. X must have at
/// least as many rows as columns.
Matrix thin_q(const Matrix &X);

/// Orthonormal basis of the orthogonal complement of col(X), using a
/// column-pivoted QR to detect the numerical rank of X.
Matrix orthogonal_complement(const Matrix &X, double rank_tol = 1e-12);

/// U_perp with [U U_perp] orthogonal. Returns an n x 0 matrix when n == p.
Matrix orthonormal_completion(const Matrix &U);

/// Tangent projection U skew(U^T Z) + (I - U U^T) Z.
Matrix project_tangent(const Matrix &U, const Matrix &Z);

/// Symmetric square root of a symmetric positive semidefinite matrix.
/// Eigenvalues in [-1e-10, 0) are clamped to zero.
Matrix psd_sqrt(const Matrix &P);

/// Seeded normal/uniform source. Identical seeds give identical streams;
/// split() derives independent, reproducible substreams for workers.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed);

  std::uint64_t seed() const { return seed_; }
  double normal();
  double uniform(double lo = 0.0, double hi = 1.0);
  Matrix gaussian(Index rows, Index cols);
  RandomSource split(std::uint64_t stream) const;

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

/// Haar-distributed n x p frame: Q factor (with positive R diagonal) of an
/// n x p standard Gaussian matrix.
Matrix random_stiefel(Index n, Index p, RandomSource &rng);

/// Random skew-symmetric p x p matrix with i.i.d. N(0,1) upper entries.
Matrix random_skew(Index p, RandomSource &rng);

}  // namespace stiefel
