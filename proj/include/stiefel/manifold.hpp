#pragma once

#include "stiefel/numerics.hpp"

namespace stiefel {

/// Parameter of the beta-metric <D1, D2>_beta = Tr(D1^T (I - (1 - beta) U U^T) D2).
/// beta = 1 is the Euclidean metric, beta = 1/2 the canonical one.
class BetaMetric {
 public:
  explicit BetaMetric(double beta);

  static BetaMetric euclidean() { return BetaMetric(1.0); }
  static BetaMetric canonical() { return BetaMetric(0.5); }

  double beta() const { return beta_; }

 private:
  double beta_;
};

/// An n x p matrix with orthonormal columns.
///
/// Construction accepts ||U^T U - I||_F <= 1e-8 as is, re-orthonormalizes
/// (thin QR) up to 1e-4 and rejects anything further off the manifold.
class StiefelPoint {
 public:
  explicit StiefelPoint(Matrix U);

  /// I_{n x p}
  static StiefelPoint identity(Index n, Index p);
  static StiefelPoint random(Index n, Index p, RandomSource &rng);

  const Matrix &matrix() const { return U_; }
  Index n() const { return U_.rows(); }
  Index p() const { return U_.cols(); }

  StiefelPoint operator-() const;

 private:
  Matrix U_;
};

/// Tangent vector Delta = U A + Q B at U, with A = U^T Delta skew, Q an n x q
/// frame orthogonal to U (q = min(p, n - p)) and Q B = (I - U U^T) Delta.
class TangentVector {
 public:
  /// Splits an ambient tangent matrix. Z must satisfy U^T Z + Z^T U = 0 up to
  /// 1e-8 (relative to max(1, ||Z||_F)); it is re-projected up to 1e-4 and
  /// rejected beyond.
  static TangentVector decompose(const StiefelPoint &base, const Matrix &Z);

  /// Tangent projection of an arbitrary n x p matrix.
  static TangentVector project(const StiefelPoint &base, const Matrix &Z);

  /// U A + Q_full B_full for a skew A and any frame Q_full orthogonal to U.
  static TangentVector from_parts(const StiefelPoint &base, const Matrix &A,
                                  const Matrix &Q_full, const Matrix &B_full);

  static TangentVector zero(const StiefelPoint &base);

  const StiefelPoint &base() const { return base_; }
  const Matrix &ambient() const { return delta_; }
  const Matrix &A() const { return A_; }
  const Matrix &Q() const { return Q_; }
  const Matrix &B() const { return B_; }

  TangentVector scaled(double c) const;

 private:
  TangentVector(StiefelPoint base, Matrix delta, Matrix A, Matrix Q, Matrix B);

  StiefelPoint base_;
  Matrix delta_;
  Matrix A_;
  Matrix Q_;
  Matrix B_;
};

double inner(const BetaMetric &metric, const TangentVector &d1, const TangentVector &d2);
double norm(const BetaMetric &metric, const TangentVector &d);

/// beta-norm of an ambient velocity V attached to the frame Y (V need not be
/// decomposed): sqrt(||V||_F^2 - (1 - beta) ||Y^T V||_F^2).
double velocity_norm(const BetaMetric &metric, const Matrix &Y, const Matrix &V);

/// Factors of Exp_{beta,U}(Delta) = W expm(S) I_{(p+q) x p} expm((1 - 2 beta) A),
/// W = [U Q], S = [[2 beta A, -B^T], [B, 0]].
struct ExpFactors {
  Matrix frame;      // W, n x (p + q)
  Matrix block_exp;  // expm(S)
  Matrix right_exp;  // expm((1 - 2 beta) A)
};

ExpFactors exp_factors(const BetaMetric &metric, const TangentVector &delta);

/// Riemannian exponential, reduced 2p x 2p form.
StiefelPoint exp_map(const BetaMetric &metric, const TangentVector &delta);

/// Riemannian exponential through the full n x n block with a complete U_perp.
/// Slower; kept as an independent check of exp_map.
StiefelPoint exp_map_full(const BetaMetric &metric, const TangentVector &delta);

/// Value in [0, 2 sqrt(p)].
struct FrobDistance {
  double value;
};

/// ||U - V||_F; overshoots of 2 sqrt(p) up to 1e-10 are clamped.
FrobDistance frobenius_distance(const StiefelPoint &U, const StiefelPoint &V);

/// Appends N zero rows: St(n, p) -> St(n + N, p).
StiefelPoint pad_rows(const StiefelPoint &U, Index N);

}  // namespace stiefel
