#include "stiefel/manifold.hpp"

#include "stiefel/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace stiefel {

namespace {

constexpr double kAcceptTol = 1e-8;
constexpr double kRepairTol = 1e-4;

std::string shape(const Matrix &X) {
  return std::to_string(X.rows()) + "x" + std::to_string(X.cols());
}

void check_same_shape(const char *where, const Matrix &X, const Matrix &Y) {
  if (X.rows() != Y.rows() || X.cols() != Y.cols()) {
    throw InvalidInput(std::string(where) + ": shape mismatch " + shape(X) + " vs " + shape(Y));
  }
}

// Frame Q (n x q, q = min(p, n - p)) orthogonal to U whose span contains col(K).
Matrix reduced_frame(const Matrix &U, const Matrix &K, double scale) {
  const Index n = U.rows();
  const Index p = U.cols();
  const Index q = std::min(p, n - p);
  if (q == 0) return Matrix(n, 0);

  Eigen::ColPivHouseholderQR<Matrix> qr(K);
  const auto &R = qr.matrixQR();
  Index r = 0;
  for (Index i = 0; i < std::min(K.rows(), K.cols()); ++i) {
    if (std::abs(R(i, i)) > 1e-12 * scale) ++r;
  }
  r = std::min(r, q);

  Matrix Qr(n, 0);
  if (r > 0) {
    Matrix lead = qr.householderQ() * Matrix::Identity(n, r);
    // Rounding in K leaks into col(U); push it back out.
    lead -= U * (U.transpose() * lead);
    Qr = thin_q(lead);
  }
  if (r == q) return Qr;

  Matrix UQ(n, p + r);
  UQ << U, Qr;
  const Matrix extra = orthogonal_complement(UQ).leftCols(q - r);
  Matrix Q(n, q);
  Q << Qr, extra;
  return Q;
}

}  // namespace

BetaMetric::BetaMetric(double beta) : beta_(beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw InvalidInput("BetaMetric: beta must be positive and finite, got " + std::to_string(beta));
  }
}

StiefelPoint::StiefelPoint(Matrix U) : U_(std::move(U)) {
  if (U_.cols() < 1 || U_.rows() < U_.cols()) {
    throw InvalidInput("StiefelPoint: need n >= p >= 1, got " + shape(U_));
  }
  if (!U_.allFinite()) throw InvalidInput("StiefelPoint: non-finite entries");
  const double err = orthonormality_error(U_);
  if (err > kRepairTol) {
    throw InvalidInput("StiefelPoint: columns not orthonormal (||U^T U - I||_F = " +
                       std::to_string(err) + ")");
  }
  if (err > kAcceptTol) U_ = thin_q(U_);
}

StiefelPoint StiefelPoint::identity(Index n, Index p) {
  return StiefelPoint(Matrix::Identity(n, p));
}

StiefelPoint StiefelPoint::random(Index n, Index p, RandomSource &rng) {
  return StiefelPoint(random_stiefel(n, p, rng));
}

StiefelPoint StiefelPoint::operator-() const { return StiefelPoint(-U_); }

TangentVector::TangentVector(StiefelPoint base, Matrix delta, Matrix A, Matrix Q, Matrix B)
    : base_(std::move(base)),
      delta_(std::move(delta)),
      A_(std::move(A)),
      Q_(std::move(Q)),
      B_(std::move(B)) {}

TangentVector TangentVector::decompose(const StiefelPoint &base, const Matrix &Z) {
  const Matrix &U = base.matrix();
  check_same_shape("TangentVector::decompose", U, Z);
  if (!Z.allFinite()) throw InvalidInput("TangentVector::decompose: non-finite entries");

  const double scale = std::max(1.0, Z.norm());
  Matrix UtZ = U.transpose() * Z;
  const double err = (UtZ + UtZ.transpose()).norm();
  if (err > kRepairTol * scale) {
    throw InvalidInput("TangentVector::decompose: matrix is not tangent (||U^T Z + Z^T U||_F = " +
                       std::to_string(err) + ")");
  }
  Matrix A = skew(UtZ);
  const Matrix K = Z - U * UtZ;
  Matrix Q = reduced_frame(U, K, scale);
  Matrix B = Q.transpose() * K;
  Matrix delta = U * A + Q * B;
  return TangentVector(base, std::move(delta), std::move(A), std::move(Q), std::move(B));
}

TangentVector TangentVector::project(const StiefelPoint &base, const Matrix &Z) {
  return decompose(base, project_tangent(base.matrix(), Z));
}

TangentVector TangentVector::from_parts(const StiefelPoint &base, const Matrix &A,
                                        const Matrix &Q_full, const Matrix &B_full) {
  const Matrix &U = base.matrix();
  if (A.rows() != U.cols() || A.cols() != U.cols()) {
    throw InvalidInput("TangentVector::from_parts: A must be p x p, got " + shape(A));
  }
  if ((A + A.transpose()).norm() > 1e-10 * std::max(1.0, A.norm())) {
    throw InvalidInput("TangentVector::from_parts: A is not skew-symmetric");
  }
  if (Q_full.rows() != U.rows() || B_full.rows() != Q_full.cols() || B_full.cols() != U.cols()) {
    throw InvalidInput("TangentVector::from_parts: Q is " + shape(Q_full) + ", B is " +
                       shape(B_full));
  }
  if (Q_full.cols() > 0) {
    if ((Q_full.transpose() * U).norm() > 1e-10 || orthonormality_error(Q_full) > 1e-10) {
      throw InvalidInput("TangentVector::from_parts: Q must be an orthonormal frame with Q^T U = 0");
    }
  }
  Matrix Z = U * A;
  if (Q_full.cols() > 0) Z += Q_full * B_full;
  return decompose(base, Z);
}

TangentVector TangentVector::zero(const StiefelPoint &base) {
  return decompose(base, Matrix::Zero(base.n(), base.p()));
}

TangentVector TangentVector::scaled(double c) const {
  return TangentVector(base_, c * delta_, c * A_, Q_, c * B_);
}

double inner(const BetaMetric &metric, const TangentVector &d1, const TangentVector &d2) {
  const Matrix &U1 = d1.base().matrix();
  const Matrix &U2 = d2.base().matrix();
  if (U1.rows() != U2.rows() || U1.cols() != U2.cols() || (U1 - U2).norm() > 1e-14) {
    throw InvalidInput("inner: tangent vectors live at different base points");
  }
  const double beta = metric.beta();
  return beta * (d1.A().array() * d2.A().array()).sum() +
         ((d1.ambient() - U1 * d1.A()).array() * (d2.ambient() - U1 * d2.A()).array()).sum();
}

double norm(const BetaMetric &metric, const TangentVector &d) {
  return std::sqrt(std::max(0.0, inner(metric, d, d)));
}

double velocity_norm(const BetaMetric &metric, const Matrix &Y, const Matrix &V) {
  const double along = (Y.transpose() * V).squaredNorm();
  const double sq = V.squaredNorm() - (1.0 - metric.beta()) * along;
  return std::sqrt(std::max(0.0, sq));
}

ExpFactors exp_factors(const BetaMetric &metric, const TangentVector &delta) {
  const Matrix &U = delta.base().matrix();
  const Index p = U.cols();
  const Index q = delta.Q().cols();
  const double beta = metric.beta();

  ExpFactors f;
  f.frame.resize(U.rows(), p + q);
  f.frame << U, delta.Q();
  Matrix S = Matrix::Zero(p + q, p + q);
  S.topLeftCorner(p, p) = 2.0 * beta * delta.A();
  if (q > 0) {
    S.topRightCorner(p, q) = -delta.B().transpose();
    S.bottomLeftCorner(q, p) = delta.B();
  }
  f.block_exp = expm(S);
  f.right_exp = expm((1.0 - 2.0 * beta) * delta.A());
  return f;
}

StiefelPoint exp_map(const BetaMetric &metric, const TangentVector &delta) {
  const ExpFactors f = exp_factors(metric, delta);
  const Index p = delta.base().p();
  return StiefelPoint(f.frame * f.block_exp.leftCols(p) * f.right_exp);
}

StiefelPoint exp_map_full(const BetaMetric &metric, const TangentVector &delta) {
  const Matrix &U = delta.base().matrix();
  const Index n = U.rows();
  const Index p = U.cols();
  const double beta = metric.beta();
  const Matrix Uperp = orthonormal_completion(U);
  const Matrix B = Uperp.transpose() * delta.ambient();

  Matrix W(n, n);
  W << U, Uperp;
  Matrix S = Matrix::Zero(n, n);
  S.topLeftCorner(p, p) = 2.0 * beta * delta.A();
  S.topRightCorner(p, n - p) = -B.transpose();
  S.bottomLeftCorner(n - p, p) = B;
  return StiefelPoint(W * expm(S).leftCols(p) * expm((1.0 - 2.0 * beta) * delta.A()));
}

FrobDistance frobenius_distance(const StiefelPoint &U, const StiefelPoint &V) {
  check_same_shape("frobenius_distance", U.matrix(), V.matrix());
  const double cap = 2.0 * std::sqrt(static_cast<double>(U.p()));
  return FrobDistance{std::clamp((U.matrix() - V.matrix()).norm(), 0.0, cap)};
}

StiefelPoint pad_rows(const StiefelPoint &U, Index N) {
  if (N < 0) throw InvalidInput("pad_rows: negative row count");
  Matrix out = Matrix::Zero(U.n() + N, U.p());
  out.topRows(U.n()) = U.matrix();
  return StiefelPoint(std::move(out));
}

}  // namespace stiefel
