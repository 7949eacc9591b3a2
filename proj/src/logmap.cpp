#include "stiefel/logmap.hpp"

#include "stiefel/bounds.hpp"
#include "stiefel/curves.hpp"
#include "stiefel/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace stiefel {

namespace {

constexpr double kMinStep = 1.0 / 1048576.0;

void check_pair(const StiefelPoint &U, const StiefelPoint &Utilde) {
  if (U.n() != Utilde.n() || U.p() != Utilde.p()) {
    throw InvalidInput("log: U and Utilde must have the same shape");
  }
}

Certificate classify(double length, double lower, double upper, double tol) {
  if (length <= lower + tol) return Certificate::CertifiedMinimal;
  if (length > upper + tol) return Certificate::ExceedsUpperBound;
  return Certificate::WithinBounds;
}

struct Endpoint {
  Matrix Y;
  ExpFactors factors;
};

Endpoint shoot(const BetaMetric &metric, const TangentVector &delta) {
  Endpoint e;
  e.factors = exp_factors(metric, delta);
  e.Y = e.factors.frame * e.factors.block_exp.leftCols(delta.base().p()) * e.factors.right_exp;
  if (!e.Y.allFinite()) throw NumericalFailure("log_shooting: non-finite exponential");
  return e;
}

// Rotation of the ambient space taking exp(Delta) back to U, applied to the
// endpoint error.
Matrix pulled_error(const Endpoint &e, const Matrix &Utilde) {
  const Matrix &W = e.factors.frame;
  const Matrix err = Utilde - e.Y;
  const Matrix Et = e.factors.block_exp.transpose();
  const Matrix coeff = W.transpose() * err;
  return (err + W * ((Et - Matrix::Identity(Et.rows(), Et.cols())) * coeff)) *
         e.factors.right_exp.transpose();
}

// Frechet derivative of expm at X in direction E.
Matrix expm_frechet(const Matrix &X, const Matrix &E) {
  const Index m = X.rows();
  Matrix big = Matrix::Zero(2 * m, 2 * m);
  big.topLeftCorner(m, m) = X;
  big.topRightCorner(m, m) = E;
  big.bottomRightCorner(m, m) = X;
  return expm(big).topRightCorner(m, m);
}

// Gauss-Newton direction for exp(Delta + d) = Utilde in the coordinates
// d = U a + U_perp b, using the exact Jacobian of the full-form exponential.
Matrix newton_direction(const BetaMetric &metric, const TangentVector &delta, const Matrix &err) {
  const Matrix &U = delta.base().matrix();
  const Index n = U.rows();
  const Index p = U.cols();
  const double beta = metric.beta();
  const double c = 1.0 - 2.0 * beta;
  const Matrix Uperp = orthonormal_completion(U);
  Matrix W(n, n);
  W << U, Uperp;

  const Matrix &A = delta.A();
  const Matrix B = Uperp.transpose() * delta.ambient();
  Matrix S = Matrix::Zero(n, n);
  S.topLeftCorner(p, p) = 2.0 * beta * A;
  S.block(0, p, p, n - p) = -B.transpose();
  S.block(p, 0, n - p, p) = B;
  const Matrix E = expm(S);
  const Matrix F = expm(c * A);
  const Matrix WE = W * E.leftCols(p);

  std::vector<Matrix> dirs;
  for (Index i = 0; i < p; ++i) {
    for (Index j = i + 1; j < p; ++j) {
      Matrix Ak = Matrix::Zero(p, p);
      Ak(i, j) = 1.0;
      Ak(j, i) = -1.0;
      dirs.push_back(U * Ak);
    }
  }
  for (Index i = 0; i < n - p; ++i) {
    for (Index j = 0; j < p; ++j) {
      Matrix Bk = Matrix::Zero(n - p, p);
      Bk(i, j) = 1.0;
      dirs.push_back(Uperp * Bk);
    }
  }

  Matrix J(n * p, static_cast<Index>(dirs.size()));
  for (Index k = 0; k < J.cols(); ++k) {
    const Matrix Ak = U.transpose() * dirs[k];
    const Matrix Bk = Uperp.transpose() * dirs[k];
    Matrix Sk = Matrix::Zero(n, n);
    Sk.topLeftCorner(p, p) = 2.0 * beta * Ak;
    Sk.block(0, p, p, n - p) = -Bk.transpose();
    Sk.block(p, 0, n - p, p) = Bk;
    Matrix dY = W * expm_frechet(S, Sk).leftCols(p) * F + WE * expm_frechet(c * A, c * Ak);
    J.col(k) = Eigen::Map<const Vector>(dY.data(), dY.size());
  }
  const Vector rhs = Eigen::Map<const Vector>(err.data(), err.size());
  const Vector x = J.completeOrthogonalDecomposition().solve(rhs);
  Matrix d = Matrix::Zero(n, p);
  for (Index k = 0; k < J.cols(); ++k) d += x(k) * dirs[k];
  return d;
}

TangentVector initial_guess(const BetaMetric &metric, const StiefelPoint &U,
                            const StiefelPoint &Utilde, double lower) {
  TangentVector dir = TangentVector::project(U, Utilde.matrix() - U.matrix());
  double len = norm(metric, dir);
  if (len < 1e-12 * std::max(1.0, lower)) {
    // Utilde - U is normal to the manifold (e.g. Utilde = -U): fall back to the
    // flip geodesic through all columns.
    if (U.p() % 2 != 0 && U.n() == U.p()) return TangentVector::zero(U);
    dir = gamma_k_tangent(U, U.p());
    len = norm(metric, dir);
  }
  return dir.scaled(lower / len);
}

}  // namespace

void LogOptions::validate() const {
  if (max_iter < 0) throw InvalidInput("LogOptions: max_iter must be non-negative");
  if (!(residual_tol > 0.0)) throw InvalidInput("LogOptions: residual_tol must be positive");
  if (!(certify_tol > 0.0)) throw InvalidInput("LogOptions: certify_tol must be positive");
  if (!(damping > 0.0) || damping > 1.0) throw InvalidInput("LogOptions: damping must lie in (0, 1]");
}

std::string_view to_string(Certificate c) {
  switch (c) {
    case Certificate::CertifiedMinimal: return "certified_minimal";
    case Certificate::WithinBounds: return "within_bounds";
    case Certificate::ExceedsUpperBound: return "exceeds_upper_bound";
    case Certificate::NotConverged: return "not_converged";
  }
  return "unknown";
}

Certificate certify(const BetaMetric &metric, const StiefelPoint &U, const StiefelPoint &Utilde,
                    const TangentVector &delta, double certify_tol, double endpoint_tol) {
  check_pair(U, Utilde);
  if ((delta.base().matrix() - U.matrix()).norm() > 1e-12) {
    throw InvalidInput("certify: tangent is not based at U");
  }
  const double miss = (exp_map(metric, delta).matrix() - Utilde.matrix()).norm();
  if (!(miss <= endpoint_tol)) {
    throw InvalidInput("certify: exp(Delta) misses Utilde by " + std::to_string(miss));
  }
  const int p = static_cast<int>(U.p());
  const double frob = frobenius_distance(U, Utilde).value;
  return classify(norm(metric, delta), lower_envelope(metric.beta(), p, frob),
                  upper_envelope(metric.beta(), p, frob), certify_tol);
}

LogResult log_shooting(const BetaMetric &metric, const StiefelPoint &U, const StiefelPoint &Utilde,
                       const LogOptions &opts, const std::optional<TangentVector> &initial) {
  check_pair(U, Utilde);
  opts.validate();
  const int p = static_cast<int>(U.p());
  const double beta = metric.beta();
  const double frob = frobenius_distance(U, Utilde).value;
  const double lower = lower_envelope(beta, p, frob);
  const double upper = upper_envelope(beta, p, frob);
  const bool proven = upper_envelope_proven(static_cast<int>(U.n()), p);

  auto finish = [&](TangentVector delta, double residual, int iterations, bool converged) {
    const double len = norm(metric, delta);
    const Certificate cert = converged ? classify(len, lower, upper, opts.certify_tol)
                                       : Certificate::NotConverged;
    return LogResult{std::move(delta), len,    residual, iterations, cert,
                     proven,           frob,   lower,    upper};
  };

  if (frob == 0.0) return finish(TangentVector::zero(U), 0.0, 0, true);

  TangentVector delta = initial ? *initial : initial_guess(metric, U, Utilde, lower);
  if (initial && (initial->base().matrix() - U.matrix()).norm() > 1e-12) {
    throw InvalidInput("log_shooting: initial tangent is not based at U");
  }
  Endpoint e = shoot(metric, delta);
  double residual = (e.Y - Utilde.matrix()).norm();
  double tau = opts.damping;

  // Backtracking along `step` from `t0`; returns the accepted step or 0.
  auto line_search = [&](const Matrix &step, double t0, double required_ratio) {
    for (double t = t0; t >= kMinStep; t *= 0.5) {
      TangentVector cand = TangentVector::decompose(U, delta.ambient() + t * step);
      Endpoint ce = shoot(metric, cand);
      const double r = (ce.Y - Utilde.matrix()).norm();
      const double bound = opts.step_control == StepControl::Armijo
                               ? std::min(required_ratio, 1.0 - 1e-4 * t) * residual
                               : required_ratio * residual;
      if (r < bound) {
        delta = std::move(cand);
        e = std::move(ce);
        residual = r;
        return t;
      }
      if (required_ratio < 1.0) break;  // single trial for the cheap step
    }
    return 0.0;
  };

  int it = 0;
  while (residual > opts.residual_tol && it < opts.max_iter) {
    ++it;
    const Matrix pulled = project_tangent(U.matrix(), pulled_error(e, Utilde.matrix()));
    const double t0 = opts.step_control == StepControl::Armijo ? 1.0 : tau;
    // The pullback step is kept only while it contracts the residual by half;
    // otherwise switch to a Newton step on the exact Jacobian.
    if (line_search(pulled, t0, 0.5) > 0.0) continue;
    const Matrix newton = newton_direction(metric, delta, Utilde.matrix() - e.Y);
    double t = line_search(newton, 1.0, 1.0);
    if (t == 0.0) t = line_search(pulled, t0, 1.0);
    if (t == 0.0) break;
    if (opts.step_control == StepControl::FixedDamping) tau = std::min(opts.damping, 2.0 * t);
  }
  return finish(std::move(delta), residual, it, residual <= opts.residual_tol);
}

}  // namespace stiefel
