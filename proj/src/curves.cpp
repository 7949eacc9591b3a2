#include "stiefel/curves.hpp"

#include "stiefel/errors.hpp"
#include "stiefel/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace stiefel {

namespace {

constexpr double kPi = std::numbers::pi;

void require_orthogonal(const char *where, const Matrix &Q, Index dim) {
  if (Q.rows() != dim || Q.cols() != dim || orthonormality_error(Q) > 1e-10) {
    throw InvalidInput(std::string(where) + ": expected an orthogonal " + std::to_string(dim) +
                       "x" + std::to_string(dim) + " matrix");
  }
}

Vector checked_u_perp(const char *where, const StiefelPoint &U, std::optional<Vector> u_perp) {
  if (!u_perp) {
    if (U.n() == U.p()) {
      throw InvalidInput(std::string(where) + ": no direction orthogonal to U exists (n == p)");
    }
    return orthonormal_completion(U.matrix()).col(0);
  }
  if (u_perp->size() != U.n() || std::abs(u_perp->norm() - 1.0) > 1e-10 ||
      (U.matrix().transpose() * *u_perp).norm() > 1e-10) {
    throw InvalidInput(std::string(where) + ": u_perp must be a unit vector orthogonal to U");
  }
  return *u_perp;
}

// Exp_{beta,U}(t Delta) and its t-derivative W expm(tS) [A; B] expm(t(1 - 2beta)A).
struct RayData {
  Matrix frame;
  Matrix S;
  Matrix generator;  // [A; B], (p + q) x p
  Matrix right;      // (1 - 2 beta) A
};

RayData ray_data(const BetaMetric &metric, const TangentVector &delta) {
  const Index p = delta.base().p();
  const Index q = delta.Q().cols();
  const double beta = metric.beta();
  RayData d;
  d.frame.resize(delta.base().n(), p + q);
  d.frame << delta.base().matrix(), delta.Q();
  d.S = Matrix::Zero(p + q, p + q);
  d.S.topLeftCorner(p, p) = 2.0 * beta * delta.A();
  d.generator = Matrix::Zero(p + q, p);
  d.generator.topRows(p) = delta.A();
  if (q > 0) {
    d.S.topRightCorner(p, q) = -delta.B().transpose();
    d.S.bottomLeftCorner(q, p) = delta.B();
    d.generator.bottomRows(q) = delta.B();
  }
  d.right = (1.0 - 2.0 * beta) * delta.A();
  return d;
}

Curve ray_curve(CurveFamily family, const BetaMetric &metric, const TangentVector &delta) {
  const RayData d = ray_data(metric, delta);
  const Index p = delta.base().p();
  return Curve(
      family,
      [d, p](double t) -> Matrix {
        return d.frame * expm(t * d.S).leftCols(p) * expm(t * d.right);
      },
      [d](double t) -> Matrix {
        return d.frame * expm(t * d.S) * d.generator * expm(t * d.right);
      });
}

}  // namespace

std::string_view to_string(CurveFamily family) {
  switch (family) {
    case CurveFamily::PlanarRotation: return "planar_rotation";
    case CurveFamily::KTheta: return "k_theta";
    case CurveFamily::GammaK: return "gamma_k";
    case CurveFamily::GreatCircle: return "great_circle";
    case CurveFamily::Branch1: return "branch_1";
    case CurveFamily::Branch2: return "branch_2";
    case CurveFamily::ExpRay: return "exp_ray";
  }
  return "unknown";
}

Curve::Curve(CurveFamily family, Path eval, Path velocity)
    : family_(family), eval_(std::move(eval)), velocity_(std::move(velocity)) {}

double Curve::speed(const BetaMetric &metric, double t) const {
  return velocity_norm(metric, eval_(t), velocity_(t));
}

double curve_length(const Curve &curve, const BetaMetric &metric, int n_quad) {
  if (n_quad < 1) throw InvalidInput("curve_length: n_quad must be positive");
  return integrate([&](double t) { return curve.speed(metric, t); }, 0.0, 1.0, n_quad);
}

Matrix skew_generator(Index p, double theta) {
  if (p < 2 || p % 2 != 0) {
    throw InvalidInput("skew_generator: size must be even and >= 2, got " + std::to_string(p));
  }
  Matrix A = Matrix::Zero(p, p);
  for (Index i = 0; i < p; i += 2) {
    A(i, i + 1) = theta;
    A(i + 1, i) = -theta;
  }
  return A;
}

Matrix block_rotation(Index p, double theta) {
  if (p < 2 || p % 2 != 0) {
    throw InvalidInput("block_rotation: size must be even and >= 2, got " + std::to_string(p));
  }
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  Matrix G = Matrix::Zero(p, p);
  for (Index i = 0; i < p; i += 2) {
    G(i, i) = c;
    G(i, i + 1) = s;
    G(i + 1, i) = -s;
    G(i + 1, i + 1) = c;
  }
  return G;
}

Matrix breve_A() {
  const double c = kPi * std::sqrt(3.0) / 3.0;
  Matrix A(3, 3);
  A << 0, 1, -1,
      -1, 0, 1,
      1, -1, 0;
  return c * A;
}

Matrix breve_B() {
  const double c = kPi * std::sqrt(3.0) / 3.0;
  return Matrix::Constant(1, 3, c);
}

StiefelPoint flip(const StiefelPoint &U, Index k) {
  if (k < 1 || k > U.p()) {
    throw InvalidInput("flip: k must lie in [1, p], got " + std::to_string(k));
  }
  Matrix out = U.matrix();
  out.leftCols(k) *= -1.0;
  return StiefelPoint(std::move(out));
}

Curve planar_rotation_curve(const StiefelPoint &U, const Matrix &Q, double theta) {
  const Index p = U.p();
  if (p % 2 != 0) throw InvalidInput("planar_rotation_curve: p must be even");
  require_orthogonal("planar_rotation_curve", Q, p);
  const Matrix UQ = U.matrix() * Q;
  const Matrix gen = skew_generator(p, theta) * Q.transpose();
  return Curve(
      CurveFamily::PlanarRotation,
      [UQ, Q, p, theta](double t) -> Matrix {
        return UQ * block_rotation(p, theta * t) * Q.transpose();
      },
      [UQ, gen, p, theta](double t) -> Matrix { return UQ * block_rotation(p, theta * t) * gen; });
}

Curve k_theta_curve(const StiefelPoint &U, const Matrix &Uhat, const Matrix &Q, double theta) {
  const Index n = U.n();
  const Index p = U.p();
  if (n < 2 * p) throw InvalidInput("k_theta_curve: requires n >= 2p");
  if (Uhat.rows() != n || Uhat.cols() != p || orthonormality_error(Uhat) > 1e-10 ||
      (Uhat.transpose() * U.matrix()).norm() > 1e-10) {
    throw InvalidInput("k_theta_curve: Uhat must be an n x p frame with Uhat^T U = 0");
  }
  require_orthogonal("k_theta_curve", Q, 2 * p);

  Matrix frame(n, 2 * p);
  frame << U.matrix(), Uhat;
  frame = frame * Q;
  const Matrix Qt_head = Q.transpose().leftCols(p);  // Q^T I_{2p x p}
  Matrix W = Matrix::Zero(2 * p, 2 * p);
  W.topRightCorner(p, p) = theta * Matrix::Identity(p, p);
  W.bottomLeftCorner(p, p) = -theta * Matrix::Identity(p, p);

  auto K = [p](double angle) {
    Matrix out(2 * p, 2 * p);
    const Matrix I = Matrix::Identity(p, p);
    out << std::cos(angle) * I, std::sin(angle) * I, -std::sin(angle) * I, std::cos(angle) * I;
    return out;
  };
  return Curve(
      CurveFamily::KTheta,
      [frame, Qt_head, K, theta](double t) -> Matrix { return frame * K(theta * t) * Qt_head; },
      [frame, Qt_head, K, W, theta](double t) -> Matrix {
        return frame * K(theta * t) * W * Qt_head;
      });
}

Curve gamma_k(const StiefelPoint &U, Index k, std::optional<Vector> u_perp) {
  const Index p = U.p();
  if (k < 1 || k > p) throw InvalidInput("gamma_k: k must lie in [1, p], got " + std::to_string(k));
  const Matrix Um = U.matrix();

  if (k % 2 == 0) {
    const Matrix gen = skew_generator(k, kPi);
    return Curve(
        CurveFamily::GammaK,
        [Um, k](double t) -> Matrix {
          Matrix out = Um;
          out.leftCols(k) = Um.leftCols(k) * block_rotation(k, kPi * t);
          return out;
        },
        [Um, k, gen](double t) -> Matrix {
          Matrix out = Matrix::Zero(Um.rows(), Um.cols());
          out.leftCols(k) = Um.leftCols(k) * block_rotation(k, kPi * t) * gen;
          return out;
        });
  }

  const Vector u = checked_u_perp("gamma_k", U, std::move(u_perp));
  if (k == 1) {
    return Curve(
        CurveFamily::GammaK,
        [Um, u](double t) -> Matrix {
          Matrix out = Um;
          out.col(0) = std::cos(kPi * t) * Um.col(0) + std::sin(kPi * t) * u;
          return out;
        },
        [Um, u](double t) -> Matrix {
          Matrix out = Matrix::Zero(Um.rows(), Um.cols());
          out.col(0) = kPi * (-std::sin(kPi * t) * Um.col(0) + std::cos(kPi * t) * u);
          return out;
        });
  }

  // Odd k >= 3: planar rotation of the first k - 3 columns, the 4-frame
  // [U_{k-2:k} u] driven by breve_A / breve_B for the last three.
  const Index m = k - 3;
  Matrix frame4(Um.rows(), 4);
  frame4 << Um.middleCols(m, 3), u;
  const Matrix Ab = breve_A();
  const Matrix Bb = breve_B();
  Matrix M(4, 4);
  M << 2.0 * Ab, -Bb.transpose(), Bb, Matrix::Zero(1, 1);
  Matrix gen4(4, 3);
  gen4 << Ab, Bb;
  const Matrix genm = m > 0 ? skew_generator(m, kPi) : Matrix(0, 0);
  return Curve(
      CurveFamily::GammaK,
      [Um, m, frame4, M, Ab](double t) -> Matrix {
        Matrix out = Um;
        if (m > 0) out.leftCols(m) = Um.leftCols(m) * block_rotation(m, kPi * t);
        out.middleCols(m, 3) = frame4 * expm(t * M).leftCols(3) * expm(-t * Ab);
        return out;
      },
      [Um, m, frame4, M, Ab, gen4, genm](double t) -> Matrix {
        Matrix out = Matrix::Zero(Um.rows(), Um.cols());
        if (m > 0) out.leftCols(m) = Um.leftCols(m) * block_rotation(m, kPi * t) * genm;
        out.middleCols(m, 3) = frame4 * expm(t * M) * gen4 * expm(-t * Ab);
        return out;
      });
}

TangentVector gamma_k_tangent(const StiefelPoint &U, Index k, std::optional<Vector> u_perp) {
  const Index p = U.p();
  if (k < 1 || k > p) {
    throw InvalidInput("gamma_k_tangent: k must lie in [1, p], got " + std::to_string(k));
  }
  Matrix A = Matrix::Zero(p, p);
  if (k % 2 == 0) {
    A.topLeftCorner(k, k) = skew_generator(k, kPi);
    return TangentVector::decompose(U, U.matrix() * A);
  }
  const Vector u = checked_u_perp("gamma_k_tangent", U, std::move(u_perp));
  Matrix Brow = Matrix::Zero(1, p);
  if (k == 1) {
    Brow(0, 0) = kPi;
  } else {
    const Index m = k - 3;
    if (m > 0) A.topLeftCorner(m, m) = skew_generator(m, kPi);
    A.block(m, m, 3, 3) = breve_A();
    Brow.middleCols(m, 3) = breve_B();
  }
  return TangentVector::decompose(U, U.matrix() * A + u * Brow);
}

std::pair<double, double> gamma_k_distance_law(Index k, double t) {
  if (k < 1) throw InvalidInput("gamma_k_distance_law: k must be >= 1");
  const double rk = std::sqrt(static_cast<double>(k));
  return {t * kPi * rk, 2.0 * rk * std::sin(0.5 * kPi * t)};
}

CapGeometry solve_cap_system(const StiefelPoint &U, const StiefelPoint &Utilde) {
  if (U.n() != Utilde.n() || U.p() != Utilde.p()) {
    throw InvalidInput("solve_cap_system: dimension mismatch");
  }
  const Index p = U.p();
  CapGeometry cap;
  cap.padding = std::max<Index>(0, 3 * p - U.n());
  cap.U = pad_rows(U, cap.padding).matrix();
  cap.Utilde = pad_rows(Utilde, cap.padding).matrix();
  cap.C = 0.5 * (cap.U + cap.Utilde);
  cap.R = 0.5 * (cap.Utilde - cap.U);
  cap.r = cap.R.norm();

  Matrix both(cap.U.rows(), 2 * p);
  both << cap.U, cap.Utilde;
  const Matrix complement = orthogonal_complement(both);
  if (complement.cols() < p) {
    throw InvalidInput("solve_cap_system: no frame orthogonal to both points");
  }
  cap.S = complement.leftCols(p) * psd_sqrt(cap.R.transpose() * cap.R);
  return cap;
}

Curve great_circle_curve(const CapGeometry &cap) {
  const Matrix C = cap.C;
  const Matrix R = cap.R;
  const Matrix S = cap.S;
  return Curve(
      CurveFamily::GreatCircle,
      [C, R, S](double t) -> Matrix {
        return C - std::cos(kPi * t) * R + std::sin(kPi * t) * S;
      },
      [R, S](double t) -> Matrix {
        return kPi * (std::sin(kPi * t) * R + std::cos(kPi * t) * S);
      });
}

Curve great_circle_curve(const StiefelPoint &U, const StiefelPoint &Utilde) {
  return great_circle_curve(solve_cap_system(U, Utilde));
}

Curve exp_ray(const BetaMetric &metric, const TangentVector &delta) {
  return ray_curve(CurveFamily::ExpRay, metric, delta);
}

std::pair<double, double> projected_curve_length(const BetaMetric &metric,
                                                 const TangentVector &delta, int n_quad) {
  const Index p = delta.base().p();
  if (p < 2) throw InvalidInput("projected_curve_length: requires p >= 2");
  if (metric.beta() < 0.5) {
    throw NotApplicable("projected_curve_length: column deletion shortens curves only for beta >= 1/2");
  }
  const Curve ray = exp_ray(metric, delta);
  const double len = integrate(
      [&](double t) {
        return velocity_norm(metric, ray.eval(t).leftCols(p - 1), ray.velocity(t).leftCols(p - 1));
      },
      0.0, 1.0, n_quad);
  return {len, norm(metric, delta)};
}

std::pair<double, double> branch_lengths(double beta) {
  if (!(beta > 1.0)) throw NotApplicable("branch_lengths: requires beta > 1");
  const double g = 1.0 - 2.0 * beta;
  const double first = kPi * std::sqrt(2.0 * beta);
  const double second = kPi * std::sqrt(2.0 * beta / (g * g) + 4.0 * (1.0 - beta * beta / (g * g)));
  return {first, second};
}

BranchPair branch_pair(double beta, std::optional<StiefelPoint> U_opt) {
  if (!(beta > 1.0)) throw NotApplicable("branch_pair: requires beta > 1");
  const StiefelPoint U = U_opt ? *U_opt : StiefelPoint::identity(3, 2);
  if (U.n() != 3 || U.p() != 2) throw InvalidInput("branch_pair: U must lie on St(3, 2)");
  const BetaMetric metric(beta);
  const Matrix &Um = U.matrix();
  const Vector u = orthonormal_completion(Um).col(0);

  TangentVector first = TangentVector::decompose(U, Um * skew_generator(2, kPi));

  const double g = 1.0 - 2.0 * beta;
  Matrix A = skew_generator(2, kPi / g);
  Matrix B = Matrix::Zero(1, 2);
  B(0, 0) = 2.0 * kPi * std::sqrt(1.0 - beta * beta / (g * g));
  TangentVector second = TangentVector::decompose(U, Um * A + u * B);

  return BranchPair{ray_curve(CurveFamily::Branch1, metric, first),
                    ray_curve(CurveFamily::Branch2, metric, second), first, second};
}

TangentVector appendix_a_tangent(const StiefelPoint &U, const Vector &u_perp) {
  if (U.p() != 3) throw InvalidInput("appendix_a_tangent: requires p == 3");
  const Vector u = checked_u_perp("appendix_a_tangent", U, u_perp);
  return TangentVector::decompose(U, U.matrix() * breve_A() + u * breve_B());
}

double slope_ratio(const BetaMetric &metric, const TangentVector &delta, double delta_small) {
  if (std::abs(norm(metric, delta) - 1.0) > 1e-8) {
    throw InvalidInput("slope_ratio: tangent must have unit beta-norm");
  }
  if (!(delta_small > 0.0) || delta_small > 1e-3) {
    throw InvalidInput("slope_ratio: delta_small must lie in (0, 1e-3]");
  }
  const Matrix &U = delta.base().matrix();
  auto gap = [&](double t) {
    return (U - exp_map(metric, delta.scaled(t)).matrix()).norm() - delta_small;
  };
  double lo = 0.0;
  double hi = 10.0 * delta_small;
  if (gap(hi) < 0.0) {
    throw NumericalFailure("slope_ratio: Frobenius gap does not reach delta_small on [0, 10 delta]");
  }
  for (int i = 0; i < 200 && hi - lo > 1e-15 * delta_small; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (!std::isfinite(gap(mid))) throw NumericalFailure("slope_ratio: non-finite exponential");
    (gap(mid) < 0.0 ? lo : hi) = mid;
  }
  // Along a unit-speed minimal geodesic d_beta equals the elapsed time.
  return 0.5 * (lo + hi) / delta_small;
}

}  // namespace stiefel
