#pragma once

#include "stiefel/manifold.hpp"

#include <functional>
#include <optional>
#include <string_view>
#include <utility>

namespace stiefel {

enum class CurveFamily { PlanarRotation, KTheta, GammaK, GreatCircle, Branch1, Branch2, ExpRay };

std::string_view to_string(CurveFamily family);

/// Closed-form path t in [0, 1] -> St(n, p) with exact velocity.
class Curve {
 public:
  using Path = std::function<Matrix(double)>;

  Curve(CurveFamily family, Path eval, Path velocity);

  CurveFamily family() const { return family_; }
  Matrix eval(double t) const { return eval_(t); }
  Matrix velocity(double t) const { return velocity_(t); }
  StiefelPoint point(double t) const { return StiefelPoint(eval_(t)); }
  Matrix start() const { return eval_(0.0); }
  Matrix end() const { return eval_(1.0); }

  /// ||velocity(t)||_beta at eval(t).
  double speed(const BetaMetric &metric, double t) const;

 private:
  CurveFamily family_;
  Path eval_;
  Path velocity_;
};

/// Length under the beta-metric by composite Gauss-Legendre quadrature.
double curve_length(const Curve &curve, const BetaMetric &metric, int n_quad = 64);

// --- building blocks -------------------------------------------------------

/// Block-diagonal p x p rotation with 2 x 2 blocks [[cos, sin], [-sin, cos]].
Matrix block_rotation(Index p, double theta);

/// Block-diagonal skew generator with 2 x 2 blocks [[0, theta], [-theta, 0]];
/// expm(skew_generator(p, theta)) == block_rotation(p, theta).
Matrix skew_generator(Index p, double theta);

/// The 3 x 3 skew matrix and 1 x 3 row that drive the odd flip geodesics:
/// ||A||_F^2 = 2 pi^2, ||B||_F^2 = pi^2.
Matrix breve_A();
Matrix breve_B();

/// Negates the first k columns of U.
StiefelPoint flip(const StiefelPoint &U, Index k);

// --- curve families --------------------------------------------------------

/// t -> U Q G_p(theta t) Q^T, p even, Q in O(p).
Curve planar_rotation_curve(const StiefelPoint &U, const Matrix &Q, double theta);

/// t -> [U Uhat] Q K(theta t) Q^T I_{2p x p} with Uhat^T U = 0, Q in O(2p) and
/// K(theta) = expm([[0, theta I], [-theta I, 0]]).
Curve k_theta_curve(const StiefelPoint &U, const Matrix &Uhat, const Matrix &Q, double theta);

/// Euclidean geodesic from U to flip(U, k). Odd k needs one unit direction
/// orthogonal to U; when u_perp is not given the first column of
/// orthonormal_completion(U) is used.
Curve gamma_k(const StiefelPoint &U, Index k, std::optional<Vector> u_perp = std::nullopt);

/// Initial velocity of gamma_k, i.e. gamma_k(t) = Exp_{E,U}(t * tangent).
TangentVector gamma_k_tangent(const StiefelPoint &U, Index k,
                              std::optional<Vector> u_perp = std::nullopt);

/// (t pi sqrt(k), 2 sqrt(k) sin(t pi / 2)): geodesic and Frobenius distance
/// from U to gamma_k(t).
std::pair<double, double> gamma_k_distance_law(Index k, double t);

/// Great-circle data for the pair (U, Utilde), after padding both to
/// n + padding >= 3p rows.
struct CapGeometry {
  Index padding;
  Matrix U;       // padded start
  Matrix Utilde;  // padded end
  Matrix C;       // (U + Utilde) / 2
  Matrix R;       // (Utilde - U) / 2
  double r;       // ||Utilde - U||_F / 2
  Matrix S;       // C^T S + S^T C = 0, R^T S + S^T R = 0, S^T S = R^T R
};

CapGeometry solve_cap_system(const StiefelPoint &U, const StiefelPoint &Utilde);

/// t -> C - cos(pi t) R + sin(pi t) S on the padded manifold; Euclidean length
/// (pi / 2) ||Utilde - U||_F.
Curve great_circle_curve(const StiefelPoint &U, const StiefelPoint &Utilde);
Curve great_circle_curve(const CapGeometry &cap);

/// t -> Exp_{beta,U}(t Delta).
Curve exp_ray(const BetaMetric &metric, const TangentVector &delta);

/// beta-length of t -> Exp_{beta,U}(t Delta) I_{n x (p-1)} in St(n, p-1),
/// returned with ||Delta||_beta. Requires p >= 2 and beta >= 1/2.
std::pair<double, double> projected_curve_length(const BetaMetric &metric,
                                                 const TangentVector &delta, int n_quad = 64);

/// Two geodesics from U to -U on St(3, 2) for beta > 1: the in-plane rotation
/// and the shorter one leaving the column space.
struct BranchPair {
  Curve first;
  Curve second;
  TangentVector first_tangent;
  TangentVector second_tangent;
};

BranchPair branch_pair(double beta, std::optional<StiefelPoint> U = std::nullopt);

/// Closed-form lengths (pi sqrt(2 beta), pi sqrt(2 beta/(1-2beta)^2 + 4(1 - beta^2/(1-2beta)^2))).
std::pair<double, double> branch_lengths(double beta);

/// U breve_A + u_perp breve_B on St(n, 3); its Euclidean exponential is -U.
TangentVector appendix_a_tangent(const StiefelPoint &U, const Vector &u_perp);

/// Ratio d_beta / delta at Frobenius distance delta_small along Exp(t Delta),
/// ||Delta||_beta = 1. Finds t by bisection on [0, 10 delta_small].
double slope_ratio(const BetaMetric &metric, const TangentVector &delta, double delta_small);

}  // namespace stiefel
