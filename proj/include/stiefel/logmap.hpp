#pragma once

#include "stiefel/manifold.hpp"

#include <optional>
#include <string_view>

namespace stiefel {

enum class StepControl { FixedDamping, Armijo };

struct LogOptions {
  int max_iter = 200;
  double residual_tol = 1e-10;  // on ||exp(Delta) - Utilde||_F
  StepControl step_control = StepControl::FixedDamping;
  double damping = 1.0;  // initial tau in (0, 1]
  double certify_tol = 1e-6;

  void validate() const;
};

enum class Certificate { CertifiedMinimal, WithinBounds, ExceedsUpperBound, NotConverged };

std::string_view to_string(Certificate c);

struct LogResult {
  TangentVector delta;
  double length;  // ||delta||_beta
  double residual;
  int iterations;
  Certificate certificate;
  // False when n < 2p: an ExceedsUpperBound verdict is then advisory only.
  bool upper_bound_proven;
  double frob_dist;
  double lower;  // lower_envelope at frob_dist
  double upper;  // upper_envelope at frob_dist

  bool converged() const { return certificate != Certificate::NotConverged; }
};

/// Single-shooting logarithm. Each step adds the tangent projection of the
/// endpoint error, rotated back from exp(Delta) to U. When that stalls, a
/// Gauss-Newton step on the exact Jacobian of exp is taken instead, and the
/// step is halved whenever the residual fails to decrease. Starts from `initial` if given,
/// otherwise from project_tangent(U, Utilde - U) scaled to the lower envelope.
/// Non-convergence is reported through the certificate.
LogResult log_shooting(const BetaMetric &metric, const StiefelPoint &U, const StiefelPoint &Utilde,
                       const LogOptions &opts = {},
                       const std::optional<TangentVector> &initial = std::nullopt);

/// Classifies ||Delta||_beta against the envelopes at ||Utilde - U||_F.
/// Throws InvalidInput if exp(Delta) misses Utilde by more than endpoint_tol.
Certificate certify(const BetaMetric &metric, const StiefelPoint &U, const StiefelPoint &Utilde,
                    const TangentVector &delta, double certify_tol = 1e-6,
                    double endpoint_tol = 1e-8);

}  // namespace stiefel
