// Acceptance criteria 1-9. Prints one PASS/FAIL line per criterion and exits
// non-zero if any fails (including a runtime over its limit).

#include "oracles.hpp"

#include "stiefel/bounds.hpp"
#include "stiefel/curves.hpp"
#include "stiefel/logmap.hpp"
#include "stiefel/quadrature.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>

using namespace stiefel;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool ok;
  std::string detail;
};

std::string fmt(const char *f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

TangentVector tangent_of_norm(const BetaMetric &metric, const StiefelPoint &U, double length,
                              RandomSource &rng) {
  const TangentVector d = TangentVector::project(U, rng.gaussian(U.n(), U.p()));
  return d.scaled(length / norm(metric, d));
}

// 1. Closed-form exponential reaching -U on St(6,3).
Outcome closed_form_exp() {
  RandomSource rng(101);
  double worst_exp = 0.0;
  for (int i = 0; i < 20; ++i) {
    const StiefelPoint U = StiefelPoint::random(6, 3, rng);
    const Vector u = orthonormal_completion(U.matrix()).col(0);
    const Matrix end = exp_map(BetaMetric::euclidean(), appendix_a_tangent(U, u)).matrix();
    worst_exp = std::max(worst_exp, (end + U.matrix()).norm());
  }
  Matrix M(4, 4);
  M << 2.0 * breve_A(), -breve_B().transpose(), breve_B(), Matrix::Zero(1, 1);
  Matrix eM(4, 4);
  eM << 1, -2, -2, 0, -2, 1, -2, 0, -2, -2, 1, 0, 0, 0, 0, -3;
  eM /= 3.0;
  Matrix eA(3, 3);
  eA << -1, 2, 2, 2, -1, 2, 2, 2, -1;
  eA /= 3.0;
  const double worst_entry = std::max((expm(M) - eM).cwiseAbs().maxCoeff(),
                                      (expm(-breve_A()) - eA).cwiseAbs().maxCoeff());
  return {worst_exp <= 1e-10 && worst_entry <= 1e-12,
          fmt("max ||exp + U||_F = %.2e (tol 1e-10), max entry error = %.2e (tol 1e-12)", worst_exp,
              worst_entry)};
}

// 2. gamma_k on St(8,4): endpoints, lengths and the distance law.
Outcome gamma_k_attainment() {
  RandomSource rng(102);
  const StiefelPoint U = StiefelPoint::random(8, 4, rng);
  const BetaMetric e = BetaMetric::euclidean();
  double worst_end = 0.0, worst_len = 0.0, worst_law = 0.0;
  for (int k = 1; k <= 4; ++k) {
    const Curve c = gamma_k(U, k);
    worst_end = std::max(worst_end, (c.end() - flip(U, k).matrix()).norm());
    worst_len = std::max(worst_len, std::abs(curve_length(c, e) - kPi * std::sqrt(k)));
    for (int i = 0; i <= 100; ++i) {
      const double t = i / 100.0;
      const auto [geo, frob] = gamma_k_distance_law(k, t);
      const double len =
          t == 0.0 ? 0.0 : integrate([&](double s) { return c.speed(e, s); }, 0.0, t, 64);
      worst_law = std::max({worst_law, std::abs((c.eval(t) - U.matrix()).norm() - frob),
                            std::abs(len - geo)});
    }
  }
  return {worst_end <= 1e-10 && worst_len <= 1e-8 && worst_law <= 1e-8,
          fmt("endpoint %.2e (tol 1e-10), length %.2e (tol 1e-8), law %.2e (tol 1e-8)", worst_end,
              worst_len, worst_law)};
}

// 3. Great circle on St(9,3): on-manifold, length (pi/2) delta; certified logs
// below the line.
Outcome linear_upper_bound() {
  RandomSource rng(103);
  const BetaMetric e = BetaMetric::euclidean();
  double worst_orth = 0.0, worst_len = 0.0, worst_log = -1e300;
  int checked_logs = 0, not_converged = 0;
  for (int i = 0; i < 200; ++i) {
    const StiefelPoint U = StiefelPoint::random(9, 3, rng);
    const StiefelPoint V = StiefelPoint::random(9, 3, rng);
    const Curve c = great_circle_curve(U, V);
    for (int j = 0; j <= 20; ++j) {
      worst_orth = std::max(worst_orth, orthonormality_error(c.eval(j / 20.0)));
    }
    const double delta = frobenius_distance(U, V).value;
    worst_len = std::max(worst_len, std::abs(curve_length(c, e) - 0.5 * kPi * delta));
    const LogResult r = log_shooting(e, U, V);
    if (!r.converged()) {
      ++not_converged;
      continue;
    }
    if (r.certificate == Certificate::CertifiedMinimal ||
        r.certificate == Certificate::WithinBounds) {
      ++checked_logs;
      worst_log = std::max(worst_log, r.length - 0.5 * kPi * delta);
    }
  }
  return {worst_orth <= 1e-10 && worst_len <= 1e-8 && worst_log <= 1e-6,
          fmt("on-manifold %.2e (tol 1e-10), length %.2e (tol 1e-8), ", worst_orth, worst_len) +
              fmt("max(log length - (pi/2) delta) = %.2e over %.0f certified logs (%.0f not converged)",
                  worst_log, checked_logs, not_converged)};
}

// 4. d_c / d_E on St(4,2) for 1000 roundtrip pairs, built alternately from the
// Euclidean and the canonical exponential. A pair counts when both logs
// converge and the log of the constructing metric is certified minimal or
// recovers the constructed length.
Outcome lipschitz_equivalence() {
  RandomSource rng(104);
  const BetaMetric e = BetaMetric::euclidean();
  const BetaMetric c = BetaMetric::canonical();
  double lo = 1e300, hi = -1e300;
  int used = 0;
  for (int i = 0; i < 1000; ++i) {
    const BetaMetric &maker = i % 2 == 0 ? e : c;
    const StiefelPoint U = StiefelPoint::random(4, 2, rng);
    const double target = rng.uniform(0.02, 1.0) * 0.5 * kPi * std::sqrt(0.5);
    const StiefelPoint V = exp_map(maker, tangent_of_norm(maker, U, target, rng));
    const LogResult re = log_shooting(e, U, V);
    const LogResult rc = log_shooting(c, U, V);
    if (!re.converged() || !rc.converged()) continue;
    const LogResult &own = i % 2 == 0 ? re : rc;
    if (own.certificate != Certificate::CertifiedMinimal && std::abs(own.length - target) > 1e-8) {
      continue;
    }
    ++used;
    lo = std::min(lo, rc.length / re.length);
    hi = std::max(hi, rc.length / re.length);
  }
  const bool ok = used >= 950 && lo >= std::sqrt(0.5) - 1e-6 && hi <= 1.0 + 1e-6;
  return {ok, fmt("ratio range [%.6f, %.6f] over %.0f pairs, band [0.707107, 1]", lo, hi, used)};
}

// 5. Two geodesics from U to -U on St(3,2) at beta = 2.
Outcome branch_counterexample() {
  const BranchPair bp = branch_pair(2.0);
  const BetaMetric metric(2.0);
  const Matrix target = -StiefelPoint::identity(3, 2).matrix();
  const double l1 = curve_length(bp.first, metric);
  const double l2 = curve_length(bp.second, metric);
  const double end = std::max((bp.first.end() - target).norm(), (bp.second.end() - target).norm());
  const bool ok = std::abs(l1 - 2.0 * kPi) <= 1e-8 &&
                  std::abs(l2 - kPi * std::sqrt(8.0 / 3.0)) <= 1e-8 && end <= 1e-10 &&
                  l1 - l2 > 1.1;
  return {ok, fmt("l(gamma1) = %.8f, l(gamma2) = %.8f, endpoint error %.2e", l1, l2, end) +
                  fmt(", margin %.4f (> 1.1)", l1 - l2)};
}

// 6. 500 converged logs on St(5,3) and St(6,3), beta in {1/2, 1, 2}.
Outcome lower_envelope_soundness() {
  RandomSource rng(106);
  const double betas[] = {0.5, 1.0, 2.0};
  int converged = 0, attempts = 0, violations = 0;
  double worst = -1e300;
  while (converged < 500 && attempts < 5000) {
    const double beta = betas[attempts % 3];
    const Index n = (attempts / 3) % 2 == 0 ? 5 : 6;
    ++attempts;
    const BetaMetric metric(beta);
    const StiefelPoint U = StiefelPoint::random(n, 3, rng);
    const StiefelPoint V = StiefelPoint::random(n, 3, rng);
    const LogResult r = log_shooting(metric, U, V);
    if (!r.converged()) continue;
    ++converged;
    worst = std::max(worst, r.lower - r.length);
    if (r.length < r.lower - 1e-8) ++violations;
  }
  return {converged == 500 && violations == 0,
          fmt("%.0f converged of %.0f attempts, violations %.0f", converged, attempts, violations) +
              fmt(", max(lower - length) = %.2e", worst)};
}

// 7. Slope ratios at delta = 1e-6 on St(4,2).
Outcome slope_bounds() {
  RandomSource rng(107);
  double worst = -1e300, worst_a = 0.0, worst_b = 0.0;
  for (double beta : {0.25, 0.5, 1.0, 1.5}) {
    const BetaMetric metric(beta);
    const double lo = std::min(1.0, std::sqrt(beta)), hi = std::max(1.0, std::sqrt(beta));
    for (int i = 0; i < 100; ++i) {
      const StiefelPoint U = StiefelPoint::random(4, 2, rng);
      const double r = slope_ratio(metric, tangent_of_norm(metric, U, 1.0, rng), 1e-6);
      worst = std::max({worst, lo - r, r - hi});
      TangentVector a = TangentVector::decompose(U, U.matrix() * random_skew(2, rng));
      a = a.scaled(1.0 / norm(metric, a));
      TangentVector b =
          TangentVector::decompose(U, orthonormal_completion(U.matrix()) * rng.gaussian(2, 2));
      b = b.scaled(1.0 / norm(metric, b));
      if (beta < 1.0) worst_a = std::max(worst_a, std::abs(slope_ratio(metric, a, 1e-6) - lo));
      worst_b = std::max(worst_b, std::abs(slope_ratio(metric, b, 1e-6) - 1.0));
    }
  }
  return {worst <= 1e-3 && worst_a <= 1e-3 && worst_b <= 1e-3,
          fmt("band excess %.2e, pure-A error %.2e, pure-B error %.2e (tol 1e-3)", worst, worst_a,
              worst_b)};
}

// 8. Log lengths unchanged by padding St(6,3) to St(9,3).
Outcome padding_invariance() {
  RandomSource rng(108);
  double worst = 0.0;
  int failures = 0;
  for (double beta : {0.5, 1.0, 2.0}) {
    const BetaMetric metric(beta);
    for (int i = 0; i < 50; ++i) {
      const StiefelPoint U = StiefelPoint::random(6, 3, rng);
      const TangentVector d = tangent_of_norm(metric, U, rng.uniform(0.05, 1.0), rng);
      const StiefelPoint V = exp_map(metric, d);
      const LogResult a = log_shooting(metric, U, V);
      const LogResult b = log_shooting(metric, pad_rows(U, 3), pad_rows(V, 3));
      if (!a.converged() || !b.converged()) {
        ++failures;
        continue;
      }
      worst = std::max(worst, std::abs(a.length - b.length));
    }
  }
  return {failures == 0 && worst <= 1e-6,
          fmt("max |l - l_padded| = %.2e over 150 pairs (tol 1e-6), %.0f non-converged", worst,
              failures)};
}

// 9. Deleting a column does not lengthen a geodesic, St(5,3).
Outcome column_deletion() {
  RandomSource rng(109);
  int violations = 0;
  double worst = -1e300;
  for (double beta : {0.5, 0.75, 1.0}) {
    const BetaMetric metric(beta);
    for (int i = 0; i < 100; ++i) {
      const StiefelPoint U = StiefelPoint::random(5, 3, rng);
      const TangentVector d = tangent_of_norm(metric, U, rng.uniform(0.05, 3.0 * kPi), rng);
      const auto [len, full] = projected_curve_length(metric, d);
      worst = std::max(worst, len - full);
      if (len > full + 1e-8) ++violations;
    }
  }
  return {violations == 0,
          fmt("%.0f violations of 300, max(l_projected - ||Delta||) = %.2e", violations, worst)};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char *name;
    double limit_s;
    std::function<Outcome()> run;
  };
  const Criterion criteria[] = {
      {1, "closed-form exponential to -U", 1.0, closed_form_exp},
      {2, "gamma_k attainment", 5.0, gamma_k_attainment},
      {3, "linear upper bound construction", 30.0, linear_upper_bound},
      {4, "Lipschitz equivalence", 60.0, lipschitz_equivalence},
      {5, "branch counterexample", 1.0, branch_counterexample},
      {6, "lower-envelope soundness", 60.0, lower_envelope_soundness},
      {7, "slope bounds", 30.0, slope_bounds},
      {8, "padding invariance", 30.0, padding_invariance},
      {9, "column-deletion inequality", 10.0, column_deletion},
  };
  int failed = 0;
  for (const auto &c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    const Outcome o = c.run();
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool ok = o.ok && secs < c.limit_s;
    failed += ok ? 0 : 1;
    std::printf("%s criterion %d (%s): %s [%.2fs, limit %.0fs]\n", ok ? "PASS" : "FAIL", c.id,
                c.name, o.detail.c_str(), secs, c.limit_s);
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
