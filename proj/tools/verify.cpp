#include "verify.hpp"

#include "stiefel/bounds.hpp"
#include "stiefel/curves.hpp"
#include "stiefel/logmap.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>

namespace stiefel::cli {

namespace {

constexpr double kPi = std::numbers::pi;

struct Suite {
  const char *name;
  double tolerance;
  std::function<double(RandomSource &)> worst_error;
};

TangentVector unit_tangent(const BetaMetric &metric, const StiefelPoint &U, RandomSource &rng) {
  TangentVector d = TangentVector::project(U, rng.gaussian(U.n(), U.p()));
  return d.scaled(1.0 / norm(metric, d));
}

double exp_reduced_vs_full(RandomSource &rng) {
  double worst = 0.0;
  for (int i = 0; i < 30; ++i) {
    const int p = 1 + i % 4;
    const int n = p + 1 + i % 5;
    const BetaMetric metric(rng.uniform(0.2, 2.5));
    const StiefelPoint U = StiefelPoint::random(n, p, rng);
    const TangentVector d = unit_tangent(metric, U, rng).scaled(rng.uniform(0.1, 3.0));
    const Matrix a = exp_map(metric, d).matrix();
    const Matrix b = exp_map_full(metric, d).matrix();
    worst = std::max({worst, (a - b).norm(), orthonormality_error(a)});
  }
  return worst;
}

double appendix_identity(RandomSource &rng) {
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    const StiefelPoint U = StiefelPoint::random(6, 3, rng);
    const Vector u = orthonormal_completion(U.matrix()).col(0);
    const Matrix end = exp_map(BetaMetric::euclidean(), appendix_a_tangent(U, u)).matrix();
    worst = std::max(worst, (end + U.matrix()).norm());
  }
  return worst;
}

double gamma_k_lengths(RandomSource &rng) {
  const StiefelPoint U = StiefelPoint::random(8, 4, rng);
  const BetaMetric e = BetaMetric::euclidean();
  double worst = 0.0;
  for (int k = 1; k <= 4; ++k) {
    const Curve c = gamma_k(U, k);
    worst = std::max(worst, (c.end() - flip(U, k).matrix()).norm());
    worst = std::max(worst, std::abs(curve_length(c, e) - kPi * std::sqrt(k)));
  }
  return worst;
}

double great_circle_linear_bound(RandomSource &rng) {
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const StiefelPoint U = StiefelPoint::random(9, 3, rng);
    const StiefelPoint V = StiefelPoint::random(9, 3, rng);
    const Curve c = great_circle_curve(U, V);
    const double delta = frobenius_distance(U, V).value;
    worst = std::max(worst, std::abs(curve_length(c, BetaMetric::euclidean()) - 0.5 * kPi * delta));
    worst = std::max(worst, orthonormality_error(c.eval(rng.uniform())));
  }
  return worst;
}

// Positive part of envelope violations by converged logs.
double log_envelopes(RandomSource &rng) {
  double worst = 0.0;
  for (int i = 0; i < 30; ++i) {
    const double beta = i % 3 == 0 ? 0.5 : (i % 3 == 1 ? 1.0 : 2.0);
    const BetaMetric metric(beta);
    const StiefelPoint U = StiefelPoint::random(5, 3, rng);
    const StiefelPoint V = StiefelPoint::random(5, 3, rng);
    const LogResult r = log_shooting(metric, U, V);
    if (!r.converged()) continue;
    worst = std::max(worst, r.lower - r.length);
    if (r.certificate == Certificate::CertifiedMinimal) {
      worst = std::max(worst, r.length - r.upper);
    }
  }
  return worst;
}

double log_roundtrip(RandomSource &rng) {
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const BetaMetric metric(rng.uniform(0.3, 2.0));
    const StiefelPoint U = StiefelPoint::random(5, 2, rng);
    const double target = rng.uniform(0.1, 0.5) * std::min(1.0, std::sqrt(metric.beta())) * kPi;
    const TangentVector d = unit_tangent(metric, U, rng).scaled(target);
    const LogResult r = log_shooting(metric, U, exp_map(metric, d));
    worst = std::max(worst, r.converged() ? std::abs(r.length - target) : 1.0);
  }
  return worst;
}

double column_deletion(RandomSource &rng) {
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const BetaMetric metric(rng.uniform(0.5, 1.0));
    const StiefelPoint U = StiefelPoint::random(5, 3, rng);
    const TangentVector d = unit_tangent(metric, U, rng).scaled(rng.uniform(0.1, 3.0));
    const auto [len, full] = projected_curve_length(metric, d);
    worst = std::max(worst, len - full);
  }
  return worst;
}

double slope_bounds(RandomSource &rng) {
  double worst = 0.0;
  for (double beta : {0.25, 0.5, 1.0, 1.5}) {
    const BetaMetric metric(beta);
    for (int i = 0; i < 10; ++i) {
      const StiefelPoint U = StiefelPoint::random(4, 2, rng);
      const double ratio = slope_ratio(metric, unit_tangent(metric, U, rng), 1e-6);
      worst = std::max({worst, std::min(1.0, std::sqrt(beta)) - ratio,
                        ratio - std::max(1.0, std::sqrt(beta))});
    }
  }
  return worst;
}

double branch_counterexample(RandomSource &) {
  const BranchPair bp = branch_pair(2.0);
  const BetaMetric metric(2.0);
  const Matrix target = -StiefelPoint::identity(3, 2).matrix();
  return std::max({std::abs(curve_length(bp.first, metric) - 2.0 * kPi),
                   std::abs(curve_length(bp.second, metric) - kPi * std::sqrt(8.0 / 3.0)),
                   (bp.first.end() - target).norm(), (bp.second.end() - target).norm()});
}

double lipschitz_consistency(RandomSource &rng) {
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const double b1 = rng.uniform(0.1, 3.0);
    const double b2 = rng.uniform(0.1, 3.0);
    const StiefelPoint U = StiefelPoint::random(4, 2, rng);
    const TangentVector d = TangentVector::project(U, rng.gaussian(4, 2));
    const double ratio = norm(BetaMetric(b1), d) / norm(BetaMetric(b2), d);
    const LipschitzPair c = lipschitz(b1, b2);
    worst = std::max({worst, c.lo - ratio, ratio - c.hi});
  }
  return worst;
}

}  // namespace

std::vector<SuiteResult> run_verify(std::uint64_t seed, double tol_scale) {
  const std::vector<Suite> suites = {
      {"exp_reduced_matches_full", 1e-11, exp_reduced_vs_full},
      {"closed_form_exp_reaches_minus_u", 1e-10, appendix_identity},
      {"gamma_k_endpoint_and_length", 1e-8, gamma_k_lengths},
      {"great_circle_linear_bound", 1e-8, great_circle_linear_bound},
      {"lipschitz_constants", 1e-12, lipschitz_consistency},
      {"log_roundtrip", 1e-8, log_roundtrip},
      {"log_within_envelopes", 1e-8, log_envelopes},
      {"column_deletion", 1e-8, column_deletion},
      {"slope_bounds", 1e-3, slope_bounds},
      {"branch_counterexample", 1e-8, branch_counterexample},
  };
  const RandomSource root(seed);
  std::vector<SuiteResult> out;
  for (std::size_t i = 0; i < suites.size(); ++i) {
    RandomSource rng = root.split(i);
    const auto start = std::chrono::steady_clock::now();
    const double worst = std::max(0.0, suites[i].worst_error(rng));
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const double tol = suites[i].tolerance * tol_scale;
    out.push_back({suites[i].name, worst <= tol, worst, tol, secs});
  }
  return out;
}

bool report(const std::vector<SuiteResult> &results, std::ostream &os) {
  bool all = true;
  for (const auto &r : results) {
    char buf[200];
    std::snprintf(buf, sizeof buf, "%s %-34s worst %.3e  tol %.1e  (%.2fs)\n",
                  r.passed ? "PASS" : "FAIL", r.name.c_str(), r.worst, r.tolerance, r.seconds);
    os << buf;
    all = all && r.passed;
  }
  return all;
}

}  // namespace stiefel::cli
