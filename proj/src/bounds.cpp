#include "stiefel/bounds.hpp"

#include "stiefel/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace stiefel {

namespace {

constexpr double kPi = std::numbers::pi;

void check_beta(double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw InvalidInput("beta must be positive, got " + std::to_string(beta));
  }
}

void check_delta(int p, double delta) {
  if (p < 1) throw InvalidInput("p must be >= 1, got " + std::to_string(p));
  const double cap = 2.0 * std::sqrt(static_cast<double>(p));
  if (!(delta >= 0.0) || delta > cap + 1e-10) {
    throw InvalidInput("delta must lie in [0, 2 sqrt(p)] = [0, " + std::to_string(cap) +
                       "], got " + std::to_string(delta));
  }
}

// arcsin with arguments within 1e-12 of [-1, 1] clamped.
double safe_asin(double x) {
  if (std::abs(x) > 1.0 + 1e-12) {
    throw InvalidInput("arcsin argument out of range: " + std::to_string(x));
  }
  return std::asin(std::clamp(x, -1.0, 1.0));
}

double chord_arc(double radius, double delta) { return 2.0 * radius * safe_asin(delta / (2.0 * radius)); }

}  // namespace

LipschitzPair lipschitz(double beta1, double beta2) {
  check_beta(beta1);
  check_beta(beta2);
  const double c = std::sqrt(beta1 / beta2);
  return {std::min(1.0, c), std::max(1.0, c)};
}

double lower_envelope(double beta, int p, double delta) {
  check_beta(beta);
  check_delta(p, delta);
  delta = std::min(delta, 2.0 * std::sqrt(static_cast<double>(p)));
  return std::min(1.0, std::sqrt(beta)) * chord_arc(std::sqrt(static_cast<double>(p)), delta);
}

double upper_envelope(double beta, int p, double delta) {
  check_beta(beta);
  check_delta(p, delta);
  delta = std::min(delta, 2.0 * std::sqrt(static_cast<double>(p)));
  const double euclidean = delta <= 2.0 ? chord_arc(1.0, delta) : 0.5 * kPi * delta;
  return std::max(1.0, std::sqrt(beta)) * euclidean;
}

double w_upper_on_lower(double beta, int p, double delta) {
  check_beta(beta);
  check_delta(p, delta);
  if (p % 2 == 0) throw NotApplicable("w_upper_on_lower: p must be odd");
  if (beta < 0.5 || beta > 1.0) throw NotApplicable("w_upper_on_lower: beta must lie in [1/2, 1]");
  delta = std::min(delta, 2.0 * std::sqrt(static_cast<double>(p)));

  const double scale = 2.0 * std::sqrt(beta);
  // Columns 1..p completed by one orthogonal direction, rotated as an even frame.
  double best = std::sqrt(static_cast<double>(p + 1)) *
                safe_asin(delta / (2.0 * std::sqrt(static_cast<double>(p))));
  // First p - 1 columns rotated in planes, last column fixed.
  if (p >= 3 && delta <= 2.0 * std::sqrt(static_cast<double>(p - 1))) {
    const double r = std::sqrt(static_cast<double>(p - 1));
    best = std::min(best, r * safe_asin(delta / (2.0 * r)));
  }
  return scale * best;
}

std::string_view to_string(Attainment a) {
  return a == Attainment::Attained ? "attained" : "conjectured_unattained";
}

Attainment lower_attained(double beta, int n, int p) {
  check_beta(beta);
  if (p < 1 || n <= p) {
    throw InvalidInput("lower_attained: need n > p >= 1, got n=" + std::to_string(n) +
                       " p=" + std::to_string(p));
  }
  if (beta == 1.0) return Attainment::Attained;
  if (beta < 1.0 && p % 2 == 0) return Attainment::Attained;
  if (beta > 1.0 && n >= 2 * p) return Attainment::Attained;
  return Attainment::ConjecturedUnattained;
}

double diameter_euclidean(int p) {
  if (p < 1) throw InvalidInput("diameter_euclidean: p must be >= 1");
  return kPi * std::sqrt(static_cast<double>(p));
}

std::pair<double, double> search_shell(double beta, int /*n*/, int p, double delta) {
  return {lower_envelope(beta, p, delta), upper_envelope(beta, p, delta)};
}

bool upper_envelope_proven(int n, int p) { return n >= 2 * p; }

BoundsReport bounds_report(double beta, int n, int p, double delta) {
  BoundsReport r{};
  r.delta = delta;
  r.lower = lower_envelope(beta, p, delta);
  r.upper = upper_envelope(beta, p, delta);
  if (p % 2 == 1 && beta >= 0.5 && beta <= 1.0) r.w_upper_on_lower = w_upper_on_lower(beta, p, delta);
  r.attainment = lower_attained(beta, n, p);
  return r;
}

}  // namespace stiefel
