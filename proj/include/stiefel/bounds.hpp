#pragma once

#include <optional>
#include <string_view>
#include <utility>

namespace stiefel {

/// Constants with lo * d_{beta2} <= d_{beta1} <= hi * d_{beta2}.
struct LipschitzPair {
  double lo;
  double hi;
};

LipschitzPair lipschitz(double beta1, double beta2);

// Envelopes of the beta-distance as functions of the Frobenius distance
// delta in [0, 2 sqrt(p)]. All throw InvalidInput for delta out of range or
// beta <= 0.

/// min{1, sqrt(beta)} 2 sqrt(p) arcsin(delta / (2 sqrt(p))); a lower bound on
/// d_beta for every (n, p).
double lower_envelope(double beta, int p, double delta);

/// max{1, sqrt(beta)} * (2 arcsin(delta / 2) if delta <= 2, (pi / 2) delta
/// otherwise); an upper bound on d_beta proven for n >= 2p.
double upper_envelope(double beta, int p, double delta);

/// Upper bound on the smallest beta-distance at Frobenius distance delta,
/// for odd p and beta in [1/2, 1]. Throws NotApplicable otherwise.
double w_upper_on_lower(double beta, int p, double delta);

enum class Attainment { Attained, ConjecturedUnattained };

std::string_view to_string(Attainment a);

/// Whether lower_envelope is the exact smallest distance on St(n, p).
Attainment lower_attained(double beta, int n, int p);

/// pi sqrt(p), the diameter of St(n, p) under the Euclidean metric (n >= 2p).
double diameter_euclidean(int p);

/// (lower_envelope, upper_envelope): the range of norms a minimal initial
/// velocity can have.
std::pair<double, double> search_shell(double beta, int n, int p, double delta);

/// True when the upper envelope is proven on St(n, p), i.e. n >= 2p.
bool upper_envelope_proven(int n, int p);

struct BoundsReport {
  double delta;
  double lower;
  double upper;
  std::optional<double> w_upper_on_lower;
  Attainment attainment;
};

BoundsReport bounds_report(double beta, int n, int p, double delta);

}  // namespace stiefel
