#pragma once

#include "coopmac/ensemble.hpp"
#include "coopmac/policy.hpp"

namespace coopmac {

// All rates are in nats per channel use. Conversion to bits is a display
// concern handled by the CLI.

/// Priorities (mu1, mu2) of the two users in the weighted sum of rates.
struct Weights {
  double mu1 = 1.0;
  double mu2 = 1.0;

  double low() const { return mu1 < mu2 ? mu1 : mu2; }
  double excess() const { return mu1 < mu2 ? mu2 - mu1 : mu1 - mu2; }
  /// User whose individual bound carries the excess weight (ties: user 1).
  int favored() const { return mu1 >= mu2 ? 0 : 1; }
};

/// Throws InvalidInput for a negative, non-finite, or all-zero weight pair.
void validate(const Weights& mu);

/// log(1 + s10 p1 + s20 p2 + 2 sqrt(s10 s20 pU1 pU2)), p_i the user totals.
double log_a(const EffectiveGains& s, const PowerVector& pv);

/**
 * log B + log C, i.e.
 * log(1 + s10 p10 + s20 p20) + log(1 + s12 p12 / (1 + s12 p10))
 *                            + log(1 + s21 p21 / (1 + s21 p20)).
 */
double log_bc(const EffectiveGains& s, const PowerVector& pv);

/// Per-state argument of user 1's individual bound:
/// log(1 + s12 p12 / (1 + s12 p10)) + log(1 + s10 p10).
double user1_term(const EffectiveGains& s, const PowerVector& pv);

/// Mirror image of user1_term for user 2.
double user2_term(const EffectiveGains& s, const PowerVector& pv);

/// Individual and sum-rate bounds of one policy.
struct RateBounds {
  double r1_bound = 0.0;
  double r2_bound = 0.0;
  double sum_bound = 0.0;
  double mean_log_a = 0.0;   ///< first argument of the sum-rate min
  double mean_log_bc = 0.0;  ///< second argument of the sum-rate min
};

RateBounds rate_bounds(const Ensemble& ensemble, const PowerPolicy& policy);

/// min(mu) * sum_bound + |mu1 - mu2| * r_i_bound with i = argmax mu.
double weighted_value(const RateBounds& bounds, const Weights& mu);

double weighted_objective(const Ensemble& ensemble, const PowerPolicy& policy,
                          const Weights& mu);

struct RatePoint {
  double r1 = 0.0;
  double r2 = 0.0;
};

/// Vertex of the pentagon (or triangle) spanned by the bounds that maximizes
/// mu . R. The user with the larger weight is served first; ties go to user 1.
RatePoint corner_rate_pair(const RateBounds& bounds, const Weights& mu);

}  // namespace coopmac
