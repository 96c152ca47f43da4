#include "coopmac/rates.hpp"

#include <algorithm>
#include <cmath>

namespace coopmac {

void validate(const Weights& mu) {
  if (!std::isfinite(mu.mu1) || !std::isfinite(mu.mu2) || mu.mu1 < 0.0 ||
      mu.mu2 < 0.0) {
    throw InvalidInput("weights must be finite and non-negative");
  }
  if (mu.mu1 == 0.0 && mu.mu2 == 0.0) {
    throw InvalidInput("weights must not both be zero");
  }
}

double log_a(const EffectiveGains& s, const PowerVector& pv) {
  const double coherent = 2.0 * std::sqrt(s.s10 * s.s20) *
                          std::sqrt(std::max(pv.pU1(), 0.0)) *
                          std::sqrt(std::max(pv.pU2(), 0.0));
  return std::log1p(s.s10 * pv.user_total(0) + s.s20 * pv.user_total(1) +
                    coherent);
}

double log_bc(const EffectiveGains& s, const PowerVector& pv) {
  return std::log1p(s.s10 * pv.p10() + s.s20 * pv.p20()) +
         std::log1p(s.s12 * pv.p12() / (1.0 + s.s12 * pv.p10())) +
         std::log1p(s.s21 * pv.p21() / (1.0 + s.s21 * pv.p20()));
}

double user1_term(const EffectiveGains& s, const PowerVector& pv) {
  return std::log1p(s.s12 * pv.p12() / (1.0 + s.s12 * pv.p10())) +
         std::log1p(s.s10 * pv.p10());
}

double user2_term(const EffectiveGains& s, const PowerVector& pv) {
  return std::log1p(s.s21 * pv.p21() / (1.0 + s.s21 * pv.p20())) +
         std::log1p(s.s20 * pv.p20());
}

RateBounds rate_bounds(const Ensemble& ensemble, const PowerPolicy& policy) {
  require_aligned(ensemble, policy);
  RateBounds out;
  const auto& probs = ensemble.probs();
  const auto& gains = ensemble.gains();
  for (std::size_t k = 0; k < ensemble.size(); ++k) {
    const auto& pv = policy.vectors[k];
    out.r1_bound += probs[k] * user1_term(gains[k], pv);
    out.r2_bound += probs[k] * user2_term(gains[k], pv);
    out.mean_log_a += probs[k] * log_a(gains[k], pv);
    out.mean_log_bc += probs[k] * log_bc(gains[k], pv);
  }
  out.sum_bound = std::min(out.mean_log_a, out.mean_log_bc);
  return out;
}

double weighted_value(const RateBounds& bounds, const Weights& mu) {
  const double individual =
      mu.favored() == 0 ? bounds.r1_bound : bounds.r2_bound;
  return mu.low() * bounds.sum_bound + mu.excess() * individual;
}

double weighted_objective(const Ensemble& ensemble, const PowerPolicy& policy,
                          const Weights& mu) {
  validate(mu);
  return weighted_value(rate_bounds(ensemble, policy), mu);
}

RatePoint corner_rate_pair(const RateBounds& b, const Weights& mu) {
  RatePoint out;
  if (mu.mu1 >= mu.mu2) {
    out.r1 = std::min(b.r1_bound, b.sum_bound);
    out.r2 = std::min(b.r2_bound, std::max(0.0, b.sum_bound - out.r1));
  } else {
    out.r2 = std::min(b.r2_bound, b.sum_bound);
    out.r1 = std::min(b.r1_bound, std::max(0.0, b.sum_bound - out.r2));
  }
  return out;
}

}  // namespace coopmac
