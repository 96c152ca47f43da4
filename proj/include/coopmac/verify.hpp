#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "coopmac/ensemble.hpp"
#include "coopmac/policy.hpp"

namespace coopmac {

// Structural checks of sum-rate optima on ensembles where the cooperation
// links dominate the direct links. A power counts as positive when it
// exceeds positivity_threshold times its user's budget.

inline constexpr double kPositivityThreshold = 1e-4;

/// |E[log A] - E[log BC]|.
double min_gap(const Ensemble& ensemble, const PowerPolicy& policy);

/// States sharing one pair of direct-link gains.
struct Slice {
  double s10 = 0.0;
  double s20 = 0.0;
};

/// Case-1 states whose (s10, s20) match the slice to 1e-9 relative.
std::vector<std::size_t> slice_states(const Ensemble& ensemble,
                                      const Slice& slice);

/// Single-user waterfilling p = (1/nu - 1/s)^+ fitted to one user's
/// cooperation-message powers over a slice.
struct WaterLevel {
  double nu = 0.0;            ///< activation threshold; 1/nu is the level
  double residual = 0.0;      ///< max |(1/nu - 1/s) - p| over fitted states,
                              ///< divided by their mean p
  std::size_t fitted_states = 0;
  double min_active_gain = 0.0;    ///< smallest s among positive powers
  double max_inactive_gain = 0.0;  ///< largest s among zero powers (0 if none)
};

struct WaterfillingFit {
  WaterLevel user1;  ///< p12 over s12
  WaterLevel user2;  ///< p21 over s21
  double residual() const {
    return user1.residual > user2.residual ? user1.residual : user2.residual;
  }
};

/**
 * nu is the reciprocal of mean(p + 1/s) over the slice states with positive
 * power. Returns nullopt when either user has no such state.
 */
std::optional<WaterfillingFit> waterfilling_fit(
    const Ensemble& ensemble, const PowerPolicy& policy, const Slice& slice,
    double positivity_threshold = kPositivityThreshold);

/// p > 0 implies s > nu (1 - active_tol); p = 0 implies s <= nu (1 + inactive_tol).
bool thresholds_hold(const WaterLevel& level, double active_tol = 1e-6,
                     double inactive_tol = 5e-2);

/**
 * Coefficient of variation of pU1 / pU2 over the slice states where both are
 * positive. nullopt with fewer than two such states.
 */
std::optional<double> coupling_check(
    const Ensemble& ensemble, const PowerPolicy& policy, const Slice& slice,
    double positivity_threshold = kPositivityThreshold);

/// Multipliers of the power constraints (lambda) and of the equality between
/// the two sum-rate arguments (gamma).
struct Multipliers {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double gamma = 0.0;
};

/**
 * Least-squares fit of the stationarity conditions of the equality-
 * constrained sum-rate problem over all Case-1 states:
 *   (1 + gamma) s12 / (1 + s12 p12) - gamma s10 / D = lambda1  where p12 > 0
 *   gamma (s10 + sqrt(s10 s20 pU2 / pU1)) / D     = -lambda1 where pU1 > 0
 * and the mirrored pair for user 2. All three unknowns enter linearly.
 * nullopt when the ensemble has non-Case-1 states or the system is singular.
 */
std::optional<Multipliers> fit_multipliers(
    const Ensemble& ensemble, const PowerPolicy& policy,
    double positivity_threshold = kPositivityThreshold);

/// Worst relative violation of each of the four reduced optimality
/// conditions. Conditions 1-2 are the waterfilling inequalities
/// s_ij / (1 + s_ij p_ij) <= nu_i, conditions 3-4 the common-signal ones
/// -lambda_i <= gamma / D * (s_i0 + lambda_i / lambda_j * s_j0). Each holds
/// with equality where the corresponding power is positive.
struct KktResiduals {
  double waterfill1 = 0.0;
  double waterfill2 = 0.0;
  double common1 = 0.0;
  double common2 = 0.0;
  double max() const;
};

/// nullopt when the ensemble has non-Case-1 states.
std::optional<KktResiduals> kkt_residuals(
    const Ensemble& ensemble, const PowerPolicy& policy,
    const Multipliers& multipliers,
    double positivity_threshold = kPositivityThreshold);

/// Right-hand sides of the two waterfilling conditions for given direct gains.
std::pair<double, double> water_levels(const Multipliers& m, double s10,
                                       double s20);

struct StructureReport {
  double min_gap = 0.0;
  Slice slice;
  std::size_t slice_size = 0;
  std::optional<WaterfillingFit> waterfilling;
  std::optional<double> coupling_ratio_cv;
  std::optional<Multipliers> multipliers;
  std::optional<KktResiduals> kkt;
};

StructureReport analyze_structure(const Ensemble& ensemble,
                                  const PowerPolicy& policy,
                                  const Slice& slice);

/// `key = value` lines; absent checks print `not_applicable`.
std::string to_text(const StructureReport& report);

}  // namespace coopmac
