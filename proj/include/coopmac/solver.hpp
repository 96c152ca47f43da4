#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "coopmac/ensemble.hpp"
#include "coopmac/policy.hpp"
#include "coopmac/rates.hpp"

namespace coopmac {

struct SolverConfig {
  double a = 50.0;             ///< step numerator
  double b = 5.0;              ///< step denominator offset
  std::size_t max_iters = 1000;
  double eps_sqrt = 1e-9;      ///< clamp on pU inside coherent-term derivatives
  double grad_tol = 1e-12;     ///< stop once the supergradient norm is below

  /// Throws InvalidInput unless a > 0, b >= 0, max_iters >= 1, eps_sqrt > 0.
  void validate() const;
};

/// Which argument of the sum-rate min the supergradient was taken from.
enum class Branch { LogA, LogBC };

struct TraceEntry {
  std::size_t iter = 0;
  double objective = 0.0;
  double best_so_far = 0.0;
  double step = 0.0;  ///< step length used to leave this iterate (0 if none)
  Branch branch = Branch::LogA;
};

struct SolveResult {
  PowerPolicy best_policy;
  double best_value = 0.0;
  std::vector<TraceEntry> trace;
  std::size_t iterations_run = 0;
};

/**
 * Restrictions on the search space of optimize().
 *
 * When override_mask is set it replaces the per-state reduced support in
 * every state (used by the non-cooperative baselines). With
 * constant_across_states the policy is a single vector shared by all states,
 * masked by each state's support.
 */
struct SearchSpace {
  std::optional<ComponentMask> override_mask;
  bool constant_across_states = false;
};

/// Support of every state under the given search space.
std::vector<ComponentMask> state_supports(const Ensemble& ensemble,
                                          const SearchSpace& space = {});

struct Supergradient {
  std::vector<PowerVector> g;  ///< zero outside each state's support
  Branch branch = Branch::LogA;
  double value = 0.0;          ///< weighted objective at the point
  RateBounds bounds;
};

/**
 * Supergradient of the weighted objective with respect to the per-state
 * powers (each state's partial derivatives carry its probability).
 *
 * The sum-rate min is resolved by differentiating the smaller argument, with
 * ties going to E[log A]. In the derivatives of the coherent term each pU is
 * clamped below by eps_sqrt; function values are never clamped.
 */
Supergradient supergradient(const Ensemble& ensemble,
                            const PowerPolicy& policy, const Weights& mu,
                            std::span<const ComponentMask> supports,
                            double eps_sqrt = 1e-9);

Supergradient supergradient(const Ensemble& ensemble,
                            const PowerPolicy& policy, const Weights& mu,
                            double eps_sqrt = 1e-9);

/**
 * Euclidean projection of raw onto {x >= 0, sum_k weights[k] x[k] <= budget}.
 *
 * A feasible input is returned unchanged. Otherwise the result is
 * max(0, raw - theta * weights) with the unique theta > 0 that spends the
 * budget exactly, found by Newton steps on the piecewise-linear
 * spent-power curve.
 * Entries with zero weight are only clipped at zero.
 */
std::vector<double> project_user(std::span<const double> raw,
                                 std::span<const double> weights,
                                 double budget);

/// a / (b + sqrt(k)) / g_norm. Throws InvalidInput when g_norm <= 0.
double step_size(std::size_t k, double a, double b, double g_norm);

/**
 * Projected supergradient ascent on the weighted sum of rates.
 *
 * Starts from each user's budget split evenly across its active components
 * and runs p(k+1) = proj(p(k) + step_k g_k) for max_iters evaluations (fewer
 * if the supergradient vanishes). The best iterate is returned since the
 * objective along the run is not monotone.
 */
SolveResult optimize(const Ensemble& ensemble, const Weights& mu,
                     const SolverConfig& config, const SearchSpace& space = {});

/// Even split of each user's budget over its active components.
PowerPolicy initial_policy(const Ensemble& ensemble,
                           const SearchSpace& space = {});

/// CSV with header `iter,objective,best_so_far,step,active_branch`.
void write_trace_csv(std::ostream& out, std::span<const TraceEntry> trace,
                     double scale = 1.0);

}  // namespace coopmac
