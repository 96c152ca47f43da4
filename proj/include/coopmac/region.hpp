#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "coopmac/ensemble.hpp"
#include "coopmac/rates.hpp"
#include "coopmac/solver.hpp"

namespace coopmac {

/// Cooperation / power-adaptation combinations compared in rate regions.
enum class SchemeMode {
  CoopPowerControl,  ///< reduced cooperative support, adapted per state
  CoopFixedPower,    ///< reduced cooperative support, one static vector
  PowerControlOnly,  ///< direct signals only, adapted per state
  FixedPowerOnly,    ///< direct signals only at full budget in every state
};

inline constexpr SchemeMode kAllModes[] = {
    SchemeMode::CoopPowerControl, SchemeMode::CoopFixedPower,
    SchemeMode::PowerControlOnly, SchemeMode::FixedPowerOnly};

std::string_view mode_name(SchemeMode mode);
std::optional<SchemeMode> parse_mode(std::string_view name);

struct ModeRule {
  SearchSpace space;
  bool optimized = true;  ///< false: the policy is fixed, nothing to search
};

ModeRule apply_mode(SchemeMode mode);

/// The policy a mode evaluates for a weight pair: the solver's best policy,
/// or the fixed full-power policy for FixedPowerOnly.
struct ModeSolution {
  PowerPolicy policy;
  double value = 0.0;
  RateBounds bounds;
};

ModeSolution solve_mode(const Ensemble& ensemble, SchemeMode mode,
                        const Weights& mu, const SolverConfig& config);

struct RegionPoint {
  Weights mu;
  double r1 = 0.0;
  double r2 = 0.0;
  double value = 0.0;  ///< weighted objective reached for mu
  RateBounds bounds;
  bool on_hull = false;
};

struct HullVertex {
  double r1 = 0.0;
  double r2 = 0.0;
  friend bool operator==(const HullVertex&, const HullVertex&) = default;
};

struct RegionResult {
  SchemeMode mode = SchemeMode::CoopPowerControl;
  std::vector<RegionPoint> points;
  std::vector<HullVertex> hull;
};

/// mu = (cos phi, sin phi) with phi uniform over [0, pi/2], n >= 1 points
/// (n == 1 gives phi = pi/4).
std::vector<Weights> default_weight_sweep(std::size_t n = 17);

RegionResult sweep(const Ensemble& ensemble, SchemeMode mode,
                   std::span<const Weights> weights,
                   const SolverConfig& config);

/**
 * Upper-right boundary of the convex hull of the points together with their
 * axis projections (0, max r2) and (max r1, 0), ordered by increasing r1.
 * Collinear interior vertices are dropped. Throws InvalidInput when empty.
 */
std::vector<HullVertex> convex_hull(std::span<const HullVertex> points);

/// CSV with header `mode,mu1,mu2,r1,r2,on_hull`.
void write_region_csv(std::ostream& out, const RegionResult& region,
                      double scale = 1.0);

/// CSV with header `mode,vertex,r1,r2`.
void write_hull_csv(std::ostream& out, std::span<const RegionResult> regions,
                    double scale = 1.0);

}  // namespace coopmac
