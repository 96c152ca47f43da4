#include "coopmac/region.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include "coopmac/format.hpp"

namespace coopmac {

std::string_view mode_name(SchemeMode mode) {
  switch (mode) {
    case SchemeMode::CoopPowerControl: return "coop_power_control";
    case SchemeMode::CoopFixedPower: return "coop_fixed_power";
    case SchemeMode::PowerControlOnly: return "power_control_only";
    case SchemeMode::FixedPowerOnly: return "fixed_power_only";
  }
  return "?";
}

std::optional<SchemeMode> parse_mode(std::string_view name) {
  for (SchemeMode m : kAllModes) {
    if (mode_name(m) == name) return m;
  }
  return std::nullopt;
}

ModeRule apply_mode(SchemeMode mode) {
  const ComponentMask direct{Component::P10, Component::P20};
  switch (mode) {
    case SchemeMode::CoopPowerControl: return {SearchSpace{}, true};
    case SchemeMode::CoopFixedPower:
      return {SearchSpace{std::nullopt, true}, true};
    case SchemeMode::PowerControlOnly: return {SearchSpace{direct, false}, true};
    case SchemeMode::FixedPowerOnly: return {SearchSpace{direct, true}, false};
  }
  return {};
}

ModeSolution solve_mode(const Ensemble& ensemble, SchemeMode mode,
                        const Weights& mu, const SolverConfig& config) {
  validate(mu);
  const ModeRule rule = apply_mode(mode);
  ModeSolution out;
  if (rule.optimized) {
    out.policy = optimize(ensemble, mu, config, rule.space).best_policy;
  } else {
    // Full budget on the direct signal in every state.
    out.policy = zero_policy(ensemble);
    for (auto& pv : out.policy.vectors) {
      pv[Component::P10] = ensemble.budgets().user1;
      pv[Component::P20] = ensemble.budgets().user2;
    }
  }
  out.bounds = rate_bounds(ensemble, out.policy);
  out.value = weighted_value(out.bounds, mu);
  return out;
}

std::vector<Weights> default_weight_sweep(std::size_t n) {
  if (n == 0) throw InvalidInput("weight sweep needs at least one point");
  if (n == 1) return {Weights{std::cos(std::numbers::pi / 4), std::sin(std::numbers::pi / 4)}};
  std::vector<Weights> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double phi =
        std::numbers::pi / 2 * static_cast<double>(i) / static_cast<double>(n - 1);
    // Snap the endpoints so the axis weights are exact.
    const double c = i + 1 == n ? 0.0 : std::cos(phi);
    const double s = i == 0 ? 0.0 : std::sin(phi);
    out.push_back({c, s});
  }
  return out;
}

RegionResult sweep(const Ensemble& ensemble, SchemeMode mode,
                   std::span<const Weights> weights,
                   const SolverConfig& config) {
  if (weights.empty()) throw InvalidInput("sweep needs at least one weight");
  RegionResult region;
  region.mode = mode;
  std::vector<HullVertex> vertices;
  for (const Weights& mu : weights) {
    const ModeSolution sol = solve_mode(ensemble, mode, mu, config);
    const RatePoint corner = corner_rate_pair(sol.bounds, mu);
    region.points.push_back({mu, corner.r1, corner.r2, sol.value, sol.bounds,
                             false});
    vertices.push_back({corner.r1, corner.r2});
  }
  region.hull = convex_hull(vertices);
  for (auto& p : region.points) {
    p.on_hull = std::find(region.hull.begin(), region.hull.end(),
                          HullVertex{p.r1, p.r2}) != region.hull.end();
  }
  return region;
}

std::vector<HullVertex> convex_hull(std::span<const HullVertex> points) {
  if (points.empty()) throw InvalidInput("convex_hull of no points");
  double max_r1 = 0.0;
  double max_r2 = 0.0;
  for (const auto& p : points) {
    if (!(std::isfinite(p.r1) && std::isfinite(p.r2) && p.r1 >= 0.0 &&
          p.r2 >= 0.0)) {
      throw InvalidInput("convex_hull: rates must be finite and >= 0");
    }
    max_r1 = std::max(max_r1, p.r1);
    max_r2 = std::max(max_r2, p.r2);
  }

  std::vector<HullVertex> pts(points.begin(), points.end());
  pts.push_back({0.0, max_r2});
  pts.push_back({max_r1, 0.0});
  std::sort(pts.begin(), pts.end(), [](const HullVertex& l, const HullVertex& r) {
    return l.r1 != r.r1 ? l.r1 < r.r1 : l.r2 > r.r2;
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  // Upper chain of Andrew's monotone chain; non-right turns are popped, which
  // also discards collinear interior vertices.
  const auto cross = [](const HullVertex& o, const HullVertex& a,
                        const HullVertex& b) {
    return (a.r1 - o.r1) * (b.r2 - o.r2) - (a.r2 - o.r2) * (b.r1 - o.r1);
  };
  std::vector<HullVertex> hull;
  for (const auto& p : pts) {
    while (hull.size() >= 2 && cross(hull[hull.size() - 2], hull.back(), p) >= 0.0) {
      hull.pop_back();
    }
    hull.push_back(p);
  }
  return hull;
}

void write_region_csv(std::ostream& out, const RegionResult& region,
                      double scale) {
  out << "mode,mu1,mu2,r1,r2,on_hull\n";
  for (const auto& p : region.points) {
    out << mode_name(region.mode) << ',' << format_number(p.mu.mu1) << ','
        << format_number(p.mu.mu2) << ',' << format_number(p.r1 * scale) << ','
        << format_number(p.r2 * scale) << ',' << (p.on_hull ? 1 : 0) << '\n';
  }
}

void write_hull_csv(std::ostream& out, std::span<const RegionResult> regions,
                    double scale) {
  out << "mode,vertex,r1,r2\n";
  for (const auto& region : regions) {
    for (std::size_t v = 0; v < region.hull.size(); ++v) {
      out << mode_name(region.mode) << ',' << v << ','
          << format_number(region.hull[v].r1 * scale) << ','
          << format_number(region.hull[v].r2 * scale) << '\n';
    }
  }
}

}  // namespace coopmac
