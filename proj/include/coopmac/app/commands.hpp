#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <vector>

#include "coopmac/app/scenario.hpp"
#include "coopmac/region.hpp"
#include "coopmac/verify.hpp"

namespace coopmac::app {

// Each command writes its artifacts into out_dir (created if needed) and
// throws on failure; run_guarded turns exceptions into exit codes.

/// Values written to summary.txt, recomputed from the policy CSV as written.
struct SolveSummary {
  SchemeMode mode = SchemeMode::CoopPowerControl;
  Weights mu;
  std::size_t iterations = 0;
  double objective = 0.0;
  RateBounds bounds;
  RatePoint corner;
  double min_gap = 0.0;
  UserPowers average_power;
};

/// policy.csv, trace.csv and summary.txt.
SolveSummary run_solve(const Scenario& scenario, SchemeMode mode,
                       const Weights& mu, const std::filesystem::path& out_dir);

/// region_<mode>.csv for every mode and a combined hull.csv.
std::vector<RegionResult> run_region(const Scenario& scenario,
                                     const std::vector<SchemeMode>& modes,
                                     const std::filesystem::path& out_dir);

/// report.txt and waterfilling_surface.csv (s12, s21, p12, p21 over the
/// slice). An empty slice prints a warning to `warn` and still succeeds.
StructureReport run_verify(const Scenario& scenario,
                           const std::filesystem::path& policy_csv,
                           const Slice& slice,
                           const std::filesystem::path& out_dir,
                           std::ostream& warn);

/// One trace_a<a>.csv per step numerator; the scenario's a when empty.
std::vector<SolveResult> run_trace(const Scenario& scenario, SchemeMode mode,
                                   const Weights& mu,
                                   const std::vector<double>& a_values,
                                   const std::filesystem::path& out_dir);

std::string summary_text(const SolveSummary& summary, LogBase base);

/// Exit codes: 0 success, 1 parse error, 2 validation or runtime error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitRuntime = 2;

int run_guarded(const std::function<void()>& body, std::ostream& err);

}  // namespace coopmac::app
