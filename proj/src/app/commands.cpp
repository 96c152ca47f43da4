#include "coopmac/app/commands.hpp"

#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include "coopmac/format.hpp"

namespace coopmac::app {
namespace {

namespace fs = std::filesystem;

void write_file(const fs::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << contents;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

void prepare(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());
  }
}

Branch smaller_branch(const RateBounds& b) {
  return b.mean_log_a <= b.mean_log_bc ? Branch::LogA : Branch::LogBC;
}

// Full run for one mode: the solver's result, or a one-row evaluation of the
// fixed policy for modes that do not optimize.
SolveResult run_mode(const Ensemble& ensemble, SchemeMode mode,
                     const Weights& mu, const SolverConfig& config) {
  const ModeRule rule = apply_mode(mode);
  if (rule.optimized) return optimize(ensemble, mu, config, rule.space);
  ModeSolution sol = solve_mode(ensemble, mode, mu, config);
  SolveResult out;
  out.best_value = sol.value;
  out.iterations_run = 0;
  out.trace.push_back({0, sol.value, sol.value, 0.0, smaller_branch(sol.bounds)});
  out.best_policy = std::move(sol.policy);
  return out;
}

}  // namespace

std::string summary_text(const SolveSummary& s, LogBase base) {
  const double scale = base == LogBase::Two ? 1.0 / std::numbers::ln2 : 1.0;
  std::ostringstream out;
  const auto rate = [&](const char* key, double v) {
    out << key << " = " << format_number(v * scale) << '\n';
  };
  out << "mode = " << mode_name(s.mode) << '\n';
  out << "mu1 = " << format_number(s.mu.mu1) << '\n';
  out << "mu2 = " << format_number(s.mu.mu2) << '\n';
  out << "log_base = " << log_base_name(base) << '\n';
  out << "iterations = " << s.iterations << '\n';
  rate("objective", s.objective);
  rate("r1_bound", s.bounds.r1_bound);
  rate("r2_bound", s.bounds.r2_bound);
  rate("sum_bound", s.bounds.sum_bound);
  rate("mean_log_a", s.bounds.mean_log_a);
  rate("mean_log_bc", s.bounds.mean_log_bc);
  rate("min_gap", s.min_gap);
  rate("r1", s.corner.r1);
  rate("r2", s.corner.r2);
  out << "avg_power1 = " << format_number(s.average_power.user1) << '\n';
  out << "avg_power2 = " << format_number(s.average_power.user2) << '\n';
  return out.str();
}

SolveSummary run_solve(const Scenario& scenario, SchemeMode mode,
                       const Weights& mu, const fs::path& out_dir) {
  validate(mu);
  const Ensemble ensemble = scenario.build_ensemble();
  const SolveResult result = run_mode(ensemble, mode, mu, scenario.solver);

  std::ostringstream policy_csv;
  write_policy_csv(policy_csv, result.best_policy);
  std::ostringstream trace_csv;
  write_trace_csv(trace_csv, result.trace, scenario.rate_scale());

  // Summarize the policy as it reads back from disk so that re-evaluating
  // the CSV reproduces every reported value.
  std::istringstream reread(policy_csv.str());
  const PowerPolicy policy = read_policy_csv(reread);
  require_aligned(ensemble, policy);

  SolveSummary summary;
  summary.mode = mode;
  summary.mu = mu;
  summary.iterations = result.iterations_run;
  summary.bounds = rate_bounds(ensemble, policy);
  summary.objective = weighted_value(summary.bounds, mu);
  summary.corner = corner_rate_pair(summary.bounds, mu);
  summary.min_gap = min_gap(ensemble, policy);
  summary.average_power = average_powers(ensemble, policy);

  prepare(out_dir);
  write_file(out_dir / "policy.csv", policy_csv.str());
  write_file(out_dir / "trace.csv", trace_csv.str());
  write_file(out_dir / "summary.txt", summary_text(summary, scenario.log_base));
  return summary;
}

std::vector<RegionResult> run_region(const Scenario& scenario,
                                     const std::vector<SchemeMode>& modes,
                                     const fs::path& out_dir) {
  if (modes.empty()) throw InvalidInput("no modes to sweep");
  const Ensemble ensemble = scenario.build_ensemble();
  const auto weights = scenario.weight_sweep();
  std::vector<RegionResult> regions;
  for (SchemeMode mode : modes) {
    regions.push_back(sweep(ensemble, mode, weights, scenario.solver));
  }

  prepare(out_dir);
  for (const auto& region : regions) {
    std::ostringstream csv;
    write_region_csv(csv, region, scenario.rate_scale());
    write_file(out_dir / ("region_" + std::string(mode_name(region.mode)) + ".csv"),
               csv.str());
  }
  std::ostringstream hull;
  write_hull_csv(hull, regions, scenario.rate_scale());
  write_file(out_dir / "hull.csv", hull.str());
  return regions;
}

StructureReport run_verify(const Scenario& scenario, const fs::path& policy_csv,
                           const Slice& slice, const fs::path& out_dir,
                           std::ostream& warn) {
  const Ensemble ensemble = scenario.build_ensemble();
  std::ifstream in(policy_csv, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read policy " + policy_csv.string());
  const PowerPolicy policy = read_policy_csv(in);
  require_aligned(ensemble, policy);

  StructureReport report = analyze_structure(ensemble, policy, slice);
  if (report.slice_size == 0) {
    warn << "warning: no Case-1 states with (s10, s20) = ("
         << format_number(slice.s10) << ", " << format_number(slice.s20)
         << "); slice checks are not applicable\n";
  }

  std::ostringstream surface;
  surface << "s12,s21,p12,p21\n";
  for (std::size_t k : slice_states(ensemble, slice)) {
    const auto& s = ensemble.gains()[k];
    const auto& pv = policy.vectors[k];
    surface << format_number(s.s12) << ',' << format_number(s.s21) << ','
            << format_number(pv.p12()) << ',' << format_number(pv.p21()) << '\n';
  }

  StructureReport shown = report;
  shown.min_gap *= scenario.rate_scale();
  prepare(out_dir);
  write_file(out_dir / "report.txt",
             "log_base = " + std::string(log_base_name(scenario.log_base)) +
                 "\n" + to_text(shown));
  write_file(out_dir / "waterfilling_surface.csv", surface.str());
  return report;
}

std::vector<SolveResult> run_trace(const Scenario& scenario, SchemeMode mode,
                                   const Weights& mu,
                                   const std::vector<double>& a_values,
                                   const fs::path& out_dir) {
  validate(mu);
  std::vector<double> steps = a_values;
  if (steps.empty()) steps.push_back(scenario.solver.a);
  const Ensemble ensemble = scenario.build_ensemble();

  std::vector<SolveResult> runs;
  std::vector<std::string> files;
  for (double a : steps) {
    SolverConfig config = scenario.solver;
    config.a = a;
    runs.push_back(run_mode(ensemble, mode, mu, config));
    std::ostringstream csv;
    write_trace_csv(csv, runs.back().trace, scenario.rate_scale());
    files.push_back(csv.str());
  }
  prepare(out_dir);
  for (std::size_t i = 0; i < steps.size(); ++i) {
    write_file(out_dir / ("trace_a" + format_number(steps[i]) + ".csv"), files[i]);
  }
  return runs;
}

int run_guarded(const std::function<void()>& body, std::ostream& err) {
  try {
    body();
    return kExitOk;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

}  // namespace coopmac::app
