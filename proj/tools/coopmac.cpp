// Command-line front end: solve, region, verify and trace over a scenario file.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "coopmac/app/commands.hpp"
#include "coopmac/format.hpp"

namespace {

using namespace coopmac;
using namespace coopmac::app;

struct Common {
  std::string scenario;
  std::string out;
  std::string log_base;
  std::string mode;
  std::string mu = "1,1";
};

void add_common(CLI::App* cmd, Common& c, bool with_mu) {
  cmd->add_option("--scenario", c.scenario, "scenario file")->required();
  cmd->add_option("--out", c.out, "output directory (default: scenario output_dir)");
  cmd->add_option("--log-base", c.log_base, "rate units: e (nats) or 2 (bits)")
      ->check(CLI::IsMember({"e", "2"}));
  cmd->add_option("--mode", c.mode,
                  "coop_power_control, coop_fixed_power, power_control_only "
                  "or fixed_power_only");
  if (with_mu) cmd->add_option("--mu", c.mu, "weight pair mu1,mu2 (default 1,1)");
}

// Resolved inputs shared by every subcommand. Syntax problems in flag values
// are reported as parse errors.
struct Resolved {
  Scenario scenario;
  std::filesystem::path out;
  std::optional<SchemeMode> mode;
};

Resolved resolve(const Common& c) {
  Resolved r{load_scenario(c.scenario), {}, std::nullopt};
  if (c.log_base == "2") r.scenario.log_base = LogBase::Two;
  if (c.log_base == "e") r.scenario.log_base = LogBase::E;
  r.out = c.out.empty() ? r.scenario.output_dir : std::filesystem::path(c.out);
  if (!c.mode.empty()) {
    r.mode = parse_mode(c.mode);
    if (!r.mode) throw ParseError("--mode: unknown mode '" + c.mode + "'");
  }
  return r;
}

Weights parse_mu(const std::string& text) {
  try {
    const auto [a, b] = parse_pair(text);
    return {a, b};
  } catch (const InvalidInput& e) {
    throw ParseError(std::string("--mu: ") + e.what());
  }
}

Slice parse_slice(const std::string& text) {
  try {
    const auto [a, b] = parse_pair(text);
    return {a, b};
  } catch (const InvalidInput& e) {
    throw ParseError(std::string("--slice: ") + e.what());
  }
}

std::vector<double> parse_steps(const std::vector<std::string>& items) {
  std::vector<double> out;
  for (const auto& s : items) {
    try {
      out.push_back(parse_number(s));
    } catch (const InvalidInput& e) {
      throw ParseError(std::string("--a: ") + e.what());
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Power allocation and rate regions for the fading cooperative MAC"};
  app.require_subcommand(1);

  Common solve_opts, region_opts, verify_opts, trace_opts;
  std::string policy_path, slice_text;
  std::vector<std::string> steps;

  auto* solve = app.add_subcommand("solve", "optimize one weighted sum of rates");
  add_common(solve, solve_opts, true);

  auto* region = app.add_subcommand("region", "sweep weights and build rate regions");
  add_common(region, region_opts, false);

  auto* verify = app.add_subcommand("verify", "check optimality structure of a policy");
  add_common(verify, verify_opts, false);
  verify->add_option("--policy", policy_path, "policy CSV (default: <out>/policy.csv)");
  verify->add_option("--slice", slice_text, "direct gains s10,s20 (default: scenario slice)");

  auto* trace = app.add_subcommand("trace", "record solver traces for step sizes");
  add_common(trace, trace_opts, true);
  trace->add_option("--a", steps, "step numerators (default: scenario step_a)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  return run_guarded(
      [&] {
        if (*solve) {
          const auto r = resolve(solve_opts);
          const auto mu = parse_mu(solve_opts.mu);
          const auto s = run_solve(r.scenario,
                                   r.mode.value_or(SchemeMode::CoopPowerControl),
                                   mu, r.out);
          std::cout << summary_text(s, r.scenario.log_base);
        } else if (*region) {
          const auto r = resolve(region_opts);
          const auto modes = r.mode ? std::vector<SchemeMode>{*r.mode} : r.scenario.modes;
          const auto regions = run_region(r.scenario, modes, r.out);
          for (const auto& reg : regions) {
            std::cout << mode_name(reg.mode) << ": " << reg.points.size()
                      << " points, " << reg.hull.size() << " hull vertices\n";
          }
        } else if (*verify) {
          const auto r = resolve(verify_opts);
          const Slice slice =
              slice_text.empty() ? r.scenario.slice : parse_slice(slice_text);
          const std::filesystem::path policy =
              policy_path.empty() ? r.out / "policy.csv" : std::filesystem::path(policy_path);
          const auto report = run_verify(r.scenario, policy, slice, r.out, std::cerr);
          StructureReport shown = report;
          shown.min_gap *= r.scenario.rate_scale();
          std::cout << to_text(shown);
        } else if (*trace) {
          const auto r = resolve(trace_opts);
          const auto mu = parse_mu(trace_opts.mu);
          const auto a_values = parse_steps(steps);
          const auto runs = run_trace(r.scenario,
                                      r.mode.value_or(SchemeMode::CoopPowerControl),
                                      mu, a_values, r.out);
          for (std::size_t i = 0; i < runs.size(); ++i) {
            const double a = a_values.empty() ? r.scenario.solver.a : a_values[i];
            std::cout << "a = " << format_number(a) << ": best "
                      << format_number(runs[i].best_value * r.scenario.rate_scale())
                      << " after " << runs[i].iterations_run << " iterations\n";
          }
        }
      },
      std::cerr);
}
