#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "coopmac/app/commands.hpp"
#include "coopmac/app/scenario.hpp"
#include "coopmac/format.hpp"
#include "coopmac/solver.hpp"
#include "doctest.h"

using namespace coopmac;
using namespace coopmac::app;
namespace fs = std::filesystem;

namespace {

const fs::path kScenarios = fs::path(COOPMAC_SOURCE_DIR) / "scenarios";

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("coopmac_unit_" + name);
  fs::remove_all(dir);
  return dir;
}

std::size_t count_lines(const std::string& text) {
  return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

// Small Case-1 scenario that solves in milliseconds.
const char* kSmall =
    "fading = uniform\n"
    "direct_values = 0.1, 0.2\n"
    "inter_values = 0.3, 0.4\n"
    "max_iters = 200\n"
    "weights_count = 3\n"
    "slice = 0.2, 0.1\n";

}  // namespace

TEST_CASE("bundled presets") {
  const auto u = load_scenario(kScenarios / "uniform_paper.scn");
  CHECK(u.fading == FadingKind::Uniform);
  CHECK(u.solver.a == 50.0);
  CHECK(u.solver.b == 5.0);
  CHECK(u.solver.max_iters == 1000);
  CHECK(u.budgets.user1 == 1.0);
  CHECK(u.noise.sigma0_sq == 1.0);
  CHECK(u.build_ensemble().size() == 10000);
  CHECK(u.modes.size() == 4);

  const auto r = load_scenario(kScenarios / "rayleigh_paper.scn");
  CHECK(r.fading == FadingKind::Rayleigh);
  CHECK(r.mean_direct == 0.3);
  CHECK(r.mean_inter == 0.6);
  CHECK(r.build_ensemble().size() == 1000);

  // Defaults alone describe the uniform setup.
  const Scenario d;
  CHECK(d.build_ensemble().size() == 10000);
  CHECK(d.weight_sweep().size() == 17);
}

TEST_CASE("scenario parsing") {
  const auto s = parse_scenario(
      "# comment\n\nfading = rayleigh  # trailing\nmean_direct = 0.5\n"
      "weights = 1,0; 2,1 ;0,1\nmodes = power_control_only\nlog_base = 2\n"
      "tie_inter_links = true\nseed = 42\nslice = 0.1, 0.3\n");
  CHECK(s.fading == FadingKind::Rayleigh);
  CHECK(s.mean_direct == 0.5);
  REQUIRE(s.weights.has_value());
  CHECK(s.weights->size() == 3);
  CHECK((*s.weights)[1].mu1 == 2.0);
  CHECK(s.modes == std::vector<SchemeMode>{SchemeMode::PowerControlOnly});
  CHECK(s.log_base == LogBase::Two);
  CHECK(s.rate_scale() == doctest::Approx(1.0 / std::numbers::ln2));
  CHECK(s.tie_inter_links);
  CHECK(s.seed == 42);
  CHECK(s.slice.s20 == 0.3);
}

TEST_CASE("scenario parse errors carry the line") {
  const auto message = [](const std::string& text) {
    try {
      parse_scenario(text, "t.scn");
    } catch (const ParseError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  CHECK(message("") == "t.scn: no settings found");
  CHECK(message("# only a comment\n") == "t.scn: no settings found");
  CHECK(message("step_a = 5\nbogus = 1\n").find("t.scn:2: unknown key 'bogus'") == 0);
  CHECK(message("step_a = 5\nstep_a = 6\n").find("t.scn:2: duplicate key") == 0);
  CHECK(message("step_a 5\n").find("t.scn:1: expected") == 0);
  CHECK(message("step_a = fast\n").find("t.scn:1: step_a") == 0);
  CHECK(message("max_iters = -3\n").find("t.scn:1: max_iters") == 0);
  CHECK(message("fading = nakagami\n").find("t.scn:1: fading") == 0);
  CHECK(message("modes = joint\n").find("unknown mode") != std::string::npos);
  CHECK(message("step_a =\n").find("missing value") != std::string::npos);
}

TEST_CASE("scenario validation lists every violation") {
  try {
    parse_scenario("budget1 = -1\nsigma0_sq = 0\nstep_a = 0\nweights = 0,0\n");
    FAIL("expected a validation error");
  } catch (const ValidationError& e) {
    const auto& p = e.problems();
    CHECK(p.size() == 4);
    const std::string all = e.what();
    CHECK(all.find("budget1") != std::string::npos);
    CHECK(all.find("sigma0_sq") != std::string::npos);
    CHECK(all.find("step_a") != std::string::npos);
    CHECK(all.find("weights") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_scenario("direct_values = 0.1, -0.2\n"), ValidationError);
}

TEST_CASE("solve writes consistent artifacts") {
  const auto sc = parse_scenario(kSmall);
  const auto dir = scratch("solve");
  const auto s = run_solve(sc, SchemeMode::CoopPowerControl, {2, 1}, dir);
  CHECK(s.iterations == 200);
  const auto trace = slurp(dir / "trace.csv");
  CHECK(count_lines(trace) == 201);
  CHECK(trace.rfind("iter,objective,best_so_far,step,active_branch\n", 0) == 0);

  // Re-reading the policy reproduces the summary exactly.
  const auto ensemble = sc.build_ensemble();
  std::ifstream in(dir / "policy.csv", std::ios::binary);
  const auto policy = read_policy_csv(in);
  const auto bounds = rate_bounds(ensemble, policy);
  CHECK(bounds.sum_bound == s.bounds.sum_bound);
  CHECK(weighted_value(bounds, {2, 1}) == s.objective);
  const auto summary = slurp(dir / "summary.txt");
  CHECK(summary.find("objective = " + format_number(s.objective) + "\n") !=
        std::string::npos);
  CHECK(summary.find("min_gap = ") != std::string::npos);
  CHECK(summary == summary_text(s, LogBase::E));

  auto bits = sc;
  bits.log_base = LogBase::Two;
  const auto dir2 = scratch("solve_bits");
  const auto s2 = run_solve(bits, SchemeMode::CoopPowerControl, {2, 1}, dir2);
  CHECK(slurp(dir2 / "summary.txt")
            .find("objective = " + format_number(s2.objective / std::numbers::ln2)) !=
        std::string::npos);
  CHECK(slurp(dir2 / "policy.csv") == slurp(dir / "policy.csv"));
}

TEST_CASE("solve on the uniform preset records the full trace") {
  const auto sc = load_scenario(kScenarios / "uniform_paper.scn");
  const auto dir = scratch("uniform");
  run_solve(sc, SchemeMode::CoopPowerControl, {2, 1}, dir);
  CHECK(count_lines(slurp(dir / "trace.csv")) == 1001);
  CHECK(count_lines(slurp(dir / "policy.csv")) == 10001);
}

TEST_CASE("larger steps climb faster early on the uniform preset") {
  const auto sc = load_scenario(kScenarios / "uniform_paper.scn");
  const auto e = sc.build_ensemble();
  for (const Weights mu : {Weights{1, 1}, Weights{2, 1}}) {
    SolverConfig large = sc.solver;
    large.max_iters = 50;
    SolverConfig small = large;
    small.a = large.a / 10.0;
    CHECK(optimize(e, mu, large).best_value >= optimize(e, mu, small).best_value);
  }
}

TEST_CASE("fixed-power solve evaluates the full-budget policy") {
  const auto sc = parse_scenario(kSmall);
  const auto dir = scratch("solve_fixed");
  const auto s = run_solve(sc, SchemeMode::FixedPowerOnly, {1, 1}, dir);
  CHECK(s.iterations == 0);
  CHECK(count_lines(slurp(dir / "trace.csv")) == 2);
  CHECK(s.average_power.user1 == doctest::Approx(1.0));
}

TEST_CASE("exit codes") {
  std::ostringstream err;
  CHECK(run_guarded([] {}, err) == kExitOk);
  CHECK(run_guarded([] { parse_scenario(""); }, err) == kExitUsage);
  CHECK(run_guarded([] { parse_scenario("budget1 = -2\n"); }, err) == kExitRuntime);
  const auto sc = parse_scenario(kSmall);
  const auto dir = scratch("zero_mu");
  CHECK(run_guarded([&] { run_solve(sc, SchemeMode::CoopPowerControl, {0, 0}, dir); },
                    err) == kExitRuntime);
  CHECK(err.str().find("error: ") != std::string::npos);
}

TEST_CASE("region artifacts") {
  auto sc = parse_scenario(kSmall);
  const auto dir = scratch("region");
  const auto regions = run_region(sc, sc.modes, dir);
  REQUIRE(regions.size() == 4);
  for (SchemeMode m : kAllModes) {
    const auto csv = slurp(dir / ("region_" + std::string(mode_name(m)) + ".csv"));
    CHECK(count_lines(csv) == 4);
  }
  CHECK(slurp(dir / "hull.csv").rfind("mode,vertex,r1,r2\n", 0) == 0);

  sc.weights = std::vector<Weights>{{1, 1}};
  const auto one = run_region(sc, {SchemeMode::CoopPowerControl}, scratch("region1"));
  CHECK(one[0].points.size() == 1);
  CHECK(one[0].hull.size() <= 3);
  CHECK(one[0].hull.front().r1 == 0.0);
  CHECK(one[0].hull.back().r2 == 0.0);
}

TEST_CASE("verify artifacts") {
  const auto sc = parse_scenario(kSmall);
  const auto dir = scratch("verify");
  run_solve(sc, SchemeMode::CoopPowerControl, {1, 1}, dir);

  std::ostringstream warn;
  const auto report = run_verify(sc, dir / "policy.csv", sc.slice, dir, warn);
  CHECK(warn.str().empty());
  CHECK(report.slice_size == 4);
  const auto surface = slurp(dir / "waterfilling_surface.csv");
  CHECK(surface.rfind("s12,s21,p12,p21\n", 0) == 0);
  CHECK(count_lines(surface) == 5);
  CHECK(slurp(dir / "report.txt").rfind("log_base = e\nmin_gap = ", 0) == 0);

  const auto absent = run_verify(sc, dir / "policy.csv", {0.9, 0.9}, dir, warn);
  CHECK(absent.slice_size == 0);
  CHECK(warn.str().find("warning") != std::string::npos);
  CHECK(slurp(dir / "report.txt").find("water_residual = not_applicable") !=
        std::string::npos);

  // Zero policy: the two sum-rate arguments coincide and nothing is fitted.
  {
    std::ofstream z(dir / "zero.csv", std::ios::binary);
    write_policy_csv(z, zero_policy(sc.build_ensemble()));
  }
  const auto zero = run_verify(sc, dir / "zero.csv", sc.slice, dir, warn);
  CHECK(zero.min_gap == 0.0);
  CHECK_FALSE(zero.waterfilling.has_value());

  {
    std::ofstream bad(dir / "short.csv", std::ios::binary);
    bad << "index,p10,p12,pU1,p20,p21,pU2\n0,0,0,0,0,0,0\n";
  }
  std::ostringstream err;
  CHECK(run_guarded([&] { run_verify(sc, dir / "short.csv", sc.slice, dir, warn); },
                    err) == kExitRuntime);
}

TEST_CASE("trace runs one file per step numerator") {
  const auto sc = parse_scenario(kSmall);
  const auto dir = scratch("trace");
  const auto runs = run_trace(sc, SchemeMode::CoopPowerControl, {2, 1}, {5, 50}, dir);
  CHECK(runs.size() == 2);
  CHECK(count_lines(slurp(dir / "trace_a5.csv")) == 201);
  CHECK(count_lines(slurp(dir / "trace_a50.csv")) == 201);
  const auto def = run_trace(sc, SchemeMode::CoopPowerControl, {2, 1}, {}, dir);
  CHECK(def.size() == 1);
}

TEST_CASE("artifacts are byte-identical across runs") {
  const auto sc = load_scenario(kScenarios / "rayleigh_paper.scn");
  auto small = sc;
  small.n_samples = 100;
  small.solver.max_iters = 100;
  const auto a = scratch("det_a");
  const auto b = scratch("det_b");
  run_solve(small, SchemeMode::CoopPowerControl, {1, 1}, a);
  run_solve(small, SchemeMode::CoopPowerControl, {1, 1}, b);
  for (const char* f : {"policy.csv", "trace.csv", "summary.txt"}) {
    CHECK(slurp(a / f) == slurp(b / f));
  }
}
