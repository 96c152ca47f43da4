#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "coopmac/ensemble.hpp"
#include "coopmac/rates.hpp"
#include "coopmac/region.hpp"
#include "coopmac/solver.hpp"
#include "coopmac/verify.hpp"

namespace coopmac::app {

/// Malformed scenario text: unreadable file, bad syntax, unknown or repeated
/// key, or a value that does not parse for its key.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Well-formed scenario whose values violate constraints. what() lists every
/// violation, one per line.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::vector<std::string> problems);
  const std::vector<std::string>& problems() const { return problems_; }

 private:
  std::vector<std::string> problems_;
};

enum class FadingKind { Uniform, Rayleigh };
enum class LogBase { E, Two };

std::string_view log_base_name(LogBase base);

struct Scenario {
  FadingKind fading = FadingKind::Uniform;
  std::vector<double> direct_values;  // uniform grid for h10 and h20
  std::vector<double> inter_values;   // uniform grid for h12 and h21
  double mean_direct = 0.3;           // Rayleigh E[h10] = E[h20]
  double mean_inter = 0.6;            // Rayleigh E[h12] = E[h21]
  std::size_t n_samples = 1000;
  std::uint64_t seed = 1;
  bool tie_inter_links = false;

  NoiseVariances noise;
  PowerBudgets budgets;
  SolverConfig solver;

  std::size_t weights_count = 17;
  std::optional<std::vector<Weights>> weights;  // overrides weights_count
  std::vector<SchemeMode> modes{std::begin(kAllModes), std::end(kAllModes)};

  std::filesystem::path output_dir = "out";
  LogBase log_base = LogBase::E;
  Slice slice{0.2, 0.15};

  /// Defaults: the uniform grids {0.025, ..., 0.25} and {0.26, ..., 0.35}.
  Scenario();

  /// Throws ValidationError listing every violated constraint.
  void validate() const;

  Ensemble build_ensemble() const;
  std::vector<Weights> weight_sweep() const;

  /// Multiplier applied to rates on output (1 for nats, 1/ln 2 for bits).
  double rate_scale() const;
};

/**
 * Parses the flat scenario format: one `key = value` per line, `#` starts a
 * comment, blank lines are ignored. Lists are comma separated; `weights` is
 * a semicolon-separated list of `mu1,mu2` pairs. Keys left out keep their
 * defaults. A file with no assignments is a parse error.
 *
 * Throws ParseError (with the line number) on syntax problems and
 * ValidationError when the values are inconsistent.
 */
Scenario parse_scenario(std::string_view text, const std::string& origin = "<string>");
Scenario load_scenario(const std::filesystem::path& path);

/// Parses "a,b" into two finite numbers; throws InvalidInput.
std::pair<double, double> parse_pair(std::string_view text);

}  // namespace coopmac::app
