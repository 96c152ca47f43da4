#include "coopmac/app/scenario.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>

#include "coopmac/format.hpp"

namespace coopmac::app {
namespace {

std::string join_lines(const std::vector<std::string>& items) {
  std::string out = "invalid scenario:";
  for (const auto& s : items) out += "\n  " + s;
  return out;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

double to_double(std::string_view s) { return parse_number(std::string(s)); }

std::uint64_t to_unsigned(std::string_view s) {
  std::uint64_t v = 0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (s.empty() || ec != std::errc() || ptr != end) {
    throw InvalidInput("not a non-negative integer: '" + std::string(s) + "'");
  }
  return v;
}

bool to_bool(std::string_view s) {
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0") return false;
  throw InvalidInput("expected true or false, got '" + std::string(s) + "'");
}

std::vector<double> to_list(std::string_view s) {
  std::vector<double> out;
  for (auto part : split(s, ',')) out.push_back(to_double(part));
  return out;
}

using Setter = std::function<void(Scenario&, std::string_view)>;

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = {
      {"fading",
       [](Scenario& s, std::string_view v) {
         if (v == "uniform") {
           s.fading = FadingKind::Uniform;
         } else if (v == "rayleigh") {
           s.fading = FadingKind::Rayleigh;
         } else {
           throw InvalidInput("expected uniform or rayleigh");
         }
       }},
      {"direct_values", [](Scenario& s, auto v) { s.direct_values = to_list(v); }},
      {"inter_values", [](Scenario& s, auto v) { s.inter_values = to_list(v); }},
      {"mean_direct", [](Scenario& s, auto v) { s.mean_direct = to_double(v); }},
      {"mean_inter", [](Scenario& s, auto v) { s.mean_inter = to_double(v); }},
      {"n_samples", [](Scenario& s, auto v) { s.n_samples = to_unsigned(v); }},
      {"seed", [](Scenario& s, auto v) { s.seed = to_unsigned(v); }},
      {"tie_inter_links", [](Scenario& s, auto v) { s.tie_inter_links = to_bool(v); }},
      {"sigma0_sq", [](Scenario& s, auto v) { s.noise.sigma0_sq = to_double(v); }},
      {"sigma1_sq", [](Scenario& s, auto v) { s.noise.sigma1_sq = to_double(v); }},
      {"sigma2_sq", [](Scenario& s, auto v) { s.noise.sigma2_sq = to_double(v); }},
      {"budget1", [](Scenario& s, auto v) { s.budgets.user1 = to_double(v); }},
      {"budget2", [](Scenario& s, auto v) { s.budgets.user2 = to_double(v); }},
      {"step_a", [](Scenario& s, auto v) { s.solver.a = to_double(v); }},
      {"step_b", [](Scenario& s, auto v) { s.solver.b = to_double(v); }},
      {"max_iters", [](Scenario& s, auto v) { s.solver.max_iters = to_unsigned(v); }},
      {"eps_sqrt", [](Scenario& s, auto v) { s.solver.eps_sqrt = to_double(v); }},
      {"weights_count", [](Scenario& s, auto v) { s.weights_count = to_unsigned(v); }},
      {"weights",
       [](Scenario& s, std::string_view v) {
         std::vector<Weights> w;
         for (auto pair : split(v, ';')) {
           const auto [a, b] = parse_pair(pair);
           w.push_back({a, b});
         }
         s.weights = std::move(w);
       }},
      {"modes",
       [](Scenario& s, std::string_view v) {
         s.modes.clear();
         for (auto name : split(v, ',')) {
           const auto mode = parse_mode(name);
           if (!mode) throw InvalidInput("unknown mode '" + std::string(name) + "'");
           s.modes.push_back(*mode);
         }
       }},
      {"output_dir", [](Scenario& s, auto v) { s.output_dir = std::string(v); }},
      {"log_base",
       [](Scenario& s, std::string_view v) {
         if (v == "e") {
           s.log_base = LogBase::E;
         } else if (v == "2") {
           s.log_base = LogBase::Two;
         } else {
           throw InvalidInput("expected e or 2");
         }
       }},
      {"slice",
       [](Scenario& s, std::string_view v) {
         const auto [a, b] = parse_pair(v);
         s.slice = {a, b};
       }},
  };
  return table;
}

}  // namespace

ValidationError::ValidationError(std::vector<std::string> problems)
    : std::runtime_error(join_lines(problems)), problems_(std::move(problems)) {}

std::string_view log_base_name(LogBase base) {
  return base == LogBase::E ? "e" : "2";
}

Scenario::Scenario() {
  for (int i = 1; i <= 10; ++i) {
    direct_values.push_back(0.025 * i);
    inter_values.push_back(0.25 + 0.01 * i);
  }
}

void Scenario::validate() const {
  std::vector<std::string> bad;
  const auto positive = [&](const char* name, double v) {
    if (!(std::isfinite(v) && v > 0.0)) bad.push_back(std::string(name) + " must be > 0");
  };
  const auto gains_ok = [&](const char* name, const std::vector<double>& v) {
    if (v.empty()) bad.push_back(std::string(name) + " must not be empty");
    for (double x : v) {
      if (!(std::isfinite(x) && x >= 0.0)) {
        bad.push_back(std::string(name) + " entries must be finite and >= 0");
        break;
      }
    }
  };

  if (fading == FadingKind::Uniform) {
    gains_ok("direct_values", direct_values);
    gains_ok("inter_values", inter_values);
  } else {
    positive("mean_direct", mean_direct);
    positive("mean_inter", mean_inter);
    if (n_samples == 0) bad.push_back("n_samples must be >= 1");
  }
  positive("sigma0_sq", noise.sigma0_sq);
  positive("sigma1_sq", noise.sigma1_sq);
  positive("sigma2_sq", noise.sigma2_sq);
  positive("budget1", budgets.user1);
  positive("budget2", budgets.user2);
  positive("step_a", solver.a);
  if (!(std::isfinite(solver.b) && solver.b >= 0.0)) bad.push_back("step_b must be >= 0");
  if (solver.max_iters == 0) bad.push_back("max_iters must be >= 1");
  positive("eps_sqrt", solver.eps_sqrt);
  if (weights) {
    if (weights->empty()) bad.push_back("weights must not be empty");
    for (const auto& w : *weights) {
      try {
        coopmac::validate(w);
      } catch (const InvalidInput& e) {
        bad.push_back(std::string("weights: ") + e.what());
        break;
      }
    }
  } else if (weights_count == 0) {
    bad.push_back("weights_count must be >= 1");
  }
  if (modes.empty()) bad.push_back("modes must not be empty");
  if (!(std::isfinite(slice.s10) && std::isfinite(slice.s20))) {
    bad.push_back("slice must be finite");
  }
  if (!bad.empty()) throw ValidationError(std::move(bad));
}

Ensemble Scenario::build_ensemble() const {
  if (fading == FadingKind::Uniform) {
    return build_uniform_grid(direct_values, inter_values, noise, budgets,
                              tie_inter_links);
  }
  return build_rayleigh_mc(mean_direct, mean_inter, n_samples, seed, noise,
                           budgets, tie_inter_links);
}

std::vector<Weights> Scenario::weight_sweep() const {
  return weights ? *weights : default_weight_sweep(weights_count);
}

double Scenario::rate_scale() const {
  return log_base == LogBase::Two ? 1.0 / std::numbers::ln2 : 1.0;
}

std::pair<double, double> parse_pair(std::string_view text) {
  const auto parts = split(text, ',');
  if (parts.size() != 2) {
    throw InvalidInput("expected two comma-separated numbers, got '" +
                       std::string(text) + "'");
  }
  return {to_double(parts[0]), to_double(parts[1])};
}

Scenario parse_scenario(std::string_view text, const std::string& origin) {
  Scenario scenario;
  std::map<std::string, std::size_t, std::less<>> seen;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;

    const auto where = origin + ":" + std::to_string(line_no) + ": ";
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError(where + "expected 'key = value'");
    }
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end()) {
      throw ParseError(where + "unknown key '" + std::string(key) + "'");
    }
    if (const auto prev = seen.find(key); prev != seen.end()) {
      throw ParseError(where + "duplicate key '" + std::string(key) +
                       "' (first set on line " + std::to_string(prev->second) + ")");
    }
    seen.emplace(std::string(key), line_no);
    if (value.empty()) {
      throw ParseError(where + "missing value for '" + std::string(key) + "'");
    }
    try {
      it->second(scenario, value);
    } catch (const InvalidInput& e) {
      throw ParseError(where + std::string(key) + ": " + e.what());
    }
  }
  if (seen.empty()) throw ParseError(origin + ": no settings found");
  scenario.validate();
  return scenario;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read scenario file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), path.string());
}

}  // namespace coopmac::app
