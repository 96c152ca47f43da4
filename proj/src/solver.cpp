#include "coopmac/solver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>

#include "coopmac/format.hpp"

namespace coopmac {

void SolverConfig::validate() const {
  if (!(std::isfinite(a) && a > 0.0)) throw InvalidInput("step a must be > 0");
  if (!(std::isfinite(b) && b >= 0.0)) throw InvalidInput("step b must be >= 0");
  if (max_iters < 1) throw InvalidInput("max_iters must be >= 1");
  if (!(std::isfinite(eps_sqrt) && eps_sqrt > 0.0)) {
    throw InvalidInput("eps_sqrt must be > 0");
  }
  if (!(std::isfinite(grad_tol) && grad_tol >= 0.0)) {
    throw InvalidInput("grad_tol must be >= 0");
  }
}

std::vector<ComponentMask> state_supports(const Ensemble& ensemble,
                                          const SearchSpace& space) {
  std::vector<ComponentMask> masks;
  masks.reserve(ensemble.size());
  for (const auto& s : ensemble.gains()) {
    masks.push_back(space.override_mask ? *space.override_mask
                                        : active_support(classify_case(s)));
  }
  return masks;
}

namespace {

using Gradient6 = std::array<double, kNumComponents>;

Gradient6 grad_log_a(const EffectiveGains& s, const PowerVector& pv,
                     double eps_sqrt) {
  const double root = std::sqrt(s.s10 * s.s20);
  const double a = 1.0 + s.s10 * pv.user_total(0) + s.s20 * pv.user_total(1) +
                   2.0 * root * std::sqrt(std::max(pv.pU1(), 0.0)) *
                       std::sqrt(std::max(pv.pU2(), 0.0));
  const double u1 = std::sqrt(std::max(pv.pU1(), eps_sqrt));
  const double u2 = std::sqrt(std::max(pv.pU2(), eps_sqrt));
  const double d1 = s.s10 / a;
  const double d2 = s.s20 / a;
  return {d1, d1, (s.s10 + root * u2 / u1) / a,
          d2, d2, (s.s20 + root * u1 / u2) / a};
}

Gradient6 grad_log_bc(const EffectiveGains& s, const PowerVector& pv) {
  const double direct = 1.0 + s.s10 * pv.p10() + s.s20 * pv.p20();
  const double relay1 = 1.0 + s.s12 * (pv.p10() + pv.p12());
  const double relay2 = 1.0 + s.s21 * (pv.p20() + pv.p21());
  const double leak1 = 1.0 + s.s12 * pv.p10();
  const double leak2 = 1.0 + s.s21 * pv.p20();
  return {s.s10 / direct - s.s12 / leak1 + s.s12 / relay1,
          s.s12 / relay1,
          0.0,
          s.s20 / direct - s.s21 / leak2 + s.s21 / relay2,
          s.s21 / relay2,
          0.0};
}

Gradient6 grad_user_term(const EffectiveGains& s, const PowerVector& pv,
                         int user) {
  Gradient6 g{};
  if (user == 0) {
    const double relay = 1.0 + s.s12 * (pv.p10() + pv.p12());
    g[0] = s.s12 / relay - s.s12 / (1.0 + s.s12 * pv.p10()) +
           s.s10 / (1.0 + s.s10 * pv.p10());
    g[1] = s.s12 / relay;
  } else {
    const double relay = 1.0 + s.s21 * (pv.p20() + pv.p21());
    g[3] = s.s21 / relay - s.s21 / (1.0 + s.s21 * pv.p20()) +
           s.s20 / (1.0 + s.s20 * pv.p20());
    g[4] = s.s21 / relay;
  }
  return g;
}

// Maps the solver's flat variable vector onto a policy. Per-state search
// owns one variable per (state, supported component); constant search owns
// one variable per component of the union support, shared by all states
// that support it. Each variable carries the probability mass it spends
// power with, which is the weight of the per-user budget constraint.
class Parameterization {
 public:
  Parameterization(const Ensemble& ensemble, const SearchSpace& space)
      : ensemble_(ensemble),
        supports_(state_supports(ensemble, space)),
        constant_(space.constant_across_states) {
    const auto& probs = ensemble.probs();
    if (constant_) {
      std::array<double, kNumComponents> mass{};
      for (std::size_t k = 0; k < supports_.size(); ++k) {
        for (Component c : kAllComponents) {
          if (supports_[k].contains(c)) {
            mass[static_cast<std::size_t>(c)] += probs[k];
          }
        }
      }
      for (Component c : kAllComponents) {
        const double m = mass[static_cast<std::size_t>(c)];
        if (m > 0.0) add(kShared, c, m);
      }
    } else {
      for (std::size_t k = 0; k < supports_.size(); ++k) {
        for (Component c : kAllComponents) {
          if (supports_[k].contains(c)) add(k, c, probs[k]);
        }
      }
    }
  }

  const std::vector<ComponentMask>& supports() const { return supports_; }
  std::size_t size() const { return vars_.size(); }

  std::vector<double> initial() const {
    std::array<double, 2> mass{};
    for (std::size_t v = 0; v < vars_.size(); ++v) {
      mass[owner(vars_[v].comp)] += weights_[v];
    }
    std::vector<double> x(vars_.size());
    for (std::size_t v = 0; v < vars_.size(); ++v) {
      const int user = owner(vars_[v].comp);
      x[v] = ensemble_.budget(user) / mass[user];
    }
    return x;
  }

  PowerPolicy to_policy(std::span<const double> x) const {
    PowerPolicy policy = zero_policy(ensemble_);
    for (std::size_t v = 0; v < vars_.size(); ++v) {
      const auto& var = vars_[v];
      if (var.state != kShared) {
        policy.vectors[var.state][var.comp] = x[v];
        continue;
      }
      for (std::size_t k = 0; k < supports_.size(); ++k) {
        if (supports_[k].contains(var.comp)) {
          policy.vectors[k][var.comp] = x[v];
        }
      }
    }
    return policy;
  }

  std::vector<double> gradient(const std::vector<PowerVector>& g) const {
    std::vector<double> out(vars_.size(), 0.0);
    for (std::size_t v = 0; v < vars_.size(); ++v) {
      const auto& var = vars_[v];
      if (var.state != kShared) {
        out[v] = g[var.state][var.comp];
        continue;
      }
      for (std::size_t k = 0; k < g.size(); ++k) out[v] += g[k][var.comp];
    }
    return out;
  }

  void project(std::vector<double>& x) const {
    for (int user = 0; user < 2; ++user) {
      const auto& idx = user_vars_[user];
      std::vector<double> raw(idx.size());
      std::vector<double> w(idx.size());
      for (std::size_t i = 0; i < idx.size(); ++i) {
        raw[i] = x[idx[i]];
        w[i] = weights_[idx[i]];
      }
      const auto projected = project_user(raw, w, ensemble_.budget(user));
      for (std::size_t i = 0; i < idx.size(); ++i) x[idx[i]] = projected[i];
    }
  }

 private:
  static constexpr std::size_t kShared = std::numeric_limits<std::size_t>::max();

  struct Var {
    std::size_t state;
    Component comp;
  };

  void add(std::size_t state, Component c, double weight) {
    user_vars_[owner(c)].push_back(vars_.size());
    vars_.push_back({state, c});
    weights_.push_back(weight);
  }

  const Ensemble& ensemble_;
  std::vector<ComponentMask> supports_;
  bool constant_;
  std::vector<Var> vars_;
  std::vector<double> weights_;
  std::array<std::vector<std::size_t>, 2> user_vars_;
};

}  // namespace

Supergradient supergradient(const Ensemble& ensemble,
                            const PowerPolicy& policy, const Weights& mu,
                            std::span<const ComponentMask> supports,
                            double eps_sqrt) {
  validate(mu);
  require_aligned(ensemble, policy);
  if (supports.size() != ensemble.size()) {
    throw InvalidInput("supports not aligned with the ensemble");
  }
  Supergradient out;
  out.bounds = rate_bounds(ensemble, policy);
  out.value = weighted_value(out.bounds, mu);
  out.branch = out.bounds.mean_log_a <= out.bounds.mean_log_bc ? Branch::LogA
                                                               : Branch::LogBC;
  out.g.resize(ensemble.size());

  const double low = mu.low();
  const double excess = mu.excess();
  const int favored = mu.favored();
  const auto& probs = ensemble.probs();
  const auto& gains = ensemble.gains();
  for (std::size_t k = 0; k < ensemble.size(); ++k) {
    const auto& s = gains[k];
    const auto& pv = policy.vectors[k];
    Gradient6 sum{};
    if (low > 0.0) {
      sum = out.branch == Branch::LogA ? grad_log_a(s, pv, eps_sqrt)
                                       : grad_log_bc(s, pv);
    }
    Gradient6 individual{};
    if (excess > 0.0) individual = grad_user_term(s, pv, favored);
    for (Component c : kAllComponents) {
      const auto i = static_cast<std::size_t>(c);
      out.g[k][c] = supports[k].contains(c)
                        ? probs[k] * (low * sum[i] + excess * individual[i])
                        : 0.0;
    }
  }
  return out;
}

Supergradient supergradient(const Ensemble& ensemble,
                            const PowerPolicy& policy, const Weights& mu,
                            double eps_sqrt) {
  const auto supports = state_supports(ensemble);
  return supergradient(ensemble, policy, mu, supports, eps_sqrt);
}

std::vector<double> project_user(std::span<const double> raw,
                                 std::span<const double> weights,
                                 double budget) {
  if (raw.size() != weights.size()) {
    throw InvalidInput("project_user: raw and weights differ in length");
  }
  if (!(budget >= 0.0)) throw InvalidInput("project_user: negative budget");

  std::vector<double> x(raw.size());
  double spent = 0.0;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    x[i] = std::max(raw[i], 0.0);
    spent += weights[i] * x[i];
  }
  // Relative slack keeps the map exactly idempotent: a projected point may
  // overshoot the budget by rounding and must still count as feasible.
  if (spent <= budget * (1.0 + 1e-12)) return x;

  // Spent power as a function of the shift theta is convex, piecewise
  // linear and decreasing. Newton steps from theta = 0 stay left of the root
  // and stop once the active set no longer changes.
  double theta = 0.0;
  for (std::size_t iter = 0; iter <= raw.size(); ++iter) {
    double excess = -budget;
    double slope = 0.0;
    for (std::size_t i = 0; i < raw.size(); ++i) {
      const double r = raw[i] - theta * weights[i];
      if (weights[i] > 0.0 && r > 0.0) {
        excess += weights[i] * r;
        slope += weights[i] * weights[i];
      }
    }
    if (excess <= 0.0 || slope == 0.0) break;
    const double next = theta + excess / slope;
    if (!(next > theta)) break;
    theta = next;
  }
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (weights[i] > 0.0) x[i] = std::max(0.0, raw[i] - theta * weights[i]);
  }
  return x;
}

double step_size(std::size_t k, double a, double b, double g_norm) {
  if (!(g_norm > 0.0)) {
    throw InvalidInput("step_size: zero supergradient (converged)");
  }
  return a / (b + std::sqrt(static_cast<double>(k))) / g_norm;
}

PowerPolicy initial_policy(const Ensemble& ensemble, const SearchSpace& space) {
  Parameterization param(ensemble, space);
  return param.to_policy(param.initial());
}

SolveResult optimize(const Ensemble& ensemble, const Weights& mu,
                     const SolverConfig& config, const SearchSpace& space) {
  validate(mu);
  config.validate();
  if (!(ensemble.budgets().user1 > 0.0 && ensemble.budgets().user2 > 0.0)) {
    throw InvalidInput("power budgets must be positive");
  }

  Parameterization param(ensemble, space);
  std::vector<double> x = param.initial();

  SolveResult result;
  result.trace.reserve(config.max_iters);
  for (std::size_t k = 0; k < config.max_iters; ++k) {
    PowerPolicy policy = param.to_policy(x);
    const Supergradient sg =
        supergradient(ensemble, policy, mu, param.supports(), config.eps_sqrt);
    if (k == 0 || sg.value > result.best_value) {
      result.best_value = sg.value;
      result.best_policy = std::move(policy);
    }
    TraceEntry entry{k, sg.value, result.best_value, 0.0, sg.branch};
    result.iterations_run = k + 1;

    const std::vector<double> g = param.gradient(sg.g);
    const double norm =
        std::sqrt(std::inner_product(g.begin(), g.end(), g.begin(), 0.0));
    if (norm < config.grad_tol || norm == 0.0) {
      result.trace.push_back(entry);
      break;
    }
    if (k + 1 < config.max_iters) {
      entry.step = step_size(k, config.a, config.b, norm);
      for (std::size_t v = 0; v < x.size(); ++v) x[v] += entry.step * g[v];
      param.project(x);
    }
    result.trace.push_back(entry);
  }
  return result;
}

void write_trace_csv(std::ostream& out, std::span<const TraceEntry> trace,
                     double scale) {
  out << "iter,objective,best_so_far,step,active_branch\n";
  for (const auto& e : trace) {
    out << e.iter << ',' << format_number(e.objective * scale) << ','
        << format_number(e.best_so_far * scale) << ','
        << format_number(e.step) << ','
        << (e.branch == Branch::LogA ? "logA" : "logBC") << '\n';
  }
}

}  // namespace coopmac
