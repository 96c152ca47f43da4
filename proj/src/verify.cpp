#include "coopmac/verify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include "coopmac/format.hpp"
#include "coopmac/rates.hpp"

namespace coopmac {
namespace {

bool close(double x, double target) {
  return std::abs(x - target) <= 1e-9 * std::max(std::abs(target), 1e-300);
}

bool all_case_one(const Ensemble& ensemble) {
  return std::all_of(ensemble.gains().begin(), ensemble.gains().end(),
                     [](const EffectiveGains& s) {
                       return classify_case(s) == ChannelCase::One;
                     });
}

double coherent_d(const EffectiveGains& s, const PowerVector& pv) {
  return std::exp(log_a(s, pv));
}

WaterLevel fit_level(const Ensemble& ensemble, const PowerPolicy& policy,
                     const std::vector<std::size_t>& states, int user,
                     double threshold) {
  const auto power = [&](std::size_t k) {
    return user == 0 ? policy.vectors[k].p12() : policy.vectors[k].p21();
  };
  const auto gain = [&](std::size_t k) {
    return user == 0 ? ensemble.gains()[k].s12 : ensemble.gains()[k].s21;
  };

  WaterLevel out;
  double level_sum = 0.0;
  double power_sum = 0.0;
  out.min_active_gain = std::numeric_limits<double>::infinity();
  for (std::size_t k : states) {
    if (power(k) > threshold) {
      level_sum += power(k) + 1.0 / gain(k);
      power_sum += power(k);
      ++out.fitted_states;
      out.min_active_gain = std::min(out.min_active_gain, gain(k));
    } else {
      out.max_inactive_gain = std::max(out.max_inactive_gain, gain(k));
    }
  }
  if (out.fitted_states == 0) return out;

  const double n = static_cast<double>(out.fitted_states);
  const double level = level_sum / n;
  const double mean_power = power_sum / n;
  out.nu = 1.0 / level;
  for (std::size_t k : states) {
    if (power(k) > threshold) {
      out.residual = std::max(out.residual,
                              std::abs(level - 1.0 / gain(k) - power(k)));
    }
  }
  out.residual /= mean_power;
  return out;
}

// Solves the 3x3 system m z = r by Gaussian elimination with partial
// pivoting; false when (numerically) singular.
bool solve3(std::array<std::array<double, 3>, 3> m, std::array<double, 3> r,
            std::array<double, 3>& z) {
  double scale = 0.0;
  for (const auto& row : m) {
    for (double v : row) scale = std::max(scale, std::abs(v));
  }
  if (scale == 0.0) return false;
  for (int col = 0; col < 3; ++col) {
    int pivot = col;
    for (int row = col + 1; row < 3; ++row) {
      if (std::abs(m[row][col]) > std::abs(m[pivot][col])) pivot = row;
    }
    if (std::abs(m[pivot][col]) <= 1e-14 * scale) return false;
    std::swap(m[col], m[pivot]);
    std::swap(r[col], r[pivot]);
    for (int row = col + 1; row < 3; ++row) {
      const double f = m[row][col] / m[col][col];
      for (int c = col; c < 3; ++c) m[row][c] -= f * m[col][c];
      r[row] -= f * r[col];
    }
  }
  for (int row = 2; row >= 0; --row) {
    double acc = r[row];
    for (int c = row + 1; c < 3; ++c) acc -= m[row][c] * z[c];
    z[row] = acc / m[row][row];
  }
  return true;
}

}  // namespace

double min_gap(const Ensemble& ensemble, const PowerPolicy& policy) {
  const auto b = rate_bounds(ensemble, policy);
  return std::abs(b.mean_log_a - b.mean_log_bc);
}

std::vector<std::size_t> slice_states(const Ensemble& ensemble,
                                      const Slice& slice) {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < ensemble.size(); ++k) {
    const auto& s = ensemble.gains()[k];
    if (close(s.s10, slice.s10) && close(s.s20, slice.s20) &&
        classify_case(s) == ChannelCase::One) {
      out.push_back(k);
    }
  }
  return out;
}

std::optional<WaterfillingFit> waterfilling_fit(const Ensemble& ensemble,
                                                const PowerPolicy& policy,
                                                const Slice& slice,
                                                double positivity_threshold) {
  require_aligned(ensemble, policy);
  const auto states = slice_states(ensemble, slice);
  WaterfillingFit fit;
  fit.user1 = fit_level(ensemble, policy, states, 0,
                        positivity_threshold * ensemble.budgets().user1);
  fit.user2 = fit_level(ensemble, policy, states, 1,
                        positivity_threshold * ensemble.budgets().user2);
  if (fit.user1.fitted_states == 0 || fit.user2.fitted_states == 0) {
    return std::nullopt;
  }
  return fit;
}

bool thresholds_hold(const WaterLevel& level, double active_tol,
                     double inactive_tol) {
  if (level.fitted_states == 0) return false;
  const bool active_ok = level.min_active_gain > level.nu * (1.0 - active_tol);
  const bool inactive_ok =
      level.max_inactive_gain <= level.nu * (1.0 + inactive_tol);
  return active_ok && inactive_ok;
}

std::optional<double> coupling_check(const Ensemble& ensemble,
                                     const PowerPolicy& policy,
                                     const Slice& slice,
                                     double positivity_threshold) {
  require_aligned(ensemble, policy);
  const double t1 = positivity_threshold * ensemble.budgets().user1;
  const double t2 = positivity_threshold * ensemble.budgets().user2;
  std::vector<double> ratios;
  for (std::size_t k : slice_states(ensemble, slice)) {
    const auto& pv = policy.vectors[k];
    if (pv.pU1() > t1 && pv.pU2() > t2) ratios.push_back(pv.pU1() / pv.pU2());
  }
  if (ratios.size() < 2) return std::nullopt;
  double mean = 0.0;
  for (double r : ratios) mean += r;
  mean /= static_cast<double>(ratios.size());
  double var = 0.0;
  for (double r : ratios) var += (r - mean) * (r - mean);
  var /= static_cast<double>(ratios.size());
  return std::sqrt(var) / mean;
}

std::optional<Multipliers> fit_multipliers(const Ensemble& ensemble,
                                           const PowerPolicy& policy,
                                           double positivity_threshold) {
  require_aligned(ensemble, policy);
  if (!all_case_one(ensemble)) return std::nullopt;
  const double t1 = positivity_threshold * ensemble.budgets().user1;
  const double t2 = positivity_threshold * ensemble.budgets().user2;

  // Unknowns z = (gamma, lambda1, lambda2); each condition is a row
  // coeff . z = rhs accumulated into probability-weighted normal equations.
  std::array<std::array<double, 3>, 3> normal{};
  std::array<double, 3> rhs{};
  const auto add_row = [&](double w, std::array<double, 3> row, double r) {
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) normal[i][j] += w * row[i] * row[j];
      rhs[i] += w * row[i] * r;
    }
  };

  for (std::size_t k = 0; k < ensemble.size(); ++k) {
    const auto& s = ensemble.gains()[k];
    const auto& pv = policy.vectors[k];
    const double w = ensemble.probs()[k];
    const double d = coherent_d(s, pv);
    if (pv.p12() > t1) {
      const double a = s.s12 / (1.0 + s.s12 * pv.p12());
      add_row(w, {a - s.s10 / d, -1.0, 0.0}, -a);
    }
    if (pv.p21() > t2) {
      const double a = s.s21 / (1.0 + s.s21 * pv.p21());
      add_row(w, {a - s.s20 / d, 0.0, -1.0}, -a);
    }
    if (pv.pU1() > t1 && pv.pU2() > t2) {
      const double root = std::sqrt(s.s10 * s.s20);
      const double c1 = (s.s10 + root * std::sqrt(pv.pU2() / pv.pU1())) / d;
      const double c2 = (s.s20 + root * std::sqrt(pv.pU1() / pv.pU2())) / d;
      add_row(w, {c1, 1.0, 0.0}, 0.0);
      add_row(w, {c2, 0.0, 1.0}, 0.0);
    }
  }
  std::array<double, 3> z{};
  if (!solve3(normal, rhs, z)) return std::nullopt;
  return Multipliers{z[1], z[2], z[0]};
}

double KktResiduals::max() const {
  return std::max({waterfill1, waterfill2, common1, common2});
}

std::pair<double, double> water_levels(const Multipliers& m, double s10,
                                       double s20) {
  const double den = (1.0 + m.gamma) * (m.lambda2 * s10 + m.lambda1 * s20);
  return {m.lambda1 * m.lambda1 * s20 / den, m.lambda2 * m.lambda2 * s10 / den};
}

std::optional<KktResiduals> kkt_residuals(const Ensemble& ensemble,
                                          const PowerPolicy& policy,
                                          const Multipliers& m,
                                          double positivity_threshold) {
  require_aligned(ensemble, policy);
  if (!all_case_one(ensemble)) return std::nullopt;
  if (!(m.lambda1 > 0.0 && m.lambda2 > 0.0 && 1.0 + m.gamma > 0.0)) {
    throw InvalidInput("kkt_residuals: need lambda1, lambda2 > 0 and "
                       "gamma > -1");
  }
  const double t1 = positivity_threshold * ensemble.budgets().user1;
  const double t2 = positivity_threshold * ensemble.budgets().user2;

  // Inequality lhs <= rhs, tight when the power is positive; violation is
  // reported relative to |scale|.
  const auto violation = [](double lhs, double rhs, bool positive,
                            double scale) {
    const double diff = positive ? std::abs(lhs - rhs) : std::max(0.0, lhs - rhs);
    return diff / std::abs(scale);
  };

  KktResiduals out;
  for (std::size_t k = 0; k < ensemble.size(); ++k) {
    const auto& s = ensemble.gains()[k];
    const auto& pv = policy.vectors[k];
    const auto [nu1, nu2] = water_levels(m, s.s10, s.s20);
    out.waterfill1 = std::max(
        out.waterfill1, violation(s.s12 / (1.0 + s.s12 * pv.p12()), nu1,
                                  pv.p12() > t1, nu1));
    out.waterfill2 = std::max(
        out.waterfill2, violation(s.s21 / (1.0 + s.s21 * pv.p21()), nu2,
                                  pv.p21() > t2, nu2));
    const double d = coherent_d(s, pv);
    const double rhs1 = m.gamma / d * (s.s10 + m.lambda1 / m.lambda2 * s.s20);
    const double rhs2 = m.gamma / d * (s.s20 + m.lambda2 / m.lambda1 * s.s10);
    out.common1 = std::max(
        out.common1, violation(-m.lambda1, rhs1, pv.pU1() > t1, m.lambda1));
    out.common2 = std::max(
        out.common2, violation(-m.lambda2, rhs2, pv.pU2() > t2, m.lambda2));
  }
  return out;
}

StructureReport analyze_structure(const Ensemble& ensemble,
                                  const PowerPolicy& policy,
                                  const Slice& slice) {
  StructureReport report;
  report.min_gap = min_gap(ensemble, policy);
  report.slice = slice;
  report.slice_size = slice_states(ensemble, slice).size();
  report.waterfilling = waterfilling_fit(ensemble, policy, slice);
  report.coupling_ratio_cv = coupling_check(ensemble, policy, slice);
  report.multipliers = fit_multipliers(ensemble, policy);
  if (report.multipliers && report.multipliers->lambda1 > 0.0 &&
      report.multipliers->lambda2 > 0.0 &&
      1.0 + report.multipliers->gamma > 0.0) {
    report.kkt = kkt_residuals(ensemble, policy, *report.multipliers);
  }
  return report;
}

std::string to_text(const StructureReport& r) {
  constexpr const char* kNa = "not_applicable";
  std::ostringstream out;
  out << "min_gap = " << format_number(r.min_gap) << '\n';
  out << "slice_s10 = " << format_number(r.slice.s10) << '\n';
  out << "slice_s20 = " << format_number(r.slice.s20) << '\n';
  out << "slice_states = " << r.slice_size << '\n';
  if (r.waterfilling) {
    const auto& w = *r.waterfilling;
    out << "water_nu1 = " << format_number(w.user1.nu) << '\n';
    out << "water_nu2 = " << format_number(w.user2.nu) << '\n';
    out << "water_residual = " << format_number(w.residual()) << '\n';
    out << "water_residual1 = " << format_number(w.user1.residual) << '\n';
    out << "water_residual2 = " << format_number(w.user2.residual) << '\n';
    out << "water_fitted_states1 = " << w.user1.fitted_states << '\n';
    out << "water_fitted_states2 = " << w.user2.fitted_states << '\n';
    out << "thresholds_hold = "
        << (thresholds_hold(w.user1) && thresholds_hold(w.user2) ? "true"
                                                                 : "false")
        << '\n';
  } else {
    for (const char* key :
         {"water_nu1", "water_nu2", "water_residual", "water_residual1",
          "water_residual2", "water_fitted_states1", "water_fitted_states2",
          "thresholds_hold"}) {
      out << key << " = " << kNa << '\n';
    }
  }
  out << "coupling_ratio_cv = "
      << (r.coupling_ratio_cv ? format_number(*r.coupling_ratio_cv) : kNa)
      << '\n';
  if (r.multipliers) {
    out << "lambda1 = " << format_number(r.multipliers->lambda1) << '\n';
    out << "lambda2 = " << format_number(r.multipliers->lambda2) << '\n';
    out << "gamma = " << format_number(r.multipliers->gamma) << '\n';
  } else {
    out << "lambda1 = " << kNa << "\nlambda2 = " << kNa << "\ngamma = " << kNa
        << '\n';
  }
  if (r.kkt) {
    out << "kkt_waterfill1 = " << format_number(r.kkt->waterfill1) << '\n';
    out << "kkt_waterfill2 = " << format_number(r.kkt->waterfill2) << '\n';
    out << "kkt_common1 = " << format_number(r.kkt->common1) << '\n';
    out << "kkt_common2 = " << format_number(r.kkt->common2) << '\n';
  } else {
    out << "kkt_waterfill1 = " << kNa << "\nkkt_waterfill2 = " << kNa
        << "\nkkt_common1 = " << kNa << "\nkkt_common2 = " << kNa << '\n';
  }
  return out.str();
}

}  // namespace coopmac
