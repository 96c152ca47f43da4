#include "coopmac/ensemble.hpp"

#include <cmath>
#include <ostream>
#include <string>

#include "coopmac/format.hpp"

namespace coopmac {
namespace {

bool valid_gain(double h) { return std::isfinite(h) && h >= 0.0; }
bool valid_positive(double x) { return std::isfinite(x) && x > 0.0; }

double compensated_sum(std::span<const double> xs) {
  double sum = 0.0;
  double carry = 0.0;
  for (double x : xs) {
    const double t = sum + x;
    carry += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  return sum + carry;
}

void require_gain_list(std::span<const double> values, const char* what) {
  if (values.empty()) throw InvalidInput(std::string(what) + " is empty");
  for (double v : values) {
    if (!valid_gain(v)) {
      throw InvalidInput(std::string(what) + " contains a negative or "
                                             "non-finite gain");
    }
  }
}

}  // namespace

EffectiveGains effective_gains(const ChannelState& state,
                               const NoiseVariances& noise) {
  return {state.h10 / noise.sigma0_sq, state.h20 / noise.sigma0_sq,
          state.h12 / noise.sigma2_sq, state.h21 / noise.sigma1_sq};
}

Ensemble::Ensemble(std::vector<ChannelState> states, std::vector<double> probs,
                   NoiseVariances noise, PowerBudgets budgets)
    : states_(std::move(states)),
      probs_(std::move(probs)),
      noise_(noise),
      budgets_(budgets) {
  if (states_.empty()) throw InvalidInput("ensemble has no states");
  if (states_.size() != probs_.size()) {
    throw InvalidInput("ensemble has " + std::to_string(states_.size()) +
                       " states but " + std::to_string(probs_.size()) +
                       " probabilities");
  }
  if (!valid_positive(noise_.sigma0_sq) || !valid_positive(noise_.sigma1_sq) ||
      !valid_positive(noise_.sigma2_sq)) {
    throw InvalidInput("noise variances must be positive and finite");
  }
  if (!valid_positive(budgets_.user1) || !valid_positive(budgets_.user2)) {
    throw InvalidInput("power budgets must be positive and finite");
  }
  for (const auto& s : states_) {
    if (!valid_gain(s.h10) || !valid_gain(s.h20) || !valid_gain(s.h12) ||
        !valid_gain(s.h21)) {
      throw InvalidInput("state " + std::to_string(s.index) +
                         " has a negative or non-finite gain");
    }
  }
  for (double p : probs_) {
    if (!valid_positive(p)) throw InvalidInput("probabilities must be > 0");
  }
  if (std::abs(compensated_sum(probs_) - 1.0) > 1e-12) {
    throw InvalidInput("probabilities must sum to 1");
  }
  gains_.reserve(states_.size());
  for (const auto& s : states_) gains_.push_back(effective_gains(s, noise_));
}

double Ensemble::expectation(std::span<const double> per_state_values) const {
  if (per_state_values.size() != probs_.size()) {
    throw InvalidInput("expectation over " +
                       std::to_string(per_state_values.size()) +
                       " values on an ensemble of " +
                       std::to_string(probs_.size()) + " states");
  }
  double sum = 0.0;
  for (std::size_t k = 0; k < probs_.size(); ++k) {
    sum += probs_[k] * per_state_values[k];
  }
  return sum;
}

Ensemble build_uniform_grid(std::span<const double> direct_values,
                            std::span<const double> inter_values,
                            const NoiseVariances& noise,
                            const PowerBudgets& budgets, bool tie_inter_links) {
  require_gain_list(direct_values, "direct_values");
  require_gain_list(inter_values, "inter_values");

  std::vector<ChannelState> states;
  for (double h10 : direct_values) {
    for (double h20 : direct_values) {
      for (std::size_t i = 0; i < inter_values.size(); ++i) {
        if (tie_inter_links) {
          states.push_back({states.size(), h10, h20, inter_values[i],
                            inter_values[i]});
          continue;
        }
        for (double h21 : inter_values) {
          states.push_back({states.size(), h10, h20, inter_values[i], h21});
        }
      }
    }
  }
  std::vector<double> probs(states.size(),
                            1.0 / static_cast<double>(states.size()));
  return Ensemble(std::move(states), std::move(probs), noise, budgets);
}

Ensemble build_rayleigh_mc(double mean_direct, double mean_inter,
                           std::size_t n_samples, std::uint64_t seed,
                           const NoiseVariances& noise,
                           const PowerBudgets& budgets, bool tie_inter_links) {
  if (!valid_positive(mean_direct) || !valid_positive(mean_inter)) {
    throw InvalidInput("Rayleigh mean gains must be positive");
  }
  if (n_samples == 0) throw InvalidInput("n_samples must be at least 1");

  SplitMix64 rng(seed);
  std::vector<ChannelState> states;
  states.reserve(n_samples);
  for (std::size_t k = 0; k < n_samples; ++k) {
    ChannelState s;
    s.index = k;
    s.h10 = rng.exponential(mean_direct);
    s.h20 = rng.exponential(mean_direct);
    s.h12 = rng.exponential(mean_inter);
    s.h21 = tie_inter_links ? s.h12 : rng.exponential(mean_inter);
    states.push_back(s);
  }
  std::vector<double> probs(n_samples, 1.0 / static_cast<double>(n_samples));
  return Ensemble(std::move(states), std::move(probs), noise, budgets);
}

std::uint64_t SplitMix64::next() {
  std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double SplitMix64::uniform_open() {
  // (k + 0.5) / 2^53 for k in [0, 2^53): never 0, never 1.
  return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
}

double SplitMix64::exponential(double mean) {
  return -mean * std::log(uniform_open());
}

void write_ensemble_csv(std::ostream& out, const Ensemble& ensemble) {
  out << "index,h10,h20,h12,h21,prob\n";
  for (std::size_t k = 0; k < ensemble.size(); ++k) {
    const auto& s = ensemble.states()[k];
    out << s.index << ',' << format_number(s.h10) << ','
        << format_number(s.h20) << ',' << format_number(s.h12) << ','
        << format_number(s.h21) << ',' << format_number(ensemble.probs()[k])
        << '\n';
  }
}

}  // namespace coopmac
