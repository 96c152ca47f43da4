#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <vector>

namespace coopmac {

/// Raised whenever an argument violates an operation's precondition.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Power gains of the four links for one fading realization.
///
/// h10 and h20 are the direct links to the receiver, h12 is the link from
/// user 1 to user 2 and h21 the link from user 2 to user 1.
struct ChannelState {
  std::size_t index = 0;
  double h10 = 0.0;
  double h20 = 0.0;
  double h12 = 0.0;
  double h21 = 0.0;
};

/// Noise powers at the receiver (0) and the two transmitters (1, 2).
struct NoiseVariances {
  double sigma0_sq = 1.0;
  double sigma1_sq = 1.0;
  double sigma2_sq = 1.0;
};

/// Channel gains per unit noise power at the receiving end of each link.
struct EffectiveGains {
  double s10 = 0.0;
  double s20 = 0.0;
  double s12 = 0.0;
  double s21 = 0.0;
};

/// Average-power limits of the two users.
struct PowerBudgets {
  double user1 = 1.0;
  double user2 = 1.0;
};

/// s_ij = h_ij / sigma_j^2, where j is the receiving node of link ij.
EffectiveGains effective_gains(const ChannelState& state,
                               const NoiseVariances& noise);

/**
 * A finite, probability-weighted set of channel states.
 *
 * Immutable after construction. The constructor enforces the invariants:
 * non-negative finite gains, positive finite noise powers and budgets,
 * positive probabilities summing to one within 1e-12.
 */
class Ensemble {
 public:
  Ensemble(std::vector<ChannelState> states, std::vector<double> probs,
           NoiseVariances noise, PowerBudgets budgets);

  std::size_t size() const { return states_.size(); }
  const std::vector<ChannelState>& states() const { return states_; }
  const std::vector<double>& probs() const { return probs_; }
  const std::vector<EffectiveGains>& gains() const { return gains_; }
  const NoiseVariances& noise() const { return noise_; }
  const PowerBudgets& budgets() const { return budgets_; }
  double budget(int user) const {
    return user == 0 ? budgets_.user1 : budgets_.user2;
  }

  /// Sum over states of prob * value, accumulated in state order.
  double expectation(std::span<const double> per_state_values) const;

 private:
  std::vector<ChannelState> states_;
  std::vector<double> probs_;
  std::vector<EffectiveGains> gains_;
  NoiseVariances noise_;
  PowerBudgets budgets_;
};

/**
 * Product ensemble over independent draws of the four links: h10 and h20
 * uniform on direct_values, h12 and h21 uniform on inter_values.
 *
 * With tie_inter_links the two inter-user links share one draw (h12 == h21),
 * giving |direct|^2 * |inter| states instead of |direct|^2 * |inter|^2.
 * State order is h10 outermost, then h20, h12, h21.
 */
Ensemble build_uniform_grid(std::span<const double> direct_values,
                            std::span<const double> inter_values,
                            const NoiseVariances& noise,
                            const PowerBudgets& budgets,
                            bool tie_inter_links = false);

/**
 * Monte-Carlo discretization of Rayleigh fading: n_samples equiprobable
 * states with exponentially distributed power gains. Per sample the draws
 * are taken in the order h10, h20, h12, h21 (h21 is skipped and copied from
 * h12 when tie_inter_links is set).
 */
Ensemble build_rayleigh_mc(double mean_direct, double mean_inter,
                           std::size_t n_samples, std::uint64_t seed,
                           const NoiseVariances& noise,
                           const PowerBudgets& budgets,
                           bool tie_inter_links = false);

/**
 * SplitMix64 (Steele, Lea and Flood). Counter-based: the k-th output is a
 * fixed bijective mix of seed + k * 0x9E3779B97F4A7C15, so the stream is
 * identical on every platform.
 */
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next();

  /// Uniform on the open interval (0, 1) with 53-bit resolution.
  double uniform_open();

  /// Exponential with the given mean via inverse CDF, -mean * ln(u).
  double exponential(double mean);

 private:
  std::uint64_t state_;
};

/// CSV with header `index,h10,h20,h12,h21,prob`.
void write_ensemble_csv(std::ostream& out, const Ensemble& ensemble);

}  // namespace coopmac
