#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <string_view>
#include <vector>

#include "coopmac/ensemble.hpp"

namespace coopmac {

/// The six power components of one state, in the order
/// (p10, p12, pU1, p20, p21, pU2).
enum class Component : std::uint8_t { P10, P12, PU1, P20, P21, PU2 };

inline constexpr std::size_t kNumComponents = 6;

inline constexpr std::array<Component, kNumComponents> kAllComponents = {
    Component::P10, Component::P12, Component::PU1,
    Component::P20, Component::P21, Component::PU2};

/// 0 for user 1's components, 1 for user 2's.
constexpr int owner(Component c) {
  return static_cast<std::size_t>(c) < 3 ? 0 : 1;
}

std::string_view component_name(Component c);

/// Powers of the fresh-data (p_i0), cooperation-message (p_ij) and common
/// (pU_i) signals of both users in one state.
struct PowerVector {
  std::array<double, kNumComponents> p{};

  double& operator[](Component c) { return p[static_cast<std::size_t>(c)]; }
  double operator[](Component c) const {
    return p[static_cast<std::size_t>(c)];
  }

  double p10() const { return p[0]; }
  double p12() const { return p[1]; }
  double pU1() const { return p[2]; }
  double p20() const { return p[3]; }
  double p21() const { return p[4]; }
  double pU2() const { return p[5]; }

  double user_total(int user) const {
    return user == 0 ? p[0] + p[1] + p[2] : p[3] + p[4] + p[5];
  }

  friend bool operator==(const PowerVector&, const PowerVector&) = default;
};

/// Set of components a state is allowed to use.
class ComponentMask {
 public:
  constexpr ComponentMask() = default;
  constexpr ComponentMask(std::initializer_list<Component> components) {
    for (Component c : components) bits_ |= bit(c);
  }

  static constexpr ComponentMask all() {
    ComponentMask m;
    m.bits_ = 0x3F;
    return m;
  }

  constexpr bool contains(Component c) const { return (bits_ & bit(c)) != 0; }
  constexpr std::uint8_t bits() const { return bits_; }
  int count(int user) const;

  constexpr ComponentMask operator|(ComponentMask o) const {
    ComponentMask m;
    m.bits_ = bits_ | o.bits_;
    return m;
  }
  friend constexpr bool operator==(ComponentMask, ComponentMask) = default;

 private:
  static constexpr std::uint8_t bit(Component c) {
    return static_cast<std::uint8_t>(1u << static_cast<unsigned>(c));
  }
  std::uint8_t bits_ = 0;
};

/// The four channel regimes obtained by comparing each user's cooperation
/// link against its direct link.
enum class ChannelCase : std::uint8_t { One = 1, Two = 2, Three = 3, Four = 4 };

/**
 * Case 1: s12 > s10 and s21 > s20. Case 2: s12 > s10 and s21 <= s20.
 * Case 3: s12 <= s10 and s21 > s20. Case 4: otherwise.
 */
ChannelCase classify_case(const EffectiveGains& gains);

/**
 * Components that can be nonzero at a sum-rate optimum in the given case.
 * Case 4 is pinned to the no-relaying operating point p12 = p21 = 0.
 */
ComponentMask active_support(ChannelCase c);

/// Per-state power vectors aligned with an ensemble's state order.
struct PowerPolicy {
  std::vector<PowerVector> vectors;

  std::size_t size() const { return vectors.size(); }
  friend bool operator==(const PowerPolicy&, const PowerPolicy&) = default;
};

struct UserPowers {
  double user1 = 0.0;
  double user2 = 0.0;
};

PowerPolicy zero_policy(const Ensemble& ensemble);

/// (E[p10 + p12 + pU1], E[p20 + p21 + pU2]). Throws InvalidInput when the
/// policy is not aligned with the ensemble.
UserPowers average_powers(const Ensemble& ensemble, const PowerPolicy& policy);

/// Throws InvalidInput unless policy has one vector per ensemble state.
void require_aligned(const Ensemble& ensemble, const PowerPolicy& policy);

inline constexpr double kBudgetTolerance = 1e-9;

/// Non-negative, finite, and within both budgets up to kBudgetTolerance.
bool is_feasible(const Ensemble& ensemble, const PowerPolicy& policy);

/// True when every component outside its state's active support is zero.
bool is_reduced(const Ensemble& ensemble, const PowerPolicy& policy);

/// CSV with header `index,p10,p12,pU1,p20,p21,pU2`.
void write_policy_csv(std::ostream& out, const PowerPolicy& policy);

/// Parses the format written by write_policy_csv. Rows must carry
/// consecutive indices starting at 0.
PowerPolicy read_policy_csv(std::istream& in);

}  // namespace coopmac
