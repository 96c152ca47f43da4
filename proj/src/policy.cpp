#include "coopmac/policy.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "coopmac/format.hpp"

namespace coopmac {

std::string_view component_name(Component c) {
  switch (c) {
    case Component::P10: return "p10";
    case Component::P12: return "p12";
    case Component::PU1: return "pU1";
    case Component::P20: return "p20";
    case Component::P21: return "p21";
    case Component::PU2: return "pU2";
  }
  return "?";
}

int ComponentMask::count(int user) const {
  int n = 0;
  for (Component c : kAllComponents) {
    if (owner(c) == user && contains(c)) ++n;
  }
  return n;
}

ChannelCase classify_case(const EffectiveGains& s) {
  const bool relay1 = s.s12 > s.s10;
  const bool relay2 = s.s21 > s.s20;
  if (relay1 && relay2) return ChannelCase::One;
  if (relay1) return ChannelCase::Two;
  if (relay2) return ChannelCase::Three;
  return ChannelCase::Four;
}

ComponentMask active_support(ChannelCase c) {
  using enum Component;
  switch (c) {
    case ChannelCase::One: return {P12, PU1, P21, PU2};
    case ChannelCase::Two: return {P12, PU1, P20, PU2};
    case ChannelCase::Three: return {P10, PU1, P21, PU2};
    case ChannelCase::Four: return {P10, PU1, P20, PU2};
  }
  return {};
}

PowerPolicy zero_policy(const Ensemble& ensemble) {
  return PowerPolicy{std::vector<PowerVector>(ensemble.size())};
}

void require_aligned(const Ensemble& ensemble, const PowerPolicy& policy) {
  if (policy.size() != ensemble.size()) {
    throw InvalidInput("policy has " + std::to_string(policy.size()) +
                       " vectors but the ensemble has " +
                       std::to_string(ensemble.size()) + " states");
  }
}

UserPowers average_powers(const Ensemble& ensemble, const PowerPolicy& policy) {
  require_aligned(ensemble, policy);
  UserPowers out;
  const auto& probs = ensemble.probs();
  for (std::size_t k = 0; k < policy.size(); ++k) {
    out.user1 += probs[k] * policy.vectors[k].user_total(0);
    out.user2 += probs[k] * policy.vectors[k].user_total(1);
  }
  return out;
}

bool is_feasible(const Ensemble& ensemble, const PowerPolicy& policy) {
  if (policy.size() != ensemble.size()) return false;
  for (const auto& v : policy.vectors) {
    for (double x : v.p) {
      if (!std::isfinite(x) || x < 0.0) return false;
    }
  }
  const auto avg = average_powers(ensemble, policy);
  return avg.user1 <= ensemble.budgets().user1 + kBudgetTolerance &&
         avg.user2 <= ensemble.budgets().user2 + kBudgetTolerance;
}

bool is_reduced(const Ensemble& ensemble, const PowerPolicy& policy) {
  if (policy.size() != ensemble.size()) return false;
  for (std::size_t k = 0; k < policy.size(); ++k) {
    const auto mask = active_support(classify_case(ensemble.gains()[k]));
    for (Component c : kAllComponents) {
      if (!mask.contains(c) && policy.vectors[k][c] != 0.0) return false;
    }
  }
  return true;
}

void write_policy_csv(std::ostream& out, const PowerPolicy& policy) {
  out << "index,p10,p12,pU1,p20,p21,pU2\n";
  for (std::size_t k = 0; k < policy.size(); ++k) {
    out << k;
    for (double x : policy.vectors[k].p) out << ',' << format_number(x);
    out << '\n';
  }
}

PowerPolicy read_policy_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "index,p10,p12,pU1,p20,p21,pU2") {
    throw InvalidInput("policy CSV: missing or unexpected header");
  }
  PowerPolicy policy;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string token;
    std::getline(fields, token, ',');
    if (token != std::to_string(policy.size())) {
      throw InvalidInput("policy CSV row " + std::to_string(row) +
                         ": expected index " + std::to_string(policy.size()));
    }
    PowerVector v;
    for (double& x : v.p) {
      if (!std::getline(fields, token, ',')) {
        throw InvalidInput("policy CSV row " + std::to_string(row) +
                           ": expected 7 columns");
      }
      x = parse_number(token);
      if (x < 0.0) {
        throw InvalidInput("policy CSV row " + std::to_string(row) +
                           ": negative power");
      }
    }
    if (std::getline(fields, token, ',')) {
      throw InvalidInput("policy CSV row " + std::to_string(row) +
                         ": too many columns");
    }
    policy.vectors.push_back(v);
  }
  return policy;
}

}  // namespace coopmac
