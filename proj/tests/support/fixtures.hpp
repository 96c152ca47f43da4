#pragma once

#include <random>
#include <vector>

#include "coopmac/ensemble.hpp"
#include "coopmac/policy.hpp"
#include "oracle.hpp"

namespace fixtures {

inline coopmac::Ensemble ensemble_of(const std::vector<oracle::Link>& links,
                                     const std::vector<double>& probs,
                                     const oracle::Noise& n = {},
                                     coopmac::PowerBudgets budgets = {}) {
  std::vector<coopmac::ChannelState> states;
  for (std::size_t k = 0; k < links.size(); ++k) {
    states.push_back({k, links[k].h10, links[k].h20, links[k].h12, links[k].h21});
  }
  return coopmac::Ensemble(std::move(states), probs, {n.n0, n.n1, n.n2}, budgets);
}

inline std::vector<oracle::Link> links_of(const coopmac::Ensemble& e) {
  std::vector<oracle::Link> out;
  for (const auto& s : e.states()) out.push_back({s.h10, s.h20, s.h12, s.h21});
  return out;
}

inline oracle::Noise noise_of(const coopmac::Ensemble& e) {
  return {e.noise().sigma0_sq, e.noise().sigma1_sq, e.noise().sigma2_sq};
}

inline std::vector<oracle::Powers> powers_of(const coopmac::PowerPolicy& p) {
  std::vector<oracle::Powers> out;
  for (const auto& v : p.vectors) out.push_back(v.p);
  return out;
}

inline double oracle_value(const coopmac::Ensemble& e,
                           const coopmac::PowerPolicy& p, double mu1, double mu2) {
  return oracle::weighted(links_of(e), e.probs(), noise_of(e), powers_of(p), mu1, mu2);
}

/// Random ensemble of n states with gains on [lo, hi] and random probabilities.
inline coopmac::Ensemble random_ensemble(std::mt19937_64& rng, std::size_t n,
                                         double lo = 0.05, double hi = 1.0) {
  std::uniform_real_distribution<double> g(lo, hi);
  std::uniform_real_distribution<double> w(0.2, 1.0);
  std::vector<oracle::Link> links;
  std::vector<double> probs;
  double total = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    links.push_back({g(rng), g(rng), g(rng), g(rng)});
    probs.push_back(w(rng));
    total += probs.back();
  }
  for (double& p : probs) p /= total;
  // Renormalizing can leave the sum a few ulps off one; push the residue
  // into the first state.
  double sum = 0.0;
  for (double p : probs) sum += p;
  probs[0] += 1.0 - sum;
  return ensemble_of(links, probs);
}

/// Feasible policy on the reduced support with random per-state powers and
/// the given fraction of each budget spent.
inline coopmac::PowerPolicy random_reduced_policy(std::mt19937_64& rng,
                                                  const coopmac::Ensemble& e,
                                                  double spend = 1.0) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  coopmac::PowerPolicy p = coopmac::zero_policy(e);
  std::array<double, 2> used{};
  for (std::size_t k = 0; k < e.size(); ++k) {
    const auto mask = coopmac::active_support(coopmac::classify_case(e.gains()[k]));
    for (coopmac::Component c : coopmac::kAllComponents) {
      if (mask.contains(c)) {
        p.vectors[k][c] = u(rng);
        used[coopmac::owner(c)] += e.probs()[k] * p.vectors[k][c];
      }
    }
  }
  for (auto& v : p.vectors) {
    for (coopmac::Component c : coopmac::kAllComponents) {
      const int user = coopmac::owner(c);
      if (used[user] > 0.0) v[c] *= spend * e.budget(user) / used[user];
    }
  }
  return p;
}

}  // namespace fixtures
