#pragma once

// Exhaustive deterministic-policy enumeration. Test-only ground truth that
// shares no code with the library solver.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "regretlab/mdp.hpp"

namespace testsupport {

inline constexpr long kMaxPolicies = 4096;

/// Number of deterministic non-stationary policies, or -1 above the cap.
inline long policy_count(const regretlab::TabularMdp& mdp) {
  long count = 1;
  for (int i = 0; i < mdp.H() * mdp.S(); ++i) {
    count *= mdp.A();
    if (count > kMaxPolicies) return -1;
  }
  return count;
}

/// Decodes policy number `index` into a flat [h*S + s] action table.
inline std::vector<int> decode_policy(long index, int H, int S, int A) {
  std::vector<int> actions(static_cast<std::size_t>(H * S));
  for (auto& act : actions) {
    act = static_cast<int>(index % A);
    index /= A;
  }
  return actions;
}

/// Expected return from (h, s) taking `first` and following `actions` after,
/// by direct recursion over successor states.
inline double return_from(const regretlab::TabularMdp& mdp, const std::vector<int>& actions, int h, int s, int first) {
  double total = mdp.reward(h, s, first);
  if (h + 1 == mdp.H()) return total;
  const auto row = mdp.row(h, s, first);
  for (int next = 0; next < mdp.S(); ++next) {
    if (row[next] == 0.0) continue;
    const int act = actions[static_cast<std::size_t>((h + 1) * mdp.S() + next)];
    total += row[next] * return_from(mdp, actions, h + 1, next, act);
  }
  return total;
}

/// Optimal Q as the max over all deterministic policies of Q^pi, laid out [h][s][a].
inline std::vector<double> brute_force_q(const regretlab::TabularMdp& mdp) {
  const long count = policy_count(mdp);
  if (count < 0) throw std::invalid_argument("brute_force_q: too many policies");
  const int H = mdp.H(), S = mdp.S(), A = mdp.A();
  std::vector<double> best(static_cast<std::size_t>(H * S * A), -1.0);
  for (long p = 0; p < count; ++p) {
    const auto actions = decode_policy(p, H, S, A);
    for (int h = 0; h < H; ++h) {
      for (int s = 0; s < S; ++s) {
        for (int a = 0; a < A; ++a) {
          auto& slot = best[static_cast<std::size_t>((h * S + s) * A + a)];
          slot = std::max(slot, return_from(mdp, actions, h, s, a));
        }
      }
    }
  }
  return best;
}

/// V*_1(s) as the max over all deterministic policies.
inline std::vector<double> brute_force_v1(const regretlab::TabularMdp& mdp) {
  const long count = policy_count(mdp);
  if (count < 0) throw std::invalid_argument("brute_force_v1: too many policies");
  std::vector<double> best(static_cast<std::size_t>(mdp.S()), -1.0);
  for (long p = 0; p < count; ++p) {
    const auto actions = decode_policy(p, mdp.H(), mdp.S(), mdp.A());
    for (int s = 0; s < mdp.S(); ++s) {
      best[static_cast<std::size_t>(s)] =
          std::max(best[static_cast<std::size_t>(s)], return_from(mdp, actions, 0, s, actions[static_cast<std::size_t>(s)]));
    }
  }
  return best;
}

/// Builds an MDP from nested initializer data: rewards[h][s][a], next[h][s][a]
/// is a deterministic successor.
inline regretlab::TabularMdp deterministic_mdp(int H, int S, int A, const std::vector<double>& rewards,
                                               const std::vector<int>& next) {
  std::vector<double> p(static_cast<std::size_t>(H * S * A * S), 0.0);
  for (std::size_t i = 0; i < next.size(); ++i) p[i * static_cast<std::size_t>(S) + static_cast<std::size_t>(next[i])] = 1.0;
  return regretlab::TabularMdp(H, S, A, rewards, p);
}

}  // namespace testsupport
