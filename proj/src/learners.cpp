#include "regretlab/learners.hpp"

#include <algorithm>
#include <string>

#include "regretlab/hash.hpp"

namespace regretlab {

ActionSets::ActionSets(Dims dims)
    : dims_(dims),
      active_(static_cast<std::size_t>(dims.H) * static_cast<std::size_t>(dims.S) * static_cast<std::size_t>(dims.A), 1),
      sizes_(static_cast<std::size_t>(dims.H) * static_cast<std::size_t>(dims.S), dims.A) {}

int ActionSets::first(int h, int s) const {
  for (int a = 0; a < dims_.A; ++a) {
    if (contains(h, s, a)) return a;
  }
  throw InvariantBreach("empty candidate set at (h=" + std::to_string(h) + ", s=" + std::to_string(s) + ")");
}

int ActionSets::widest(int h, int s, const QTable& upper, const QTable& lower) const {
  if (size(h, s) == 1) return first(h, s);
  int best = -1;
  double best_width = 0.0;
  for (int a = 0; a < dims_.A; ++a) {
    if (!contains(h, s, a)) continue;
    const double width = upper(h, s, a) - lower(h, s, a);
    if (best < 0 || width > best_width) {
      best = a;
      best_width = width;
    }
  }
  if (best < 0) {
    throw InvariantBreach("empty candidate set at (h=" + std::to_string(h) + ", s=" + std::to_string(s) + ")");
  }
  return best;
}

double ActionSets::max_over(int h, int s, const QTable& table) const {
  double best = 0.0;
  bool any = false;
  for (int a = 0; a < dims_.A; ++a) {
    if (!contains(h, s, a)) continue;
    best = any ? std::max(best, table(h, s, a)) : table(h, s, a);
    any = true;
  }
  if (!any) {
    throw InvariantBreach("empty candidate set at (h=" + std::to_string(h) + ", s=" + std::to_string(s) + ")");
  }
  return best;
}

void ActionSets::eliminate_below(int h, int s, const QTable& upper, double threshold) {
  const std::size_t base = index(h, s) * static_cast<std::size_t>(dims_.A);
  int kept = 0;
  for (int a = 0; a < dims_.A; ++a) {
    auto& flag = active_[base + static_cast<std::size_t>(a)];
    if (flag && !(upper(h, s, a) >= threshold)) flag = 0;
    kept += flag;
  }
  sizes_[index(h, s)] = kept;
  if (kept == 0) {
    throw InvariantBreach("candidate set emptied at (h=" + std::to_string(h) + ", s=" + std::to_string(s) +
                          "): every upper Q is below the lower V " + std::to_string(threshold));
  }
}

EpisodeResult FixedPolicyLearner::run_episode(const TabularMdp& mdp, int s1, RandomSource& transitions) {
  ++episodes_;
  return {rollout(mdp, policy_, s1, transitions), policy_};
}

std::uint64_t FixedPolicyLearner::digest() const {
  Fnv1a h;
  h.update_values(policy_.actions());
  return h.value();
}

std::unique_ptr<Learner> make_learner(Algorithm algo, Dims dims, const LearnerConfig& config, std::int64_t episodes,
                                      const OptimalSolution* opt) {
  config.validate();
  if (episodes < 1) {
    throw std::invalid_argument("make_learner: episode count must be >= 1");
  }
  const double T = static_cast<double>(episodes) * dims.H;
  const double iota = config.iota.resolve(dims.S, dims.A, T);
  switch (algo) {
    case Algorithm::Ucb: return std::make_unique<UcbHoeffding>(dims, iota, config.bonus_c);
    case Algorithm::Ulcb: return std::make_unique<UlcbHoeffding>(dims, iota, config.bonus_c);
    case Algorithm::Amb: return std::make_unique<AmbLearner>(dims, AmbLearner::Variant::Original, iota, config.bonus_c);
    case Algorithm::RefinedAmb:
      return std::make_unique<AmbLearner>(dims, AmbLearner::Variant::Refined, iota, config.bonus_c);
    case Algorithm::Oracle:
      if (opt == nullptr) {
        throw std::invalid_argument("make_learner: the oracle learner needs the optimal solution");
      }
      return std::make_unique<FixedPolicyLearner>(opt->greedy_policy(), dims);
  }
  throw std::invalid_argument("make_learner: unknown algorithm");
}

BoundViolations check_confidence_bounds(const Learner& learner, const OptimalSolution& opt) {
  BoundViolations out;
  const auto& star = opt.q.values();
  if (const QTable* up = learner.upper_q()) {
    const auto& v = up->values();
    for (std::size_t i = 0; i < v.size(); ++i) out.upper += v[i] < star[i];
  }
  if (const QTable* lo = learner.lower_q()) {
    const auto& v = lo->values();
    for (std::size_t i = 0; i < v.size(); ++i) out.lower += v[i] > star[i];
  }
  return out;
}

}  // namespace regretlab
