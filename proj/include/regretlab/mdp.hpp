#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "regretlab/random.hpp"
#include "regretlab/tables.hpp"

namespace regretlab {

/**
 * Episodic tabular MDP with deterministic rewards in [0,1] and step-dependent
 * transition kernels.
 *
 * Rewards are stored flat in [h][s][a] order and transitions in [h][s][a][s']
 * order. The object is immutable once constructed. Construction only checks
 * that the shape parameters are positive; content invariants are reported by
 * validate_mdp() and enforced by require_valid().
 */
class TabularMdp {
 public:
  TabularMdp() = default;
  TabularMdp(int H, int S, int A, std::vector<double> rewards, std::vector<double> transitions);

  int H() const { return dims_.H; }
  int S() const { return dims_.S; }
  int A() const { return dims_.A; }
  const Dims& dims() const { return dims_; }

  double reward(int h, int s, int a) const { return rewards_[reward_index(h, s, a)]; }
  std::span<const double> row(int h, int s, int a) const {
    return {transitions_.data() + reward_index(h, s, a) * static_cast<std::size_t>(dims_.S),
            static_cast<std::size_t>(dims_.S)};
  }

  const std::vector<double>& rewards() const { return rewards_; }
  const std::vector<double>& transitions() const { return transitions_; }

  friend bool operator==(const TabularMdp&, const TabularMdp&) = default;

 private:
  std::size_t reward_index(int h, int s, int a) const {
    return (static_cast<std::size_t>(h) * static_cast<std::size_t>(dims_.S) + static_cast<std::size_t>(s)) *
               static_cast<std::size_t>(dims_.A) +
           static_cast<std::size_t>(a);
  }

  Dims dims_{};
  std::vector<double> rewards_;
  std::vector<double> transitions_;
};

/// One (state, action, reward) triple of an episode.
struct Step {
  int state = 0;
  int action = 0;
  double reward = 0.0;

  friend bool operator==(const Step&, const Step&) = default;
};

struct Trajectory {
  int initial_state = 0;
  std::vector<Step> steps;

  friend bool operator==(const Trajectory&, const Trajectory&) = default;
};

struct ValidationError {
  enum class Kind { Dimension, RewardRange, NegativeProbability, RowSum };
  Kind kind;
  int h = -1;
  int s = -1;
  int a = -1;
  std::string message;
};

/// Every invariant violation of `mdp`, with indices. Empty means valid.
std::vector<ValidationError> validate_mdp(const TabularMdp& mdp);

class InvalidMdp : public std::invalid_argument {
 public:
  explicit InvalidMdp(std::vector<ValidationError> errors);
  const std::vector<ValidationError>& errors() const { return errors_; }

 private:
  std::vector<ValidationError> errors_;
};

/// Throws InvalidMdp listing every violation.
void require_valid(const TabularMdp& mdp);

/// Rewards i.i.d. U[0,1]; each transition row uniform on the simplex, drawn as
/// normalized i.i.d. standard exponentials.
TabularMdp generate_random_mdp(int H, int S, int A, RandomSource& source);

int sample_initial_state(int S, RandomSource& source);

/// Inverse-CDF draw from P_h(. | s, a). Throws std::out_of_range on bad indices.
int sample_next_state(const TabularMdp& mdp, int h, int s, int a, RandomSource& source);

/// Plays `policy` for H steps from `s1`.
Trajectory rollout(const TabularMdp& mdp, const Policy& policy, int s1, RandomSource& source);

nlohmann::json mdp_to_json(const TabularMdp& mdp);
/// Parses {H,S,A,rewards,transitions} and validates the result.
TabularMdp mdp_from_json(const nlohmann::json& doc);

TabularMdp load_mdp(const std::string& path);
void save_mdp(const TabularMdp& mdp, const std::string& path);

}  // namespace regretlab
