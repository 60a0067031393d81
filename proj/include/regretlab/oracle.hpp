#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "regretlab/mdp.hpp"
#include "regretlab/tables.hpp"

namespace regretlab {

/// Gaps at or below this are treated as zero when classifying optimal actions.
inline constexpr double kZeroGapTolerance = 1e-9;

/// Q* and V* of a TabularMdp. `v` has H+1 levels; level H is identically zero.
struct OptimalSolution {
  QTable q;
  VTable v;

  const Dims& dims() const { return q.dims(); }
  /// Greedy policy w.r.t. Q*, ties to the lowest action index.
  Policy greedy_policy() const;
};

/// Backward induction on the Bellman optimality equation.
OptimalSolution solve_optimal(const TabularMdp& mdp);

/// Exact V^pi for a deterministic policy; H+1 levels with terminal zero.
VTable evaluate_policy(const TabularMdp& mdp, const Policy& policy);

/// V^pi_1(s1) only; skips the tables the caller does not need. Same arithmetic
/// as evaluate_policy.
double evaluate_policy_at(const TabularMdp& mdp, const Policy& policy, int s1, std::vector<double>& scratch);

/// (V*_1 - V^pi_1)(s1), clamped to 0 when the difference is round-off negative.
double regret_increment(const OptimalSolution& opt, const VTable& v_pi, int s1);
double regret_increment(double v_star, double v_pi);

/// Triple (s, a, h), 0-based.
struct StateActionStep {
  int s = 0;
  int a = 0;
  int h = 0;
  friend bool operator==(const StateActionStep&, const StateActionStep&) = default;
  friend auto operator<=>(const StateActionStep&, const StateActionStep&) = default;
};

/**
 * Suboptimality gap structure. A missing minimum (std::nullopt) stands for
 * "no positive gap", the infinite minimum gap.
 */
struct GapProfile {
  QTable gaps;
  std::vector<std::optional<double>> delta_min_h;
  std::optional<double> delta_min;
  /// Optimal (s, a) pairs per step.
  std::vector<std::vector<std::pair<int, int>>> z_opt_h;
  std::vector<StateActionStep> z_opt;
  /// Optimal actions per (h, s): z_opt_h_s[h][s].
  std::vector<std::vector<std::vector<int>>> z_opt_h_s;
  std::vector<StateActionStep> z_mul;

  const Dims& dims() const { return gaps.dims(); }
};

/// Classifies an arbitrary nonnegative gap table.
GapProfile make_gap_profile(const QTable& gaps);

GapProfile compute_gap_profile(const OptimalSolution& opt);

/**
 * Bracketed gap-dependent regret expressions, evaluated literally with the
 * natural log and without hidden constants. Terms with 1/Delta_min vanish when
 * there is no positive gap.
 */
struct BoundReport {
  // Components shared by the upper bounds.
  double gap_sum_component = 0.0;     ///< sum over positive gaps of H^5 ln(SAT) / Delta_h(s,a)
  double z_opt_step_component = 0.0;  ///< sum_h H^3 (sum_{t>h} sqrt|Z_opt,t|)^2 ln(SAT) / Delta_min,h
  double z_opt_component = 0.0;       ///< H^6 |Z_opt| ln(SAT) / Delta_min
  double z_mul_component = 0.0;       ///< H^6 |Z_mul| ln(SAT) / Delta_min
  double inverse_gap_sum = 0.0;       ///< sum over positive gaps of 1 / Delta_h(s,a)

  double fine_grained_term = 0.0;
  double weak_term = 0.0;
  double amb_term = 0.0;
  double lower_ucb_term = 0.0;
  double lower_zmul_term = 0.0;
};

BoundReport compute_bound_terms(const GapProfile& profile, int H, int S, int A, double T);

/// Per-step decided states and their designated actions: action[h][s] is the
/// designated action, or -1 when s is undecided at step h.
struct DecidedSets {
  std::vector<std::vector<int>> action;

  static DecidedSets none(int H, int S);
  static DecidedSets all(const OptimalSolution& opt);
  bool decided(int h, int s) const { return action[static_cast<std::size_t>(h)][static_cast<std::size_t>(s)] >= 0; }
};

class DecidedActionNotOptimal : public std::invalid_argument {
 public:
  DecidedActionNotOptimal(int h, int s, int a, double gap);
  int h, s, a;
  double gap;
};

struct Decomposition {
  QTable decided;    ///< expected rewards collected through decided states
  QTable undecided;  ///< expected V* at the first undecided step
};

/// Splits Q* into decided and undecided parts by backward DP. Throws
/// DecidedActionNotOptimal when a designated action has a positive gap.
Decomposition decided_decomposition(const TabularMdp& mdp, const OptimalSolution& opt, const DecidedSets& decided);

/// Largest |Q_d + Q_ud - Q*| over all entries.
double decomposition_residual(const Decomposition& dec, const OptimalSolution& opt);

/// Largest |Q*_h(s,a) - r_h(s,a) - P V*_{h+1}| and |V*_h(s) - max_a Q*_h(s,a)|.
double bellman_residual(const TabularMdp& mdp, const OptimalSolution& opt);

nlohmann::json gap_profile_to_json(const GapProfile& profile);
nlohmann::json bound_report_to_json(const BoundReport& report);
nlohmann::json optimal_solution_to_json(const OptimalSolution& opt);
/// CSV with header `h,s,a,value`, 0-based indices.
std::string qtable_to_csv(const QTable& table);

}  // namespace regretlab
