#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "regretlab/mdp.hpp"
#include "regretlab/oracle.hpp"
#include "regretlab/random.hpp"
#include "regretlab/tables.hpp"

namespace regretlab {

enum class Algorithm : std::uint32_t {
  Ucb = 1,
  Ulcb = 2,
  Amb = 3,
  RefinedAmb = 4,
  Oracle = 5,  ///< debug learner that always plays pi*
};

/// Short id used on the command line and in output files: ucb, ulcb, amb, ramb, oracle.
std::string_view algorithm_id(Algorithm algo);
std::string_view algorithm_label(Algorithm algo);
Algorithm parse_algorithm(std::string_view id);

/// How iota is chosen: ln(2SAT/p) for a failure probability p, or a constant.
struct IotaMode {
  enum class Kind { Theoretical, Constant };
  Kind kind = Kind::Constant;
  double value = 1.0;  ///< p for Theoretical, iota itself for Constant

  static IotaMode theoretical(double p) { return {Kind::Theoretical, p}; }
  static IotaMode constant(double iota) { return {Kind::Constant, iota}; }

  double resolve(int S, int A, double T) const;
};

enum class TieBreak { LowestIndex };

struct LearnerConfig {
  IotaMode iota = IotaMode::constant(1.0);
  double bonus_c = 1.0;
  TieBreak tie_break = TieBreak::LowestIndex;

  /// Coefficients from the algorithm statements: c=2, or c=4 for original AMB.
  static LearnerConfig theoretical(Algorithm algo, double p = 0.01);
  /// Benchmark settings: iota=1 and c=1, or c=2 for original AMB.
  static LearnerConfig experimental(Algorithm algo);

  /// Throws std::invalid_argument unless c > 0 and, in theoretical mode, p in (0,1).
  void validate() const;
};

/// Step size (H+1)/(H+t), t >= 1.
double eta(int t, int H);

/// Effective weights eta_i^N = eta_i prod_{i<j<=N} (1 - eta_j), i = 1..N.
std::vector<double> eta_weights(int N, int H);

/// Hoeffding bonus c * sqrt(H^3 iota / n), n >= 1.
double bonus(int n, int H, double iota, double c);

/// One Q-update as seen by the audit stream. For single-step learners
/// partial_return is r and next_step is h+1.
struct AuditRecord {
  std::int64_t episode = 0;  ///< 1-based episode index
  int h = 0;
  int s = 0;
  int a = 0;
  int n = 0;                 ///< visit count after this visit
  double bonus = 0.0;
  double partial_return = 0.0;
  int next_step = 0;         ///< bootstrap step; H when bootstrapping from the terminal zero
  int next_state = -1;       ///< -1 at the terminal step
  double v_up_next = 0.0;    ///< upper V value used for bootstrapping
  double v_lo_next = 0.0;    ///< lower V value used for bootstrapping (0 for UCB-H)
  double q_up = 0.0;         ///< stored upper Q after the update
  double q_lo = 0.0;         ///< stored lower Q after the update (0 for UCB-H)
};

using AuditSink = std::function<void(const AuditRecord&)>;

nlohmann::json audit_record_to_json(const AuditRecord& rec);
AuditRecord audit_record_from_json(const nlohmann::json& doc);

/// What the learner did in one episode.
struct EpisodeResult {
  Trajectory trajectory;
  /// Deterministic action per (h, s) under the episode-start tables; the
  /// trajectory's actions agree with it at every visited (h, s).
  Policy policy;
};

/// Raised when a learner's internal invariant breaks (e.g. an empty candidate set).
class InvariantBreach : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/**
 * Episode-granular learner interface.
 *
 * The environment is passed in so the learner can draw transitions; learners
 * only read the reward of the pair they play and the sampled next state.
 */
class Learner {
 public:
  virtual ~Learner() = default;

  virtual Algorithm algorithm() const = 0;
  virtual const Dims& dims() const = 0;

  /// Policy the next episode will execute.
  virtual Policy current_policy() const = 0;

  virtual EpisodeResult run_episode(const TabularMdp& mdp, int s1, RandomSource& transitions) = 0;

  /// Upper / lower Q estimates, or nullptr when the learner keeps none.
  virtual const QTable* upper_q() const { return nullptr; }
  virtual const QTable* lower_q() const { return nullptr; }

  /// Hash over every table the learner owns.
  virtual std::uint64_t digest() const = 0;

  void set_audit_sink(AuditSink sink) { audit_ = std::move(sink); }
  std::int64_t episodes() const { return episodes_; }

 protected:
  void emit(const AuditRecord& rec) const {
    if (audit_) audit_(rec);
  }
  std::int64_t episodes_ = 0;

 private:
  AuditSink audit_;
};

/// Per-(h, s) candidate action sets.
class ActionSets {
 public:
  ActionSets() = default;
  explicit ActionSets(Dims dims);

  bool contains(int h, int s, int a) const { return active_[index(h, s) * static_cast<std::size_t>(dims_.A) + static_cast<std::size_t>(a)] != 0; }
  int size(int h, int s) const { return sizes_[index(h, s)]; }
  /// Lowest active action.
  int first(int h, int s) const;

  /// argmax over active actions of upper - lower, ties to the lowest index;
  /// the sole element when the set is a singleton.
  int widest(int h, int s, const QTable& upper, const QTable& lower) const;
  /// max over active actions of table(h, s, .).
  double max_over(int h, int s, const QTable& table) const;

  /// Keeps a in the set iff upper(h,s,a) >= threshold. Throws InvariantBreach if nothing survives.
  void eliminate_below(int h, int s, const QTable& upper, double threshold);

  const Dims& dims() const { return dims_; }
  const std::vector<std::uint8_t>& flags() const { return active_; }

 private:
  std::size_t index(int h, int s) const { return static_cast<std::size_t>(h) * static_cast<std::size_t>(dims_.S) + static_cast<std::size_t>(s); }

  Dims dims_{};
  std::vector<std::uint8_t> active_;
  std::vector<int> sizes_;
};

/// UCB-Hoeffding: greedy w.r.t. an optimistic Q with Hoeffding bonus.
class UcbHoeffding final : public Learner {
 public:
  UcbHoeffding(Dims dims, double iota, double c);

  Algorithm algorithm() const override { return Algorithm::Ucb; }
  const Dims& dims() const override { return dims_; }
  Policy current_policy() const override;
  EpisodeResult run_episode(const TabularMdp& mdp, int s1, RandomSource& transitions) override;
  const QTable* upper_q() const override { return &q_; }
  std::uint64_t digest() const override;

  const VTable& v() const { return v_; }
  int visits(int h, int s, int a) const { return n_[flat(h, s, a)]; }

 private:
  std::size_t flat(int h, int s, int a) const;
  int greedy(int h, int s) const;

  Dims dims_;
  double iota_;
  double c_;
  QTable q_;
  VTable v_;  ///< H+1 levels, last one zero
  std::vector<int> n_;
};

/// ULCB-Hoeffding: upper and lower Q with candidate-set elimination,
/// playing the widest confidence interval.
class UlcbHoeffding final : public Learner {
 public:
  UlcbHoeffding(Dims dims, double iota, double c);

  Algorithm algorithm() const override { return Algorithm::Ulcb; }
  const Dims& dims() const override { return dims_; }
  Policy current_policy() const override;
  EpisodeResult run_episode(const TabularMdp& mdp, int s1, RandomSource& transitions) override;
  const QTable* upper_q() const override { return &q_up_; }
  const QTable* lower_q() const override { return &q_lo_; }
  std::uint64_t digest() const override;

  const VTable& v_up() const { return v_up_; }
  const VTable& v_lo() const { return v_lo_; }
  const ActionSets& candidates() const { return sets_; }
  int visits(int h, int s, int a) const;

 private:
  Dims dims_;
  double iota_;
  double c_;
  QTable q_up_, q_lo_;
  VTable v_up_, v_lo_;
  std::vector<int> n_;
  ActionSets sets_;
};

/**
 * Adaptive multi-step bootstrap, in the original form (truncated Q updates)
 * or the refined form (untruncated Q, truncated V).
 */
class AmbLearner final : public Learner {
 public:
  enum class Variant { Original, Refined };

  AmbLearner(Dims dims, Variant variant, double iota, double c);

  Algorithm algorithm() const override { return variant_ == Variant::Original ? Algorithm::Amb : Algorithm::RefinedAmb; }
  const Dims& dims() const override { return dims_; }
  Policy current_policy() const override;
  EpisodeResult run_episode(const TabularMdp& mdp, int s1, RandomSource& transitions) override;
  const QTable* upper_q() const override { return &q_up_; }
  const QTable* lower_q() const override { return &q_lo_; }
  std::uint64_t digest() const override;

  Variant variant() const { return variant_; }
  const VTable& v_up() const { return v_up_; }
  const VTable& v_lo() const { return v_lo_; }
  const ActionSets& candidates() const { return sets_; }
  bool decided(int h, int s) const { return sets_.size(h, s) == 1; }
  int visits(int h, int s, int a) const;

  /// Overrides the bonus coefficient for subsequent updates.
  void set_bonus_coefficient(double c) { c_ = c; }

 private:
  Dims dims_;
  Variant variant_;
  double iota_;
  double c_;
  QTable q_up_, q_lo_;
  VTable v_up_, v_lo_;  ///< H+1 levels, last one zero
  std::vector<int> n_;
  ActionSets sets_;
};

/// Plays a fixed policy (normally pi*) and learns nothing.
class FixedPolicyLearner final : public Learner {
 public:
  explicit FixedPolicyLearner(Policy policy, Dims dims) : policy_(std::move(policy)), dims_(dims) {}

  Algorithm algorithm() const override { return Algorithm::Oracle; }
  const Dims& dims() const override { return dims_; }
  Policy current_policy() const override { return policy_; }
  EpisodeResult run_episode(const TabularMdp& mdp, int s1, RandomSource& transitions) override;
  std::uint64_t digest() const override;

 private:
  Policy policy_;
  Dims dims_;
};

/// Builds a learner for `algo`, resolving iota with T = K * H. Oracle needs `opt`.
std::unique_ptr<Learner> make_learner(Algorithm algo, Dims dims, const LearnerConfig& config, std::int64_t episodes,
                                      const OptimalSolution* opt = nullptr);

/// Counts of entries where upper < Q* or lower > Q*.
struct BoundViolations {
  std::int64_t upper = 0;
  std::int64_t lower = 0;
  std::int64_t total() const { return upper + lower; }
};

BoundViolations check_confidence_bounds(const Learner& learner, const OptimalSolution& opt);

/// Visit records per (h, s, a) collected from an audit stream.
class UpdateHistory {
 public:
  explicit UpdateHistory(Dims dims);

  void record(const AuditRecord& rec);
  AuditSink sink();

  const std::vector<AuditRecord>& at(int h, int s, int a) const;
  const Dims& dims() const { return dims_; }

 private:
  Dims dims_;
  std::vector<std::vector<AuditRecord>> entries_;
};

enum class Bound { Upper, Lower };

/// Rebuilds Q(h,s,a) as eta_0^N * init + sum_i eta_i^N (partial_return_i +
/// V_i +/- b_i) from the history and returns |rebuilt - stored|. Throws
/// std::invalid_argument when no history exists for the entry.
double audit_unrolled_q(const AmbLearner& learner, int h, int s, int a, const UpdateHistory& history,
                        Bound bound = Bound::Upper);

/// Max of audit_unrolled_q over every entry with history, both bounds.
double audit_all_entries(const AmbLearner& learner, const UpdateHistory& history);

}  // namespace regretlab
