#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "regretlab/learners.hpp"
#include "regretlab/mdp.hpp"

namespace regretlab {

struct Scale {
  int H = 0;
  int S = 0;
  int A = 0;
  std::int64_t K = 0;
};

/// Benchmark scales s1..s4 plus the CI-sized s1-quick (s1 with K = 10^4).
std::optional<Scale> preset_scale(std::string_view name);

struct AlgorithmSpec {
  Algorithm algorithm;
  LearnerConfig config;
};

struct ExperimentConfig {
  std::string preset;  ///< informational; empty for explicit shapes
  Scale scale;
  std::uint64_t mdp_seed = 0;
  int seeds = 10;
  std::vector<AlgorithmSpec> algorithms;
  /// Episode indices at which cumulative regret is recorded. Empty means
  /// log_checkpoints(K, checkpoint_count).
  std::vector<std::int64_t> checkpoints;
  int checkpoint_count = 1000;
  /// Fixed initial-state sequence (cycled) instead of uniform sampling.
  std::vector<int> initial_states;
  /// Count upper/lower Q violations against Q* after every episode.
  bool check_confidence_bounds = false;
  /// Worker threads; 0 reads REGRETLAB_THREADS, then hardware concurrency.
  int threads = 0;

  std::int64_t T() const { return scale.K * scale.H; }
  /// The checkpoint schedule actually used.
  std::vector<std::int64_t> schedule() const;
  /// Throws std::invalid_argument on an inconsistent configuration.
  void validate() const;
};

/// Builds a config for `scale` running `algos` with the benchmark settings.
ExperimentConfig make_experiment(Scale scale, const std::vector<Algorithm>& algos, std::uint64_t mdp_seed = 0,
                                 int seeds = 10);

/// About `count` log-spaced episode indices in [1, K], strictly increasing, ending at K.
std::vector<std::int64_t> log_checkpoints(std::int64_t K, int count);

struct RunRecord {
  Algorithm algorithm = Algorithm::Ucb;
  int seed = 0;
  std::vector<std::int64_t> checkpoints;
  std::vector<double> cumulative_regret;
  double wall_seconds = 0.0;
  std::uint64_t digest = 0;
  std::int64_t episodes_completed = 0;
  std::int64_t bound_violations = 0;
  /// Non-empty when the run aborted on an invariant breach.
  std::string error;

  bool ok() const { return error.empty(); }
};

/// The MDP every algorithm faces for this config.
TabularMdp experiment_mdp(const ExperimentConfig& config);

/// Runs every (algorithm, seed) pair on the shared MDP. Records come back
/// ordered by algorithm (config order) then seed.
std::vector<RunRecord> run_experiment(const ExperimentConfig& config);
std::vector<RunRecord> run_experiment(const ExperimentConfig& config, const TabularMdp& mdp);

struct SeriesPoint {
  std::int64_t checkpoint = 0;
  double regret_median = 0.0;
  double regret_p10 = 0.0;
  double regret_p90 = 0.0;
  double normalized_median = 0.0;  ///< regret / ln(checkpoint + 1)
  double normalized_p10 = 0.0;
  double normalized_p90 = 0.0;
};

struct AggregateSeries {
  Algorithm algorithm = Algorithm::Ucb;
  int runs = 0;
  std::vector<SeriesPoint> points;
};

/// Nearest-rank percentile: the ceil(pct/100 * n)-th smallest value.
double nearest_rank(std::vector<double> values, double pct);

/// Per algorithm and checkpoint: median, p10 and p90 across seeds, raw and
/// divided by ln(checkpoint + 1). Failed runs are skipped. Throws on empty input.
std::vector<AggregateSeries> aggregate_percentiles(const std::vector<RunRecord>& records);

/// Files written by emit_outputs, with their git blob hashes.
struct OutputFiles {
  std::string directory;
  std::vector<std::pair<std::string, std::string>> hashes;  ///< (file name, sha1)
};

std::string series_to_csv(const std::vector<AggregateSeries>& series);
std::string records_to_csv(const std::vector<RunRecord>& records);
std::vector<RunRecord> records_from_csv(const std::string& text);
std::string render_svg(const std::vector<AggregateSeries>& series, const std::string& title);
nlohmann::json config_to_json(const ExperimentConfig& config);

/// Writes regret.csv, records.csv, regret.svg, mdp.json and manifest.json
/// into `directory` (created if needed). Timing goes to timing.csv, which the
/// manifest does not cover.
OutputFiles emit_outputs(const std::vector<AggregateSeries>& series, const std::vector<RunRecord>& records,
                         const ExperimentConfig& config, const TabularMdp& mdp, const std::string& directory);

}  // namespace regretlab
