#include "regretlab/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <thread>

#include "regretlab/oracle.hpp"

namespace regretlab {

std::optional<Scale> preset_scale(std::string_view name) {
  if (name == "s1") return Scale{2, 3, 3, 100'000};
  if (name == "s1-quick") return Scale{2, 3, 3, 10'000};
  if (name == "s2") return Scale{5, 5, 5, 600'000};
  if (name == "s3") return Scale{7, 8, 6, 5'000'000};
  if (name == "s4") return Scale{10, 15, 10, 20'000'000};
  return std::nullopt;
}

std::vector<std::int64_t> log_checkpoints(std::int64_t K, int count) {
  if (K < 1) {
    throw std::invalid_argument("log_checkpoints: K must be >= 1");
  }
  std::vector<std::int64_t> out;
  if (count > 1) {
    out.reserve(static_cast<std::size_t>(count) + 1);
    const double top = std::log(static_cast<double>(K));
    for (int i = 0; i < count; ++i) {
      const auto k = static_cast<std::int64_t>(std::llround(std::exp(top * i / (count - 1))));
      const std::int64_t clamped = std::clamp<std::int64_t>(k, 1, K);
      if (out.empty() || clamped > out.back()) out.push_back(clamped);
    }
  }
  if (out.empty() || out.back() != K) out.push_back(K);
  return out;
}

std::vector<std::int64_t> ExperimentConfig::schedule() const {
  return checkpoints.empty() ? log_checkpoints(scale.K, checkpoint_count) : checkpoints;
}

void ExperimentConfig::validate() const {
  if (scale.H < 1 || scale.S < 1 || scale.A < 1) {
    throw std::invalid_argument("experiment: H, S, A must be >= 1");
  }
  if (scale.K < 1) {
    throw std::invalid_argument("experiment: K must be >= 1");
  }
  if (seeds < 1) {
    throw std::invalid_argument("experiment: need at least one seed");
  }
  if (algorithms.empty()) {
    throw std::invalid_argument("experiment: no algorithms selected");
  }
  for (const auto& spec : algorithms) spec.config.validate();
  const auto sched = schedule();
  for (std::size_t i = 0; i < sched.size(); ++i) {
    if (sched[i] < 1 || (i > 0 && sched[i] <= sched[i - 1])) {
      throw std::invalid_argument("experiment: checkpoints must be strictly increasing and >= 1");
    }
  }
  if (sched.back() != scale.K) {
    throw std::invalid_argument("experiment: last checkpoint must equal K");
  }
  for (int s : initial_states) {
    if (s < 0 || s >= scale.S) throw std::invalid_argument("experiment: initial state override out of range");
  }
}

ExperimentConfig make_experiment(Scale scale, const std::vector<Algorithm>& algos, std::uint64_t mdp_seed, int seeds) {
  ExperimentConfig cfg;
  cfg.scale = scale;
  cfg.mdp_seed = mdp_seed;
  cfg.seeds = seeds;
  for (Algorithm a : algos) cfg.algorithms.push_back({a, LearnerConfig::experimental(a)});
  return cfg;
}

TabularMdp experiment_mdp(const ExperimentConfig& config) {
  RandomSource source(config.mdp_seed, {StreamPurpose::MdpGeneration, 0, 0});
  return generate_random_mdp(config.scale.H, config.scale.S, config.scale.A, source);
}

namespace {

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("REGRETLAB_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

RunRecord run_one(const ExperimentConfig& config, const AlgorithmSpec& spec, int seed, const TabularMdp& mdp,
                  const OptimalSolution& opt, const std::vector<std::int64_t>& schedule) {
  const auto start = std::chrono::steady_clock::now();
  RunRecord rec;
  rec.algorithm = spec.algorithm;
  rec.seed = seed;
  rec.checkpoints.reserve(schedule.size());
  rec.cumulative_regret.reserve(schedule.size());

  const auto tag = static_cast<std::uint32_t>(spec.algorithm);
  const auto index = static_cast<std::uint64_t>(seed);
  RandomSource starts(config.mdp_seed, {StreamPurpose::InitialState, tag, index});
  RandomSource transitions(config.mdp_seed, {StreamPurpose::Transition, tag, index});

  try {
    auto learner = make_learner(spec.algorithm, mdp.dims(), spec.config, config.scale.K, &opt);
    std::vector<double> scratch;
    double cumulative = 0.0;
    std::size_t next_checkpoint = 0;
    for (std::int64_t k = 1; k <= config.scale.K; ++k) {
      const int s1 = config.initial_states.empty()
                         ? sample_initial_state(mdp.S(), starts)
                         : config.initial_states[static_cast<std::size_t>((k - 1) % static_cast<std::int64_t>(config.initial_states.size()))];
      const EpisodeResult episode = learner->run_episode(mdp, s1, transitions);
      cumulative += regret_increment(opt.v(0, s1), evaluate_policy_at(mdp, episode.policy, s1, scratch));
      if (config.check_confidence_bounds) {
        rec.bound_violations += check_confidence_bounds(*learner, opt).total();
      }
      rec.episodes_completed = k;
      if (next_checkpoint < schedule.size() && k == schedule[next_checkpoint]) {
        rec.checkpoints.push_back(k);
        rec.cumulative_regret.push_back(cumulative);
        ++next_checkpoint;
      }
    }
    rec.digest = learner->digest();
  } catch (const InvariantBreach& e) {
    rec.error = std::string(algorithm_id(spec.algorithm)) + " seed " + std::to_string(seed) + " aborted at episode " +
                std::to_string(rec.episodes_completed + 1) + ": " + e.what();
  }
  rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

}  // namespace

std::vector<RunRecord> run_experiment(const ExperimentConfig& config) {
  config.validate();
  return run_experiment(config, experiment_mdp(config));
}

std::vector<RunRecord> run_experiment(const ExperimentConfig& config, const TabularMdp& mdp) {
  config.validate();
  require_valid(mdp);
  if (mdp.dims() != Dims{config.scale.H, config.scale.S, config.scale.A}) {
    throw std::invalid_argument("run_experiment: MDP shape does not match the configuration");
  }
  const OptimalSolution opt = solve_optimal(mdp);
  const auto schedule = config.schedule();

  const std::size_t tasks = config.algorithms.size() * static_cast<std::size_t>(config.seeds);
  std::vector<RunRecord> records(tasks);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < tasks; i = next.fetch_add(1)) {
      const auto& spec = config.algorithms[i / static_cast<std::size_t>(config.seeds)];
      const int seed = static_cast<int>(i % static_cast<std::size_t>(config.seeds));
      records[i] = run_one(config, spec, seed, mdp, opt, schedule);
    }
  };
  const int threads = std::min<int>(resolve_threads(config.threads), static_cast<int>(tasks));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  return records;
}

double nearest_rank(std::vector<double> values, double pct) {
  if (values.empty()) {
    throw std::invalid_argument("nearest_rank: no values");
  }
  std::sort(values.begin(), values.end());
  const auto n = static_cast<double>(values.size());
  auto rank = static_cast<std::size_t>(std::ceil(pct / 100.0 * n));
  rank = std::clamp<std::size_t>(rank, 1, values.size());
  return values[rank - 1];
}

std::vector<AggregateSeries> aggregate_percentiles(const std::vector<RunRecord>& records) {
  if (records.empty()) {
    throw std::invalid_argument("aggregate_percentiles: no run records");
  }
  std::vector<AggregateSeries> out;
  std::vector<Algorithm> order;
  for (const auto& r : records) {
    if (std::find(order.begin(), order.end(), r.algorithm) == order.end()) order.push_back(r.algorithm);
  }
  for (Algorithm algo : order) {
    std::vector<const RunRecord*> runs;
    for (const auto& r : records) {
      if (r.algorithm == algo && r.ok()) runs.push_back(&r);
    }
    if (runs.empty()) continue;
    const auto& checkpoints = runs.front()->checkpoints;
    for (const auto* r : runs) {
      if (r->checkpoints != checkpoints || r->cumulative_regret.size() != checkpoints.size()) {
        throw std::invalid_argument("aggregate_percentiles: runs of one algorithm use different checkpoints");
      }
    }
    AggregateSeries series{algo, static_cast<int>(runs.size()), {}};
    series.points.reserve(checkpoints.size());
    std::vector<double> column(runs.size());
    for (std::size_t c = 0; c < checkpoints.size(); ++c) {
      for (std::size_t i = 0; i < runs.size(); ++i) column[i] = runs[i]->cumulative_regret[c];
      const double norm = std::log(static_cast<double>(checkpoints[c]) + 1.0);
      SeriesPoint p;
      p.checkpoint = checkpoints[c];
      p.regret_median = nearest_rank(column, 50.0);
      p.regret_p10 = nearest_rank(column, 10.0);
      p.regret_p90 = nearest_rank(column, 90.0);
      p.normalized_median = p.regret_median / norm;
      p.normalized_p10 = p.regret_p10 / norm;
      p.normalized_p90 = p.regret_p90 / norm;
      series.points.push_back(p);
    }
    out.push_back(std::move(series));
  }
  if (out.empty()) {
    throw std::invalid_argument("aggregate_percentiles: every run failed");
  }
  return out;
}

}  // namespace regretlab
