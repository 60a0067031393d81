// regretlab command-line tool: run benchmark sweeps and inspect MDPs.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "regretlab/harness.hpp"
#include "regretlab/learners.hpp"
#include "regretlab/mdp.hpp"
#include "regretlab/oracle.hpp"

using namespace regretlab;

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

/// "theory:p=0.01" or "const:1".
IotaMode parse_iota(const std::string& text) {
  if (text.rfind("theory", 0) == 0) {
    double p = 0.01;
    const auto pos = text.find("p=");
    if (pos != std::string::npos) p = std::stod(text.substr(pos + 2));
    return IotaMode::theoretical(p);
  }
  if (text.rfind("const:", 0) == 0) {
    return IotaMode::constant(std::stod(text.substr(6)));
  }
  throw std::invalid_argument("--iota expects theory:p=<p> or const:<value>, got '" + text + "'");
}

/// "2" for every algorithm, or "ucb=1,amb=2".
std::map<Algorithm, double> parse_bonus(const std::string& text, const std::vector<Algorithm>& algos) {
  std::map<Algorithm, double> out;
  if (text.empty()) return out;
  if (text.find('=') == std::string::npos) {
    for (Algorithm a : algos) out[a] = std::stod(text);
    return out;
  }
  for (const auto& item : split(text, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("--bonus-c item '" + item + "' lacks '='");
    out[parse_algorithm(item.substr(0, eq))] = std::stod(item.substr(eq + 1));
  }
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
}

void print_json(const nlohmann::json& doc, const std::string& path) {
  if (path.empty()) {
    std::cout << doc.dump(2) << '\n';
  } else {
    write_text(path, doc.dump(2) + "\n");
  }
}

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Regret laboratory for episodic tabular MDPs"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "Run a multi-seed regret experiment");
  std::string preset;
  int H = 0, S = 0, A = 0;
  std::int64_t K = 0;
  std::string algos_text = "ucb,ulcb,amb,ramb";
  int seeds = 10;
  std::uint64_t mdp_seed = 0;
  std::string iota_text = "const:1";
  std::string bonus_text;
  int checkpoints = 1000;
  std::string out_dir = "out";
  std::string mdp_path;
  std::string initial_text;
  bool check_bounds = false;
  run->add_option("--preset", preset, "s1 | s2 | s3 | s4 | s1-quick");
  run->add_option("--H", H, "Horizon");
  run->add_option("--S", S, "Number of states");
  run->add_option("--A", A, "Number of actions");
  run->add_option("--K", K, "Number of episodes");
  run->add_option("--algos", algos_text, "Comma-separated subset of ucb,ulcb,amb,ramb (oracle for debugging)");
  run->add_option("--seeds", seeds, "Trajectory seeds per algorithm")->check(CLI::PositiveNumber);
  run->add_option("--mdp-seed", mdp_seed, "Seed of the generated MDP and all streams");
  run->add_option("--iota", iota_text, "theory:p=<p> or const:<iota>");
  run->add_option("--bonus-c", bonus_text, "Bonus coefficient for all algorithms, or per algorithm: ucb=1,amb=2");
  run->add_option("--checkpoints", checkpoints, "Number of log-spaced checkpoints");
  run->add_option("--out", out_dir, "Output directory");
  run->add_option("--mdp", mdp_path, "Use a serialized MDP instead of generating one");
  run->add_option("--initial-states", initial_text, "Fixed initial-state sequence, e.g. 0,2,1 (cycled)");
  run->add_flag("--check-bounds", check_bounds, "Count confidence-bound violations against Q* every episode");

  // generate
  auto* gen = app.add_subcommand("generate", "Generate a random MDP as JSON");
  int gH = 0, gS = 0, gA = 0;
  std::uint64_t gseed = 0;
  std::string gout;
  gen->add_option("--H", gH)->required();
  gen->add_option("--S", gS)->required();
  gen->add_option("--A", gA)->required();
  gen->add_option("--mdp-seed", gseed);
  gen->add_option("--out", gout, "Output file (stdout when omitted)");

  // solve / gaps / bounds / validate
  std::string in_mdp, json_out, csv_out;
  auto* solve = app.add_subcommand("solve", "Optimal Q*, V* and greedy policy of a serialized MDP");
  solve->add_option("--mdp", in_mdp)->required();
  solve->add_option("--json", json_out, "Write JSON here instead of stdout");
  solve->add_option("--csv", csv_out, "Also write Q* as CSV (h,s,a,value)");

  auto* gaps = app.add_subcommand("gaps", "Suboptimality gap profile of a serialized MDP");
  gaps->add_option("--mdp", in_mdp)->required();
  gaps->add_option("--json", json_out);
  gaps->add_option("--csv", csv_out, "Also write the gap table as CSV (h,s,a,value)");

  auto* bounds = app.add_subcommand("bounds", "Gap-dependent bound terms of a serialized MDP");
  std::int64_t bK = 0;
  double bT = 0.0;
  bounds->add_option("--mdp", in_mdp)->required();
  bounds->add_option("--K", bK, "Episodes (T = K H)");
  bounds->add_option("--T", bT, "Total steps");
  bounds->add_option("--json", json_out);

  auto* validate = app.add_subcommand("validate", "Check a serialized MDP");
  validate->add_option("--mdp", in_mdp)->required();

  // plot
  auto* plot = app.add_subcommand("plot", "Aggregate records.csv into regret.csv and regret.svg");
  std::string records_path, plot_title = "Regret";
  std::string plot_out = ".";
  plot->add_option("--records", records_path)->required();
  plot->add_option("--out", plot_out, "Output directory");
  plot->add_option("--title", plot_title);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      ExperimentConfig cfg;
      if (!preset.empty()) {
        const auto scale = preset_scale(preset);
        if (!scale) throw std::invalid_argument("unknown preset '" + preset + "'");
        cfg.scale = *scale;
        cfg.preset = preset;
      }
      if (H > 0) cfg.scale.H = H;
      if (S > 0) cfg.scale.S = S;
      if (A > 0) cfg.scale.A = A;
      if (K > 0) cfg.scale.K = K;
      cfg.mdp_seed = mdp_seed;
      cfg.seeds = seeds;
      cfg.checkpoint_count = checkpoints;
      cfg.check_confidence_bounds = check_bounds;
      for (const auto& s : split(initial_text, ',')) cfg.initial_states.push_back(std::stoi(s));

      std::vector<Algorithm> algos;
      for (const auto& id : split(algos_text, ',')) algos.push_back(parse_algorithm(id));
      const IotaMode iota = parse_iota(iota_text);
      const auto overrides = parse_bonus(bonus_text, algos);
      for (Algorithm a : algos) {
        LearnerConfig lc = iota.kind == IotaMode::Kind::Theoretical ? LearnerConfig::theoretical(a, iota.value)
                                                                    : LearnerConfig::experimental(a);
        lc.iota = iota;
        if (auto it = overrides.find(a); it != overrides.end()) lc.bonus_c = it->second;
        cfg.algorithms.push_back({a, lc});
      }

      TabularMdp mdp;
      if (!mdp_path.empty()) {
        mdp = load_mdp(mdp_path);
        if (cfg.scale.H == 0) cfg.scale = {mdp.H(), mdp.S(), mdp.A(), cfg.scale.K};
      }
      cfg.validate();
      if (mdp_path.empty()) mdp = experiment_mdp(cfg);

      std::fprintf(stderr, "running (H,S,A,K)=(%d,%d,%d,%lld), %zu algorithm(s) x %d seed(s)\n", cfg.scale.H,
                   cfg.scale.S, cfg.scale.A, static_cast<long long>(cfg.scale.K), cfg.algorithms.size(), cfg.seeds);
      const auto records = run_experiment(cfg, mdp);
      int failures = 0;
      for (const auto& r : records) {
        if (!r.ok()) {
          ++failures;
          std::fprintf(stderr, "error: %s\n", r.error.c_str());
        }
      }
      const auto series = aggregate_percentiles(records);
      const auto files = emit_outputs(series, records, cfg, mdp, out_dir);
      for (const auto& s : series) {
        const auto& last = s.points.back();
        std::fprintf(stderr, "%-6s median regret %.4f  (p10 %.4f, p90 %.4f) at K=%lld\n",
                     std::string(algorithm_id(s.algorithm)).c_str(), last.regret_median, last.regret_p10,
                     last.regret_p90, static_cast<long long>(last.checkpoint));
      }
      for (const auto& [name, sha] : files.hashes) std::printf("%s  %s/%s\n", sha.c_str(), out_dir.c_str(), name.c_str());
      return failures == 0 ? 0 : 3;
    }

    if (*gen) {
      RandomSource source(gseed, {StreamPurpose::MdpGeneration, 0, 0});
      const TabularMdp mdp = generate_random_mdp(gH, gS, gA, source);
      if (gout.empty()) {
        std::cout << mdp_to_json(mdp).dump() << '\n';
      } else {
        save_mdp(mdp, gout);
      }
      return 0;
    }

    if (*validate) {
      std::ifstream in(in_mdp);
      if (!in) throw std::runtime_error("cannot open '" + in_mdp + "'");
      const auto doc = nlohmann::json::parse(in);
      TabularMdp mdp;
      try {
        mdp = mdp_from_json(doc);
      } catch (const InvalidMdp& e) {
        for (const auto& err : e.errors()) std::cout << err.message << '\n';
        return 2;
      }
      std::cout << "ok\n";
      return 0;
    }

    if (*solve || *gaps || *bounds) {
      const TabularMdp mdp = load_mdp(in_mdp);
      const OptimalSolution opt = solve_optimal(mdp);
      if (*solve) {
        print_json(optimal_solution_to_json(opt), json_out);
        if (!csv_out.empty()) write_text(csv_out, qtable_to_csv(opt.q));
        return 0;
      }
      const GapProfile profile = compute_gap_profile(opt);
      if (*gaps) {
        print_json(gap_profile_to_json(profile), json_out);
        if (!csv_out.empty()) write_text(csv_out, qtable_to_csv(profile.gaps));
        return 0;
      }
      const double T = bT > 0.0 ? bT : static_cast<double>(bK) * mdp.H();
      auto doc = bound_report_to_json(compute_bound_terms(profile, mdp.H(), mdp.S(), mdp.A(), T));
      doc["T"] = T;
      print_json(doc, json_out);
      return 0;
    }

    if (*plot) {
      const auto records = records_from_csv(read_text(records_path));
      const auto series = aggregate_percentiles(records);
      std::filesystem::create_directories(plot_out);
      write_text(plot_out + "/regret.csv", series_to_csv(series));
      write_text(plot_out + "/regret.svg", render_svg(series, plot_title));
      return 0;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "regretlab: %s\n", e.what());
    return 1;
  }
  return 0;
}
