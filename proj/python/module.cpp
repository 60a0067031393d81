#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "regretlab/harness.hpp"
#include "regretlab/learners.hpp"
#include "regretlab/mdp.hpp"
#include "regretlab/oracle.hpp"

namespace py = pybind11;
using namespace regretlab;

namespace {

using Nested = std::vector<std::vector<int>>;

Policy to_policy(const TabularMdp& mdp, const Nested& actions) {
  if (static_cast<int>(actions.size()) != mdp.H()) throw std::invalid_argument("policy needs one row per step");
  Policy pi(mdp.H(), mdp.S());
  for (int h = 0; h < mdp.H(); ++h) {
    const auto& row = actions[static_cast<std::size_t>(h)];
    if (static_cast<int>(row.size()) != mdp.S()) throw std::invalid_argument("policy row needs one action per state");
    for (int s = 0; s < mdp.S(); ++s) {
      const int a = row[static_cast<std::size_t>(s)];
      if (a < 0 || a >= mdp.A()) throw std::invalid_argument("policy action out of range");
      pi(h, s) = a;
    }
  }
  return pi;
}

py::dict record_to_dict(const RunRecord& r) {
  py::dict d;
  d["algorithm"] = std::string(algorithm_id(r.algorithm));
  d["seed"] = r.seed;
  d["checkpoints"] = r.checkpoints;
  d["cumulative_regret"] = r.cumulative_regret;
  d["wall_seconds"] = r.wall_seconds;
  d["digest"] = r.digest;
  d["episodes_completed"] = r.episodes_completed;
  d["bound_violations"] = r.bound_violations;
  d["error"] = r.error;
  return d;
}

RunRecord record_from_dict(const py::dict& d) {
  RunRecord r;
  r.algorithm = parse_algorithm(d["algorithm"].cast<std::string>());
  r.seed = d["seed"].cast<int>();
  r.checkpoints = d["checkpoints"].cast<std::vector<std::int64_t>>();
  r.cumulative_regret = d["cumulative_regret"].cast<std::vector<double>>();
  if (d.contains("error")) r.error = d["error"].cast<std::string>();
  return r;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Regret laboratory core: episodic tabular MDPs, exact oracles and learners";

  py::class_<TabularMdp>(m, "TabularMdp")
      .def(py::init<int, int, int, std::vector<double>, std::vector<double>>(), py::arg("H"), py::arg("S"),
           py::arg("A"), py::arg("rewards"), py::arg("transitions"))
      .def_property_readonly("H", &TabularMdp::H)
      .def_property_readonly("S", &TabularMdp::S)
      .def_property_readonly("A", &TabularMdp::A)
      .def_property_readonly("rewards", &TabularMdp::rewards)
      .def_property_readonly("transitions", &TabularMdp::transitions)
      .def("reward", &TabularMdp::reward, py::arg("h"), py::arg("s"), py::arg("a"))
      .def("to_json", [](const TabularMdp& mdp) { return mdp_to_json(mdp).dump(); })
      .def("__eq__", [](const TabularMdp& a, const TabularMdp& b) { return a == b; })
      .def("__repr__", [](const TabularMdp& mdp) {
        return "TabularMdp(H=" + std::to_string(mdp.H()) + ", S=" + std::to_string(mdp.S()) +
               ", A=" + std::to_string(mdp.A()) + ")";
      });

  m.def("validate_mdp", [](const TabularMdp& mdp) {
    std::vector<std::string> messages;
    for (const auto& e : validate_mdp(mdp)) messages.push_back(e.message);
    return messages;
  });
  m.def(
      "generate_mdp",
      [](int H, int S, int A, std::uint64_t seed) {
        RandomSource source(seed, {StreamPurpose::MdpGeneration, 0, 0});
        return generate_random_mdp(H, S, A, source);
      },
      py::arg("H"), py::arg("S"), py::arg("A"), py::arg("seed") = 0);
  m.def("mdp_from_json", [](const std::string& text) { return mdp_from_json(nlohmann::json::parse(text)); });
  m.def("load_mdp", &load_mdp, py::arg("path"));
  m.def("save_mdp", &save_mdp, py::arg("mdp"), py::arg("path"));

  m.def("solve_optimal_json", [](const TabularMdp& mdp) { return optimal_solution_to_json(solve_optimal(mdp)).dump(); });
  m.def(
      "evaluate_policy",
      [](const TabularMdp& mdp, const Nested& actions) {
        const VTable v = evaluate_policy(mdp, to_policy(mdp, actions));
        std::vector<std::vector<double>> out(static_cast<std::size_t>(v.levels()));
        for (int h = 0; h < v.levels(); ++h) {
          const auto level = v.level(h);
          out[static_cast<std::size_t>(h)].assign(level.begin(), level.end());
        }
        return out;
      },
      py::arg("mdp"), py::arg("policy"));
  m.def("gap_profile_json",
        [](const TabularMdp& mdp) { return gap_profile_to_json(compute_gap_profile(solve_optimal(mdp))).dump(); });
  m.def(
      "bound_terms_json",
      [](const TabularMdp& mdp, double T) {
        const auto profile = compute_gap_profile(solve_optimal(mdp));
        return bound_report_to_json(compute_bound_terms(profile, mdp.H(), mdp.S(), mdp.A(), T)).dump();
      },
      py::arg("mdp"), py::arg("T"));

  m.def("eta", &eta, py::arg("t"), py::arg("H"));
  m.def("eta_weights", &eta_weights, py::arg("N"), py::arg("H"));
  m.def("bonus", &bonus, py::arg("n"), py::arg("H"), py::arg("iota"), py::arg("c"));

  m.def(
      "run_experiment",
      [](int H, int S, int A, std::int64_t K, const std::vector<std::string>& algorithms, int seeds,
         std::uint64_t mdp_seed, int checkpoints, std::optional<double> theory_p, int threads) {
        ExperimentConfig cfg;
        cfg.scale = {H, S, A, K};
        cfg.seeds = seeds;
        cfg.mdp_seed = mdp_seed;
        cfg.checkpoint_count = checkpoints;
        cfg.threads = threads;
        for (const auto& id : algorithms) {
          const Algorithm a = parse_algorithm(id);
          cfg.algorithms.push_back({a, theory_p ? LearnerConfig::theoretical(a, *theory_p) : LearnerConfig::experimental(a)});
        }
        std::vector<RunRecord> records;
        {
          py::gil_scoped_release release;
          records = run_experiment(cfg);
        }
        py::list out;
        for (const auto& r : records) out.append(record_to_dict(r));
        return out;
      },
      py::arg("H"), py::arg("S"), py::arg("A"), py::arg("K"),
      py::arg("algorithms") = std::vector<std::string>{"ucb", "ulcb", "amb", "ramb"}, py::arg("seeds") = 10,
      py::arg("mdp_seed") = 0, py::arg("checkpoints") = 1000, py::arg("theory_p") = py::none(), py::arg("threads") = 0);

  m.def(
      "aggregate",
      [](const py::list& records) {
        std::vector<RunRecord> parsed;
        for (const auto& item : records) parsed.push_back(record_from_dict(item.cast<py::dict>()));
        py::list out;
        for (const auto& s : aggregate_percentiles(parsed)) {
          py::dict d;
          d["algorithm"] = std::string(algorithm_id(s.algorithm));
          d["runs"] = s.runs;
          py::list points;
          for (const auto& p : s.points) {
            py::dict pd;
            pd["checkpoint"] = p.checkpoint;
            pd["regret_median"] = p.regret_median;
            pd["regret_p10"] = p.regret_p10;
            pd["regret_p90"] = p.regret_p90;
            pd["normalized_median"] = p.normalized_median;
            pd["normalized_p10"] = p.normalized_p10;
            pd["normalized_p90"] = p.normalized_p90;
            points.append(pd);
          }
          d["points"] = points;
          out.append(d);
        }
        return out;
      },
      py::arg("records"));
}
