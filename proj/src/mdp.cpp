#include "regretlab/mdp.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace regretlab {

namespace {

constexpr double kRowSumTolerance = 1e-9;

std::string at(int h, int s, int a) {
  std::ostringstream os;
  os << "(h=" << h << ", s=" << s << ", a=" << a << ")";
  return os.str();
}

void check_index(const TabularMdp& mdp, int h, int s, int a) {
  if (h < 0 || h >= mdp.H() || s < 0 || s >= mdp.S() || a < 0 || a >= mdp.A()) {
    throw std::out_of_range("index " + at(h, s, a) + " outside MDP of shape H=" + std::to_string(mdp.H()) +
                            " S=" + std::to_string(mdp.S()) + " A=" + std::to_string(mdp.A()));
  }
}

}  // namespace

TabularMdp::TabularMdp(int H, int S, int A, std::vector<double> rewards, std::vector<double> transitions)
    : dims_{H, S, A}, rewards_(std::move(rewards)), transitions_(std::move(transitions)) {
  if (H < 1 || S < 1 || A < 1) {
    throw std::invalid_argument("MDP shape must satisfy H, S, A >= 1");
  }
}

std::vector<ValidationError> validate_mdp(const TabularMdp& mdp) {
  std::vector<ValidationError> errors;
  const auto H = static_cast<std::size_t>(mdp.H());
  const auto S = static_cast<std::size_t>(mdp.S());
  const auto A = static_cast<std::size_t>(mdp.A());
  if (mdp.rewards().size() != H * S * A) {
    errors.push_back({ValidationError::Kind::Dimension, -1, -1, -1,
                      "expected " + std::to_string(H * S * A) + " rewards, got " +
                          std::to_string(mdp.rewards().size())});
  }
  if (mdp.transitions().size() != H * S * A * S) {
    errors.push_back({ValidationError::Kind::Dimension, -1, -1, -1,
                      "expected " + std::to_string(H * S * A * S) + " transition entries, got " +
                          std::to_string(mdp.transitions().size())});
  }
  if (!errors.empty()) {
    return errors;
  }

  for (int h = 0; h < mdp.H(); ++h) {
    for (int s = 0; s < mdp.S(); ++s) {
      for (int a = 0; a < mdp.A(); ++a) {
        const double r = mdp.reward(h, s, a);
        if (!(r >= 0.0 && r <= 1.0)) {
          errors.push_back({ValidationError::Kind::RewardRange, h, s, a,
                            "reward " + std::to_string(r) + " at " + at(h, s, a) + " outside [0,1]"});
        }
        double sum = 0.0;
        bool negative = false;
        for (double p : mdp.row(h, s, a)) {
          negative = negative || !(p >= 0.0);
          sum += p;
        }
        if (negative) {
          errors.push_back({ValidationError::Kind::NegativeProbability, h, s, a,
                            "negative or NaN probability in row " + at(h, s, a)});
        }
        if (!(std::abs(sum - 1.0) <= kRowSumTolerance)) {
          errors.push_back({ValidationError::Kind::RowSum, h, s, a,
                            "row " + at(h, s, a) + " sums to " + std::to_string(sum)});
        }
      }
    }
  }
  return errors;
}

namespace {
std::string summarize(const std::vector<ValidationError>& errors) {
  std::string msg = "invalid MDP (" + std::to_string(errors.size()) + " error(s))";
  for (std::size_t i = 0; i < errors.size() && i < 5; ++i) {
    msg += "; " + errors[i].message;
  }
  return msg;
}
}  // namespace

InvalidMdp::InvalidMdp(std::vector<ValidationError> errors)
    : std::invalid_argument(summarize(errors)), errors_(std::move(errors)) {}

void require_valid(const TabularMdp& mdp) {
  auto errors = validate_mdp(mdp);
  if (!errors.empty()) {
    throw InvalidMdp(std::move(errors));
  }
}

TabularMdp generate_random_mdp(int H, int S, int A, RandomSource& source) {
  if (H < 1 || S < 1 || A < 1) {
    throw std::invalid_argument("generate_random_mdp: H, S, A must be >= 1");
  }
  const std::size_t pairs = static_cast<std::size_t>(H) * static_cast<std::size_t>(S) * static_cast<std::size_t>(A);
  std::vector<double> rewards(pairs);
  std::vector<double> transitions(pairs * static_cast<std::size_t>(S));
  for (std::size_t i = 0; i < pairs; ++i) {
    rewards[i] = source.uniform01();
    double* row = transitions.data() + i * static_cast<std::size_t>(S);
    double total = 0.0;
    for (int j = 0; j < S; ++j) {
      row[j] = source.exponential();
      total += row[j];
    }
    if (total <= 0.0) {
      // Every draw was exactly zero (probability ~2^-53S); fall back to uniform.
      for (int j = 0; j < S; ++j) row[j] = 1.0 / S;
      continue;
    }
    for (int j = 0; j < S; ++j) row[j] /= total;
  }
  return TabularMdp(H, S, A, std::move(rewards), std::move(transitions));
}

int sample_initial_state(int S, RandomSource& source) {
  if (S < 1) {
    throw std::invalid_argument("sample_initial_state: S must be >= 1");
  }
  return static_cast<int>(source.uniform_index(static_cast<std::size_t>(S)));
}

int sample_next_state(const TabularMdp& mdp, int h, int s, int a, RandomSource& source) {
  check_index(mdp, h, s, a);
  const auto row = mdp.row(h, s, a);
  const double u = source.uniform01();
  double cumulative = 0.0;
  int last_positive = 0;
  for (int j = 0; j < mdp.S(); ++j) {
    if (row[j] > 0.0) {
      cumulative += row[j];
      last_positive = j;
      if (u < cumulative) {
        return j;
      }
    }
  }
  // Round-off left u above the final cumulative sum.
  return last_positive;
}

Trajectory rollout(const TabularMdp& mdp, const Policy& policy, int s1, RandomSource& source) {
  if (policy.horizon() != mdp.H() || policy.states() != mdp.S()) {
    throw std::invalid_argument("rollout: policy shape does not match MDP");
  }
  Trajectory traj;
  traj.initial_state = s1;
  traj.steps.reserve(static_cast<std::size_t>(mdp.H()));
  int s = s1;
  for (int h = 0; h < mdp.H(); ++h) {
    const int a = policy(h, s);
    check_index(mdp, h, s, a);
    traj.steps.push_back({s, a, mdp.reward(h, s, a)});
    if (h + 1 < mdp.H()) {
      s = sample_next_state(mdp, h, s, a, source);
    }
  }
  return traj;
}

nlohmann::json mdp_to_json(const TabularMdp& mdp) {
  using nlohmann::json;
  json rewards = json::array();
  json transitions = json::array();
  for (int h = 0; h < mdp.H(); ++h) {
    json rh = json::array();
    json th = json::array();
    for (int s = 0; s < mdp.S(); ++s) {
      json rs = json::array();
      json ts = json::array();
      for (int a = 0; a < mdp.A(); ++a) {
        rs.push_back(mdp.reward(h, s, a));
        const auto row = mdp.row(h, s, a);
        ts.push_back(json(std::vector<double>(row.begin(), row.end())));
      }
      rh.push_back(std::move(rs));
      th.push_back(std::move(ts));
    }
    rewards.push_back(std::move(rh));
    transitions.push_back(std::move(th));
  }
  return json{{"H", mdp.H()}, {"S", mdp.S()}, {"A", mdp.A()}, {"rewards", rewards}, {"transitions", transitions}};
}

TabularMdp mdp_from_json(const nlohmann::json& doc) {
  const int H = doc.at("H").get<int>();
  const int S = doc.at("S").get<int>();
  const int A = doc.at("A").get<int>();
  if (H < 1 || S < 1 || A < 1) {
    throw std::invalid_argument("MDP document: H, S, A must be >= 1");
  }
  const auto& r = doc.at("rewards");
  const auto& t = doc.at("transitions");
  auto expect_size = [](const nlohmann::json& node, int n, const char* what) {
    if (!node.is_array() || static_cast<int>(node.size()) != n) {
      throw std::invalid_argument(std::string("MDP document: '") + what + "' has the wrong shape");
    }
  };
  expect_size(r, H, "rewards");
  expect_size(t, H, "transitions");
  std::vector<double> rewards;
  std::vector<double> transitions;
  rewards.reserve(static_cast<std::size_t>(H * S * A));
  transitions.reserve(static_cast<std::size_t>(H * S * A * S));
  for (int h = 0; h < H; ++h) {
    expect_size(r[h], S, "rewards");
    expect_size(t[h], S, "transitions");
    for (int s = 0; s < S; ++s) {
      expect_size(r[h][s], A, "rewards");
      expect_size(t[h][s], A, "transitions");
      for (int a = 0; a < A; ++a) {
        rewards.push_back(r[h][s][a].get<double>());
        expect_size(t[h][s][a], S, "transitions");
        for (int j = 0; j < S; ++j) {
          transitions.push_back(t[h][s][a][j].get<double>());
        }
      }
    }
  }
  TabularMdp mdp(H, S, A, std::move(rewards), std::move(transitions));
  require_valid(mdp);
  return mdp;
}

TabularMdp load_mdp(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open MDP file '" + path + "'");
  }
  return mdp_from_json(nlohmann::json::parse(in));
}

void save_mdp(const TabularMdp& mdp, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write MDP file '" + path + "'");
  }
  out << mdp_to_json(mdp).dump() << '\n';
}

}  // namespace regretlab
