#include "regretlab/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace regretlab {

namespace {

double expect(std::span<const double> row, std::span<const double> next_values) {
  double acc = 0.0;
  for (std::size_t j = 0; j < row.size(); ++j) {
    acc += row[j] * next_values[j];
  }
  return acc;
}

int argmax_lowest(std::span<const double> values) {
  int best = 0;
  for (int a = 1; a < static_cast<int>(values.size()); ++a) {
    if (values[static_cast<std::size_t>(a)] > values[static_cast<std::size_t>(best)]) best = a;
  }
  return best;
}

}  // namespace

Policy OptimalSolution::greedy_policy() const {
  const Dims& d = dims();
  Policy pi(d.H, d.S);
  for (int h = 0; h < d.H; ++h) {
    for (int s = 0; s < d.S; ++s) {
      pi(h, s) = argmax_lowest(q.row(h, s));
    }
  }
  return pi;
}

OptimalSolution solve_optimal(const TabularMdp& mdp) {
  const Dims d = mdp.dims();
  OptimalSolution opt{QTable(d, 0.0), VTable(d.H + 1, d.S, 0.0)};
  for (int h = d.H - 1; h >= 0; --h) {
    const auto next = opt.v.level(h + 1);
    for (int s = 0; s < d.S; ++s) {
      double best = -1.0;
      for (int a = 0; a < d.A; ++a) {
        const double q = mdp.reward(h, s, a) + expect(mdp.row(h, s, a), next);
        opt.q(h, s, a) = q;
        best = std::max(best, q);
      }
      opt.v(h, s) = best;
    }
  }
  return opt;
}

VTable evaluate_policy(const TabularMdp& mdp, const Policy& policy) {
  const Dims d = mdp.dims();
  VTable v(d.H + 1, d.S, 0.0);
  for (int h = d.H - 1; h >= 0; --h) {
    const auto next = v.level(h + 1);
    for (int s = 0; s < d.S; ++s) {
      const int a = policy(h, s);
      v(h, s) = mdp.reward(h, s, a) + expect(mdp.row(h, s, a), next);
    }
  }
  return v;
}

double evaluate_policy_at(const TabularMdp& mdp, const Policy& policy, int s1, std::vector<double>& scratch) {
  const Dims d = mdp.dims();
  const auto S = static_cast<std::size_t>(d.S);
  scratch.assign(2 * S, 0.0);
  std::span<double> next(scratch.data(), S);
  std::span<double> cur(scratch.data() + S, S);
  for (int h = d.H - 1; h >= 1; --h) {
    for (int s = 0; s < d.S; ++s) {
      const int a = policy(h, s);
      cur[static_cast<std::size_t>(s)] = mdp.reward(h, s, a) + expect(mdp.row(h, s, a), next);
    }
    std::swap(cur, next);
  }
  const int a = policy(0, s1);
  return mdp.reward(0, s1, a) + expect(mdp.row(0, s1, a), next);
}

double regret_increment(double v_star, double v_pi) {
  return std::max(0.0, v_star - v_pi);
}

double regret_increment(const OptimalSolution& opt, const VTable& v_pi, int s1) {
  return regret_increment(opt.v(0, s1), v_pi(0, s1));
}

GapProfile make_gap_profile(const QTable& gaps) {
  const Dims d = gaps.dims();
  GapProfile p;
  p.gaps = gaps;
  p.delta_min_h.assign(static_cast<std::size_t>(d.H), std::nullopt);
  p.z_opt_h.resize(static_cast<std::size_t>(d.H));
  p.z_opt_h_s.assign(static_cast<std::size_t>(d.H), std::vector<std::vector<int>>(static_cast<std::size_t>(d.S)));
  for (int h = 0; h < d.H; ++h) {
    auto& dmin = p.delta_min_h[static_cast<std::size_t>(h)];
    for (int s = 0; s < d.S; ++s) {
      auto& opt_actions = p.z_opt_h_s[static_cast<std::size_t>(h)][static_cast<std::size_t>(s)];
      for (int a = 0; a < d.A; ++a) {
        const double g = gaps(h, s, a);
        if (g <= kZeroGapTolerance) {
          opt_actions.push_back(a);
          p.z_opt_h[static_cast<std::size_t>(h)].emplace_back(s, a);
          p.z_opt.push_back({s, a, h});
        } else if (!dmin || g < *dmin) {
          dmin = g;
        }
      }
      if (opt_actions.size() > 1) {
        for (int a : opt_actions) p.z_mul.push_back({s, a, h});
      }
    }
    if (dmin && (!p.delta_min || *dmin < *p.delta_min)) {
      p.delta_min = dmin;
    }
  }
  return p;
}

GapProfile compute_gap_profile(const OptimalSolution& opt) {
  const Dims d = opt.dims();
  QTable gaps(d, 0.0);
  for (int h = 0; h < d.H; ++h) {
    for (int s = 0; s < d.S; ++s) {
      for (int a = 0; a < d.A; ++a) {
        gaps(h, s, a) = std::max(0.0, opt.v(h, s) - opt.q(h, s, a));
      }
    }
  }
  return make_gap_profile(gaps);
}

BoundReport compute_bound_terms(const GapProfile& profile, int H, int S, int A, double T) {
  if (!(T > 0.0)) {
    throw std::invalid_argument("compute_bound_terms: T must be positive");
  }
  if (profile.dims() != Dims{H, S, A}) {
    throw std::invalid_argument("compute_bound_terms: profile shape does not match (H, S, A)");
  }
  const double h = H;
  const double log_sat = std::log(static_cast<double>(S) * A * T);
  const auto inverse = [](const std::optional<double>& gap) { return gap ? 1.0 / *gap : 0.0; };

  BoundReport r;
  for (double g : profile.gaps.values()) {
    if (g > kZeroGapTolerance) r.inverse_gap_sum += 1.0 / g;
  }
  r.gap_sum_component = std::pow(h, 5) * log_sat * r.inverse_gap_sum;

  // sqrt-cardinality tail sums over steps after h.
  std::vector<double> tail(static_cast<std::size_t>(H) + 1, 0.0);
  for (int t = H - 1; t >= 0; --t) {
    tail[static_cast<std::size_t>(t)] =
        tail[static_cast<std::size_t>(t) + 1] + std::sqrt(static_cast<double>(profile.z_opt_h[static_cast<std::size_t>(t)].size()));
  }
  for (int step = 0; step < H; ++step) {
    const double after = tail[static_cast<std::size_t>(step) + 1];
    r.z_opt_step_component +=
        std::pow(h, 3) * after * after * log_sat * inverse(profile.delta_min_h[static_cast<std::size_t>(step)]);
  }

  const double inv_min = inverse(profile.delta_min);
  r.z_opt_component = std::pow(h, 6) * static_cast<double>(profile.z_opt.size()) * log_sat * inv_min;
  r.z_mul_component = std::pow(h, 6) * static_cast<double>(profile.z_mul.size()) * log_sat * inv_min;

  const double sa = static_cast<double>(S) * A;
  r.fine_grained_term = r.gap_sum_component + r.z_opt_step_component + sa * std::pow(h, 3);
  r.weak_term = r.gap_sum_component + r.z_opt_component + sa * std::pow(h, 3);
  r.amb_term = r.gap_sum_component + r.z_mul_component + sa * std::pow(h, 2);
  r.lower_ucb_term = r.inverse_gap_sum + S * inv_min;
  r.lower_zmul_term = static_cast<double>(profile.z_mul.size()) * inv_min;
  return r;
}

DecidedSets DecidedSets::none(int H, int S) {
  return {std::vector<std::vector<int>>(static_cast<std::size_t>(H), std::vector<int>(static_cast<std::size_t>(S), -1))};
}

DecidedSets DecidedSets::all(const OptimalSolution& opt) {
  const Policy pi = opt.greedy_policy();
  DecidedSets g = none(opt.dims().H, opt.dims().S);
  for (int h = 0; h < opt.dims().H; ++h) {
    for (int s = 0; s < opt.dims().S; ++s) g.action[static_cast<std::size_t>(h)][static_cast<std::size_t>(s)] = pi(h, s);
  }
  return g;
}

namespace {
std::string not_optimal_message(int h, int s, int a, double gap) {
  std::ostringstream os;
  os << "decided state (h=" << h << ", s=" << s << ") designates action " << a << " with gap " << gap;
  return os.str();
}
}  // namespace

DecidedActionNotOptimal::DecidedActionNotOptimal(int h_, int s_, int a_, double gap_)
    : std::invalid_argument(not_optimal_message(h_, s_, a_, gap_)), h(h_), s(s_), a(a_), gap(gap_) {}

Decomposition decided_decomposition(const TabularMdp& mdp, const OptimalSolution& opt, const DecidedSets& decided) {
  const Dims d = mdp.dims();
  if (static_cast<int>(decided.action.size()) != d.H) {
    throw std::invalid_argument("decided_decomposition: decided sets must have H steps");
  }
  for (int h = 0; h < d.H; ++h) {
    if (static_cast<int>(decided.action[static_cast<std::size_t>(h)].size()) != d.S) {
      throw std::invalid_argument("decided_decomposition: decided sets must cover S states per step");
    }
    for (int s = 0; s < d.S; ++s) {
      const int a = decided.action[static_cast<std::size_t>(h)][static_cast<std::size_t>(s)];
      if (a < 0) continue;
      if (a >= d.A) throw std::out_of_range("decided_decomposition: designated action out of range");
      const double gap = opt.v(h, s) - opt.q(h, s, a);
      if (gap > kZeroGapTolerance) throw DecidedActionNotOptimal(h, s, a, gap);
    }
  }

  Decomposition out{QTable(d, 0.0), QTable(d, 0.0)};
  for (int h = d.H - 1; h >= 0; --h) {
    for (int s = 0; s < d.S; ++s) {
      for (int a = 0; a < d.A; ++a) {
        double qd = mdp.reward(h, s, a);
        double qud = 0.0;
        if (h + 1 < d.H) {
          const auto row = mdp.row(h, s, a);
          for (int next = 0; next < d.S; ++next) {
            const double p = row[static_cast<std::size_t>(next)];
            if (decided.decided(h + 1, next)) {
              const int star = decided.action[static_cast<std::size_t>(h) + 1][static_cast<std::size_t>(next)];
              qd += p * out.decided(h + 1, next, star);
              qud += p * out.undecided(h + 1, next, star);
            } else {
              qud += p * opt.v(h + 1, next);
            }
          }
        }
        out.decided(h, s, a) = qd;
        out.undecided(h, s, a) = qud;
      }
    }
  }
  return out;
}

double decomposition_residual(const Decomposition& dec, const OptimalSolution& opt) {
  double worst = 0.0;
  const auto& qd = dec.decided.values();
  const auto& qud = dec.undecided.values();
  const auto& qs = opt.q.values();
  for (std::size_t i = 0; i < qs.size(); ++i) {
    worst = std::max(worst, std::abs(qd[i] + qud[i] - qs[i]));
  }
  return worst;
}

double bellman_residual(const TabularMdp& mdp, const OptimalSolution& opt) {
  const Dims d = mdp.dims();
  double worst = 0.0;
  for (int s = 0; s < d.S; ++s) worst = std::max(worst, std::abs(opt.v(d.H, s)));
  for (int h = 0; h < d.H; ++h) {
    for (int s = 0; s < d.S; ++s) {
      double best = opt.q(h, s, 0);
      for (int a = 0; a < d.A; ++a) {
        const double target = mdp.reward(h, s, a) + expect(mdp.row(h, s, a), opt.v.level(h + 1));
        worst = std::max(worst, std::abs(opt.q(h, s, a) - target));
        best = std::max(best, opt.q(h, s, a));
      }
      worst = std::max(worst, std::abs(opt.v(h, s) - best));
    }
  }
  return worst;
}

namespace {

nlohmann::json optional_gap(const std::optional<double>& g) {
  return g ? nlohmann::json(*g) : nlohmann::json(nullptr);
}

nlohmann::json triples(const std::vector<StateActionStep>& items) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& t : items) out.push_back({{"h", t.h}, {"s", t.s}, {"a", t.a}});
  return out;
}

nlohmann::json nested(const QTable& t) {
  nlohmann::json out = nlohmann::json::array();
  for (int h = 0; h < t.dims().H; ++h) {
    nlohmann::json level = nlohmann::json::array();
    for (int s = 0; s < t.dims().S; ++s) {
      const auto row = t.row(h, s);
      level.push_back(std::vector<double>(row.begin(), row.end()));
    }
    out.push_back(std::move(level));
  }
  return out;
}

}  // namespace

nlohmann::json gap_profile_to_json(const GapProfile& p) {
  nlohmann::json dmin_h = nlohmann::json::array();
  for (const auto& g : p.delta_min_h) dmin_h.push_back(optional_gap(g));
  nlohmann::json z_opt_h = nlohmann::json::array();
  for (const auto& level : p.z_opt_h) {
    nlohmann::json pairs = nlohmann::json::array();
    for (const auto& [s, a] : level) pairs.push_back({{"s", s}, {"a", a}});
    z_opt_h.push_back(std::move(pairs));
  }
  return {
      {"H", p.dims().H},
      {"S", p.dims().S},
      {"A", p.dims().A},
      {"gaps", nested(p.gaps)},
      {"delta_min_h", dmin_h},
      {"delta_min", optional_gap(p.delta_min)},
      {"z_opt_h", z_opt_h},
      {"z_opt_h_s", p.z_opt_h_s},
      {"z_opt", triples(p.z_opt)},
      {"z_opt_size", p.z_opt.size()},
      {"z_mul", triples(p.z_mul)},
      {"z_mul_size", p.z_mul.size()},
  };
}

nlohmann::json bound_report_to_json(const BoundReport& r) {
  return {
      {"fine_grained_term", r.fine_grained_term},
      {"weak_term", r.weak_term},
      {"amb_term", r.amb_term},
      {"lower_ucb_term", r.lower_ucb_term},
      {"lower_zmul_term", r.lower_zmul_term},
      {"components",
       {{"gap_sum", r.gap_sum_component},
        {"z_opt_step", r.z_opt_step_component},
        {"z_opt", r.z_opt_component},
        {"z_mul", r.z_mul_component},
        {"inverse_gap_sum", r.inverse_gap_sum}}},
  };
}

nlohmann::json optimal_solution_to_json(const OptimalSolution& opt) {
  nlohmann::json v = nlohmann::json::array();
  for (int h = 0; h <= opt.dims().H; ++h) {
    const auto level = opt.v.level(h);
    v.push_back(std::vector<double>(level.begin(), level.end()));
  }
  return {{"H", opt.dims().H}, {"S", opt.dims().S}, {"A", opt.dims().A}, {"Qstar", nested(opt.q)}, {"Vstar", v},
          {"policy", opt.greedy_policy().actions()}};
}

std::string qtable_to_csv(const QTable& table) {
  std::ostringstream os;
  os.precision(17);
  os << "h,s,a,value\n";
  for (int h = 0; h < table.dims().H; ++h) {
    for (int s = 0; s < table.dims().S; ++s) {
      for (int a = 0; a < table.dims().A; ++a) {
        os << h << ',' << s << ',' << a << ',' << table(h, s, a) << '\n';
      }
    }
  }
  return os.str();
}

}  // namespace regretlab
