#include <cmath>
#include <vector>

#include "doctest.h"
#include "regretlab/oracle.hpp"
#include "support/brute_force.hpp"

using namespace regretlab;

namespace {

TabularMdp random_mdp(int H, int S, int A, std::uint64_t seed) {
  RandomSource src(seed, {StreamPurpose::Test, 1, 0});
  return generate_random_mdp(H, S, A, src);
}

Policy random_policy(int H, int S, int A, RandomSource& src) {
  Policy pi(H, S);
  for (int h = 0; h < H; ++h) {
    for (int s = 0; s < S; ++s) pi(h, s) = static_cast<int>(src.uniform_index(static_cast<std::size_t>(A)));
  }
  return pi;
}

double max_abs(const std::vector<double>& x, const std::vector<double>& y) {
  double out = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) out = std::max(out, std::abs(x[i] - y[i]));
  return out;
}

/// Gap table of shape (H,S,A) with a single positive entry.
QTable single_gap(int H, int S, int A, double gap) {
  QTable g(Dims{H, S, A}, 0.0);
  g(0, 0, 1) = gap;
  return g;
}

}  // namespace

TEST_CASE("solve_optimal simple cases") {
  SUBCASE("H = 1 gives the reward table") {
    const TabularMdp mdp(1, 2, 3, {0.1, 0.9, 0.3, 0.4, 0.2, 0.8}, std::vector<double>(12, 0.5));
    const auto opt = solve_optimal(mdp);
    CHECK(opt.q.values() == mdp.rewards());
    CHECK(opt.v(0, 0) == 0.9);
    CHECK(opt.v(0, 1) == 0.8);
    CHECK(opt.v(1, 0) == 0.0);
    CHECK(opt.greedy_policy().actions() == std::vector<int>{1, 2});
  }
  SUBCASE("constant reward one telescopes") {
    RandomSource src(4, {StreamPurpose::Test, 0, 0});
    const TabularMdp base = generate_random_mdp(5, 3, 2, src);
    const TabularMdp mdp(5, 3, 2, std::vector<double>(30, 1.0), base.transitions());
    const auto opt = solve_optimal(mdp);
    for (int h = 0; h < 5; ++h) {
      for (int s = 0; s < 3; ++s) CHECK(std::abs(opt.v(h, s) - (5 - h)) <= 1e-12);
    }
  }
}

TEST_CASE("solve_optimal matches exhaustive enumeration") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    for (const auto& [H, S, A] : std::vector<std::tuple<int, int, int>>{{2, 2, 2}, {2, 3, 3}}) {
      const TabularMdp mdp = random_mdp(H, S, A, seed);
      const auto opt = solve_optimal(mdp);
      CHECK(max_abs(opt.q.values(), testsupport::brute_force_q(mdp)) <= 1e-10);
      const auto v1 = testsupport::brute_force_v1(mdp);
      for (int s = 0; s < S; ++s) CHECK(std::abs(opt.v(0, s) - v1[static_cast<std::size_t>(s)]) <= 1e-10);
      CHECK(bellman_residual(mdp, opt) <= 1e-10);

      for (int h = 0; h < H; ++h) {
        for (int s = 0; s < S; ++s) {
          for (int a = 0; a < A; ++a) {
            CHECK(opt.q(h, s, a) >= 0.0);
            CHECK(opt.q(h, s, a) <= H - h);
          }
        }
      }
    }
  }
}

TEST_CASE("gap profile against enumeration") {
  for (std::uint64_t seed = 20; seed < 25; ++seed) {
    const TabularMdp mdp = random_mdp(2, 3, 3, seed);
    const auto opt = solve_optimal(mdp);
    const auto profile = compute_gap_profile(opt);
    const auto q = testsupport::brute_force_q(mdp);
    std::vector<double> expected(q.size());
    for (int h = 0; h < 2; ++h) {
      for (int s = 0; s < 3; ++s) {
        double best = 0.0;
        for (int a = 0; a < 3; ++a) best = std::max(best, q[static_cast<std::size_t>((h * 3 + s) * 3 + a)]);
        for (int a = 0; a < 3; ++a) {
          const auto i = static_cast<std::size_t>((h * 3 + s) * 3 + a);
          expected[i] = best - q[i];
        }
      }
    }
    CHECK(max_abs(profile.gaps.values(), expected) <= 1e-10);

    double dmin = 1e300;
    for (int h = 0; h < 2; ++h) {
      REQUIRE(profile.delta_min_h[static_cast<std::size_t>(h)].has_value());
      dmin = std::min(dmin, *profile.delta_min_h[static_cast<std::size_t>(h)]);
      CHECK(profile.z_opt_h[static_cast<std::size_t>(h)].size() >= 3);
      for (int s = 0; s < 3; ++s) {
        const auto row = profile.gaps.row(h, s);
        CHECK(*std::min_element(row.begin(), row.end()) == 0.0);
        for (double g : row) CHECK(g >= 0.0);
      }
    }
    REQUIRE(profile.delta_min.has_value());
    CHECK(*profile.delta_min == dmin);
  }
}

TEST_CASE("gap profile small cases") {
  SUBCASE("one state, two actions") {
    const TabularMdp mdp(1, 1, 2, {1.0, 0.4}, {1.0, 1.0});
    const auto p = compute_gap_profile(solve_optimal(mdp));
    CHECK(p.gaps(0, 0, 0) == 0.0);
    CHECK(std::abs(p.gaps(0, 0, 1) - 0.6) <= 1e-15);
    REQUIRE(p.delta_min.has_value());
    CHECK(std::abs(*p.delta_min - 0.6) <= 1e-15);
    CHECK(p.z_opt_h[0].size() == 1);
    CHECK(p.z_opt.size() == 1);
    CHECK(p.z_mul.empty());
  }
  SUBCASE("tied optimal actions") {
    const TabularMdp mdp(1, 1, 3, {0.7, 0.7, 0.2}, {1.0, 1.0, 1.0});
    const auto p = compute_gap_profile(solve_optimal(mdp));
    CHECK(p.z_opt_h_s[0][0] == std::vector<int>{0, 1});
    CHECK(p.z_mul == std::vector<StateActionStep>{{0, 0, 0}, {0, 1, 0}});
    REQUIRE(p.delta_min_h[0].has_value());
    CHECK(std::abs(*p.delta_min_h[0] - 0.5) <= 1e-15);
  }
  SUBCASE("no positive gap") {
    const TabularMdp mdp(2, 1, 2, {0.3, 0.3, 0.5, 0.5}, {1.0, 1.0, 1.0, 1.0});
    const auto p = compute_gap_profile(solve_optimal(mdp));
    CHECK_FALSE(p.delta_min.has_value());
    CHECK_FALSE(p.delta_min_h[0].has_value());
    CHECK(p.z_mul.size() == 4);
    const auto doc = gap_profile_to_json(p);
    CHECK(doc.at("delta_min").is_null());
    CHECK(doc.at("delta_min_h")[1].is_null());
  }
}

TEST_CASE("evaluate_policy") {
  const TabularMdp mdp = random_mdp(4, 3, 2, 31);
  const auto opt = solve_optimal(mdp);
  const VTable v = evaluate_policy(mdp, opt.greedy_policy());
  CHECK(max_abs(v.values(), opt.v.values()) <= 1e-12);

  SUBCASE("H = 1") {
    const TabularMdp one(1, 2, 2, {0.1, 0.2, 0.3, 0.4}, std::vector<double>(8, 0.5));
    Policy pi(1, 2);
    pi(0, 0) = 1;
    const VTable vp = evaluate_policy(one, pi);
    CHECK(vp(0, 0) == 0.2);
    CHECK(vp(0, 1) == 0.3);
  }

  SUBCASE("matches Monte Carlo rollouts") {
    RandomSource pol(32, {StreamPurpose::Test, 0, 0});
    const Policy pi = random_policy(4, 3, 2, pol);
    const VTable vp = evaluate_policy(mdp, pi);
    RandomSource src(33, {StreamPurpose::Test, 0, 1});
    constexpr int n = 100000;
    double sum = 0.0, sum_sq = 0.0;
    for (int i = 0; i < n; ++i) {
      double ret = 0.0;
      for (const auto& st : rollout(mdp, pi, 1, src).steps) ret += st.reward;
      sum += ret;
      sum_sq += ret * ret;
    }
    const double mean = sum / n;
    const double sd = std::sqrt((sum_sq / n - mean * mean) / n);
    CHECK(std::abs(mean - vp(0, 1)) <= 3.0 * sd);
    std::vector<double> scratch;
    CHECK(evaluate_policy_at(mdp, pi, 1, scratch) == vp(0, 1));
  }
}

TEST_CASE("regret_increment") {
  const TabularMdp mdp(1, 1, 2, {1.0, 0.4}, {1.0, 1.0});
  const auto opt = solve_optimal(mdp);
  CHECK(regret_increment(opt, evaluate_policy(mdp, opt.greedy_policy()), 0) == 0.0);
  Policy second(1, 1, 1);
  CHECK(std::abs(regret_increment(opt, evaluate_policy(mdp, second), 0) - 0.6) <= 1e-15);
  CHECK(regret_increment(1.0, 1.0 + 1e-13) == 0.0);

  RandomSource src(40, {StreamPurpose::Test, 0, 0});
  for (int i = 0; i < 100; ++i) {
    const TabularMdp m = generate_random_mdp(3, 3, 3, src);
    const auto o = solve_optimal(m);
    const Policy pi = random_policy(3, 3, 3, src);
    const VTable vp = evaluate_policy(m, pi);
    for (int s = 0; s < 3; ++s) {
      CHECK(o.v(0, s) - vp(0, s) >= -1e-10);
      CHECK(regret_increment(o, vp, s) >= 0.0);
    }
  }
}

TEST_CASE("compute_bound_terms") {
  SUBCASE("single gap component") {
    const auto report = compute_bound_terms(make_gap_profile(single_gap(2, 2, 2, 0.5)), 2, 2, 2, 100.0);
    CHECK(std::abs(report.gap_sum_component - 383.45) <= 0.01);
    CHECK(report.inverse_gap_sum == 2.0);
  }
  SUBCASE("all gaps zero") {
    const auto report = compute_bound_terms(make_gap_profile(QTable(Dims{3, 2, 2}, 0.0)), 3, 2, 2, 300.0);
    CHECK(report.gap_sum_component == 0.0);
    CHECK(report.z_opt_step_component == 0.0);
    CHECK(report.z_opt_component == 0.0);
    CHECK(report.z_mul_component == 0.0);
    CHECK(report.lower_ucb_term == 0.0);
    CHECK(report.lower_zmul_term == 0.0);
    CHECK(report.fine_grained_term == 2 * 2 * 27.0);
    CHECK(report.amb_term == 2 * 2 * 9.0);
  }
  SUBCASE("halving gaps doubles the inverse-gap sums") {
    const TabularMdp mdp = random_mdp(3, 3, 3, 50);
    const auto profile = compute_gap_profile(solve_optimal(mdp));
    QTable half = profile.gaps;
    for (int h = 0; h < 3; ++h) {
      for (int s = 0; s < 3; ++s) {
        for (int a = 0; a < 3; ++a) half(h, s, a) /= 2.0;
      }
    }
    const auto full_r = compute_bound_terms(profile, 3, 3, 3, 3000.0);
    const auto half_r = compute_bound_terms(make_gap_profile(half), 3, 3, 3, 3000.0);
    CHECK(half_r.gap_sum_component == doctest::Approx(2.0 * full_r.gap_sum_component).epsilon(1e-14));
    CHECK(half_r.inverse_gap_sum == doctest::Approx(2.0 * full_r.inverse_gap_sum).epsilon(1e-14));
    CHECK(half_r.fine_grained_term >= full_r.fine_grained_term);
    CHECK(half_r.weak_term >= full_r.weak_term);
    CHECK(half_r.amb_term >= full_r.amb_term);
    CHECK(half_r.lower_ucb_term >= full_r.lower_ucb_term);
  }
  SUBCASE("terms are nonnegative and monotone in each gap") {
    const TabularMdp mdp = random_mdp(2, 3, 3, 51);
    const auto profile = compute_gap_profile(solve_optimal(mdp));
    const auto base = compute_bound_terms(profile, 2, 3, 3, 200.0);
    for (double t : {base.fine_grained_term, base.weak_term, base.amb_term, base.lower_ucb_term, base.lower_zmul_term}) {
      CHECK(t >= 0.0);
    }
    for (int h = 0; h < 2; ++h) {
      for (int s = 0; s < 3; ++s) {
        for (int a = 0; a < 3; ++a) {
          if (profile.gaps(h, s, a) <= kZeroGapTolerance) continue;
          QTable bigger = profile.gaps;
          bigger(h, s, a) *= 1.5;
          const auto r = compute_bound_terms(make_gap_profile(bigger), 2, 3, 3, 200.0);
          CHECK(r.fine_grained_term <= base.fine_grained_term);
          CHECK(r.weak_term <= base.weak_term);
          CHECK(r.amb_term <= base.amb_term);
          CHECK(r.lower_ucb_term <= base.lower_ucb_term);
          CHECK(r.lower_zmul_term <= base.lower_zmul_term);
        }
      }
    }
  }
  SUBCASE("errors") {
    const auto profile = make_gap_profile(single_gap(2, 2, 2, 0.5));
    CHECK_THROWS_AS(compute_bound_terms(profile, 2, 2, 2, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(compute_bound_terms(profile, 3, 2, 2, 10.0), std::invalid_argument);
  }
}

TEST_CASE("decided_decomposition") {
  const TabularMdp mdp = random_mdp(3, 4, 3, 60);
  const auto opt = solve_optimal(mdp);

  SUBCASE("nothing decided") {
    const auto dec = decided_decomposition(mdp, opt, DecidedSets::none(3, 4));
    CHECK(dec.decided.values() == mdp.rewards());
    for (int h = 0; h < 3; ++h) {
      for (int s = 0; s < 4; ++s) {
        for (int a = 0; a < 3; ++a) {
          double expect = 0.0;
          const auto row = mdp.row(h, s, a);
          for (int n = 0; n < 4; ++n) expect += row[n] * opt.v(h + 1, n);
          CHECK(std::abs(dec.undecided(h, s, a) - expect) <= 1e-12);
        }
      }
    }
    CHECK(decomposition_residual(dec, opt) <= 1e-10);
  }
  SUBCASE("everything decided") {
    const auto dec = decided_decomposition(mdp, opt, DecidedSets::all(opt));
    CHECK(max_abs(dec.decided.values(), opt.q.values()) <= 1e-12);
    for (double x : dec.undecided.values()) CHECK(x == 0.0);
  }
  SUBCASE("suboptimal designated action") {
    auto g = DecidedSets::none(3, 4);
    const int best = opt.greedy_policy()(1, 2);
    g.action[1][2] = (best + 1) % 3;
    try {
      decided_decomposition(mdp, opt, g);
      FAIL("expected DecidedActionNotOptimal");
    } catch (const DecidedActionNotOptimal& e) {
      CHECK(e.h == 1);
      CHECK(e.s == 2);
      CHECK(e.a == (best + 1) % 3);
      CHECK(e.gap > 0.0);
    }
  }
}

TEST_CASE("qtable csv") {
  QTable t(Dims{1, 1, 2}, 0.25);
  t(0, 0, 1) = 0.1;
  CHECK(qtable_to_csv(t) == "h,s,a,value\n0,0,0,0.25\n0,0,1,0.10000000000000001\n");
}
