#include <cmath>
#include <vector>

#include "doctest.h"
#include "regretlab/mdp.hpp"
#include "support/brute_force.hpp"

using namespace regretlab;

namespace {

RandomSource test_source(std::uint64_t seed, std::uint64_t index = 0) {
  return RandomSource(seed, {StreamPurpose::Test, 0, index});
}

bool has_kind(const std::vector<ValidationError>& errors, ValidationError::Kind kind) {
  for (const auto& e : errors) {
    if (e.kind == kind) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("random source streams") {
  auto a = test_source(7);
  auto b = test_source(7);
  auto c = test_source(7, 1);
  auto d = RandomSource(7, {StreamPurpose::Transition, 0, 0});
  int same_c = 0, same_d = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto x = a.next_u64();
    CHECK(x == b.next_u64());
    same_c += x == c.next_u64();
    same_d += x == d.next_u64();
  }
  CHECK(same_c == 0);
  CHECK(same_d == 0);
  CHECK(a.draws() == 1000);

  auto u = test_source(3);
  for (int i = 0; i < 10000; ++i) {
    const double x = u.uniform01();
    REQUIRE(x >= 0.0);
    REQUIRE(x < 1.0);
    REQUIRE(u.uniform_index(7) < 7);
    REQUIRE(u.exponential() >= 0.0);
  }
  CHECK_THROWS_AS(u.uniform_index(0), std::invalid_argument);
}

TEST_CASE("validate_mdp") {
  SUBCASE("smallest legal MDP") {
    const TabularMdp mdp(1, 1, 1, {0.5}, {1.0});
    CHECK(validate_mdp(mdp).empty());
  }
  SUBCASE("row summing to 0.9") {
    const TabularMdp mdp(1, 2, 1, {0.5, 0.5}, {0.4, 0.5, 0.0, 1.0});
    const auto errors = validate_mdp(mdp);
    REQUIRE(errors.size() == 1);
    CHECK(errors[0].kind == ValidationError::Kind::RowSum);
    CHECK(errors[0].h == 0);
    CHECK(errors[0].s == 0);
    CHECK(errors[0].a == 0);
  }
  SUBCASE("reward of 1.5") {
    const TabularMdp mdp(1, 1, 2, {0.2, 1.5}, {1.0, 1.0});
    const auto errors = validate_mdp(mdp);
    REQUIRE(errors.size() == 1);
    CHECK(errors[0].kind == ValidationError::Kind::RewardRange);
    CHECK(errors[0].a == 1);
  }
  SUBCASE("negative probability and wrong shape") {
    CHECK(has_kind(validate_mdp(TabularMdp(1, 2, 1, {0.1, 0.1}, {1.5, -0.5, 0.0, 1.0})),
                   ValidationError::Kind::NegativeProbability));
    CHECK(has_kind(validate_mdp(TabularMdp(1, 1, 1, {0.1, 0.2}, {1.0})), ValidationError::Kind::Dimension));
    CHECK_THROWS_AS(require_valid(TabularMdp(1, 1, 1, {2.0}, {1.0})), InvalidMdp);
  }
  SUBCASE("every violation is reported") {
    const TabularMdp mdp(1, 1, 2, {-0.1, 1.1}, {0.5, 0.5});
    CHECK(validate_mdp(mdp).size() == 4);
  }
  CHECK_THROWS_AS(TabularMdp(0, 1, 1, {}, {}), std::invalid_argument);
}

TEST_CASE("generate_random_mdp") {
  auto s1 = test_source(11);
  auto s2 = test_source(11);
  const TabularMdp m1 = generate_random_mdp(3, 4, 2, s1);
  const TabularMdp m2 = generate_random_mdp(3, 4, 2, s2);
  CHECK(m1 == m2);
  CHECK(validate_mdp(m1).empty());

  for (int h = 0; h < m1.H(); ++h) {
    for (int s = 0; s < m1.S(); ++s) {
      for (int a = 0; a < m1.A(); ++a) {
        double sum = 0.0;
        for (double p : m1.row(h, s, a)) sum += p;
        CHECK(std::abs(sum - 1.0) <= 1e-12);
      }
    }
  }

  auto big = test_source(12);
  const TabularMdp wide = generate_random_mdp(10, 10, 100, big);
  double mean = 0.0;
  for (double r : wide.rewards()) mean += r;
  mean /= static_cast<double>(wide.rewards().size());
  CHECK(wide.rewards().size() == 10000);
  CHECK(std::abs(mean - 0.5) <= 0.02);
}

TEST_CASE("sample_initial_state") {
  auto one = test_source(1);
  for (int i = 0; i < 100; ++i) CHECK(sample_initial_state(1, one) == 0);

  constexpr int S = 5;
  constexpr int draws = 100000;
  auto src = test_source(2);
  std::vector<int> counts(S, 0);
  for (int i = 0; i < draws; ++i) ++counts[static_cast<std::size_t>(sample_initial_state(S, src))];
  const double p = 1.0 / S;
  const double sigma = std::sqrt(draws * p * (1.0 - p));
  for (int c : counts) CHECK(std::abs(c - draws * p) <= 3.0 * sigma);

  auto x = test_source(9);
  auto y = test_source(9);
  for (int i = 0; i < 100; ++i) CHECK(sample_initial_state(7, x) == sample_initial_state(7, y));
}

TEST_CASE("sample_next_state") {
  const TabularMdp degenerate(1, 3, 1, {0.0, 0.0, 0.0}, {0, 0, 1, 0, 0, 1, 0, 0, 1});
  auto src = test_source(4);
  for (int i = 0; i < 1000; ++i) CHECK(sample_next_state(degenerate, 0, 1, 0, src) == 2);

  const std::vector<double> row{0.1, 0.6, 0.3};
  std::vector<double> p;
  for (int i = 0; i < 3; ++i) p.insert(p.end(), row.begin(), row.end());
  const TabularMdp mdp(1, 3, 1, {0.0, 0.0, 0.0}, p);
  constexpr int draws = 100000;
  std::vector<int> counts(3, 0);
  for (int i = 0; i < draws; ++i) ++counts[static_cast<std::size_t>(sample_next_state(mdp, 0, 0, 0, src))];
  for (std::size_t j = 0; j < 3; ++j) {
    const double sigma = std::sqrt(draws * row[j] * (1.0 - row[j]));
    CHECK(std::abs(counts[j] - draws * row[j]) <= 3.0 * sigma);
  }

  CHECK_THROWS_AS(sample_next_state(mdp, 1, 0, 0, src), std::out_of_range);
  CHECK_THROWS_AS(sample_next_state(mdp, 0, 3, 0, src), std::out_of_range);
  CHECK_THROWS_AS(sample_next_state(mdp, 0, 0, -1, src), std::out_of_range);
}

TEST_CASE("rollout") {
  SUBCASE("H = 1") {
    const TabularMdp mdp(1, 2, 2, {0.1, 0.2, 0.3, 0.4}, {1, 0, 1, 0, 0, 1, 0, 1});
    Policy pi(1, 2);
    pi(0, 1) = 1;
    auto src = test_source(5);
    const Trajectory t = rollout(mdp, pi, 1, src);
    REQUIRE(t.steps.size() == 1);
    CHECK(t.initial_state == 1);
    CHECK(t.steps[0] == Step{1, 1, 0.4});
    CHECK(src.draws() == 0);
  }
  SUBCASE("deterministic two-step chain") {
    // Step 0: state 0 action 1 moves to state 2 with reward 0.7.
    // Step 1: state 2 action 0 pays 0.25.
    const std::vector<double> rewards{0.0, 0.7, 0.0, 0.0, 0.0, 0.0,
                                      0.0, 0.0, 0.0, 0.0, 0.25, 0.0};
    const std::vector<int> next{1, 2, 0, 0, 0, 0,
                                0, 0, 0, 0, 0, 0};
    const TabularMdp mdp = testsupport::deterministic_mdp(2, 3, 2, rewards, next);
    REQUIRE(validate_mdp(mdp).empty());
    Policy pi(2, 3);
    pi(0, 0) = 1;
    pi(1, 2) = 0;
    auto src = test_source(6);
    const Trajectory t = rollout(mdp, pi, 0, src);
    CHECK(t.steps == std::vector<Step>{{0, 1, 0.7}, {2, 0, 0.25}});
  }
  SUBCASE("rewards match the table, one pair per step") {
    auto gen = test_source(8);
    const TabularMdp mdp = generate_random_mdp(6, 4, 3, gen);
    Policy pi(6, 4);
    for (int h = 0; h < 6; ++h) {
      for (int s = 0; s < 4; ++s) pi(h, s) = (h + s) % 3;
    }
    auto src = test_source(10);
    for (int k = 0; k < 200; ++k) {
      const Trajectory t = rollout(mdp, pi, k % 4, src);
      REQUIRE(t.steps.size() == 6);
      for (int h = 0; h < 6; ++h) {
        const auto& st = t.steps[static_cast<std::size_t>(h)];
        CHECK(st.action == pi(h, st.state));
        CHECK(st.reward == mdp.reward(h, st.state, st.action));
      }
    }
  }
  auto src = test_source(0);
  CHECK_THROWS_AS(rollout(TabularMdp(1, 1, 1, {0.5}, {1.0}), Policy(2, 1), 0, src), std::invalid_argument);
}

TEST_CASE("json round trip keeps full precision") {
  auto gen = test_source(13);
  const TabularMdp mdp = generate_random_mdp(2, 3, 2, gen);
  const TabularMdp back = mdp_from_json(nlohmann::json::parse(mdp_to_json(mdp).dump()));
  CHECK(back == mdp);

  auto doc = mdp_to_json(mdp);
  doc["rewards"][0][0][0] = 3.0;
  CHECK_THROWS_AS(mdp_from_json(doc), InvalidMdp);
  doc = mdp_to_json(mdp);
  doc["transitions"][1].erase(0);
  CHECK_THROWS_AS(mdp_from_json(doc), std::invalid_argument);
}
