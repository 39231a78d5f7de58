#include "doctest.h"

#include <random>

#include "pal/errors.hpp"
#include "pal/hybrid_policy.hpp"
#include "pal/rng.hpp"

using namespace pal;

namespace {

DifficultyDistribution dist(double e, double m, double h) {
  DifficultyDistribution d;
  d.p = {e, m, h};
  return d;
}

DifficultySet set_of(std::initializer_list<Difficulty> levels) {
  DifficultySet s;
  for (auto d : levels) s.insert(d);
  return s;
}

} // namespace

TEST_CASE("blend_weight examples") {
  const BlendConfig config;
  CHECK(blend_weight(0.0, 0.9, config) == doctest::Approx(0.2));
  CHECK(blend_weight(1.0, 1.0, config) == doctest::Approx(0.8));
  CHECK(blend_weight(0.5, 0.5, config) == doctest::Approx(0.35));
}

TEST_CASE("blend_weight is capped and monotone") {
  const BlendConfig config;
  double prev = 0.0;
  for (int i = 0; i <= 50; ++i) {
    const double w = blend_weight(i / 50.0, 0.7, config);
    CHECK(w >= prev);
    CHECK(w <= config.w_max);
    CHECK(w >= config.w0);
    prev = w;
  }
}

TEST_CASE("blend examples and identities") {
  const auto s = dist(0.5, 0.3, 0.2);
  const auto r = dist(0.1, 0.1, 0.8);
  CHECK(blend(s, r, 0.0) == s);
  CHECK(blend(s, r, 1.0) == r);
  const auto mid = blend(s, r, 0.5);
  CHECK(mid[Difficulty::Easy] == doctest::Approx(0.3));
  CHECK(mid[Difficulty::Medium] == doctest::Approx(0.2));
  CHECK(mid[Difficulty::Hard] == doctest::Approx(0.5));
  for (int i = 0; i <= 20; ++i) {
    const double w = i / 20.0;
    CHECK(blend(s, r, w).is_valid());
    const auto same = blend(s, s, w);
    for (std::size_t k = 0; k < 3; ++k) CHECK(same.p[k] == doctest::Approx(s.p[k]).epsilon(1e-15));
  }
}

TEST_CASE("apply_mask examples") {
  CHECK(apply_mask(dist(0.5, 0.3, 0.2), set_of({Difficulty::Medium}), Difficulty::Medium).p ==
        std::array<double, 3>{0.0, 1.0, 0.0});

  const auto masked = apply_mask(dist(0.3, 0.2, 0.5), set_of({Difficulty::Medium, Difficulty::Hard}),
                                 Difficulty::Medium);
  CHECK(masked[Difficulty::Easy] == 0.0);
  CHECK(masked[Difficulty::Medium] == doctest::Approx(0.2857142857));
  CHECK(masked[Difficulty::Hard] == doctest::Approx(0.7142857143));

  const auto d = dist(0.3, 0.2, 0.5);
  CHECK(apply_mask(d, DifficultySet::all(), Difficulty::Easy) == d);

  const auto degenerate = apply_mask(dist(1.0, 0.0, 0.0), set_of({Difficulty::Hard}), Difficulty::Hard);
  CHECK(degenerate.p == std::array<double, 3>{0.0, 0.0, 1.0});
}

TEST_CASE("inverse CDF over the fixed ordering") {
  const auto masked = dist(0.0, 0.2 / 0.7, 0.5 / 0.7);
  CHECK(sample_inverse_cdf(masked, 0.10) == Difficulty::Medium);
  CHECK(sample_inverse_cdf(masked, 0.0) == Difficulty::Medium);
  CHECK(sample_inverse_cdf(masked, 0.2857) == Difficulty::Medium);
  CHECK(sample_inverse_cdf(masked, 0.2858) == Difficulty::Hard);
  CHECK(sample_inverse_cdf(masked, 0.999999999) == Difficulty::Hard);
  CHECK(sample_inverse_cdf(dist(0.5, 0.5, 0.0), 0.9999999999999999) == Difficulty::Medium);
}

TEST_CASE("choose_difficulty") {
  const PolicyConfig config;
  PolicyState policy = init_policy(config);

  SUBCASE("a single allowed level is a point mass") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      const auto [choice, trace] = choose_difficulty(policy, config, seed);
      CHECK(choice == Difficulty::Easy);
      CHECK(trace.masked.p == std::array<double, 3>{1.0, 0.0, 0.0});
    }
  }
  SUBCASE("same policy and seed give the same choice and trace") {
    policy.learner.recent_accuracy = 0.9;
    policy.ladder = LadderState{Difficulty::Medium, 5, 5};
    policy.learner.skill = 1.1;
    const auto a = choose_difficulty(policy, config, 99);
    const auto b = choose_difficulty(policy, config, 99);
    CHECK(a.first == b.first);
    CHECK(a.second == b.second);
    CHECK(a.second.allowed == set_of({Difficulty::Medium, Difficulty::Hard}));
    CHECK(a.second.rng_draw == unit_interval(splitmix64(99)));
  }
  SUBCASE("ablation modes pin the weight") {
    PolicyConfig stat = config;
    stat.mode = PolicyMode::stat_only;
    CHECK(choose_difficulty(policy, stat, 1).second.w == 0.0);
    PolicyConfig rl = config;
    rl.mode = PolicyMode::rl_only;
    CHECK(choose_difficulty(policy, rl, 1).second.w == 1.0);
    PolicyConfig fixed = config;
    fixed.mode = PolicyMode::fixed;
    fixed.fixed_level = Difficulty::Hard;
    const auto fixed_policy = init_policy(fixed);
    CHECK(choose_difficulty(fixed_policy, fixed, 1).first == Difficulty::Hard);
  }
}

TEST_CASE("step orchestrates the per-answer updates") {
  const PolicyConfig config;
  PolicyState policy = init_policy(config);
  policy = commit_decision(policy, Difficulty::Easy, choose_difficulty(policy, config, 0).second);

  SUBCASE("correct answer raises Q of the served level") {
    const auto [next, reward] = step(policy, AnswerOutcome{0, Difficulty::Easy, true, 5.0, 30.0}, config);
    CHECK(reward.r_acc == 1.0);
    CHECK(next.qtable[Difficulty::Easy] > 0.0);
    CHECK(next.qtable[Difficulty::Easy] == doctest::Approx(0.1 * reward.total));
    CHECK(next.learner.answered_count == 1);
    CHECK(session_progress(next.learner, config.blend) == doctest::Approx(1.0 / 20.0));
    CHECK(next.ladder.questions_at_level == 1);
  }
  SUBCASE("incorrect answer moves Q toward -0.5 + gamma max Q") {
    policy.qtable.q_values = {0.4, 0.0, 0.0};
    const auto [next, reward] = step(policy, AnswerOutcome{0, Difficulty::Easy, false, 5.0, 30.0}, config);
    CHECK(reward.total == -0.5);
    CHECK(next.qtable[Difficulty::Easy] == doctest::Approx(0.4 + 0.1 * (-0.5 + 0.9 * 0.4 - 0.4)));
  }
  SUBCASE("double submit propagates") {
    const auto [next, reward] = step(policy, AnswerOutcome{0, Difficulty::Easy, true, 5.0, 30.0}, config);
    CHECK_THROWS_AS(step(next, AnswerOutcome{0, Difficulty::Easy, true, 5.0, 30.0}, config), Error);
  }
}

TEST_CASE("committed levels never jump two steps") {
  PolicyConfig config;
  config.blend.planned_questions = 200;
  std::mt19937_64 rng(5);
  std::bernoulli_distribution coin(0.5);
  for (std::uint64_t run = 0; run < 20; ++run) {
    PolicyState policy = init_policy(config);
    Difficulty prev = policy.ladder.current_level;
    for (QuestionId q = 0; q < 200; ++q) {
      auto [choice, trace] = choose_difficulty(policy, config, run * 1000 + q);
      CHECK(trace.allowed.contains(choice));
      CHECK(trace.masked.is_valid());
      CHECK(step_distance(choice, prev) <= 1);
      policy = commit_decision(policy, choice, trace);
      prev = choice;
      policy = step(policy, AnswerOutcome{q, choice, coin(rng), 10.0, 30.0}, config).first;
    }
  }
}
