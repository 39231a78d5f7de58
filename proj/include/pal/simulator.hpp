#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pal/bank.hpp"
#include "pal/core_model.hpp"
#include "pal/hybrid_policy.hpp"
#include "pal/irt_prior.hpp"
#include "pal/rng.hpp"

namespace pal {

enum class LearnerKind { fixed_ability, improving, noisy };

struct SyntheticLearner {
  double true_theta = 0.0;
  LearnerKind kind = LearnerKind::fixed_ability;
  double delta_per_correct = 0.0; // improving
  double flip_prob = 0.0;         // noisy
  double base_response_time = 0.4; // fraction of the time limit

  void validate() const;
  /// "static:2", "improving:0,0.05", "noisy:1,0.1"
  std::string label() const;
};

/// Parses the label form above. Throws Error(validation).
SyntheticLearner parse_learner(std::string_view spec);

/// One 2PL draw. Always consumes exactly two uniforms from `rng` (outcome,
/// flip) so streams stay aligned across learner kinds. An improving learner
/// gains delta_per_correct after a correct answer.
AnswerOutcome simulate_response(SyntheticLearner& learner, const ItemParams& item,
                                Difficulty difficulty, double time_limit, SplitMix64& rng);

struct SimMetrics {
  double time_in_zone = 0.0;
  std::size_t level_switches = 0;
  double cumulative_reward = 0.0;
  double final_theta_error = 0.0;
  std::vector<Difficulty> level_trace;
  std::array<std::optional<std::size_t>, 3> first_reach{}; // 1-based question number

  friend bool operator==(const SimMetrics&, const SimMetrics&) = default;
};

inline constexpr double kZoneLow = 0.6;
inline constexpr double kZoneHigh = 0.85;

/// `per_level` questions at each difficulty, four options, key at index 0.
Bank uniform_bank(std::size_t per_level);

/// Full in-memory session against a synthetic learner over
/// uniform_bank(n_questions) with n_questions planned.
SimMetrics run_episode(const PolicyConfig& config, SyntheticLearner learner, std::size_t n_questions,
                       std::uint64_t seed);

/// Same loop with correctness taken from `script(answer_index)` and a
/// nominal learner at `theta` for the zone metric.
SimMetrics run_scripted_episode(const PolicyConfig& config, const std::function<bool(std::size_t)>& script,
                                std::size_t n_questions, std::uint64_t seed, double theta = 0.0);

struct PolicySpec {
  std::string name;
  PolicyMode mode = PolicyMode::hybrid;
  Difficulty fixed_level = Difficulty::Easy;

  PolicyConfig apply(PolicyConfig base) const;
};

/// "hybrid", "stat", "rl", "fixed:<easy|medium|hard>". Throws Error(validation).
PolicySpec parse_policy(std::string_view spec);

/// "a..b" inclusive or a single seed. Throws Error(validation).
std::vector<std::uint64_t> parse_seed_range(std::string_view spec);

struct MetricSummary {
  double mean = 0.0;
  double stddev = 0.0; // population
};

struct ComparisonRow {
  std::string policy;
  std::string learner;
  std::size_t episodes = 0;
  MetricSummary time_in_zone;
  MetricSummary level_switches;
  MetricSummary cumulative_reward;
  MetricSummary final_theta_error;
};

struct ComparisonReport {
  std::vector<ComparisonRow> rows;

  std::string to_text() const;
  std::string to_csv() const;
};

/// Every (policy, learner) pair over every seed. Throws Error(validation)
/// when any list is empty.
ComparisonReport compare_policies(const std::vector<PolicySpec>& policies,
                                  const std::vector<SyntheticLearner>& population,
                                  const std::vector<std::uint64_t>& seeds, std::size_t n_questions,
                                  const PolicyConfig& base = {});

} // namespace pal
