#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "pal/difficulty.hpp"
#include "pal/irt_prior.hpp"

namespace pal {

using QuestionId = std::uint64_t;

struct AnswerOutcome {
  QuestionId question_id = 0;
  Difficulty difficulty = Difficulty::Easy;
  bool correct = false;
  double response_time = 0.0; // seconds
  double time_limit = 30.0;   // seconds

  /// Throws Error(validation) on non-finite/negative timing.
  void validate() const;

  friend bool operator==(const AnswerOutcome&, const AnswerOutcome&) = default;
};

struct ModelConfig {
  std::size_t accuracy_window = 5;
  double ewma_beta = 0.3;
  std::size_t streak_cap = 5;
  std::size_t velocity_window = 5;
  std::size_t confidence_saturation = 15;
  double elo_gain = 0.4;
  double skill_clamp = 3.0;

  void validate() const;

  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

/// The six-component learner state plus the bookkeeping it is derived from.
struct LearnerState {
  double skill = 0.0;
  double recent_accuracy = 0.5;
  double norm_response_time = 0.5;
  double streak_momentum = 0.0;
  double learning_velocity = 0.0;
  double confidence = 0.0;
  std::vector<AnswerOutcome> answer_history;
  std::size_t correct_streak = 0;
  std::size_t answered_count = 0;

  friend bool operator==(const LearnerState&, const LearnerState&) = default;
};

struct RewardBreakdown {
  double r_acc = 0.0;
  double r_time = 0.0;
  double r_prog = 0.0;
  double r_mom = 0.0;
  double total = 0.0;

  friend bool operator==(const RewardBreakdown&, const RewardBreakdown&) = default;
};

LearnerState init_state(const ModelConfig& config);

/// Folds one answer into the state. `item` are the 2PL parameters of the
/// served question and drive the skill step.
///
/// Throws Error(conflict) when `outcome` repeats the previous question id.
LearnerState update_state(const LearnerState& state, const AnswerOutcome& outcome,
                          const ItemParams& item, const ModelConfig& config);

/// Composite shaped reward for `outcome`, judged against the state before
/// the answer. `prev_difficulty` is the level of the previously answered
/// question (the outcome's own level on the first question).
RewardBreakdown compute_reward(const LearnerState& state_before,
                               const AnswerOutcome& outcome, Difficulty prev_difficulty,
                               const ModelConfig& config);

} // namespace pal
