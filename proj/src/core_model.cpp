#include "pal/core_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pal/errors.hpp"

namespace pal {

namespace {

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

// Mean correctness of history[first, last).
double accuracy_of(const std::vector<AnswerOutcome>& history, std::size_t first,
                   std::size_t last) {
  if (first >= last) return 0.0;
  std::size_t correct = 0;
  for (std::size_t i = first; i < last; ++i) {
    if (history[i].correct) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(last - first);
}

} // namespace

void AnswerOutcome::validate() const {
  if (!std::isfinite(response_time) || response_time < 0.0) {
    throw Error(ErrorCode::validation, "response_time must be finite and non-negative");
  }
  if (!std::isfinite(time_limit) || time_limit <= 0.0) {
    throw Error(ErrorCode::validation, "time_limit must be positive");
  }
}

void ModelConfig::validate() const {
  if (accuracy_window < 1 || streak_cap < 1 || velocity_window < 1 ||
      confidence_saturation < 1) {
    throw Error(ErrorCode::validation, "model window and cap counts must be >= 1");
  }
  if (!(ewma_beta > 0.0 && ewma_beta <= 1.0)) {
    throw Error(ErrorCode::validation, "ewma_beta must be in (0, 1]");
  }
  if (!(elo_gain > 0.0)) throw Error(ErrorCode::validation, "elo_gain must be > 0");
  if (!(skill_clamp > 0.0)) throw Error(ErrorCode::validation, "skill_clamp must be > 0");
}

LearnerState init_state(const ModelConfig& /*config*/) { return LearnerState{}; }

LearnerState update_state(const LearnerState& state, const AnswerOutcome& outcome,
                          const ItemParams& item, const ModelConfig& config) {
  outcome.validate();
  if (!state.answer_history.empty() &&
      state.answer_history.back().question_id == outcome.question_id) {
    throw Error(ErrorCode::conflict,
                "duplicate answer for question " + std::to_string(outcome.question_id));
  }

  LearnerState next = state;
  next.answer_history.push_back(outcome);
  next.answered_count = next.answer_history.size();
  const auto& history = next.answer_history;
  const std::size_t n = next.answered_count;

  const std::size_t window = std::min(n, config.accuracy_window);
  next.recent_accuracy = accuracy_of(history, n - window, n);

  const double time_frac = clamp01(outcome.response_time / outcome.time_limit);
  next.norm_response_time =
      (1.0 - config.ewma_beta) * state.norm_response_time + config.ewma_beta * time_frac;

  next.correct_streak = outcome.correct ? state.correct_streak + 1 : 0;
  next.streak_momentum =
      static_cast<double>(std::min(next.correct_streak, config.streak_cap)) /
      static_cast<double>(config.streak_cap);

  const std::size_t vw = config.velocity_window;
  if (n >= 2 * vw) {
    next.learning_velocity =
        accuracy_of(history, n - vw, n) - accuracy_of(history, n - 2 * vw, n - vw);
  } else {
    next.learning_velocity = 0.0;
  }

  next.confidence = std::min(1.0, static_cast<double>(n) /
                                      static_cast<double>(config.confidence_saturation));

  const double p = success_probability(state.skill, item);
  const double y = outcome.correct ? 1.0 : 0.0;
  next.skill = std::clamp(state.skill + config.elo_gain * (y - p), -config.skill_clamp,
                          config.skill_clamp);
  return next;
}

RewardBreakdown compute_reward(const LearnerState& state_before, const AnswerOutcome& outcome,
                               Difficulty prev_difficulty, const ModelConfig& config) {
  outcome.validate();
  RewardBreakdown r;
  if (outcome.correct) {
    r.r_acc = 1.0;
    r.r_time = 0.3 * std::max(0.0, 1.0 - clamp01(outcome.response_time / outcome.time_limit));
    r.r_prog = static_cast<int>(outcome.difficulty) > static_cast<int>(prev_difficulty) ? 0.2 : 0.0;
    // Momentum counts the streak including this answer.
    const std::size_t streak = std::min(state_before.correct_streak + 1, config.streak_cap);
    r.r_mom = 0.1 * static_cast<double>(streak) / static_cast<double>(config.streak_cap);
  } else {
    r.r_acc = -0.5;
  }
  r.total = r.r_acc + r.r_time + r.r_prog + r.r_mom;
  return r;
}

} // namespace pal
