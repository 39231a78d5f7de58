#include "pal/hybrid_policy.hpp"

#include <algorithm>

#include "pal/errors.hpp"
#include "pal/rng.hpp"

namespace pal {

void BlendConfig::validate() const {
  if (!(0.0 <= w0 && w0 <= w_max && w_max <= 1.0)) {
    throw Error(ErrorCode::validation, "blend weights must satisfy 0 <= w0 <= w_max <= 1");
  }
  if (!(kappa >= 0.0)) throw Error(ErrorCode::validation, "kappa must be >= 0");
  if (planned_questions < 1) throw Error(ErrorCode::validation, "planned_questions must be >= 1");
}

void PolicyConfig::validate() const {
  model.validate();
  prior.validate();
  bandit.validate();
  blend.validate();
}

PolicyState init_policy(const PolicyConfig& config) {
  PolicyState policy;
  policy.learner = init_state(config.model);
  policy.qtable = init_qtable(config.bandit);
  const Difficulty start =
      config.mode == PolicyMode::fixed ? config.fixed_level : config.start_level;
  policy.ladder.current_level = start;
  policy.last_served_difficulty = start;
  return policy;
}

double blend_weight(double confidence, double progress, const BlendConfig& config) noexcept {
  return std::min(config.w_max, config.w0 + config.kappa * confidence * progress);
}

DifficultyDistribution blend(const DifficultyDistribution& p_stat,
                             const DifficultyDistribution& p_rl, double w) noexcept {
  DifficultyDistribution out;
  for (std::size_t i = 0; i < 3; ++i) out.p[i] = (1.0 - w) * p_stat.p[i] + w * p_rl.p[i];
  return out;
}

DifficultyDistribution apply_mask(const DifficultyDistribution& dist, DifficultySet allowed,
                                  Difficulty current) noexcept {
  DifficultyDistribution out;
  double mass = 0.0;
  for (Difficulty d : kAllDifficulties) {
    out[d] = allowed.contains(d) ? dist[d] : 0.0;
    mass += out[d];
  }
  if (!(mass > 0.0)) {
    out.p = {0.0, 0.0, 0.0};
    out[current] = 1.0;
    return out;
  }
  for (double& v : out.p) v /= mass;
  return out;
}

Difficulty sample_inverse_cdf(const DifficultyDistribution& dist, double draw) noexcept {
  double cumulative = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < 3; ++i) {
    if (dist.p[i] <= 0.0) continue;
    last_positive = i;
    cumulative += dist.p[i];
    if (draw < cumulative) return difficulty_at(i);
  }
  // Rounding left the cumulative sum just under the draw.
  return difficulty_at(last_positive);
}

double session_progress(const LearnerState& learner, const BlendConfig& config) noexcept {
  const double progress = static_cast<double>(learner.answered_count) /
                          static_cast<double>(std::max<std::size_t>(1, config.planned_questions));
  return std::clamp(progress, 0.0, 1.0);
}

std::pair<Difficulty, DecisionTrace> choose_difficulty(const PolicyState& policy,
                                                       const PolicyConfig& config,
                                                       std::uint64_t rng_seed) {
  DecisionTrace trace;
  trace.seed = rng_seed;
  trace.rng_draw = unit_interval(splitmix64(rng_seed));
  trace.p_stat = stat_distribution(policy.learner, config.prior);
  trace.p_rl = rl_distribution(policy.qtable, policy.ladder.current_level);

  switch (config.mode) {
  case PolicyMode::hybrid:
    trace.w = blend_weight(policy.learner.confidence, session_progress(policy.learner, config.blend),
                           config.blend);
    break;
  case PolicyMode::stat_only: trace.w = 0.0; break;
  case PolicyMode::rl_only: trace.w = 1.0; break;
  case PolicyMode::fixed: trace.w = 0.0; break;
  }

  if (config.mode == PolicyMode::fixed) {
    trace.allowed = DifficultySet::only(config.fixed_level);
  } else {
    trace.allowed =
        allowed_levels(policy.ladder, policy.learner.recent_accuracy, config.prior);
  }
  trace.masked = apply_mask(blend(trace.p_stat, trace.p_rl, trace.w), trace.allowed,
                            policy.ladder.current_level);
  trace.action = sample_inverse_cdf(trace.masked, trace.rng_draw);
  return {trace.action, trace};
}

PolicyState commit_decision(PolicyState policy, Difficulty choice, DecisionTrace trace) {
  policy.ladder = commit_level(policy.ladder, choice);
  policy.last_served_difficulty = choice;
  policy.decision_trace = std::move(trace);
  return policy;
}

std::pair<PolicyState, RewardBreakdown> step(const PolicyState& policy,
                                             const AnswerOutcome& outcome,
                                             const PolicyConfig& config) {
  const Difficulty prev = policy.last_answered_difficulty.value_or(outcome.difficulty);
  RewardBreakdown reward = compute_reward(policy.learner, outcome, prev, config.model);

  PolicyState next = policy;
  next.learner = update_state(policy.learner, outcome, config.prior.params(outcome.difficulty),
                              config.model);
  next.qtable = q_update(policy.qtable, outcome.difficulty, reward.total, config.bandit);
  next.ladder = advance_ladder(policy.ladder);
  next.last_answered_difficulty = outcome.difficulty;
  return {std::move(next), reward};
}

} // namespace pal
