#pragma once

#include <cstdint>
#include <optional>
#include <utility>

#include "pal/core_model.hpp"
#include "pal/difficulty.hpp"
#include "pal/irt_prior.hpp"
#include "pal/rl_head.hpp"

namespace pal {

struct BlendConfig {
  double w0 = 0.2;
  double kappa = 0.6;
  double w_max = 0.8;
  std::size_t planned_questions = 20;

  void validate() const;

  friend bool operator==(const BlendConfig&, const BlendConfig&) = default;
};

/// Which heads drive the choice. `hybrid` is the blended policy; the others
/// exist for ablations (stat_only pins w to 0, rl_only pins w to 1, fixed
/// always serves `PolicyConfig::fixed_level`).
enum class PolicyMode { hybrid, stat_only, rl_only, fixed };

struct PolicyConfig {
  ModelConfig model;
  PriorConfig prior;
  BanditConfig bandit;
  BlendConfig blend;
  PolicyMode mode = PolicyMode::hybrid;
  Difficulty fixed_level = Difficulty::Easy;
  Difficulty start_level = Difficulty::Easy;

  void validate() const;

  friend bool operator==(const PolicyConfig&, const PolicyConfig&) = default;
};

/// Everything that went into one difficulty decision.
struct DecisionTrace {
  DifficultyDistribution p_stat;
  DifficultyDistribution p_rl;
  double w = 0.0;
  DifficultySet allowed;
  DifficultyDistribution masked;
  Difficulty action = Difficulty::Easy;
  double rng_draw = 0.0;
  std::uint64_t seed = 0;

  friend bool operator==(const DecisionTrace&, const DecisionTrace&) = default;
};

struct PolicyState {
  LadderState ladder;
  QTable qtable;
  LearnerState learner;
  Difficulty last_served_difficulty = Difficulty::Easy;
  std::optional<Difficulty> last_answered_difficulty;
  std::optional<DecisionTrace> decision_trace;

  friend bool operator==(const PolicyState&, const PolicyState&) = default;
};

PolicyState init_policy(const PolicyConfig& config);

/// min(w_max, w0 + kappa * confidence * progress).
double blend_weight(double confidence, double progress, const BlendConfig& config) noexcept;

/// (1 - w) p_stat + w p_rl.
DifficultyDistribution blend(const DifficultyDistribution& p_stat,
                             const DifficultyDistribution& p_rl, double w) noexcept;

/// Zeroes levels outside `allowed` and renormalizes; a point mass on
/// `current` when nothing allowed carries mass.
DifficultyDistribution apply_mask(const DifficultyDistribution& dist, DifficultySet allowed,
                                  Difficulty current) noexcept;

/// Inverse CDF over (Easy, Medium, Hard). Zero-mass levels are never chosen.
Difficulty sample_inverse_cdf(const DifficultyDistribution& dist, double draw) noexcept;

/// answered_count / planned_questions, clamped to [0, 1].
double session_progress(const LearnerState& learner, const BlendConfig& config) noexcept;

/// Picks the next difficulty. Pure: the same (policy, seed) always yields
/// the same choice and trace.
std::pair<Difficulty, DecisionTrace> choose_difficulty(const PolicyState& policy,
                                                       const PolicyConfig& config,
                                                       std::uint64_t rng_seed);

/// Records a decision on the policy: the ladder moves to the chosen level
/// (resetting its counters on a change) and the trace is kept.
PolicyState commit_decision(PolicyState policy, Difficulty choice, DecisionTrace trace);

/// Applies one answer: reward, learner update, Q update on the answered
/// level, ladder counters. Propagates the double-submit conflict.
std::pair<PolicyState, RewardBreakdown> step(const PolicyState& policy,
                                             const AnswerOutcome& outcome,
                                             const PolicyConfig& config);

} // namespace pal
