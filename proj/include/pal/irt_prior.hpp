#pragma once

#include <array>
#include <cstddef>
#include <utility>

#include "pal/difficulty.hpp"

namespace pal {

struct LearnerState;

/// 2PL item parameters: discrimination a > 0 and location b (logit scale).
struct ItemParams {
  double discrimination = 1.2;
  double difficulty_location = 0.0;

  friend bool operator==(const ItemParams&, const ItemParams&) = default;
};

enum class PriorMode { literal_2pl, target_zone };

struct PriorConfig {
  std::array<ItemParams, 3> params_per_level{
      ItemParams{1.2, -1.0}, ItemParams{1.2, 0.0}, ItemParams{1.2, 1.0}};
  double promote_threshold = 0.75;
  double demote_threshold = 0.35;
  std::size_t cooldown_len = 2;
  std::size_t hold_len = 3;
  PriorMode prior_mode = PriorMode::target_zone;
  double target_success = 0.7;
  double zone_sharpness = 0.1;

  const ItemParams& params(Difficulty d) const noexcept {
    return params_per_level[index_of(d)];
  }

  /// Throws Error(validation) when an invariant is broken.
  void validate() const;

  friend bool operator==(const PriorConfig&, const PriorConfig&) = default;
};

/// Position on the stability ladder. Counters are in answered questions.
struct LadderState {
  Difficulty current_level = Difficulty::Easy;
  std::size_t questions_since_change = 0;
  std::size_t questions_at_level = 0;

  friend bool operator==(const LadderState&, const LadderState&) = default;
};

/// sigma(a (theta - b)).
double success_probability(double theta, const ItemParams& item) noexcept;

/// Prior over the three levels, in the configured mode. Every entry is
/// strictly positive and the vector sums to one.
DifficultyDistribution stat_distribution(double skill, const PriorConfig& config);
DifficultyDistribution stat_distribution(const LearnerState& state,
                                         const PriorConfig& config);

/// Levels reachable from `ladder` given the learner's recent accuracy:
/// the current level plus each adjacent level whose move is eligible.
///
/// Promotion needs the promote threshold, the cooldown and the hold period.
/// Demotion needs the demote threshold and the cooldown only.
DifficultySet allowed_levels(const LadderState& ladder, double recent_accuracy,
                             const PriorConfig& config) noexcept;

/// Counts one more answered question on the ladder.
LadderState advance_ladder(LadderState ladder) noexcept;

/// Moves the ladder to `level`, resetting both counters when it changes.
LadderState commit_level(LadderState ladder, Difficulty level) noexcept;

/// Eligibility is judged on the incoming counters; the returned ladder has
/// its counters advanced by one question.
std::pair<LadderState, DifficultySet> ladder_step(const LadderState& ladder,
                                                  double recent_accuracy,
                                                  const PriorConfig& config) noexcept;

} // namespace pal
