#include "pal/irt_prior.hpp"

#include <algorithm>
#include <cmath>

#include "pal/core_model.hpp"
#include "pal/errors.hpp"

namespace pal {

void PriorConfig::validate() const {
  for (const auto& item : params_per_level) {
    if (!(item.discrimination > 0.0) || !std::isfinite(item.difficulty_location)) {
      throw Error(ErrorCode::validation, "item discrimination must be > 0");
    }
  }
  if (!(0.0 <= demote_threshold && demote_threshold < promote_threshold &&
        promote_threshold <= 1.0)) {
    throw Error(ErrorCode::validation,
                "thresholds must satisfy 0 <= demote < promote <= 1");
  }
  if (!(zone_sharpness > 0.0)) throw Error(ErrorCode::validation, "zone_sharpness must be > 0");
  if (!(target_success > 0.0 && target_success < 1.0)) {
    throw Error(ErrorCode::validation, "target_success must be in (0, 1)");
  }
}

double success_probability(double theta, const ItemParams& item) noexcept {
  const double z = item.discrimination * (theta - item.difficulty_location);
  // Branches keep exp() from overflowing for large |z|.
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

DifficultyDistribution stat_distribution(double skill, const PriorConfig& config) {
  std::array<double, 3> weight{};
  if (config.prior_mode == PriorMode::literal_2pl) {
    for (std::size_t i = 0; i < 3; ++i) {
      weight[i] = success_probability(skill, config.params_per_level[i]);
    }
  } else {
    std::array<double, 3> deviation{};
    for (std::size_t i = 0; i < 3; ++i) {
      deviation[i] = std::abs(success_probability(skill, config.params_per_level[i]) -
                              config.target_success);
    }
    const double closest = *std::min_element(deviation.begin(), deviation.end());
    for (std::size_t i = 0; i < 3; ++i) {
      weight[i] = std::exp(-(deviation[i] - closest) / config.zone_sharpness);
    }
  }
  const double total = weight[0] + weight[1] + weight[2];
  DifficultyDistribution out;
  for (std::size_t i = 0; i < 3; ++i) out.p[i] = weight[i] / total;
  return out;
}

DifficultyDistribution stat_distribution(const LearnerState& state, const PriorConfig& config) {
  return stat_distribution(state.skill, config);
}

DifficultySet allowed_levels(const LadderState& ladder, double recent_accuracy,
                             const PriorConfig& config) noexcept {
  DifficultySet allowed = DifficultySet::only(ladder.current_level);
  const bool cooled = ladder.questions_since_change >= config.cooldown_len;
  const int level = static_cast<int>(ladder.current_level);

  if (recent_accuracy >= config.promote_threshold && cooled &&
      ladder.questions_at_level >= config.hold_len && ladder.current_level != Difficulty::Hard) {
    allowed.insert(static_cast<Difficulty>(level + 1));
  }
  if (recent_accuracy <= config.demote_threshold && cooled &&
      ladder.current_level != Difficulty::Easy) {
    allowed.insert(static_cast<Difficulty>(level - 1));
  }
  return allowed;
}

LadderState advance_ladder(LadderState ladder) noexcept {
  ++ladder.questions_since_change;
  ++ladder.questions_at_level;
  return ladder;
}

LadderState commit_level(LadderState ladder, Difficulty level) noexcept {
  if (level != ladder.current_level) {
    ladder.current_level = level;
    ladder.questions_since_change = 0;
    ladder.questions_at_level = 0;
  }
  return ladder;
}

std::pair<LadderState, DifficultySet> ladder_step(const LadderState& ladder,
                                                  double recent_accuracy,
                                                  const PriorConfig& config) noexcept {
  return {advance_ladder(ladder), allowed_levels(ladder, recent_accuracy, config)};
}

} // namespace pal
