#pragma once

#include <array>
#include <cstddef>
#include <optional>

#include "pal/difficulty.hpp"

namespace pal {

struct BanditConfig {
  double alpha = 0.1;
  double gamma = 0.9;
  double epsilon_init = 0.3;
  double epsilon_decay = 0.99;
  double epsilon_floor = 0.05;

  void validate() const;

  friend bool operator==(const BanditConfig&, const BanditConfig&) = default;
};

/// Stateless action values for the three difficulty actions.
struct QTable {
  std::array<double, 3> q_values{0.0, 0.0, 0.0};
  double epsilon = 0.3;
  std::size_t updates_seen = 0;

  double operator[](Difficulty d) const noexcept { return q_values[index_of(d)]; }

  friend bool operator==(const QTable&, const QTable&) = default;
};

QTable init_qtable(const BanditConfig& config) noexcept;

/// Greedy action. Ties go to `preferred` when it is among the tied set,
/// otherwise to the easiest tied action.
Difficulty greedy_action(const QTable& table,
                         std::optional<Difficulty> preferred = std::nullopt) noexcept;

/// epsilon-greedy distribution: 1 - eps + eps/3 on the greedy action and
/// eps/3 on each of the others.
DifficultyDistribution rl_distribution(const QTable& table,
                                       std::optional<Difficulty> preferred = std::nullopt) noexcept;

/// Q(a) += alpha * (reward + gamma * max Q - Q(a)), max taken over the
/// table before the update; epsilon decays toward its floor.
///
/// Throws Error(validation) for a non-finite reward.
QTable q_update(const QTable& table, Difficulty action, double reward,
                const BanditConfig& config);

} // namespace pal
