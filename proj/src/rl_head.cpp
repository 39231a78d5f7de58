#include "pal/rl_head.hpp"

#include <algorithm>
#include <cmath>

#include "pal/errors.hpp"

namespace pal {

void BanditConfig::validate() const {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw Error(ErrorCode::validation, "alpha must be in (0, 1]");
  if (!(gamma >= 0.0 && gamma < 1.0)) throw Error(ErrorCode::validation, "gamma must be in [0, 1)");
  if (!(0.0 <= epsilon_floor && epsilon_floor <= epsilon_init && epsilon_init <= 1.0)) {
    throw Error(ErrorCode::validation, "epsilon bounds must satisfy 0 <= floor <= init <= 1");
  }
  if (!(epsilon_decay > 0.0 && epsilon_decay <= 1.0)) {
    throw Error(ErrorCode::validation, "epsilon_decay must be in (0, 1]");
  }
}

QTable init_qtable(const BanditConfig& config) noexcept {
  QTable table;
  table.epsilon = config.epsilon_init;
  return table;
}

Difficulty greedy_action(const QTable& table, std::optional<Difficulty> preferred) noexcept {
  const double best = *std::max_element(table.q_values.begin(), table.q_values.end());
  if (preferred && table[*preferred] == best) return *preferred;
  for (Difficulty d : kAllDifficulties) {
    if (table[d] == best) return d;
  }
  return Difficulty::Easy;
}

DifficultyDistribution rl_distribution(const QTable& table,
                                       std::optional<Difficulty> preferred) noexcept {
  const double eps = table.epsilon;
  const Difficulty greedy = greedy_action(table, preferred);
  DifficultyDistribution out;
  for (Difficulty d : kAllDifficulties) {
    out[d] = d == greedy ? 1.0 - eps + eps / 3.0 : eps / 3.0;
  }
  return out;
}

QTable q_update(const QTable& table, Difficulty action, double reward,
                const BanditConfig& config) {
  if (!std::isfinite(reward)) throw Error(ErrorCode::validation, "reward must be finite");
  QTable next = table;
  const double max_q = *std::max_element(table.q_values.begin(), table.q_values.end());
  const double current = table[action];
  next.q_values[index_of(action)] =
      current + config.alpha * (reward + config.gamma * max_q - current);
  next.epsilon = std::max(config.epsilon_floor, table.epsilon * config.epsilon_decay);
  ++next.updates_seen;
  return next;
}

} // namespace pal
