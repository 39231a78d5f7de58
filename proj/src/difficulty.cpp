#include "pal/difficulty.hpp"

#include <cmath>

namespace pal {

std::string_view to_string(Difficulty d) noexcept {
  switch (d) {
  case Difficulty::Easy: return "easy";
  case Difficulty::Medium: return "medium";
  case Difficulty::Hard: return "hard";
  }
  return "easy";
}

std::optional<Difficulty> parse_difficulty(std::string_view name) noexcept {
  if (name == "easy") return Difficulty::Easy;
  if (name == "medium") return Difficulty::Medium;
  if (name == "hard") return Difficulty::Hard;
  return std::nullopt;
}

bool DifficultyDistribution::is_valid(double tol) const noexcept {
  for (double v : p) {
    if (!std::isfinite(v) || v < 0.0) return false;
  }
  return std::abs(sum() - 1.0) <= tol;
}

} // namespace pal
