#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace pal {

enum class Difficulty : int { Easy = 0, Medium = 1, Hard = 2 };

inline constexpr std::array<Difficulty, 3> kAllDifficulties{
    Difficulty::Easy, Difficulty::Medium, Difficulty::Hard};

constexpr std::size_t index_of(Difficulty d) noexcept {
  return static_cast<std::size_t>(d);
}

constexpr Difficulty difficulty_at(std::size_t i) noexcept {
  return static_cast<Difficulty>(static_cast<int>(i));
}

constexpr int step_distance(Difficulty a, Difficulty b) noexcept {
  const int delta = static_cast<int>(a) - static_cast<int>(b);
  return delta < 0 ? -delta : delta;
}

/// Lowercase wire name ("easy", "medium", "hard").
std::string_view to_string(Difficulty d) noexcept;
std::optional<Difficulty> parse_difficulty(std::string_view name) noexcept;

/// Set of difficulty levels as a three-bit mask.
class DifficultySet {
public:
  constexpr DifficultySet() = default;

  static constexpr DifficultySet all() noexcept { return DifficultySet{0b111}; }
  static constexpr DifficultySet only(Difficulty d) noexcept {
    return DifficultySet{static_cast<unsigned>(1u << index_of(d))};
  }

  constexpr void insert(Difficulty d) noexcept { bits_ |= 1u << index_of(d); }
  constexpr bool contains(Difficulty d) const noexcept {
    return (bits_ >> index_of(d)) & 1u;
  }
  constexpr std::size_t size() const noexcept {
    return ((bits_ >> 0) & 1u) + ((bits_ >> 1) & 1u) + ((bits_ >> 2) & 1u);
  }
  constexpr unsigned bits() const noexcept { return bits_; }

  friend constexpr bool operator==(DifficultySet, DifficultySet) = default;

private:
  constexpr explicit DifficultySet(unsigned bits) : bits_(bits) {}
  unsigned bits_ = 0;
};

/// Probability vector over (Easy, Medium, Hard). Used for the statistical
/// prior, the RL head's distribution and the blended/masked policy.
struct DifficultyDistribution {
  std::array<double, 3> p{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};

  double operator[](Difficulty d) const noexcept { return p[index_of(d)]; }
  double& operator[](Difficulty d) noexcept { return p[index_of(d)]; }

  double sum() const noexcept { return p[0] + p[1] + p[2]; }
  /// Non-negative entries summing to one within `tol`.
  bool is_valid(double tol = 1e-9) const noexcept;

  friend bool operator==(const DifficultyDistribution&,
                         const DifficultyDistribution&) = default;
};

} // namespace pal
