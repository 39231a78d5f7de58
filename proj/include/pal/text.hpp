#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace pal::text {

struct Sentence {
  std::string text;
  std::size_t begin = 0; // byte offset of the first character in the source
  std::size_t end = 0;   // one past the last character

  friend bool operator==(const Sentence&, const Sentence&) = default;
};

/// Splits at '.', '!' or '?' when followed by whitespace and an uppercase
/// letter, or by the end of the text. Sentences with fewer than
/// `min_tokens` whitespace-separated tokens are merged into the previous one.
std::vector<Sentence> segment_sentences(std::string_view text, std::size_t min_tokens = 3);

std::string_view trim(std::string_view s) noexcept;
std::string to_lower_ascii(std::string_view s);
std::size_t count_tokens(std::string_view s) noexcept;

/// Lowercase alphanumeric runs of `s` (ASCII punctuation and whitespace
/// separate tokens; bytes >= 0x80 are kept as token characters).
std::vector<std::string> word_tokens(std::string_view s);

/// True when `phrase` occurs in `lower_text` bounded by non-alphanumerics.
bool contains_phrase(std::string_view lower_text, std::string_view phrase) noexcept;

/// FNV-1a, 64-bit.
std::uint64_t fnv1a64(std::string_view s) noexcept;

} // namespace pal::text
