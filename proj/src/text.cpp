#include "pal/text.hpp"

#include <cctype>

namespace pal::text {

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
bool is_upper(char c) { return std::isupper(static_cast<unsigned char>(c)) != 0; }
bool is_alnum(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }
bool is_terminal(char c) { return c == '.' || c == '!' || c == '?'; }
bool is_closer(char c) { return c == '"' || c == '\'' || c == ')' || c == ']'; }

} // namespace

std::string_view trim(std::string_view s) noexcept {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

std::string to_lower_ascii(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::size_t count_tokens(std::string_view s) noexcept {
  std::size_t count = 0;
  bool in_token = false;
  for (char c : s) {
    if (is_space(c)) {
      in_token = false;
    } else if (!in_token) {
      in_token = true;
      ++count;
    }
  }
  return count;
}

std::vector<std::string> word_tokens(std::string_view s) {
  std::vector<std::string> tokens;
  std::string current;
  for (char c : s) {
    const auto u = static_cast<unsigned char>(c);
    if (u >= 0x80 || std::isalnum(u)) {
      current.push_back(static_cast<char>(std::tolower(u)));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

bool contains_phrase(std::string_view lower_text, std::string_view phrase) noexcept {
  if (phrase.empty()) return false;
  std::size_t pos = lower_text.find(phrase);
  while (pos != std::string_view::npos) {
    const bool left_ok = pos == 0 || !is_alnum(lower_text[pos - 1]);
    const std::size_t after = pos + phrase.size();
    const bool right_ok = after >= lower_text.size() || !is_alnum(lower_text[after]);
    if (left_ok && right_ok) return true;
    pos = lower_text.find(phrase, pos + 1);
  }
  return false;
}

std::uint64_t fnv1a64(std::string_view s) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::vector<Sentence> segment_sentences(std::string_view source, std::size_t min_tokens) {
  // Raw split points first, as [begin, end) ranges.
  std::vector<std::pair<std::size_t, std::size_t>> ranges;
  std::size_t start = 0;
  const std::size_t n = source.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (!is_terminal(source[i])) continue;
    std::size_t j = i + 1;
    while (j < n && (is_terminal(source[j]) || is_closer(source[j]))) ++j;
    std::size_t k = j;
    while (k < n && is_space(source[k])) ++k;
    const bool at_end = k == n;
    const bool before_upper = k > j && k < n && is_upper(source[k]);
    if (at_end || before_upper) {
      ranges.emplace_back(start, j);
      start = k;
      i = k == 0 ? 0 : k - 1;
    } else {
      i = j - 1;
    }
  }
  if (start < n) ranges.emplace_back(start, n);

  std::vector<Sentence> out;
  for (auto [b, e] : ranges) {
    // Trim both ends, keeping offsets aligned with the source.
    while (b < e && is_space(source[b])) ++b;
    while (e > b && is_space(source[e - 1])) --e;
    if (b == e) continue;
    const std::string_view piece = source.substr(b, e - b);
    if (!out.empty() && count_tokens(piece) < min_tokens) {
      Sentence& prev = out.back();
      prev.end = e;
      prev.text = std::string(source.substr(prev.begin, prev.end - prev.begin));
      continue;
    }
    out.push_back(Sentence{std::string(piece), b, e});
  }
  return out;
}

} // namespace pal::text
