#include "pal/transcript.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include "json.hpp"

#include "pal/errors.hpp"
#include "pal/text.hpp"

namespace pal {

namespace {

struct Line {
  std::string_view text;
  std::size_t number; // 1-based
};

std::vector<Line> split_lines(std::string_view bytes) {
  if (bytes.substr(0, 3) == "\xEF\xBB\xBF") bytes.remove_prefix(3);
  std::vector<Line> lines;
  std::size_t number = 1;
  while (!bytes.empty()) {
    const std::size_t nl = bytes.find('\n');
    std::string_view line = bytes.substr(0, nl);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back({line, number++});
    if (nl == std::string_view::npos) break;
    bytes.remove_prefix(nl + 1);
  }
  return lines;
}

bool all_digits(std::string_view s) {
  return !s.empty() &&
         std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

[[noreturn]] void fail_line(ErrorCode code, std::size_t line, const std::string& what) {
  throw Error(code, "line " + std::to_string(line) + ": " + what);
}

struct Cue {
  long long start_ms;
  long long end_ms;
  std::string text;
  std::size_t line;
};

// Parses "start --> end[ settings]".
std::pair<long long, long long> parse_timing(std::string_view line, std::size_t number) {
  const std::size_t arrow = line.find("-->");
  const std::string_view left = text::trim(line.substr(0, arrow));
  std::string_view right = text::trim(line.substr(arrow + 3));
  const std::size_t space = right.find_first_of(" \t");
  if (space != std::string_view::npos) right = right.substr(0, space);
  const auto start = parse_cue_timestamp_ms(left);
  const auto end = parse_cue_timestamp_ms(right);
  if (!start || !end) fail_line(ErrorCode::parse, number, "malformed timestamp");
  if (*end < *start) fail_line(ErrorCode::ordering, number, "cue ends before it starts");
  return {*start, *end};
}

std::string strip_vtt_markup(std::string_view s) {
  std::string out;
  bool in_tag = false;
  for (char c : s) {
    if (c == '<') in_tag = true;
    else if (c == '>' && in_tag) in_tag = false;
    else if (!in_tag) out.push_back(c);
  }
  static const std::pair<std::string_view, std::string_view> entities[] = {
      {"&amp;", "&"}, {"&lt;", "<"}, {"&gt;", ">"}, {"&nbsp;", " "},
      {"&lrm;", ""},  {"&rlm;", ""}};
  for (const auto& [from, to] : entities) {
    std::size_t pos = 0;
    while ((pos = out.find(from, pos)) != std::string::npos) {
      out.replace(pos, from.size(), to);
      pos += to.size();
    }
  }
  return out;
}

void append_text(std::string& dst, std::string_view line) {
  const std::string_view t = text::trim(line);
  if (t.empty()) return;
  if (!dst.empty()) dst.push_back(' ');
  dst.append(t);
}

std::vector<Cue> parse_srt(const std::vector<Line>& lines) {
  std::vector<Cue> cues;
  std::size_t i = 0;
  while (i < lines.size()) {
    if (text::trim(lines[i].text).empty()) {
      ++i;
      continue;
    }
    if (all_digits(text::trim(lines[i].text)) && lines[i].text.find("-->") == std::string_view::npos) {
      ++i;
      if (i >= lines.size()) fail_line(ErrorCode::parse, lines[i - 1].number, "cue index without timing");
    }
    if (lines[i].text.find("-->") == std::string_view::npos) {
      fail_line(ErrorCode::parse, lines[i].number, "expected cue timing line");
    }
    auto [start, end] = parse_timing(lines[i].text, lines[i].number);
    Cue cue{start, end, {}, lines[i].number};
    ++i;
    while (i < lines.size() && !text::trim(lines[i].text).empty()) {
      append_text(cue.text, lines[i].text);
      ++i;
    }
    cues.push_back(std::move(cue));
  }
  return cues;
}

std::vector<Cue> parse_vtt(const std::vector<Line>& lines) {
  if (lines.empty() || lines.front().text.substr(0, 6) != "WEBVTT") {
    fail_line(ErrorCode::parse, 1, "missing WEBVTT header");
  }
  std::size_t i = 1;
  // Header block runs to the first blank line.
  while (i < lines.size() && !text::trim(lines[i].text).empty()) ++i;

  std::vector<Cue> cues;
  while (i < lines.size()) {
    const std::string_view first = text::trim(lines[i].text);
    if (first.empty()) {
      ++i;
      continue;
    }
    if (first.substr(0, 4) == "NOTE" || first.substr(0, 5) == "STYLE" ||
        first.substr(0, 6) == "REGION") {
      while (i < lines.size() && !text::trim(lines[i].text).empty()) ++i;
      continue;
    }
    if (lines[i].text.find("-->") == std::string_view::npos) {
      ++i; // cue identifier
      if (i >= lines.size() || lines[i].text.find("-->") == std::string_view::npos) {
        fail_line(ErrorCode::parse, i < lines.size() ? lines[i].number : lines[i - 1].number,
                  "expected cue timing line");
      }
    }
    auto [start, end] = parse_timing(lines[i].text, lines[i].number);
    Cue cue{start, end, {}, lines[i].number};
    ++i;
    while (i < lines.size() && !text::trim(lines[i].text).empty()) {
      append_text(cue.text, strip_vtt_markup(lines[i].text));
      ++i;
    }
    cues.push_back(std::move(cue));
  }
  return cues;
}

Transcript parse_plain_json(std::string_view bytes) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(bytes);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::parse, std::string("invalid JSON transcript: ") + e.what());
  }
  if (!doc.is_array()) throw Error(ErrorCode::parse, "JSON transcript must be an array");
  Transcript out;
  double prev = -1.0;
  for (std::size_t k = 0; k < doc.size(); ++k) {
    const auto& item = doc[k];
    const std::string where = "entry " + std::to_string(k) + ": ";
    if (!item.is_object() || !item.contains("t") || !item.contains("u") ||
        !item["t"].is_number() || !item["u"].is_string()) {
      throw Error(ErrorCode::parse, where + "expected {\"t\": number, \"u\": string}");
    }
    const double t = item["t"].get<double>();
    if (!std::isfinite(t) || t < 0.0) throw Error(ErrorCode::parse, where + "t must be >= 0");
    if (t < prev) throw Error(ErrorCode::ordering, where + "timestamps must be non-decreasing");
    prev = t;
    const std::string u(text::trim(item["u"].get<std::string>()));
    if (u.empty()) continue;
    out.segments.push_back({t, u, out.segments.size()});
  }
  return out;
}

} // namespace

std::optional<TranscriptFormat> parse_transcript_format(std::string_view name) noexcept {
  if (name == "srt") return TranscriptFormat::srt;
  if (name == "vtt") return TranscriptFormat::vtt;
  if (name == "json" || name == "plain_json") return TranscriptFormat::plain_json;
  return std::nullopt;
}

std::optional<long long> parse_cue_timestamp_ms(std::string_view s) noexcept {
  const std::size_t frac = s.find_last_of(",.");
  if (frac == std::string_view::npos) return std::nullopt;
  const std::string_view millis = s.substr(frac + 1);
  if (millis.size() != 3 || !all_digits(millis)) return std::nullopt;

  std::vector<std::string_view> parts;
  std::string_view clock = s.substr(0, frac);
  while (true) {
    const std::size_t colon = clock.find(':');
    parts.push_back(clock.substr(0, colon));
    if (colon == std::string_view::npos) break;
    clock.remove_prefix(colon + 1);
  }
  if (parts.size() < 2 || parts.size() > 3) return std::nullopt;
  for (const auto& p : parts) {
    if (!all_digits(p) || p.size() > 9) return std::nullopt;
  }
  auto value = [](std::string_view p) { return std::stoll(std::string(p)); };
  const std::size_t m = parts.size() - 2;
  const long long hours = parts.size() == 3 ? value(parts[0]) : 0;
  const long long minutes = value(parts[m]);
  const long long seconds = value(parts[m + 1]);
  if (parts[m].size() != 2 || parts[m + 1].size() != 2 || minutes > 59 || seconds > 59) {
    return std::nullopt;
  }
  return ((hours * 60 + minutes) * 60 + seconds) * 1000 + value(millis);
}

Transcript parse_transcript(std::string_view bytes, TranscriptFormat format, std::string source_id) {
  Transcript out;
  if (format == TranscriptFormat::plain_json) {
    if (text::trim(bytes).empty()) {
      out.source_id = std::move(source_id);
      return out;
    }
    out = parse_plain_json(bytes);
    out.source_id = std::move(source_id);
    return out;
  }

  const auto lines = split_lines(bytes);
  const bool blank = std::all_of(lines.begin(), lines.end(),
                                 [](const Line& l) { return text::trim(l.text).empty(); });
  std::vector<Cue> cues;
  if (!blank) cues = format == TranscriptFormat::srt ? parse_srt(lines) : parse_vtt(lines);

  for (std::size_t k = 1; k < cues.size(); ++k) {
    if (cues[k].start_ms < cues[k - 1].start_ms) {
      fail_line(ErrorCode::ordering, cues[k].line, "cue starts before the previous cue");
    }
    if (cues[k].start_ms < cues[k - 1].end_ms) {
      fail_line(ErrorCode::ordering, cues[k].line, "cue overlaps the previous cue");
    }
  }
  for (auto& cue : cues) {
    if (cue.text.empty()) continue;
    out.segments.push_back(
        {static_cast<double>(cue.start_ms) / 1000.0, std::move(cue.text), out.segments.size()});
  }
  out.source_id = std::move(source_id);
  return out;
}

std::vector<TranscriptSentence> transcript_sentences(const Transcript& transcript,
                                                     std::size_t min_tokens) {
  std::string joined;
  std::vector<std::size_t> starts;
  for (const auto& seg : transcript.segments) {
    if (!joined.empty()) joined.push_back(' ');
    starts.push_back(joined.size());
    joined.append(seg.u);
  }
  std::vector<TranscriptSentence> out;
  for (auto& s : text::segment_sentences(joined, min_tokens)) {
    const auto it = std::upper_bound(starts.begin(), starts.end(), s.begin);
    const std::size_t seg = static_cast<std::size_t>(it - starts.begin()) - 1;
    out.push_back({out.size(), transcript.segments[seg].t, seg, std::move(s.text)});
  }
  return out;
}

} // namespace pal
