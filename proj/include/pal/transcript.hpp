#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pal {

struct TranscriptSegment {
  double t = 0.0; // start time, seconds
  std::string u;
  std::size_t index = 0;

  friend bool operator==(const TranscriptSegment&, const TranscriptSegment&) = default;
};

struct Transcript {
  std::vector<TranscriptSegment> segments;
  std::string source_id;

  friend bool operator==(const Transcript&, const Transcript&) = default;
};

enum class TranscriptFormat { srt, vtt, plain_json };

std::optional<TranscriptFormat> parse_transcript_format(std::string_view name) noexcept;

/// Parses SubRip, WebVTT or a plain JSON array of {"t", "u"} objects.
/// Cue text lines are joined with single spaces; cues whose text is empty
/// after trimming are dropped.
///
/// Throws Error(parse) for malformed input (the message names the line) and
/// Error(ordering) for decreasing or overlapping cue times.
Transcript parse_transcript(std::string_view bytes, TranscriptFormat format,
                            std::string source_id = {});

/// "HH:MM:SS,mmm" / "HH:MM:SS.mmm" / "MM:SS.mmm" to integral milliseconds.
std::optional<long long> parse_cue_timestamp_ms(std::string_view s) noexcept;

/// One sentence of the transcript, stamped with the start time of the
/// segment where it begins. Sentences may span segment boundaries.
struct TranscriptSentence {
  std::size_t index = 0;
  double t = 0.0;
  std::size_t segment = 0;
  std::string text;

  friend bool operator==(const TranscriptSentence&, const TranscriptSentence&) = default;
};

std::vector<TranscriptSentence> transcript_sentences(const Transcript& transcript,
                                                     std::size_t min_tokens = 3);

} // namespace pal
