#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pal/bank.hpp"
#include "pal/difficulty.hpp"
#include "pal/transcript.hpp"

namespace pal {

struct PipelineConfig {
  std::vector<std::string> cue_phrases{"is defined as", "is called",  "refers to",
                                       "means that",    "in other words", "for example",
                                       "the key idea",  "consists of"};
  std::size_t every_n = 8;
  std::size_t min_sentence_tokens = 3;

  void validate() const;
};

enum class CandidateTrigger { cue, every_n };

struct CandidatePoint {
  double timestamp = 0.0;
  std::size_t sentence_index = 0; // 0-based over transcript_sentences()
  CandidateTrigger trigger = CandidateTrigger::cue;
  std::string cue; // matched phrase for cue points

  friend bool operator==(const CandidatePoint&, const CandidatePoint&) = default;
};

/// One point per sentence containing a cue phrase (case-insensitive), plus
/// a point every `every_n` sentences counted from the last emitted point.
std::vector<CandidatePoint> find_candidate_points(const std::vector<TranscriptSentence>& sentences,
                                                  const PipelineConfig& config);
std::vector<CandidatePoint> find_candidate_points(const Transcript& transcript,
                                                  const PipelineConfig& config);

/// Keyword rules, checked Hard first, then Medium, then Easy. Stems that
/// match nothing are rated Medium.
Difficulty rate_difficulty(std::string_view stem);

/// Question generator backend. May decline a point by returning nullopt.
class QuestionGenerator {
public:
  virtual ~QuestionGenerator() = default;
  virtual std::optional<QuestionRecord> generate(const CandidatePoint& point,
                                                 const std::vector<TranscriptSentence>& sentences,
                                                 const std::vector<QuestionRecord>& bank_so_far) const = 0;

  /// Stem and correct answer only (a single option), used to seed the
  /// distractor pool before generation. Backends without a cheap draft
  /// return nullopt.
  virtual std::optional<QuestionRecord> draft(const CandidatePoint& /*point*/,
                                              const std::vector<TranscriptSentence>& /*sentences*/) const {
    return std::nullopt;
  }
};

/// Rule-based multiple choice from definitional sentences ("X is defined
/// as Y", "X refers to Y", "Y is called X", "X consists of Y"). Distractors
/// are the correct answers of up to three earlier questions; with none
/// available the point is skipped.
class ClozeGenerator final : public QuestionGenerator {
public:
  std::optional<QuestionRecord> generate(const CandidatePoint& point,
                                         const std::vector<TranscriptSentence>& sentences,
                                         const std::vector<QuestionRecord>& bank_so_far) const override;
  std::optional<QuestionRecord> draft(const CandidatePoint& point,
                                      const std::vector<TranscriptSentence>& sentences) const override;
};

std::optional<QuestionRecord> generate_question(const CandidatePoint& point,
                                                const Transcript& transcript,
                                                const std::vector<QuestionRecord>& bank_so_far,
                                                const PipelineConfig& config = {});

/// The subject X of a "What is X?" style stem, lowercased; the whole stem
/// without its question mark when no pattern applies.
std::string concept_of(std::string_view stem);

/// Whole pipeline: candidate points, drafts, then generation in transcript
/// order. Each point sees the drafts of every other point as its pool,
/// nearest last.
std::vector<QuestionRecord> compile_questions(const Transcript& transcript,
                                              const PipelineConfig& config,
                                              const QuestionGenerator& generator);

/// compile_questions with the cloze backend, then assemble_bank.
std::string compile_bank(const Transcript& transcript, const PipelineConfig& config);

} // namespace pal
