#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "pal/bank.hpp"
#include "pal/transcript.hpp"

namespace pal {

inline constexpr std::size_t kEmbeddingDimension = 256;

struct EmbeddingVector {
  std::vector<double> values;

  bool is_zero() const noexcept;
  friend bool operator==(const EmbeddingVector&, const EmbeddingVector&) = default;
};

/// Sentence embedding backend.
class Embedder {
public:
  virtual ~Embedder() = default;
  virtual EmbeddingVector embed(std::string_view text) const = 0;
};

/// Lowercased word tokens minus a fixed stopword list, each hashed
/// (FNV-1a 64) into one of 256 buckets with a sign taken from the hash's top
/// bit, then L2-normalized. Text with no content tokens maps to zero.
class HashedBagEmbedder final : public Embedder {
public:
  EmbeddingVector embed(std::string_view text) const override;
};

/// The 50 words dropped before hashing.
const std::vector<std::string_view>& stopwords();

EmbeddingVector embed(std::string_view text);

/// Dot product over unit vectors; 0 when either side is the zero vector.
double cosine(const EmbeddingVector& a, const EmbeddingVector& b) noexcept;

/// Sentences of one transcript and their vectors, built once.
struct SemanticMap {
  std::vector<TranscriptSentence> sentences;
  std::vector<EmbeddingVector> vectors;

  static SemanticMap build(const Transcript& transcript, const Embedder& embedder);
};

/// Inclusive range of sentence indices.
struct SentenceSpan {
  std::size_t first = 0;
  std::size_t last = 0;
  double t = 0.0;
  std::string text;

  friend bool operator==(const SentenceSpan&, const SentenceSpan&) = default;
};

/// Top-k sentences by cosine to `topic` (ties to the earlier sentence),
/// each widened by one neighbour per side, overlapping spans merged, in
/// transcript order. Zero-vector sentences never match; a topic with no
/// content tokens matches nothing.
std::vector<SentenceSpan> extract_relevant(std::string_view topic, const SemanticMap& map,
                                           std::size_t k, const Embedder& embedder);
std::vector<SentenceSpan> extract_relevant(std::string_view topic, const Transcript& transcript,
                                           std::size_t k);

struct ConceptStats {
  std::string topic;
  std::size_t asked = 0;
  std::size_t correct = 0;

  friend bool operator==(const ConceptStats&, const ConceptStats&) = default;
};

struct ConceptClasses {
  std::vector<std::string> mastered;
  std::vector<std::string> discovery;
  std::vector<std::string> neutral;
};

/// Mastered: asked >= 2 and accuracy >= 0.75. Discovery: never asked or
/// accuracy < 0.5. Everything else is neutral.
ConceptClasses classify_concepts(const std::vector<ConceptStats>& stats);

struct LearnerProfile {
  std::string learner_id;
  std::vector<std::string> interests;
};

struct ConceptSection {
  std::string topic;
  std::vector<std::string> excerpts;

  friend bool operator==(const ConceptSection&, const ConceptSection&) = default;
};

struct SummaryReport {
  std::vector<ConceptSection> mastered;
  std::vector<ConceptSection> discovery;
  std::vector<std::string> tailored_examples;
  std::string rendered;
};

inline constexpr std::string_view kMasteredHeader = "Territory Mastered";
inline constexpr std::string_view kDiscoveryHeader = "Discovery Zone";
inline constexpr std::string_view kExamplesHeader = "Examples for your interests";

/// Turns a report into text for the learner.
class Synthesizer {
public:
  virtual ~Synthesizer() = default;
  virtual std::string render(const SummaryReport& report, const LearnerProfile& profile) const = 0;
};

/// Plain-text template with the two section headers; the examples block is
/// omitted when there are no tailored examples.
class TemplateSynthesizer final : public Synthesizer {
public:
  std::string render(const SummaryReport& report, const LearnerProfile& profile) const override;
};

struct SummaryConfig {
  std::size_t excerpts_per_concept = 3;
  std::size_t hits_per_interest = 5;
  std::size_t max_examples = 3;
};

/// One answered question of a finished session.
struct AnsweredQuestion {
  std::size_t question_index = 0; // into the bank's questions
  bool correct = false;

  friend bool operator==(const AnsweredQuestion&, const AnsweredQuestion&) = default;
};

/// Per-topic counts over the whole bank, in bank order; unasked concepts
/// are present with asked = 0.
std::vector<ConceptStats> concept_stats(const Bank& bank, const std::vector<AnsweredQuestion>& answers);

SummaryReport compose_summary(const Bank& bank, const std::vector<AnsweredQuestion>& answers,
                              const Transcript& transcript, const LearnerProfile& profile,
                              const SummaryConfig& config = {},
                              const Embedder& embedder = HashedBagEmbedder{},
                              const Synthesizer& synthesizer = TemplateSynthesizer{});

} // namespace pal
