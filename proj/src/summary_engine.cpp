#include "pal/summary_engine.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "pal/question_pipeline.hpp"
#include "pal/text.hpp"

namespace pal {

namespace {

constexpr std::string_view kStopwords[] = {
    "the", "a",    "an",    "and",   "or",    "but",  "of",   "to",   "in",   "on",
    "at",  "for",  "with",  "by",    "from",  "as",   "is",   "are",  "was",  "were",
    "be",  "been", "being", "it",    "its",   "this", "that", "these", "those", "he",
    "she", "they", "we",    "you",   "i",     "not",  "no",   "so",   "if",   "then",
    "than", "there", "here", "what", "which", "who",  "how",  "why",  "do",   "does"};
static_assert(std::size(kStopwords) == 50);

bool is_stopword(std::string_view token) {
  return std::find(std::begin(kStopwords), std::end(kStopwords), token) != std::end(kStopwords);
}

std::string join_sentences(const std::vector<TranscriptSentence>& sentences, std::size_t first,
                           std::size_t last) {
  std::string out;
  for (std::size_t i = first; i <= last; ++i) {
    if (!out.empty()) out.push_back(' ');
    out += sentences[i].text;
  }
  return out;
}

} // namespace

bool EmbeddingVector::is_zero() const noexcept {
  return std::all_of(values.begin(), values.end(), [](double v) { return v == 0.0; });
}

const std::vector<std::string_view>& stopwords() {
  static const std::vector<std::string_view> list(std::begin(kStopwords), std::end(kStopwords));
  return list;
}

EmbeddingVector HashedBagEmbedder::embed(std::string_view input) const {
  EmbeddingVector v;
  v.values.assign(kEmbeddingDimension, 0.0);
  for (const auto& token : text::word_tokens(input)) {
    if (is_stopword(token)) continue;
    const std::uint64_t h = text::fnv1a64(token);
    const std::size_t bucket = static_cast<std::size_t>(h % kEmbeddingDimension);
    v.values[bucket] += (h >> 63) ? -1.0 : 1.0;
  }
  const double norm = std::sqrt(std::inner_product(v.values.begin(), v.values.end(), v.values.begin(), 0.0));
  if (norm > 0.0) {
    for (double& x : v.values) x /= norm;
  }
  return v;
}

EmbeddingVector embed(std::string_view text) { return HashedBagEmbedder{}.embed(text); }

double cosine(const EmbeddingVector& a, const EmbeddingVector& b) noexcept {
  if (a.values.size() != b.values.size()) return 0.0;
  return std::inner_product(a.values.begin(), a.values.end(), b.values.begin(), 0.0);
}

SemanticMap SemanticMap::build(const Transcript& transcript, const Embedder& embedder) {
  SemanticMap map;
  map.sentences = transcript_sentences(transcript);
  map.vectors.reserve(map.sentences.size());
  for (const auto& s : map.sentences) map.vectors.push_back(embedder.embed(s.text));
  return map;
}

std::vector<SentenceSpan> extract_relevant(std::string_view topic, const SemanticMap& map,
                                           std::size_t k, const Embedder& embedder) {
  const std::size_t n = map.sentences.size();
  const EmbeddingVector query = embedder.embed(topic);
  if (n == 0 || k == 0 || query.is_zero()) return {};

  std::vector<std::pair<double, std::size_t>> scored;
  for (std::size_t i = 0; i < n; ++i) {
    if (map.vectors[i].is_zero()) continue;
    scored.emplace_back(cosine(query, map.vectors[i]), i);
  }
  const std::size_t take = std::min(k, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + static_cast<long>(take), scored.end(),
                    [](const auto& x, const auto& y) {
                      return x.first != y.first ? x.first > y.first : x.second < y.second;
                    });

  std::vector<std::size_t> hits;
  for (std::size_t i = 0; i < take; ++i) hits.push_back(scored[i].second);
  std::sort(hits.begin(), hits.end());

  std::vector<SentenceSpan> spans;
  for (std::size_t hit : hits) {
    const std::size_t first = hit == 0 ? 0 : hit - 1;
    const std::size_t last = std::min(n - 1, hit + 1);
    if (!spans.empty() && first <= spans.back().last) {
      spans.back().last = std::max(spans.back().last, last);
    } else {
      spans.push_back({first, last, map.sentences[first].t, {}});
    }
  }
  for (auto& span : spans) span.text = join_sentences(map.sentences, span.first, span.last);
  return spans;
}

std::vector<SentenceSpan> extract_relevant(std::string_view topic, const Transcript& transcript,
                                           std::size_t k) {
  const HashedBagEmbedder embedder;
  return extract_relevant(topic, SemanticMap::build(transcript, embedder), k, embedder);
}

ConceptClasses classify_concepts(const std::vector<ConceptStats>& stats) {
  ConceptClasses out;
  for (const auto& s : stats) {
    const double accuracy =
        s.asked == 0 ? 0.0 : static_cast<double>(s.correct) / static_cast<double>(s.asked);
    if (s.asked >= 2 && accuracy >= 0.75) {
      out.mastered.push_back(s.topic);
    } else if (s.asked == 0 || accuracy < 0.5) {
      out.discovery.push_back(s.topic);
    } else {
      out.neutral.push_back(s.topic);
    }
  }
  return out;
}

std::string TemplateSynthesizer::render(const SummaryReport& report, const LearnerProfile& profile) const {
  std::string out = "Lesson summary";
  if (!profile.learner_id.empty()) out += " for " + profile.learner_id;
  out += "\n\n";

  auto section = [&out](std::string_view header, const std::vector<ConceptSection>& items,
                        std::string_view empty_note) {
    out += "## ";
    out += header;
    out += "\n";
    if (items.empty()) {
      out += "(";
      out += empty_note;
      out += ")\n";
    }
    for (const auto& item : items) {
      out += "- " + item.topic + "\n";
      for (const auto& excerpt : item.excerpts) out += "    > " + excerpt + "\n";
    }
    out += "\n";
  };
  section(kMasteredHeader, report.mastered, "nothing yet; keep going");
  section(kDiscoveryHeader, report.discovery, "every topic covered");

  if (!report.tailored_examples.empty()) {
    out += "## ";
    out += kExamplesHeader;
    out += "\n";
    for (const auto& example : report.tailored_examples) out += "- " + example + "\n";
    out += "\n";
  }
  return out;
}

std::vector<ConceptStats> concept_stats(const Bank& bank, const std::vector<AnsweredQuestion>& answers) {
  std::vector<ConceptStats> stats;
  std::vector<std::size_t> slot_of(bank.questions.size());
  for (std::size_t i = 0; i < bank.questions.size(); ++i) {
    const std::string topic = concept_of(bank.questions[i].q);
    auto it = std::find_if(stats.begin(), stats.end(), [&](const auto& s) { return s.topic == topic; });
    if (it == stats.end()) {
      stats.push_back({topic, 0, 0});
      it = stats.end() - 1;
    }
    slot_of[i] = static_cast<std::size_t>(it - stats.begin());
  }
  for (const auto& a : answers) {
    if (a.question_index >= bank.questions.size()) continue;
    auto& s = stats[slot_of[a.question_index]];
    ++s.asked;
    if (a.correct) ++s.correct;
  }
  return stats;
}

SummaryReport compose_summary(const Bank& bank, const std::vector<AnsweredQuestion>& answers,
                              const Transcript& transcript, const LearnerProfile& profile,
                              const SummaryConfig& config, const Embedder& embedder,
                              const Synthesizer& synthesizer) {
  const SemanticMap map = SemanticMap::build(transcript, embedder);
  const ConceptClasses classes = classify_concepts(concept_stats(bank, answers));

  auto sections = [&](const std::vector<std::string>& concepts) {
    std::vector<ConceptSection> out;
    for (const auto& topic : concepts) {
      ConceptSection section{topic, {}};
      for (auto& span : extract_relevant(topic, map, config.excerpts_per_concept, embedder)) {
        section.excerpts.push_back(std::move(span.text));
      }
      out.push_back(std::move(section));
    }
    return out;
  };

  SummaryReport report;
  report.mastered = sections(classes.mastered);
  report.discovery = sections(classes.discovery);

  std::vector<EmbeddingVector> interests;
  for (const auto& tag : profile.interests) {
    auto v = embedder.embed(tag);
    if (!v.is_zero()) interests.push_back(std::move(v));
  }
  if (!interests.empty()) {
    std::vector<std::size_t> candidates;
    for (const auto& s : map.sentences) {
      if (text::to_lower_ascii(s.text).find("for example") != std::string::npos) {
        candidates.push_back(s.index);
      }
    }
    for (const auto& tag : interests) {
      std::vector<std::pair<double, std::size_t>> scored;
      for (std::size_t i = 0; i < map.sentences.size(); ++i) {
        if (!map.vectors[i].is_zero()) scored.emplace_back(cosine(tag, map.vectors[i]), i);
      }
      const std::size_t take = std::min(config.hits_per_interest, scored.size());
      std::partial_sort(scored.begin(), scored.begin() + static_cast<long>(take), scored.end(),
                        [](const auto& x, const auto& y) {
                          return x.first != y.first ? x.first > y.first : x.second < y.second;
                        });
      for (std::size_t i = 0; i < take; ++i) candidates.push_back(scored[i].second);
    }
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    std::vector<std::pair<double, std::size_t>> ranked;
    for (std::size_t i : candidates) {
      double best = -1.0;
      for (const auto& tag : interests) best = std::max(best, cosine(tag, map.vectors[i]));
      ranked.emplace_back(best, i);
    }
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& x, const auto& y) { return x.first > y.first; });
    for (std::size_t i = 0; i < ranked.size() && i < config.max_examples; ++i) {
      report.tailored_examples.push_back(map.sentences[ranked[i].second].text);
    }
  }

  report.rendered = synthesizer.render(report, profile);
  return report;
}

} // namespace pal
