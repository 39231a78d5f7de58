#include "pal/question_pipeline.hpp"

#include <algorithm>
#include <array>
#include <cctype>

#include "pal/errors.hpp"
#include "pal/text.hpp"

namespace pal {

namespace {

constexpr std::array<std::string_view, 10> kHardRules{
    "apply",   "applies",   "applied",    "applying", "predict",
    "predicts", "predicted", "prediction", "calculate", "what would happen"};
constexpr std::array<std::string_view, 5> kMediumRules{"why", "how", "explain", "compare",
                                                       "contrast"};
constexpr std::array<std::string_view, 7> kEasyRules{"what is", "what are", "what does", "define",
                                                     "which",   "who",      "when"};

template <std::size_t N>
bool any_rule(std::string_view lower, const std::array<std::string_view, N>& rules) {
  return std::any_of(rules.begin(), rules.end(),
                     [&](std::string_view r) { return text::contains_phrase(lower, r); });
}

// Lowercases the first letter unless the word looks like an acronym.
std::string soften_initial(std::string_view s) {
  std::string out(s);
  if (out.size() >= 2 && std::isupper(static_cast<unsigned char>(out[0])) &&
      !std::isupper(static_cast<unsigned char>(out[1]))) {
    out[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(out[0])));
  } else if (out.size() == 1) {
    out[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(out[0])));
  }
  return out;
}

std::string_view strip_terminal(std::string_view s) {
  s = text::trim(s);
  while (!s.empty() && (s.back() == '.' || s.back() == '!' || s.back() == '?' || s.back() == ',' ||
                        s.back() == ';' || s.back() == ':')) {
    s.remove_suffix(1);
  }
  return text::trim(s);
}

// Drops any leading clause ("In physics, X ...") and discourse openers.
std::string_view subject_span(std::string_view before) {
  const std::size_t cut = before.find_last_of(",;:");
  if (cut != std::string_view::npos) before = before.substr(cut + 1);
  before = text::trim(before);
  static constexpr std::array<std::string_view, 6> openers{"so ", "now ", "and ", "but ",
                                                           "basically ", "here "};
  bool stripped = true;
  while (stripped) {
    stripped = false;
    const std::string lower = text::to_lower_ascii(before);
    for (auto op : openers) {
      if (lower.rfind(op, 0) == 0) {
        before = text::trim(before.substr(op.size()));
        stripped = true;
        break;
      }
    }
  }
  return before;
}

struct Template {
  std::string_view cue;
  bool reversed;          // "Y is called X"
  std::string_view stem_prefix;
  std::string_view stem_suffix;
};

constexpr std::array<Template, 4> kTemplates{{
    {"is defined as", false, "What is ", "?"},
    {"refers to", false, "What does ", " refer to?"},
    {"is called", true, "What is ", "?"},
    {"consists of", false, "What does ", " consist of?"},
}};

constexpr std::size_t kMaxSubjectTokens = 8;
constexpr std::size_t kMaxDistractors = 3;

} // namespace

void PipelineConfig::validate() const {
  if (every_n < 1) throw Error(ErrorCode::validation, "every_n must be >= 1");
  if (cue_phrases.empty()) throw Error(ErrorCode::validation, "cue phrase list must be non-empty");
}

std::vector<CandidatePoint> find_candidate_points(const std::vector<TranscriptSentence>& sentences,
                                                  const PipelineConfig& config) {
  config.validate();
  std::vector<std::string> cues;
  for (const auto& c : config.cue_phrases) cues.push_back(text::to_lower_ascii(c));

  std::vector<CandidatePoint> points;
  std::size_t since_last = 0;
  for (const auto& s : sentences) {
    const std::string lower = text::to_lower_ascii(s.text);
    const auto hit = std::find_if(cues.begin(), cues.end(), [&](const std::string& cue) {
      return !cue.empty() && lower.find(cue) != std::string::npos;
    });
    if (hit != cues.end()) {
      points.push_back({s.t, s.index, CandidateTrigger::cue, *hit});
      since_last = 0;
      continue;
    }
    if (++since_last == config.every_n) {
      points.push_back({s.t, s.index, CandidateTrigger::every_n, {}});
      since_last = 0;
    }
  }
  return points;
}

std::vector<CandidatePoint> find_candidate_points(const Transcript& transcript,
                                                  const PipelineConfig& config) {
  return find_candidate_points(transcript_sentences(transcript, config.min_sentence_tokens), config);
}

Difficulty rate_difficulty(std::string_view stem) {
  const std::string lower = text::to_lower_ascii(stem);
  if (any_rule(lower, kHardRules)) return Difficulty::Hard;
  if (any_rule(lower, kMediumRules)) return Difficulty::Medium;
  if (any_rule(lower, kEasyRules)) return Difficulty::Easy;
  return Difficulty::Medium;
}

std::optional<QuestionRecord>
ClozeGenerator::draft(const CandidatePoint& point, const std::vector<TranscriptSentence>& sentences) const {
  if (point.sentence_index >= sentences.size()) return std::nullopt;
  const std::string& sentence = sentences[point.sentence_index].text;
  const std::string lower = text::to_lower_ascii(sentence);

  for (const auto& tpl : kTemplates) {
    const std::size_t pos = lower.find(tpl.cue);
    if (pos == std::string::npos || !text::contains_phrase(lower, tpl.cue)) continue;

    std::string_view before = subject_span(std::string_view(sentence).substr(0, pos));
    std::string_view after = strip_terminal(std::string_view(sentence).substr(pos + tpl.cue.size()));
    std::string_view subject = tpl.reversed ? after : before;
    std::string_view answer = tpl.reversed ? before : after;
    if (subject.empty() || answer.empty()) continue;
    if (text::count_tokens(subject) > kMaxSubjectTokens) continue;

    QuestionRecord record;
    record.q = std::string(tpl.stem_prefix) + soften_initial(subject) + std::string(tpl.stem_suffix);
    record.a.options = {soften_initial(answer)};
    record.a.correct_index = 0;
    record.t = point.timestamp;
    record.d = rate_difficulty(record.q);

    const std::size_t i = point.sentence_index;
    if (i > 0) record.c = sentences[i - 1].text + " ";
    record.c += sentence;
    if (i + 1 < sentences.size()) record.c += " " + sentences[i + 1].text;
    return record;
  }
  return std::nullopt;
}

std::optional<QuestionRecord>
ClozeGenerator::generate(const CandidatePoint& point, const std::vector<TranscriptSentence>& sentences,
                         const std::vector<QuestionRecord>& bank_so_far) const {
  auto record = draft(point, sentences);
  if (!record) return std::nullopt;
  const std::string correct = record->a.options.front();
  const std::string correct_lower = text::to_lower_ascii(correct);

  std::vector<std::string> distractors;
  for (auto it = bank_so_far.rbegin(); it != bank_so_far.rend(); ++it) {
    if (distractors.size() == kMaxDistractors) break;
    if (it->a.correct_index >= it->a.options.size()) continue;
    const std::string& candidate = it->a.options[it->a.correct_index];
    const std::string cand_lower = text::to_lower_ascii(candidate);
    if (cand_lower == correct_lower) continue;
    const bool taken = std::any_of(distractors.begin(), distractors.end(),
                                   [&](const auto& d) { return text::to_lower_ascii(d) == cand_lower; });
    if (!taken) distractors.push_back(candidate);
  }
  if (distractors.empty()) return std::nullopt;

  const std::size_t n_options = distractors.size() + 1;
  const std::size_t slot = static_cast<std::size_t>(text::fnv1a64(record->q) % n_options);
  record->a.options = std::move(distractors);
  record->a.options.insert(record->a.options.begin() + static_cast<long>(slot), correct);
  record->a.correct_index = slot;
  return record;
}

std::optional<QuestionRecord> generate_question(const CandidatePoint& point,
                                                const Transcript& transcript,
                                                const std::vector<QuestionRecord>& bank_so_far,
                                                const PipelineConfig& config) {
  return ClozeGenerator{}.generate(
      point, transcript_sentences(transcript, config.min_sentence_tokens), bank_so_far);
}

std::string concept_of(std::string_view stem) {
  const std::string lower = text::to_lower_ascii(text::trim(stem));
  for (const auto& tpl : kTemplates) {
    const std::string prefix = text::to_lower_ascii(tpl.stem_prefix);
    const std::string suffix = text::to_lower_ascii(tpl.stem_suffix);
    if (lower.size() > prefix.size() + suffix.size() && lower.rfind(prefix, 0) == 0 &&
        lower.compare(lower.size() - suffix.size(), suffix.size(), suffix) == 0) {
      return std::string(
          text::trim(std::string_view(lower).substr(prefix.size(), lower.size() - prefix.size() - suffix.size())));
    }
  }
  return std::string(strip_terminal(lower));
}

std::vector<QuestionRecord> compile_questions(const Transcript& transcript,
                                              const PipelineConfig& config,
                                              const QuestionGenerator& generator) {
  const auto sentences = transcript_sentences(transcript, config.min_sentence_tokens);
  const auto points = find_candidate_points(sentences, config);

  std::vector<std::pair<std::size_t, QuestionRecord>> drafts;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (auto d = generator.draft(points[i], sentences)) drafts.emplace_back(i, std::move(*d));
  }

  std::vector<QuestionRecord> bank;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& point = points[i];
    // Sibling drafts, farthest first so the generator's most-recent-first
    // walk picks the nearest ones.
    std::vector<std::pair<std::size_t, const QuestionRecord*>> siblings;
    for (const auto& [j, d] : drafts) {
      if (j != i) siblings.emplace_back(i > j ? i - j : j - i, &d);
    }
    std::stable_sort(siblings.begin(), siblings.end(),
                     [](const auto& x, const auto& y) { return x.first > y.first; });
    std::vector<QuestionRecord> pool = bank;
    for (const auto& s : siblings) pool.push_back(*s.second);

    auto record = generator.generate(point, sentences, pool);
    if (!record) continue;
    const bool duplicate = std::any_of(bank.begin(), bank.end(), [&](const auto& r) {
      return quantize_timestamp(r.t) == quantize_timestamp(record->t) && r.q == record->q;
    });
    if (!duplicate) bank.push_back(std::move(*record));
  }
  return bank;
}

std::string compile_bank(const Transcript& transcript, const PipelineConfig& config) {
  return assemble_bank(compile_questions(transcript, config, ClozeGenerator{}), transcript.source_id);
}

} // namespace pal
