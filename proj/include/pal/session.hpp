#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pal/bank.hpp"
#include "pal/hybrid_policy.hpp"
#include "pal/serialization.hpp"
#include "pal/summary_engine.hpp"

namespace pal {

struct SessionConfig {
  std::string bank_id;
  std::string learner_id;
  std::size_t planned_questions = 10;
  std::uint64_t rng_seed = 0;
  double time_limit = 30.0;
  PolicyConfig policy;
  std::vector<std::string> interests;

  /// Throws Error(validation); planned_questions must fit the bank.
  void validate(const Bank& bank) const;
};

Json to_json(const SessionConfig& c);
SessionConfig session_config_from_json(const Json& j);

enum class EventKind { created, question_served, answer_submitted, level_changed, session_ended };

std::string_view to_string(EventKind kind) noexcept;
std::optional<EventKind> parse_event_kind(std::string_view name) noexcept;

struct SessionEvent {
  std::size_t seq = 0;
  EventKind kind = EventKind::created;
  Json payload;
  std::string wall_time;

  /// One JSONL line (no trailing newline), keys sorted.
  std::string to_line() const;
  /// Throws Error(corruption) naming the line's seq when it can be read.
  static SessionEvent from_line(std::string_view line);
};

std::string to_jsonl(const std::vector<SessionEvent>& events);
std::vector<SessionEvent> parse_event_log(std::string_view jsonl);

enum class SessionStatus { active, ended };

/// A served question as the learner sees it.
struct ServedQuestion {
  QuestionId question_id = 0;
  QuestionRecord record;
  Difficulty sampled = Difficulty::Easy;
  bool fallback = false;
  std::size_t answered = 0;
  std::size_t planned = 0;
};

struct AnswerResult {
  bool correct = false;
  std::size_t correct_index = 0;
  RewardBreakdown reward;
  Difficulty new_level = Difficulty::Easy;
  bool level_changed = false;
  bool session_ended = false;
  LearnerState state_snapshot;
};

/// Supplies wall-clock stamps for new events, given their seq.
using WallClock = std::function<std::string(std::size_t seq)>;

/// ISO-8601 UTC timestamp of the current time.
std::string utc_now();

/// One learner's run over one bank. Every mutation appends events; the
/// state is always the fold of those events.
class Session {
public:
  /// Throws Error(validation) on a bad config.
  static Session create(std::string id, SessionConfig config, Bank bank, WallClock clock = {});

  /// Serves the next question, or returns nullopt once the session has
  /// ended (ending it first if the plan or the bank is exhausted).
  /// Throws Error(protocol) while a question is pending.
  std::optional<ServedQuestion> next_question();

  /// Throws Error(conflict) for a stale or unknown question id,
  /// Error(validation) for an out-of-range choice, Error(session_ended).
  AnswerResult submit_answer(QuestionId question_id, std::size_t choice, double response_time);

  /// Ends an active session early; no-op when already ended.
  void end();

  const std::string& id() const noexcept { return id_; }
  const SessionConfig& config() const noexcept { return config_; }
  const Bank& bank() const noexcept { return bank_; }
  const PolicyState& policy() const noexcept { return policy_; }
  std::size_t served_count() const noexcept { return served_count_; }
  std::optional<QuestionId> pending_question() const noexcept { return pending_; }
  SessionStatus status() const noexcept { return status_; }
  const std::vector<SessionEvent>& events() const noexcept { return events_; }
  const std::vector<AnsweredQuestion>& answers() const noexcept { return answers_; }
  /// Served question ids in order.
  const std::vector<QuestionId>& served() const noexcept { return served_ids_; }

  /// Called after every appended event (persistence hook).
  void set_event_sink(std::function<void(const SessionEvent&)> sink) { sink_ = std::move(sink); }

  /// Learner, ladder, Q table and last decision as JSON.
  Json state_snapshot() const;

  /// Field-for-field comparison of everything but wall-clock stamps.
  bool same_state(const Session& other) const;

  friend Session replay(const std::vector<SessionEvent>& log);

private:
  Session() = default;
  void append(EventKind kind, Json payload);
  void finish();
  void decide_next();
  const QuestionRecord& question(QuestionId id) const { return bank_.questions.at(id); }

  std::string id_;
  SessionConfig config_;
  Bank bank_;
  std::string bank_file_;
  PolicyState policy_;
  std::size_t served_count_ = 0;
  std::optional<QuestionId> pending_;
  std::optional<std::pair<Difficulty, DecisionTrace>> planned_decision_;
  SessionStatus status_ = SessionStatus::active;
  std::vector<bool> used_;
  std::vector<QuestionId> served_ids_;
  std::vector<AnsweredQuestion> answers_;
  std::vector<SessionEvent> events_;
  WallClock clock_;
  std::function<void(const SessionEvent&)> sink_;
};

/// Rebuilds a session by re-running the logged commands through the same
/// operations and checking each regenerated event against the log. A
/// prefix of a valid log yields the corresponding earlier state.
///
/// Throws Error(corruption) naming the offending seq.
Session replay(const std::vector<SessionEvent>& log);

/// Stand-in transcript made from the bank's context snippets, for
/// summaries when the original transcript is unavailable.
Transcript transcript_from_bank(const Bank& bank);

SummaryReport summarize_session(const Session& session, const Transcript& transcript,
                                const LearnerProfile& profile);

} // namespace pal
