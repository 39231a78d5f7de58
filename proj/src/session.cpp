#include "pal/session.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>

#include "pal/errors.hpp"

namespace pal {

namespace {

std::string_view end_reason_completed = "completed";
std::string_view end_reason_exhausted = "bank_exhausted";
std::string_view end_reason_requested = "ended_by_request";

} // namespace

// ---------------------------------------------------------------------------
// Config

void SessionConfig::validate(const Bank& bank) const {
  if (planned_questions < 1) throw Error(ErrorCode::validation, "planned_questions must be >= 1");
  if (planned_questions > bank.questions.size()) {
    throw Error(ErrorCode::validation, "planned_questions (" + std::to_string(planned_questions) +
                                           ") exceeds bank size (" +
                                           std::to_string(bank.questions.size()) + ")");
  }
  if (!std::isfinite(time_limit) || time_limit <= 0.0) {
    throw Error(ErrorCode::validation, "time_limit must be > 0");
  }
  policy.validate();
}

Json to_json(const SessionConfig& c) {
  return Json{{"bank_id", c.bank_id},
              {"learner_id", c.learner_id},
              {"planned_questions", c.planned_questions},
              {"rng_seed", c.rng_seed},
              {"time_limit", c.time_limit},
              {"interests", c.interests},
              {"policy", to_json(c.policy)}};
}

SessionConfig session_config_from_json(const Json& j) {
  if (!j.is_object()) throw Error(ErrorCode::validation, "session config must be an object");
  SessionConfig c;
  try {
    if (!j.contains("bank_id") || !j["bank_id"].is_string()) {
      throw Error(ErrorCode::validation, "bank_id is required");
    }
    c.bank_id = j["bank_id"].get<std::string>();
    c.learner_id = j.value("learner_id", std::string{});
    if (j.contains("planned_questions")) {
      const auto& n = j["planned_questions"];
      if (!n.is_number_integer() || n.get<long long>() < 0) {
        throw Error(ErrorCode::validation, "planned_questions must be a non-negative integer");
      }
      c.planned_questions = n.get<std::size_t>();
    }
    if (j.contains("rng_seed")) c.rng_seed = j["rng_seed"].get<std::uint64_t>();
    c.time_limit = j.value("time_limit", c.time_limit);
    if (j.contains("interests")) c.interests = j["interests"].get<std::vector<std::string>>();
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::validation, std::string("bad session config: ") + e.what());
  }
  if (j.contains("policy")) c.policy = policy_config_from_json(j["policy"]);
  if (j.contains("start_level")) c.policy.start_level = difficulty_from_json(j["start_level"]);
  c.policy.blend.planned_questions = std::max<std::size_t>(1, c.planned_questions);
  return c;
}

// ---------------------------------------------------------------------------
// Events

std::string_view to_string(EventKind kind) noexcept {
  switch (kind) {
  case EventKind::created: return "created";
  case EventKind::question_served: return "question_served";
  case EventKind::answer_submitted: return "answer_submitted";
  case EventKind::level_changed: return "level_changed";
  case EventKind::session_ended: return "session_ended";
  }
  return "created";
}

std::optional<EventKind> parse_event_kind(std::string_view name) noexcept {
  for (auto k : {EventKind::created, EventKind::question_served, EventKind::answer_submitted,
                 EventKind::level_changed, EventKind::session_ended}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

std::string SessionEvent::to_line() const {
  const Json j{{"seq", seq}, {"kind", to_string(kind)}, {"payload", payload}, {"wall_time", wall_time}};
  return j.dump(-1, ' ', false, Json::error_handler_t::replace);
}

SessionEvent SessionEvent::from_line(std::string_view line) {
  Json j;
  try {
    j = Json::parse(line);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::corruption, std::string("unreadable event line: ") + e.what());
  }
  const std::string where =
      j.is_object() && j.contains("seq") ? "event seq " + j["seq"].dump() + ": " : "event: ";
  if (!j.is_object() || !j.contains("seq") || !j["seq"].is_number_unsigned() || !j.contains("kind") ||
      !j["kind"].is_string() || !j.contains("payload")) {
    throw Error(ErrorCode::corruption, where + "missing seq, kind or payload");
  }
  SessionEvent e;
  e.seq = j["seq"].get<std::size_t>();
  const auto kind = parse_event_kind(j["kind"].get<std::string>());
  if (!kind) throw Error(ErrorCode::corruption, where + "unknown event kind " + j["kind"].dump());
  e.kind = *kind;
  e.payload = j["payload"];
  e.wall_time = j.value("wall_time", std::string{});
  return e;
}

std::string to_jsonl(const std::vector<SessionEvent>& events) {
  std::string out;
  for (const auto& e : events) {
    out += e.to_line();
    out += '\n';
  }
  return out;
}

std::vector<SessionEvent> parse_event_log(std::string_view jsonl) {
  std::vector<SessionEvent> out;
  while (!jsonl.empty()) {
    const std::size_t nl = jsonl.find('\n');
    const std::string_view line = jsonl.substr(0, nl);
    if (line.find_first_not_of(" \t\r") != std::string_view::npos) {
      out.push_back(SessionEvent::from_line(line));
    }
    if (nl == std::string_view::npos) break;
    jsonl.remove_prefix(nl + 1);
  }
  return out;
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t secs = std::chrono::system_clock::to_time_t(now);
  const auto millis =
      std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count() % 1000;
  std::tm tm{};
  gmtime_r(&secs, &tm);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ", tm.tm_year + 1900,
                tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec, static_cast<int>(millis));
  return buf;
}

// ---------------------------------------------------------------------------
// Session

Session Session::create(std::string id, SessionConfig config, Bank bank, WallClock clock) {
  config.policy.blend.planned_questions = config.planned_questions;
  config.validate(bank);

  Session s;
  s.id_ = std::move(id);
  s.bank_file_ = assemble_bank(bank.questions, bank.source_id);
  // Work on the canonical form so ids are positions in the stored file.
  s.bank_ = *validate_bank(s.bank_file_).bank;
  s.config_ = std::move(config);
  s.policy_ = init_policy(s.config_.policy);
  s.used_.assign(s.bank_.questions.size(), false);
  s.clock_ = clock ? std::move(clock) : [](std::size_t) { return utc_now(); };
  s.append(EventKind::created,
           Json{{"session_id", s.id_}, {"config", to_json(s.config_)}, {"bank_file", s.bank_file_}});
  return s;
}

void Session::append(EventKind kind, Json payload) {
  SessionEvent e;
  e.seq = events_.size();
  e.kind = kind;
  e.payload = std::move(payload);
  e.wall_time = clock_(e.seq);
  events_.push_back(std::move(e));
  if (sink_) sink_(events_.back());
}

void Session::finish() {
  if (status_ == SessionStatus::ended) return;
  status_ = SessionStatus::ended;
  planned_decision_.reset();
}

void Session::decide_next() {
  const std::uint64_t seed = config_.rng_seed + served_count_;
  auto [choice, trace] = choose_difficulty(policy_, config_.policy, seed);
  const Difficulty before = policy_.ladder.current_level;
  policy_ = commit_decision(std::move(policy_), choice, trace);
  if (policy_.ladder.current_level != before) {
    append(EventKind::level_changed,
           Json{{"from", to_string(before)}, {"to", to_string(choice)}});
  }
  planned_decision_ = std::make_pair(choice, std::move(trace));
}

std::optional<ServedQuestion> Session::next_question() {
  if (status_ == SessionStatus::ended) return std::nullopt;
  if (pending_) {
    throw Error(ErrorCode::protocol,
                "question " + std::to_string(*pending_) + " is still awaiting an answer");
  }
  if (served_count_ >= config_.planned_questions) {
    finish();
    append(EventKind::session_ended,
           Json{{"reason", end_reason_completed}, {"served_count", served_count_}});
    return std::nullopt;
  }
  if (!planned_decision_) decide_next();
  const auto [sampled, trace] = *planned_decision_;

  // Lowest timestamp at the sampled level; otherwise the nearest level
  // with questions left, easier first.
  std::optional<QuestionId> pick;
  for (int distance = 0; distance <= 2 && !pick; ++distance) {
    for (int sign : {-1, 1}) {
      const int level = static_cast<int>(sampled) + sign * distance;
      if (level < 0 || level > 2) continue;
      for (QuestionId i = 0; i < bank_.questions.size(); ++i) {
        if (!used_[i] && bank_.questions[i].d == static_cast<Difficulty>(level)) {
          pick = i;
          break;
        }
      }
      if (pick || distance == 0) break;
    }
  }
  if (!pick) {
    finish();
    append(EventKind::session_ended,
           Json{{"reason", end_reason_exhausted}, {"served_count", served_count_}});
    return std::nullopt;
  }

  const QuestionRecord& record = question(*pick);
  const bool fallback = record.d != sampled;
  used_[*pick] = true;
  pending_ = *pick;
  served_ids_.push_back(*pick);
  ++served_count_;
  planned_decision_.reset();
  append(EventKind::question_served, Json{{"question_id", *pick},
                                          {"difficulty", to_string(record.d)},
                                          {"sampled", to_string(sampled)},
                                          {"fallback", fallback},
                                          {"served_count", served_count_},
                                          {"trace", to_json(trace)}});
  return ServedQuestion{*pick, record, sampled, fallback, answers_.size(), config_.planned_questions};
}

AnswerResult Session::submit_answer(QuestionId question_id, std::size_t choice, double response_time) {
  if (status_ == SessionStatus::ended) throw Error(ErrorCode::session_ended, "session has ended");
  if (!pending_ || *pending_ != question_id) {
    throw Error(ErrorCode::conflict, "question " + std::to_string(question_id) + " is not awaiting an answer");
  }
  const QuestionRecord& record = question(question_id);
  if (choice >= record.a.options.size()) {
    throw Error(ErrorCode::validation, "choice " + std::to_string(choice) + " out of range for " +
                                           std::to_string(record.a.options.size()) + " options");
  }
  if (std::isnan(response_time)) throw Error(ErrorCode::validation, "response_time must be a number");
  response_time = std::clamp(response_time, 0.0, 10.0 * config_.time_limit);

  const bool correct = choice == record.a.correct_index;
  const AnswerOutcome outcome{question_id, record.d, correct, response_time, config_.time_limit};
  auto [next_policy, reward] = step(policy_, outcome, config_.policy);
  policy_ = std::move(next_policy);
  pending_.reset();
  answers_.push_back({question_id, correct});
  append(EventKind::answer_submitted, Json{{"question_id", question_id},
                                           {"choice", choice},
                                           {"response_time", response_time},
                                           {"correct", correct},
                                           {"reward", to_json(reward)}});

  AnswerResult result;
  result.correct = correct;
  result.correct_index = record.a.correct_index;
  result.reward = reward;
  const Difficulty level_before = policy_.ladder.current_level;
  if (served_count_ >= config_.planned_questions) {
    finish();
    append(EventKind::session_ended,
           Json{{"reason", end_reason_completed}, {"served_count", served_count_}});
  } else {
    decide_next();
  }
  result.new_level = policy_.ladder.current_level;
  result.level_changed = result.new_level != level_before;
  result.session_ended = status_ == SessionStatus::ended;
  result.state_snapshot = policy_.learner;
  return result;
}

void Session::end() {
  if (status_ == SessionStatus::ended) return;
  finish();
  append(EventKind::session_ended,
         Json{{"reason", end_reason_requested}, {"served_count", served_count_}});
}

Json Session::state_snapshot() const {
  Json out{{"session_id", id_},
           {"status", status_ == SessionStatus::active ? "active" : "ended"},
           {"learner", to_json(policy_.learner)},
           {"ladder", to_json(policy_.ladder)},
           {"qtable", to_json(policy_.qtable)},
           {"served_count", served_count_},
           {"answered_count", answers_.size()},
           {"planned_questions", config_.planned_questions},
           {"pending_question", pending_ ? Json(*pending_) : Json(nullptr)}};
  if (policy_.decision_trace) {
    out["last_decision"] = to_json(*policy_.decision_trace);
    out["w"] = policy_.decision_trace->w;
  } else {
    out["last_decision"] = nullptr;
    out["w"] = blend_weight(policy_.learner.confidence,
                            session_progress(policy_.learner, config_.policy.blend), config_.policy.blend);
  }
  return out;
}

bool Session::same_state(const Session& other) const {
  if (events_.size() != other.events_.size()) return false;
  for (std::size_t i = 0; i < events_.size(); ++i) {
    const auto& a = events_[i];
    const auto& b = other.events_[i];
    if (a.seq != b.seq || a.kind != b.kind || a.payload != b.payload) return false;
  }
  return id_ == other.id_ && to_json(config_) == to_json(other.config_) && bank_ == other.bank_ &&
         policy_ == other.policy_ && served_count_ == other.served_count_ &&
         pending_ == other.pending_ && planned_decision_ == other.planned_decision_ &&
         status_ == other.status_ && used_ == other.used_ && served_ids_ == other.served_ids_ &&
         answers_ == other.answers_;
}

// ---------------------------------------------------------------------------
// Replay

namespace {

[[noreturn]] void corrupt(std::size_t seq, const std::string& what) {
  throw Error(ErrorCode::corruption, "event seq " + std::to_string(seq) + ": " + what);
}

} // namespace

Session replay(const std::vector<SessionEvent>& log) {
  if (log.empty()) throw Error(ErrorCode::corruption, "empty event log");
  for (std::size_t i = 0; i < log.size(); ++i) {
    if (log[i].seq != i) corrupt(log[i].seq, "expected seq " + std::to_string(i));
  }
  if (log[0].kind != EventKind::created) corrupt(0, "first event must be 'created'");

  const Json& created = log[0].payload;
  if (!created.contains("config") || !created.contains("bank_file") || !created["bank_file"].is_string()) {
    corrupt(0, "created event lacks config or bank_file");
  }
  auto bank = validate_bank(created["bank_file"].get<std::string>());
  if (!bank.ok()) corrupt(0, "embedded bank does not validate");

  WallClock clock = [&log](std::size_t seq) {
    return seq < log.size() ? log[seq].wall_time : utc_now();
  };

  Session s;
  try {
    s = Session::create(created.value("session_id", std::string{}),
                        session_config_from_json(created["config"]), std::move(*bank.bank), clock);
  } catch (const Error& e) {
    corrupt(0, e.what());
  }

  auto check_generated = [&](std::size_t from) {
    const std::size_t upto = std::min(s.events_.size(), log.size());
    for (std::size_t j = from; j < upto; ++j) {
      if (s.events_[j].kind != log[j].kind || s.events_[j].payload != log[j].payload) {
        corrupt(j, "recorded '" + std::string(to_string(log[j].kind)) +
                       "' does not match the replayed event");
      }
    }
  };
  check_generated(0);

  std::size_t i = s.events_.size();
  while (i < log.size()) {
    const SessionEvent& e = log[i];
    try {
      switch (e.kind) {
      case EventKind::created: corrupt(e.seq, "duplicate 'created' event");
      case EventKind::question_served:
        if (!s.next_question()) corrupt(e.seq, "no question could be served");
        break;
      case EventKind::answer_submitted: {
        const Json& p = e.payload;
        if (!p.contains("question_id") || !p.contains("choice") || !p.contains("response_time")) {
          corrupt(e.seq, "answer payload incomplete");
        }
        s.submit_answer(p["question_id"].get<QuestionId>(), p["choice"].get<std::size_t>(),
                        p["response_time"].get<double>());
        break;
      }
      case EventKind::session_ended:
        if (s.status_ == SessionStatus::ended) corrupt(e.seq, "event after the session ended");
        if (e.payload.value("reason", std::string{}) == end_reason_completed) {
          if (!s.next_question()) break;
          corrupt(e.seq, "session was not complete");
        } else if (e.payload.value("reason", std::string{}) == end_reason_exhausted) {
          if (s.next_question()) corrupt(e.seq, "bank was not exhausted");
        } else {
          s.end();
        }
        break;
      case EventKind::level_changed:
        corrupt(e.seq, "level change not produced by the preceding event");
      }
    } catch (const Error& err) {
      if (err.code() == ErrorCode::corruption) throw;
      corrupt(e.seq, err.what());
    } catch (const Json::exception& err) {
      corrupt(e.seq, err.what());
    }
    if (s.events_.size() <= i) corrupt(e.seq, "event was not reproduced");
    check_generated(i);
    i = s.events_.size();
  }
  // The replay clock refers to `log`; new events get real stamps.
  s.clock_ = [](std::size_t) { return utc_now(); };
  return s;
}

// ---------------------------------------------------------------------------

Transcript transcript_from_bank(const Bank& bank) {
  Transcript t;
  t.source_id = bank.source_id;
  for (const auto& q : bank.questions) {
    if (q.c.empty()) continue;
    if (!t.segments.empty() && t.segments.back().u == q.c) continue;
    t.segments.push_back({q.t, q.c, t.segments.size()});
  }
  return t;
}

SummaryReport summarize_session(const Session& session, const Transcript& transcript,
                                const LearnerProfile& profile) {
  std::vector<AnsweredQuestion> answers;
  for (const auto& a : session.answers()) answers.push_back(a);
  return compose_summary(session.bank(), answers, transcript, profile);
}

} // namespace pal
