#include "pal/service.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "pal/question_pipeline.hpp"
#include "pal/serialization.hpp"

namespace pal {

namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(ErrorCode::not_found, "cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& p, std::string_view bytes) {
  const fs::path tmp = p.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error(ErrorCode::corruption, "cannot write " + tmp.string());
  }
  fs::rename(tmp, p);
}

Json parse_body(std::string_view body) {
  try {
    return Json::parse(body);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::parse, std::string("request body is not JSON: ") + e.what());
  }
}

Response ok(const Json& body, int status = 200) { return {status, body.dump(), "application/json"}; }

template <class F>
Response guarded(F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    return error_response(e.code(), e.what());
  } catch (const Json::exception& e) {
    return error_response(ErrorCode::validation, e.what());
  } catch (const std::exception& e) {
    return {500, Json{{"error", {{"code", "internal"}, {"message", e.what()}}}}.dump()};
  }
}

} // namespace

int http_status(ErrorCode code) noexcept {
  switch (code) {
  case ErrorCode::validation: return 422;
  case ErrorCode::parse: return 400;
  case ErrorCode::ordering: return 422;
  case ErrorCode::conflict: return 409;
  case ErrorCode::protocol: return 409;
  case ErrorCode::not_found: return 404;
  case ErrorCode::corruption: return 500;
  case ErrorCode::session_ended: return 409;
  }
  return 500;
}

Response error_response(ErrorCode code, std::string_view message, const Json& extra) {
  Json err{{"code", to_string(code)}, {"message", message}};
  if (extra.is_object()) {
    for (const auto& [k, v] : extra.items()) err[k] = v;
  }
  return {http_status(code), Json{{"error", err}}.dump(), "application/json"};
}

struct Service::Entry {
  std::mutex mutex;
  std::optional<Session> session;
  std::optional<fs::path> log_path;
};

Service::Service(std::optional<fs::path> data_dir, WallClock clock)
    : dir_(std::move(data_dir)), clock_(std::move(clock)) {
  if (dir_) {
    fs::create_directories(*dir_ / "banks");
    fs::create_directories(*dir_ / "sessions");
    restore();
  }
}

Service::~Service() = default;

void Service::restore() {
  for (const auto& item : fs::directory_iterator(*dir_ / "banks")) {
    const std::string name = item.path().filename().string();
    const std::string stem = name.substr(0, name.find('.'));
    if (name == stem + ".json") {
      auto v = validate_bank(read_file(item.path()));
      if (!v.ok()) throw Error(ErrorCode::corruption, "stored bank " + name + " does not validate");
      banks_[stem] = std::move(*v.bank);
    } else if (name == stem + ".transcript.json") {
      transcripts_[stem] = parse_transcript(read_file(item.path()), TranscriptFormat::plain_json, stem);
    }
  }
  for (const auto& item : fs::directory_iterator(*dir_ / "sessions")) {
    if (item.path().extension() != ".jsonl") continue;
    const std::string id = item.path().stem().string();
    auto entry = std::make_shared<Entry>();
    try {
      entry->session = replay(parse_event_log(read_file(item.path())));
    } catch (const Error& e) {
      throw Error(ErrorCode::corruption, "session " + id + ": " + e.what());
    }
    entry->log_path = item.path();
    const fs::path path = item.path();
    entry->session->set_event_sink([path](const SessionEvent& e) {
      std::ofstream out(path, std::ios::binary | std::ios::app);
      out << e.to_line() << '\n';
    });
    sessions_[id] = entry;
    if (id.size() > 1 && id[0] == 's') {
      try {
        next_session_ = std::max<std::size_t>(next_session_, std::stoull(id.substr(1)) + 1);
      } catch (const std::exception&) {
      }
    }
  }
}

std::size_t Service::session_count() const {
  std::lock_guard lock(mutex_);
  return sessions_.size();
}

std::size_t Service::bank_count() const {
  std::lock_guard lock(mutex_);
  return banks_.size();
}

std::string Service::store_bank(const std::string& canonical) {
  auto v = validate_bank(canonical);
  if (!v.ok()) throw Error(ErrorCode::validation, "bank does not validate");
  const std::string id = bank_id_for(canonical);
  std::lock_guard lock(mutex_);
  if (!banks_.count(id)) {
    if (dir_) write_file(*dir_ / "banks" / (id + ".json"), canonical);
    banks_[id] = std::move(*v.bank);
  }
  return id;
}

std::shared_ptr<Service::Entry> Service::find(const std::string& session_id) const {
  std::lock_guard lock(mutex_);
  auto it = sessions_.find(session_id);
  if (it == sessions_.end()) throw Error(ErrorCode::not_found, "unknown session '" + session_id + "'");
  return it->second;
}

Response Service::upload_bank(std::string_view body) {
  return guarded([&] {
    auto v = validate_bank(body);
    if (!v.ok()) {
      Json list = Json::array();
      for (const auto& x : v.violations) list.push_back({{"path", x.path}, {"reason", x.reason}});
      return error_response(ErrorCode::validation, "bank does not validate", Json{{"violations", list}});
    }
    // Store the canonical form so equal banks share one id.
    const std::string canonical = assemble_bank(v.bank->questions, v.bank->source_id);
    const std::string id = store_bank(canonical);
    return ok(Json{{"bank_id", id}, {"questions", v.bank->questions.size()}}, 201);
  });
}

Response Service::compile_bank(std::string_view body) {
  return guarded([&] {
    const Json req = parse_body(body);
    if (!req.is_object() || !req.contains("transcript") || !req["transcript"].is_string()) {
      throw Error(ErrorCode::validation, "transcript (string) is required");
    }
    const auto format = parse_transcript_format(req.value("format", std::string("srt")));
    if (!format) throw Error(ErrorCode::validation, "format must be srt, vtt or json");
    const std::string source = req.value("source_id", std::string("lecture"));
    const Transcript transcript = parse_transcript(req["transcript"].get<std::string>(), *format, source);
    const PipelineConfig config = pipeline_config_from_json(req.value("config", Json(nullptr)));
    const std::string canonical = pal::compile_bank(transcript, config);
    const std::string id = store_bank(canonical);
    {
      std::lock_guard lock(mutex_);
      if (dir_) write_file(*dir_ / "banks" / (id + ".transcript.json"), to_json(transcript).dump());
      transcripts_[id] = transcript;
    }
    Response r{200, canonical, "application/json"};
    return r;
  });
}

Response Service::create_session(std::string_view body) {
  return guarded([&] {
    const SessionConfig config = session_config_from_json(parse_body(body));
    Bank bank;
    std::string id;
    {
      std::lock_guard lock(mutex_);
      auto it = banks_.find(config.bank_id);
      if (it == banks_.end()) throw Error(ErrorCode::not_found, "unknown bank_id '" + config.bank_id + "'");
      bank = it->second;
      char buf[32];
      std::snprintf(buf, sizeof buf, "s%06zu", next_session_++);
      id = buf;
    }
    auto entry = std::make_shared<Entry>();
    std::lock_guard entry_lock(entry->mutex);
    entry->session = Session::create(id, config, std::move(bank), clock_);
    if (dir_) {
      const fs::path path = *dir_ / "sessions" / (id + ".jsonl");
      write_file(path, to_jsonl(entry->session->events()));
      entry->log_path = path;
      entry->session->set_event_sink([path](const SessionEvent& e) {
        std::ofstream out(path, std::ios::binary | std::ios::app);
        out << e.to_line() << '\n';
      });
    }
    {
      std::lock_guard lock(mutex_);
      sessions_[id] = entry;
    }
    return ok(Json{{"session_id", id}}, 201);
  });
}

Response Service::next_question(const std::string& session_id) {
  return guarded([&] {
    auto entry = find(session_id);
    std::unique_lock lock(entry->mutex, std::try_to_lock);
    if (!lock) throw Error(ErrorCode::conflict, "session is busy");
    Session& s = *entry->session;
    if (s.status() == SessionStatus::ended) throw Error(ErrorCode::session_ended, "session has ended");
    auto q = s.next_question();
    if (!q) throw Error(ErrorCode::session_ended, "session has ended");
    return ok(Json{{"question_id", q->question_id},
                   {"q", q->record.q},
                   {"options", q->record.a.options},
                   {"difficulty", to_string(q->record.d)},
                   {"sampled", to_string(q->sampled)},
                   {"fallback", q->fallback},
                   {"t", q->record.t},
                   {"c", q->record.c},
                   {"time_limit", s.config().time_limit},
                   {"progress", {{"answered", q->answered}, {"planned", q->planned}}}});
  });
}

Response Service::submit_answer(const std::string& session_id, std::string_view body) {
  return guarded([&] {
    const Json req = parse_body(body);
    if (!req.is_object() || !req.contains("question_id") || !req.contains("choice") ||
        !req["question_id"].is_number_unsigned() || !req["choice"].is_number_integer()) {
      throw Error(ErrorCode::validation, "question_id and choice (non-negative integers) are required");
    }
    if (req["choice"].get<long long>() < 0) throw Error(ErrorCode::validation, "choice must be >= 0");
    double rt = 0.0;
    if (req.contains("response_time")) {
      if (!req["response_time"].is_number()) throw Error(ErrorCode::validation, "response_time must be a number");
      rt = req["response_time"].get<double>();
    }
    auto entry = find(session_id);
    std::unique_lock lock(entry->mutex, std::try_to_lock);
    if (!lock) throw Error(ErrorCode::conflict, "session is busy");
    const AnswerResult r =
        entry->session->submit_answer(req["question_id"].get<QuestionId>(), req["choice"].get<std::size_t>(), rt);
    return ok(Json{{"correct", r.correct},
                   {"correct_index", r.correct_index},
                   {"reward", to_json(r.reward)},
                   {"new_level", to_string(r.new_level)},
                   {"level_changed", r.level_changed},
                   {"session_ended", r.session_ended},
                   {"state", to_json(r.state_snapshot)}});
  });
}

Response Service::state(const std::string& session_id) {
  return guarded([&] {
    auto entry = find(session_id);
    std::lock_guard lock(entry->mutex);
    return ok(entry->session->state_snapshot());
  });
}

Response Service::summary(const std::string& session_id) {
  return guarded([&] {
    auto entry = find(session_id);
    std::lock_guard lock(entry->mutex);
    const Session& s = *entry->session;
    if (s.status() != SessionStatus::ended) throw Error(ErrorCode::protocol, "session is still active");
    Transcript transcript;
    {
      std::lock_guard map_lock(mutex_);
      auto it = transcripts_.find(s.config().bank_id);
      transcript = it != transcripts_.end() ? it->second : transcript_from_bank(s.bank());
    }
    const LearnerProfile profile{s.config().learner_id, s.config().interests};
    return ok(to_json(summarize_session(s, transcript, profile)));
  });
}

Response Service::events(const std::string& session_id) {
  return guarded([&] {
    auto entry = find(session_id);
    std::lock_guard lock(entry->mutex);
    return Response{200, to_jsonl(entry->session->events()), "application/x-ndjson"};
  });
}

} // namespace pal
