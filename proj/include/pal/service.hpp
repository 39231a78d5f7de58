#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>

#include "pal/bank.hpp"
#include "pal/errors.hpp"
#include "pal/session.hpp"
#include "pal/transcript.hpp"

namespace pal {

struct Response {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

int http_status(ErrorCode code) noexcept;

/// {"error": {"code": ..., "message": ...}} plus optional extra fields.
Response error_response(ErrorCode code, std::string_view message, const Json& extra = nullptr);

/// The session API independent of any transport. With a data directory,
/// banks, compiled transcripts and session logs are persisted there and
/// restored (by replay) on construction:
///
///   <dir>/banks/<bank_id>.json
///   <dir>/banks/<bank_id>.transcript.json
///   <dir>/sessions/<session_id>.jsonl
///
/// Mutations on one session are serialized; a request that finds the
/// session busy gets a conflict instead of waiting.
class Service {
public:
  explicit Service(std::optional<std::filesystem::path> data_dir = std::nullopt, WallClock clock = {});
  ~Service();

  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  Response upload_bank(std::string_view body);
  Response compile_bank(std::string_view body);
  Response create_session(std::string_view body);
  Response next_question(const std::string& session_id);
  Response submit_answer(const std::string& session_id, std::string_view body);
  Response state(const std::string& session_id);
  Response summary(const std::string& session_id);
  Response events(const std::string& session_id);

  std::size_t session_count() const;
  std::size_t bank_count() const;

private:
  struct Entry;

  std::shared_ptr<Entry> find(const std::string& session_id) const;
  std::string store_bank(const std::string& canonical);
  void restore();

  std::optional<std::filesystem::path> dir_;
  WallClock clock_;
  mutable std::mutex mutex_;
  std::map<std::string, Bank> banks_;
  std::map<std::string, Transcript> transcripts_;
  std::map<std::string, std::shared_ptr<Entry>> sessions_;
  std::size_t next_session_ = 1;
};

} // namespace pal
