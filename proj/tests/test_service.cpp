#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "pal/serialization.hpp"
#include "pal/service.hpp"
#include "pal/simulator.hpp"

using namespace pal;
namespace fs = std::filesystem;

namespace {

std::string read_fixture(const std::string& name) {
  std::ifstream in(std::string(PAL_FIXTURE_DIR) + "/" + name, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("pal-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter()++));
    fs::remove_all(path);
  }
  ~TempDir() { fs::remove_all(path); }
  static int& counter() {
    static int n = 0;
    return n;
  }
};

Json body(const Response& r) { return Json::parse(r.body); }

std::string upload_uniform(Service& svc, std::size_t per_level) {
  const Bank b = uniform_bank(per_level);
  const auto r = svc.upload_bank(assemble_bank(b.questions, b.source_id));
  REQUIRE(r.status == 201);
  return body(r)["bank_id"];
}

std::string start(Service& svc, const std::string& bank_id, std::size_t planned, std::uint64_t seed = 1) {
  const auto r = svc.create_session(
      Json{{"bank_id", bank_id}, {"learner_id", "ana"}, {"planned_questions", planned}, {"rng_seed", seed}}.dump());
  REQUIRE(r.status == 201);
  return body(r)["session_id"];
}

// Plays one question; returns false once the session has ended.
bool play_one(Service& svc, const std::string& id, std::size_t choice) {
  const auto q = svc.next_question(id);
  if (q.status == 409) return false;
  REQUIRE(q.status == 200);
  const auto a = svc.submit_answer(id, Json{{"question_id", body(q)["question_id"]}, {"choice", choice}, {"response_time", 4.5}}.dump());
  INFO(a.body);
  REQUIRE(a.status == 200);
  return !body(a)["session_ended"].get<bool>();
}

} // namespace

TEST_CASE("bank upload validates and returns a content id") {
  Service svc;
  const std::string id = upload_uniform(svc, 2);
  CHECK(id.size() == 17);
  CHECK(id == upload_uniform(svc, 2));
  CHECK(svc.bank_count() == 1);

  const auto bad = svc.upload_bank(R"({"schema":"pal-bank/1","source_id":"x","questions":[{"q":"","a":{"options":["a"],"correct_index":3},"d":"easy","t":1,"c":""}]})");
  CHECK(bad.status == 422);
  const auto err = body(bad)["error"];
  CHECK(err["code"] == "validation");
  CHECK(err["violations"].size() >= 2);
}

TEST_CASE("compile returns a canonical bank") {
  Service svc;
  const auto r = svc.compile_bank(Json{{"transcript", read_fixture("thermo.srt")}, {"format", "srt"}}.dump());
  REQUIRE(r.status == 200);
  const auto v = validate_bank(r.body);
  REQUIRE(v.ok());
  CHECK(v.bank->questions.size() == 3);
  CHECK(svc.bank_count() == 1);

  CHECK(svc.compile_bank(R"({"transcript": "1\n00:00:01,000 --> nonsense\nHi\n", "format": "srt"})").status == 400);
  CHECK(svc.compile_bank(R"({"format": "srt"})").status == 422);
  CHECK(svc.compile_bank("not json").status == 400);
}

TEST_CASE("session lifecycle over the service") {
  Service svc;
  const std::string bank = upload_uniform(svc, 3);
  CHECK(svc.create_session(Json{{"bank_id", "nope"}, {"planned_questions", 1}}.dump()).status == 404);
  CHECK(svc.create_session(Json{{"bank_id", bank}, {"planned_questions", 0}}.dump()).status == 422);
  CHECK(svc.create_session(Json{{"bank_id", bank}, {"planned_questions", 10}}.dump()).status == 422);

  const std::string id = start(svc, bank, 3);
  const auto q = svc.next_question(id);
  REQUIRE(q.status == 200);
  const Json qj = body(q);
  CHECK_FALSE(qj.contains("a"));
  CHECK(qj["options"].size() == 4);
  CHECK(qj["time_limit"] == 30.0);
  CHECK(qj["progress"]["answered"] == 0);
  CHECK(qj["progress"]["planned"] == 3);

  CHECK(body(svc.next_question(id))["error"]["code"] == "protocol");
  CHECK(svc.summary(id).status == 409);
  CHECK(svc.submit_answer(id, R"({"question_id": 999, "choice": 0})").status == 409);
  CHECK(svc.submit_answer(id, Json{{"question_id", qj["question_id"]}, {"choice", 9}}.dump()).status == 422);
  CHECK(svc.submit_answer(id, R"({"choice": 0})").status == 422);

  const auto a = svc.submit_answer(id, Json{{"question_id", qj["question_id"]}, {"choice", 0}, {"response_time", 3}}.dump());
  REQUIRE(a.status == 200);
  CHECK(body(a)["correct"] == true);
  CHECK(body(a)["correct_index"] == 0);
  CHECK(body(a)["reward"]["r_acc"] == 1.0);

  const Json st = body(svc.state(id));
  CHECK(st["answered_count"] == 1);
  CHECK(st.contains("learner"));
  CHECK(st.contains("ladder"));
  CHECK(st["w"].get<double>() <= 0.8);

  while (play_one(svc, id, 1)) {
  }
  CHECK(svc.next_question(id).status == 409);
  const auto sum = svc.summary(id);
  REQUIRE(sum.status == 200);
  CHECK(body(sum)["rendered"].get<std::string>().find("Discovery Zone") != std::string::npos);

  const auto ev = svc.events(id);
  CHECK(ev.content_type == "application/x-ndjson");
  const auto log = parse_event_log(ev.body);
  CHECK(log.front().kind == EventKind::created);
  CHECK(log.back().kind == EventKind::session_ended);

  CHECK(svc.state("missing").status == 404);
}

TEST_CASE("sessions survive a restart through their logs") {
  TempDir tmp;
  std::string id, bank, before;
  {
    Service svc(tmp.path);
    bank = upload_uniform(svc, 4);
    id = start(svc, bank, 6, 9);
    for (int i = 0; i < 3; ++i) play_one(svc, id, i % 2);
    CHECK(svc.next_question(id).status == 200); // left pending
    before = svc.events(id).body;
  }
  CHECK(fs::exists(tmp.path / "banks" / (bank + ".json")));
  CHECK(fs::exists(tmp.path / "sessions" / (id + ".jsonl")));

  Service again(tmp.path);
  CHECK(again.session_count() == 1);
  CHECK(again.events(id).body == before);
  CHECK(again.next_question(id).status == 409);
  const Json pending = body(again.state(id))["pending_question"];
  CHECK(again.submit_answer(id, Json{{"question_id", pending}, {"choice", 0}}.dump()).status == 200);
  while (play_one(again, id, 0)) {
  }
  const std::string second = start(again, bank, 2);
  CHECK(second != id);

  // The file on disk replays to the same log the service holds.
  std::ifstream in(tmp.path / "sessions" / (id + ".jsonl"));
  std::ostringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str() == again.events(id).body);
}

TEST_CASE("summary uses the compiled transcript when there is one") {
  Service svc;
  const auto compiled = svc.compile_bank(Json{{"transcript", read_fixture("thermo.srt")}, {"format", "srt"}}.dump());
  const std::string bank = bank_id_for(compiled.body);
  const std::string id = start(svc, bank, 3);
  while (play_one(svc, id, 0)) {
  }
  const Json report = body(svc.summary(id));
  CHECK(report["headers"][0] == "Territory Mastered");
  CHECK(report["discovery"].size() + report["mastered"].size() >= 1);
}
