// pal command-line front end.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "pal/http.hpp"
#include "pal/question_pipeline.hpp"
#include "pal/serialization.hpp"
#include "pal/session.hpp"
#include "pal/simulator.hpp"
#include "pal/text.hpp"

using namespace pal;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::not_found, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& bytes) {
  if (path.empty() || path == "-") {
    std::cout << bytes;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << bytes;
  if (!out) throw Error(ErrorCode::validation, "cannot write " + path);
}

TranscriptFormat format_for(const std::string& name, const std::string& path) {
  std::string f = name;
  if (f.empty()) {
    const auto dot = path.rfind('.');
    f = dot == std::string::npos ? "srt" : path.substr(dot + 1);
  }
  const auto parsed = parse_transcript_format(f);
  if (!parsed) throw Error(ErrorCode::validation, "unknown transcript format '" + f + "'");
  return *parsed;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"pal: adaptive lecture quizzes"};
  app.require_subcommand(1);

  // compile
  std::string in_path, format, out_path, cues_path;
  std::size_t every_n = PipelineConfig{}.every_n;
  auto* compile = app.add_subcommand("compile", "Build a question bank from a transcript");
  compile->add_option("--in", in_path, "Transcript file")->required();
  compile->add_option("--format", format, "srt, vtt or json (default: from extension)");
  compile->add_option("--out", out_path, "Bank file (default: stdout)");
  compile->add_option("--every-n", every_n, "Sentences between fallback question points");
  compile->add_option("--cues", cues_path, "File with one cue phrase per line");

  // validate
  std::string bank_path;
  auto* validate = app.add_subcommand("validate", "Check a bank file");
  validate->add_option("bank", bank_path, "Bank file")->required();

  // serve
  int port = 8080;
  std::string host = "127.0.0.1", data_dir = "pal-data";
  auto* serve = app.add_subcommand("serve", "Run the HTTP session service");
  serve->add_option("--port", port, "Port");
  serve->add_option("--host", host, "Bind address");
  serve->add_option("--data", data_dir, "Data directory (PAL_DATA_DIR overrides)");

  // simulate
  std::vector<std::string> policies{"hybrid"}, learners{"static:0"};
  std::size_t n_questions = 40;
  std::string seeds = "0..19", csv_path;
  auto* simulate = app.add_subcommand("simulate", "Run policies against synthetic learners");
  simulate->add_option("--policy", policies, "hybrid|stat|rl|fixed:<d> (repeatable)");
  simulate->add_option("--learner", learners, "static:<theta>|improving:<theta>,<delta>|noisy:<theta>,<p> (repeatable)");
  simulate->add_option("--n", n_questions, "Questions per episode");
  simulate->add_option("--seeds", seeds, "Seed or inclusive range a..b");
  simulate->add_option("--out", csv_path, "CSV output file");

  // summarize
  std::string log_path, transcript_path, transcript_format, profile_path, summary_out;
  auto* summarize = app.add_subcommand("summarize", "Summary of a finished session");
  summarize->add_option("--session", log_path, "Session event log (JSONL)")->required();
  summarize->add_option("--transcript", transcript_path, "Lecture transcript (default: bank contexts)");
  summarize->add_option("--format", transcript_format, "Transcript format (default: from extension)");
  summarize->add_option("--profile", profile_path, "Learner profile JSON");
  summarize->add_option("--out", summary_out, "Text output (default: stdout)");

  // replay
  std::string replay_path;
  auto* replay_cmd = app.add_subcommand("replay", "Rebuild a session from its log and print its state");
  replay_cmd->add_option("log", replay_path, "Session event log (JSONL)")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*compile) {
      PipelineConfig config;
      config.every_n = every_n;
      if (!cues_path.empty()) {
        config.cue_phrases.clear();
        std::istringstream lines(read_file(cues_path));
        for (std::string line; std::getline(lines, line);) {
          const auto cue = text::trim(line);
          if (!cue.empty() && cue[0] != '#') config.cue_phrases.emplace_back(cue);
        }
      }
      config.validate();
      const auto transcript = parse_transcript(read_file(in_path), format_for(format, in_path), in_path);
      const std::string bank = compile_bank(transcript, config);
      write_output(out_path, bank);
      if (!out_path.empty() && out_path != "-") {
        std::fprintf(stderr, "%zu questions -> %s\n", validate_bank(bank).bank->questions.size(), out_path.c_str());
      }
    } else if (*validate) {
      const auto v = validate_bank(read_file(bank_path));
      if (v.ok()) {
        std::printf("ok: %zu questions (easy %zu, medium %zu, hard %zu), id %s\n", v.bank->questions.size(),
                    v.bank->count(Difficulty::Easy), v.bank->count(Difficulty::Medium),
                    v.bank->count(Difficulty::Hard), bank_id_for(read_file(bank_path)).c_str());
        return 0;
      }
      for (const auto& x : v.violations) std::printf("%s: %s\n", x.path.c_str(), x.reason.c_str());
      return 1;
    } else if (*serve) {
      if (const char* env = std::getenv("PAL_DATA_DIR"); env && *env) data_dir = env;
      Service service(data_dir);
      httplib::Server server;
      mount_routes(server, service);
      std::fprintf(stderr, "serving %zu sessions from %s on %s:%d\n", service.session_count(), data_dir.c_str(),
                   host.c_str(), port);
      if (!server.listen(host, port)) {
        std::fprintf(stderr, "cannot listen on %s:%d\n", host.c_str(), port);
        return 1;
      }
    } else if (*simulate) {
      std::vector<PolicySpec> specs;
      for (const auto& p : policies) specs.push_back(parse_policy(p));
      std::vector<SyntheticLearner> population;
      for (const auto& l : learners) population.push_back(parse_learner(l));
      const auto report = compare_policies(specs, population, parse_seed_range(seeds), n_questions);
      std::cout << report.to_text();
      if (!csv_path.empty()) write_output(csv_path, report.to_csv());
    } else if (*summarize) {
      const Session session = replay(parse_event_log(read_file(log_path)));
      const Transcript transcript =
          transcript_path.empty()
              ? transcript_from_bank(session.bank())
              : parse_transcript(read_file(transcript_path), format_for(transcript_format, transcript_path),
                                 transcript_path);
      LearnerProfile profile{session.config().learner_id, session.config().interests};
      if (!profile_path.empty()) {
        const Json j = Json::parse(read_file(profile_path));
        profile.learner_id = j.value("learner_id", profile.learner_id);
        profile.interests = j.value("interests", profile.interests);
      }
      write_output(summary_out, summarize_session(session, transcript, profile).rendered);
    } else if (*replay_cmd) {
      const Session session = replay(parse_event_log(read_file(replay_path)));
      std::cout << session.state_snapshot().dump(2) << "\n";
    }
  } catch (const Error& e) {
    std::fprintf(stderr, "error (%s): %s\n", std::string(to_string(e.code())).c_str(), e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
