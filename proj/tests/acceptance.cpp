// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "extraction_oracle.hpp"
#include "pal/core_model.hpp"
#include "pal/hybrid_policy.hpp"
#include "pal/irt_prior.hpp"
#include "pal/question_pipeline.hpp"
#include "pal/rl_head.hpp"
#include "pal/session.hpp"
#include "pal/simulator.hpp"

using namespace pal;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Criterion {
  const char* name;
  double budget_seconds; // 0 = no runtime bound
  std::function<Outcome()> run;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

std::string read_fixture(const std::string& name) {
  std::ifstream in(std::string(PAL_FIXTURE_DIR) + "/" + name, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome reward_ranges() {
  const ModelConfig cfg;
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto random_outcome = [&](QuestionId id) {
    AnswerOutcome o;
    o.question_id = id;
    o.difficulty = difficulty_at(rng() % 3);
    o.correct = rng() % 2;
    o.time_limit = 5.0 + 55.0 * unit(rng);
    o.response_time = 2.0 * o.time_limit * unit(rng);
    return o;
  };
  std::size_t bad = 0;
  for (int i = 0; i < 10000; ++i) {
    LearnerState s = init_state(cfg);
    const std::size_t history = rng() % 13;
    QuestionId id = 0;
    for (std::size_t h = 0; h < history; ++h) {
      const auto o = random_outcome(++id);
      s = update_state(s, o, PriorConfig{}.params(o.difficulty), cfg);
    }
    const auto r = compute_reward(s, random_outcome(++id), difficulty_at(rng() % 3), cfg);
    const bool ok = (r.r_acc == 1.0 || r.r_acc == -0.5) && r.r_time >= 0.0 && r.r_time <= 0.3 &&
                    r.r_prog >= 0.0 && r.r_prog <= 0.2 && r.r_mom >= 0.0 && r.r_mom <= 0.1 &&
                    r.total == r.r_acc + r.r_time + r.r_prog + r.r_mom;
    bad += !ok;
  }
  return {bad == 0, std::to_string(10000 - bad) + "/10000 breakdowns in range with exact totals"};
}

Outcome two_pl_properties() {
  const PriorConfig literal = [] {
    PriorConfig c;
    c.prior_mode = PriorMode::literal_2pl;
    return c;
  }();
  const PriorConfig zone;
  std::size_t violations = 0;
  double worst_sum = 0.0;
  for (int i = 0; i < 101; ++i) {
    const double x = -3.0 + 6.0 * i / 100.0;
    if (i > 0) {
      const double prev = -3.0 + 6.0 * (i - 1) / 100.0;
      for (double a : {0.5, 1.2, 2.0}) {
        // increasing in theta, decreasing in b
        violations += !(success_probability(x, {a, 0.0}) > success_probability(prev, {a, 0.0}));
        violations += !(success_probability(0.0, {a, x}) < success_probability(0.0, {a, prev}));
      }
    }
    for (const auto* cfg : {&literal, &zone}) {
      worst_sum = std::max(worst_sum, std::fabs(stat_distribution(x, *cfg).sum() - 1.0));
    }
  }
  // Hand-normalized sigma(1.2), 1/2, sigma(-1.2).
  const double expected[3] = {0.51234986, 0.33333333, 0.15431681};
  const auto p = stat_distribution(0.0, literal);
  double worst_example = 0.0;
  for (int k = 0; k < 3; ++k) worst_example = std::max(worst_example, std::fabs(p.p[k] - expected[k]));
  return {violations == 0 && worst_sum <= 1e-9 && worst_example <= 1e-4,
          std::to_string(violations) + " monotonicity violations; max |sum-1| " + fmt("%.1e", worst_sum) +
              "; literal example error " + fmt("%.1e", worst_example)};
}

Outcome hysteresis() {
  const std::string_view pattern = "WCCWC";
  std::size_t changes = 0;
  bool band_held = true;
  for (Difficulty start : kAllDifficulties) {
    SessionConfig cfg;
    cfg.bank_id = "synthetic";
    cfg.planned_questions = 100;
    cfg.rng_seed = 77;
    cfg.policy.start_level = start;
    auto s = Session::create("h", cfg, uniform_bank(100), [](std::size_t) { return std::string{}; });
    std::size_t i = 0;
    while (auto q = s.next_question()) {
      const bool correct = pattern[i % pattern.size()] == 'C';
      const std::size_t key = q->record.a.correct_index;
      s.submit_answer(q->question_id, correct ? key : (key + 1) % 4, 10.0);
      const double acc = s.policy().learner.recent_accuracy;
      // A single answer cannot sit strictly inside the band; the ladder
      // cannot act on it either (cooldown).
      if (i >= 1 && !(acc > 0.35 && acc < 0.75)) band_held = false;
      ++i;
    }
    for (const auto& e : s.events()) changes += e.kind == EventKind::level_changed;
  }
  return {band_held && changes == 0,
          std::to_string(changes) + " committed level changes over 3 x 100 questions (one run per start level)"};
}

Outcome adaptation() {
  int up = 0, down = 0;
  std::size_t worst_up = 0, worst_down = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    SyntheticLearner strong;
    strong.true_theta = 2.0;
    const auto a = run_episode(PolicyConfig{}, strong, 40, seed);
    const auto hard = a.first_reach[index_of(Difficulty::Hard)];
    if (hard && *hard <= 30) ++up;
    worst_up = std::max(worst_up, hard.value_or(999));

    SyntheticLearner weak;
    weak.true_theta = -2.0;
    PolicyConfig from_hard;
    from_hard.start_level = Difficulty::Hard;
    const auto b = run_episode(from_hard, weak, 40, seed);
    const auto easy = b.first_reach[index_of(Difficulty::Easy)];
    if (easy && *easy <= 15) ++down;
    worst_down = std::max(worst_down, easy.value_or(999));
  }
  return {up >= 95 && down >= 95,
          "theta +2 reached Hard by q30 in " + std::to_string(up) + "/100 (slowest " + std::to_string(worst_up) +
              "); theta -2 reached Easy by q15 in " + std::to_string(down) + "/100 (slowest " +
              std::to_string(worst_down) + ")"};
}

Outcome q_fixed_point() {
  const BanditConfig cfg;
  const double rewards[3] = {0.2, 0.5, 1.0};
  QTable q = init_qtable(cfg);
  SplitMix64 rng(12345);
  for (int i = 0; i < 10000; ++i) {
    const Difficulty a = difficulty_at(static_cast<std::size_t>(rng.next() % 3));
    q = q_update(q, a, rewards[index_of(a)], cfg);
  }
  const double max_q = std::max({q.q_values[0], q.q_values[1], q.q_values[2]});
  const double target = 1.0 / (1.0 - cfg.gamma);
  return {std::fabs(max_q - target) <= 1e-2, "max Q " + fmt("%.6f", max_q) + " vs " + fmt("%.1f", target)};
}

Outcome blend_cap() {
  const BlendConfig cfg;
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::size_t over = 0, zero_cases = 0, zero_bad = 0;
  double max_w = 0.0;
  for (int i = 0; i < 10000; ++i) {
    double c = unit(rng), p = unit(rng);
    if (i % 5 == 0) c = 0.0;
    if (i % 7 == 0) p = 0.0;
    const double w = blend_weight(c, p, cfg);
    max_w = std::max(max_w, w);
    over += w > 0.8;
    if (c * p == 0.0) {
      ++zero_cases;
      zero_bad += w != 0.2;
    }
  }
  return {over == 0 && zero_bad == 0,
          "max w " + fmt("%.6f", max_w) + "; " + std::to_string(zero_cases) + " zero-product samples, " +
              std::to_string(zero_bad) + " not at 0.2"};
}

Outcome replay_determinism() {
  std::mt19937_64 rng(314159);
  std::size_t mismatches = 0, events = 0;
  for (int k = 0; k < 50; ++k) {
    const std::size_t per_level = 2 + rng() % 15;
    SessionConfig cfg;
    cfg.bank_id = "synthetic";
    cfg.learner_id = "learner-" + std::to_string(k);
    cfg.planned_questions = 1 + rng() % (3 * per_level);
    cfg.rng_seed = rng();
    cfg.time_limit = 10.0 + static_cast<double>(rng() % 50);
    cfg.policy.start_level = difficulty_at(rng() % 3);
    cfg.policy.mode = static_cast<PolicyMode>(rng() % 4);
    cfg.policy.fixed_level = difficulty_at(rng() % 3);
    auto live = Session::create("r" + std::to_string(k), cfg, uniform_bank(per_level));
    const bool end_early = rng() % 5 == 0;
    const std::size_t stop_at = rng() % (cfg.planned_questions + 1);
    std::size_t answered = 0;
    while (auto q = live.next_question()) {
      if (end_early && answered == stop_at) break;
      const double rt = std::uniform_real_distribution<double>(-5.0, 12.0 * cfg.time_limit)(rng);
      live.submit_answer(q->question_id, rng() % q->record.a.options.size(), rt);
      ++answered;
    }
    if (end_early && live.status() == SessionStatus::active && !live.pending_question()) live.end();

    const auto restored = replay(parse_event_log(to_jsonl(live.events())));
    events += live.events().size();
    const bool same = restored.same_state(live) && restored.policy() == live.policy() &&
                      restored.policy().qtable.q_values == live.policy().qtable.q_values &&
                      restored.policy().learner.skill == live.policy().learner.skill;
    mismatches += !same;
  }
  return {mismatches == 0, std::to_string(50 - mismatches) + "/50 sessions replayed exactly (" +
                               std::to_string(events) + " events)"};
}

Outcome pipeline_golden() {
  const auto transcript = parse_transcript(read_fixture("thermo.srt"), TranscriptFormat::srt, "thermo");
  std::vector<double> cue_times;
  for (const auto& p : find_candidate_points(transcript, PipelineConfig{})) {
    if (p.trigger == CandidateTrigger::cue && p.cue == "is defined as") cue_times.push_back(p.timestamp);
  }
  std::size_t cue_points = 0;
  for (const auto& p : find_candidate_points(transcript, PipelineConfig{})) cue_points += p.trigger == CandidateTrigger::cue;
  const bool points_ok = cue_points == 3 && cue_times == std::vector<double>{12.5, 40.0, 71.2};

  const bool rater_ok =
      rate_difficulty("What is entropy?") == Difficulty::Easy &&
      rate_difficulty("Why does entropy increase in isolated systems?") == Difficulty::Medium &&
      rate_difficulty("Predict what happens to entropy when the gas expands.") == Difficulty::Hard;

  const std::string bank = compile_bank(transcript, PipelineConfig{});
  const auto v = validate_bank(bank);
  const bool roundtrip_ok = v.ok() && assemble_bank(v.bank->questions, v.bank->source_id) == bank;

  return {points_ok && rater_ok && roundtrip_ok,
          std::string("cue points ") + (points_ok ? "12.5/40.0/71.2" : "WRONG") + "; rater " +
              (rater_ok ? "3/3" : "mismatch") + "; round-trip " + (roundtrip_ok ? "byte-identical" : "differs")};
}

Outcome extraction_oracle() {
  std::mt19937_64 rng(27182818);
  std::size_t agree = 0, sentences = 0;
  for (int i = 0; i < 20; ++i) {
    const auto t = testing::random_transcript(rng, 200);
    sentences += t.segments.size();
    const auto topic = testing::random_topic(rng);
    const std::size_t k = 1 + rng() % 8;
    agree += extract_relevant(topic, t, k) == testing::oracle_extract(topic, t, k);
  }
  return {agree == 20, std::to_string(agree) + "/20 transcripts match (" + std::to_string(sentences) + " sentences)"};
}

} // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"reward-ranges", 1.0, reward_ranges},
      {"2pl-properties", 0.0, two_pl_properties},
      {"hysteresis", 1.0, hysteresis},
      {"adaptation-speed", 10.0, adaptation},
      {"q-fixed-point", 1.0, q_fixed_point},
      {"blend-cap", 0.0, blend_cap},
      {"replay-determinism", 0.0, replay_determinism},
      {"pipeline-golden", 0.0, pipeline_golden},
      {"extraction-oracle", 5.0, extraction_oracle},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::string timing = fmt("%.3fs", secs);
    if (c.budget_seconds > 0.0) {
      timing += fmt(" (budget %.0fs)", c.budget_seconds);
      if (secs >= c.budget_seconds) {
        o.pass = false;
        o.detail += "; over time budget";
      }
    }
    std::printf("%s %-20s %s [%s]\n", o.pass ? "PASS" : "FAIL", c.name, o.detail.c_str(), timing.c_str());
    failed += !o.pass;
  }
  std::printf("%zu criteria, %d failed\n", criteria.size(), failed);
  return failed == 0 ? 0 : 1;
}
