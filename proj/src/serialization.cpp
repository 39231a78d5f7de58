#include "pal/serialization.hpp"

#include "pal/errors.hpp"

namespace pal {

namespace {

std::string_view mode_name(PolicyMode m) {
  switch (m) {
  case PolicyMode::hybrid: return "hybrid";
  case PolicyMode::stat_only: return "stat_only";
  case PolicyMode::rl_only: return "rl_only";
  case PolicyMode::fixed: return "fixed";
  }
  return "hybrid";
}

template <typename T>
void read(const Json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const Json::exception&) {
    throw Error(ErrorCode::validation, std::string("bad value for config field '") + key + "'");
  }
}

} // namespace

Difficulty difficulty_from_json(const Json& j) {
  if (j.is_string()) {
    if (auto d = parse_difficulty(j.get<std::string>())) return *d;
  }
  throw Error(ErrorCode::validation, "difficulty must be one of easy, medium, hard");
}

Json to_json(const DifficultyDistribution& d) { return Json::array({d.p[0], d.p[1], d.p[2]}); }

Json to_json(DifficultySet s) {
  Json out = Json::array();
  for (Difficulty d : kAllDifficulties) {
    if (s.contains(d)) out.push_back(to_string(d));
  }
  return out;
}

Json to_json(const RewardBreakdown& r) {
  return Json{{"r_acc", r.r_acc}, {"r_time", r.r_time}, {"r_prog", r.r_prog},
              {"r_mom", r.r_mom}, {"total", r.total}};
}

Json to_json(const LearnerState& s, bool with_history) {
  Json out{{"skill", s.skill},
           {"recent_accuracy", s.recent_accuracy},
           {"norm_response_time", s.norm_response_time},
           {"streak_momentum", s.streak_momentum},
           {"learning_velocity", s.learning_velocity},
           {"confidence", s.confidence},
           {"correct_streak", s.correct_streak},
           {"answered_count", s.answered_count}};
  if (with_history) {
    Json history = Json::array();
    for (const auto& a : s.answer_history) {
      history.push_back({{"question_id", a.question_id},
                         {"difficulty", to_string(a.difficulty)},
                         {"correct", a.correct},
                         {"response_time", a.response_time},
                         {"time_limit", a.time_limit}});
    }
    out["answer_history"] = std::move(history);
  }
  return out;
}

Json to_json(const LadderState& l) {
  return Json{{"current_level", to_string(l.current_level)},
              {"questions_since_change", l.questions_since_change},
              {"questions_at_level", l.questions_at_level}};
}

Json to_json(const QTable& q) {
  return Json{{"q_values", Json::array({q.q_values[0], q.q_values[1], q.q_values[2]})},
              {"epsilon", q.epsilon},
              {"updates_seen", q.updates_seen}};
}

Json to_json(const DecisionTrace& t) {
  return Json{{"p_stat", to_json(t.p_stat)}, {"p_rl", to_json(t.p_rl)},
              {"w", t.w},                    {"allowed", to_json(t.allowed)},
              {"masked", to_json(t.masked)}, {"action", to_string(t.action)},
              {"rng_draw", t.rng_draw},      {"seed", t.seed}};
}

Json to_json(const PolicyConfig& c) {
  Json levels = Json::array();
  for (const auto& p : c.prior.params_per_level) {
    levels.push_back({{"discrimination", p.discrimination}, {"difficulty_location", p.difficulty_location}});
  }
  return Json{
      {"mode", mode_name(c.mode)},
      {"fixed_level", to_string(c.fixed_level)},
      {"start_level", to_string(c.start_level)},
      {"model",
       {{"accuracy_window", c.model.accuracy_window},
        {"ewma_beta", c.model.ewma_beta},
        {"streak_cap", c.model.streak_cap},
        {"velocity_window", c.model.velocity_window},
        {"confidence_saturation", c.model.confidence_saturation},
        {"elo_gain", c.model.elo_gain},
        {"skill_clamp", c.model.skill_clamp}}},
      {"prior",
       {{"params_per_level", levels},
        {"promote_threshold", c.prior.promote_threshold},
        {"demote_threshold", c.prior.demote_threshold},
        {"cooldown_len", c.prior.cooldown_len},
        {"hold_len", c.prior.hold_len},
        {"prior_mode", c.prior.prior_mode == PriorMode::literal_2pl ? "literal_2pl" : "target_zone"},
        {"target_success", c.prior.target_success},
        {"zone_sharpness", c.prior.zone_sharpness}}},
      {"bandit",
       {{"alpha", c.bandit.alpha},
        {"gamma", c.bandit.gamma},
        {"epsilon_init", c.bandit.epsilon_init},
        {"epsilon_decay", c.bandit.epsilon_decay},
        {"epsilon_floor", c.bandit.epsilon_floor}}},
      {"blend",
       {{"w0", c.blend.w0},
        {"kappa", c.blend.kappa},
        {"w_max", c.blend.w_max},
        {"planned_questions", c.blend.planned_questions}}},
  };
}

PolicyConfig policy_config_from_json(const Json& j, PolicyConfig c) {
  if (!j.is_object()) throw Error(ErrorCode::validation, "policy config must be an object");
  if (j.contains("mode")) {
    const std::string m = j["mode"].is_string() ? j["mode"].get<std::string>() : "";
    if (m == "hybrid") c.mode = PolicyMode::hybrid;
    else if (m == "stat_only") c.mode = PolicyMode::stat_only;
    else if (m == "rl_only") c.mode = PolicyMode::rl_only;
    else if (m == "fixed") c.mode = PolicyMode::fixed;
    else throw Error(ErrorCode::validation, "unknown policy mode");
  }
  if (j.contains("fixed_level")) c.fixed_level = difficulty_from_json(j["fixed_level"]);
  if (j.contains("start_level")) c.start_level = difficulty_from_json(j["start_level"]);

  if (j.contains("model")) {
    const auto& m = j["model"];
    read(m, "accuracy_window", c.model.accuracy_window);
    read(m, "ewma_beta", c.model.ewma_beta);
    read(m, "streak_cap", c.model.streak_cap);
    read(m, "velocity_window", c.model.velocity_window);
    read(m, "confidence_saturation", c.model.confidence_saturation);
    read(m, "elo_gain", c.model.elo_gain);
    read(m, "skill_clamp", c.model.skill_clamp);
  }
  if (j.contains("prior")) {
    const auto& p = j["prior"];
    if (p.contains("params_per_level")) {
      const auto& levels = p["params_per_level"];
      if (!levels.is_array() || levels.size() != 3) {
        throw Error(ErrorCode::validation, "params_per_level must hold three entries");
      }
      for (std::size_t i = 0; i < 3; ++i) {
        read(levels[i], "discrimination", c.prior.params_per_level[i].discrimination);
        read(levels[i], "difficulty_location", c.prior.params_per_level[i].difficulty_location);
      }
    }
    read(p, "promote_threshold", c.prior.promote_threshold);
    read(p, "demote_threshold", c.prior.demote_threshold);
    read(p, "cooldown_len", c.prior.cooldown_len);
    read(p, "hold_len", c.prior.hold_len);
    if (p.contains("prior_mode")) {
      const std::string m = p["prior_mode"].is_string() ? p["prior_mode"].get<std::string>() : "";
      if (m == "literal_2pl") c.prior.prior_mode = PriorMode::literal_2pl;
      else if (m == "target_zone") c.prior.prior_mode = PriorMode::target_zone;
      else throw Error(ErrorCode::validation, "unknown prior_mode");
    }
    read(p, "target_success", c.prior.target_success);
    read(p, "zone_sharpness", c.prior.zone_sharpness);
  }
  if (j.contains("bandit")) {
    const auto& b = j["bandit"];
    read(b, "alpha", c.bandit.alpha);
    read(b, "gamma", c.bandit.gamma);
    read(b, "epsilon_init", c.bandit.epsilon_init);
    read(b, "epsilon_decay", c.bandit.epsilon_decay);
    read(b, "epsilon_floor", c.bandit.epsilon_floor);
  }
  if (j.contains("blend")) {
    const auto& b = j["blend"];
    read(b, "w0", c.blend.w0);
    read(b, "kappa", c.blend.kappa);
    read(b, "w_max", c.blend.w_max);
    read(b, "planned_questions", c.blend.planned_questions);
  }
  return c;
}

Json to_json(const SummaryReport& r) {
  auto sections = [](const std::vector<ConceptSection>& items) {
    Json out = Json::array();
    for (const auto& s : items) out.push_back({{"concept", s.topic}, {"excerpts", s.excerpts}});
    return out;
  };
  return Json{{"mastered", sections(r.mastered)},
              {"discovery", sections(r.discovery)},
              {"tailored_examples", r.tailored_examples},
              {"rendered", r.rendered},
              {"headers", {kMasteredHeader, kDiscoveryHeader}}};
}

} // namespace pal

namespace pal {

PipelineConfig pipeline_config_from_json(const Json& j, PipelineConfig base) {
  if (j.is_null()) return base;
  if (!j.is_object()) throw Error(ErrorCode::validation, "pipeline config must be an object");
  try {
    if (j.contains("cue_phrases")) base.cue_phrases = j["cue_phrases"].get<std::vector<std::string>>();
    if (j.contains("every_n")) base.every_n = j["every_n"].get<std::size_t>();
    if (j.contains("min_sentence_tokens")) base.min_sentence_tokens = j["min_sentence_tokens"].get<std::size_t>();
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::validation, std::string("bad pipeline config: ") + e.what());
  }
  base.validate();
  return base;
}

Json to_json(const Transcript& t) {
  Json out = Json::array();
  for (const auto& s : t.segments) out.push_back({{"t", s.t}, {"u", s.u}});
  return out;
}

} // namespace pal
