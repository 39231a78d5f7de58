#include "pal/simulator.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>

#include "pal/errors.hpp"
#include "pal/session.hpp"
#include "pal/text.hpp"

namespace pal {

namespace {

double parse_number(std::string_view s, std::string_view what) {
  const std::string str(text::trim(s));
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(str, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (str.empty() || used != str.size()) {
    throw Error(ErrorCode::validation, "bad " + std::string(what) + ": '" + str + "'");
  }
  return v;
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

MetricSummary summarize(const std::vector<double>& xs) {
  MetricSummary m;
  if (xs.empty()) return m;
  m.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - m.mean) * (x - m.mean);
  m.stddev = std::sqrt(ss / static_cast<double>(xs.size()));
  return m;
}

using Responder = std::function<bool(std::size_t answer_index, Difficulty d, const ItemParams& item,
                                     double& response_time)>;

SimMetrics drive(const PolicyConfig& config, std::size_t n_questions, std::uint64_t seed,
                 const Responder& respond, const std::function<double()>& theta) {
  if (n_questions < 1) throw Error(ErrorCode::validation, "n_questions must be >= 1");
  SessionConfig sc;
  sc.bank_id = "synthetic";
  sc.learner_id = "synthetic";
  sc.planned_questions = n_questions;
  sc.rng_seed = seed;
  sc.policy = config;
  auto session = Session::create("sim", sc, uniform_bank(n_questions), [](std::size_t) { return std::string{}; });

  SimMetrics m;
  std::size_t in_zone = 0;
  while (auto served = session.next_question()) {
    const Difficulty d = served->record.d;
    const ItemParams item = session.config().policy.prior.params(d);
    const double p = success_probability(theta(), item);
    if (p >= kZoneLow && p <= kZoneHigh) ++in_zone;
    if (!m.first_reach[index_of(d)]) m.first_reach[index_of(d)] = m.level_trace.size() + 1;
    if (!m.level_trace.empty() && m.level_trace.back() != d) ++m.level_switches;
    m.level_trace.push_back(d);

    double rt = 0.0;
    const bool correct = respond(m.level_trace.size() - 1, d, item, rt);
    const std::size_t key = served->record.a.correct_index;
    const std::size_t choice = correct ? key : (key + 1) % served->record.a.options.size();
    m.cumulative_reward += session.submit_answer(served->question_id, choice, rt).reward.total;
  }
  m.time_in_zone = m.level_trace.empty()
                       ? 0.0
                       : static_cast<double>(in_zone) / static_cast<double>(m.level_trace.size());
  m.final_theta_error = std::fabs(session.policy().learner.skill - theta());
  return m;
}

} // namespace

void SyntheticLearner::validate() const {
  if (!std::isfinite(true_theta)) throw Error(ErrorCode::validation, "true_theta must be finite");
  if (!(flip_prob >= 0.0 && flip_prob < 0.5)) throw Error(ErrorCode::validation, "flip_prob must be in [0, 0.5)");
  if (!(delta_per_correct >= 0.0)) throw Error(ErrorCode::validation, "delta_per_correct must be >= 0");
  if (!(base_response_time >= 0.0)) throw Error(ErrorCode::validation, "base_response_time must be >= 0");
}

std::string SyntheticLearner::label() const {
  switch (kind) {
  case LearnerKind::fixed_ability: return "static:" + format_number(true_theta);
  case LearnerKind::improving:
    return "improving:" + format_number(true_theta) + "," + format_number(delta_per_correct);
  case LearnerKind::noisy: return "noisy:" + format_number(true_theta) + "," + format_number(flip_prob);
  }
  return {};
}

SyntheticLearner parse_learner(std::string_view spec) {
  const std::size_t colon = spec.find(':');
  if (colon == std::string_view::npos) {
    throw Error(ErrorCode::validation, "learner spec needs kind:theta, got '" + std::string(spec) + "'");
  }
  const std::string_view kind = spec.substr(0, colon);
  std::string_view rest = spec.substr(colon + 1);
  const std::size_t comma = rest.find(',');
  SyntheticLearner l;
  l.true_theta = parse_number(rest.substr(0, comma), "theta");
  const bool has_extra = comma != std::string_view::npos;
  if (kind == "static") {
    if (has_extra) throw Error(ErrorCode::validation, "static learner takes only theta");
  } else if (kind == "improving" || kind == "noisy") {
    if (!has_extra) throw Error(ErrorCode::validation, std::string(kind) + " learner needs theta,value");
    const double extra = parse_number(rest.substr(comma + 1), "learner parameter");
    if (kind == "improving") {
      l.kind = LearnerKind::improving;
      l.delta_per_correct = extra;
    } else {
      l.kind = LearnerKind::noisy;
      l.flip_prob = extra;
    }
  } else {
    throw Error(ErrorCode::validation, "unknown learner kind '" + std::string(kind) + "'");
  }
  l.validate();
  return l;
}

AnswerOutcome simulate_response(SyntheticLearner& learner, const ItemParams& item,
                                Difficulty difficulty, double time_limit, SplitMix64& rng) {
  const double p = success_probability(learner.true_theta, item);
  const double u_outcome = rng.uniform();
  const double u_flip = rng.uniform();
  bool correct = u_outcome < p;
  if (learner.kind == LearnerKind::noisy && u_flip < learner.flip_prob) correct = !correct;

  AnswerOutcome out;
  out.difficulty = difficulty;
  out.correct = correct;
  out.time_limit = time_limit;
  out.response_time = learner.base_response_time * time_limit * (1.0 + 0.5 * (1.0 - p));
  if (learner.kind == LearnerKind::improving && correct) learner.true_theta += learner.delta_per_correct;
  return out;
}

Bank uniform_bank(std::size_t per_level) {
  Bank bank;
  bank.source_id = "synthetic";
  double t = 0.0;
  for (std::size_t i = 0; i < per_level; ++i) {
    for (Difficulty d : kAllDifficulties) {
      QuestionRecord r;
      r.q = "Synthetic " + std::string(to_string(d)) + " question " + std::to_string(i + 1) + "?";
      r.a.options = {"right", "wrong one", "wrong two", "wrong three"};
      r.a.correct_index = 0;
      r.d = d;
      r.t = t;
      r.c = "Synthetic context.";
      bank.questions.push_back(std::move(r));
      t += 1.0;
    }
  }
  return bank;
}

SimMetrics run_episode(const PolicyConfig& config, SyntheticLearner learner, std::size_t n_questions,
                       std::uint64_t seed) {
  learner.validate();
  SplitMix64 rng(splitmix64(seed ^ 0x5EEDF00DULL));
  const double time_limit = SessionConfig{}.time_limit;
  Responder respond = [&](std::size_t, Difficulty d, const ItemParams& item, double& rt) {
    const AnswerOutcome o = simulate_response(learner, item, d, time_limit, rng);
    rt = o.response_time;
    return o.correct;
  };
  return drive(config, n_questions, seed, respond, [&] { return learner.true_theta; });
}

SimMetrics run_scripted_episode(const PolicyConfig& config, const std::function<bool(std::size_t)>& script,
                                std::size_t n_questions, std::uint64_t seed, double theta) {
  const double time_limit = SessionConfig{}.time_limit;
  Responder respond = [&](std::size_t i, Difficulty, const ItemParams&, double& rt) {
    rt = 0.5 * time_limit;
    return script(i);
  };
  return drive(config, n_questions, seed, respond, [theta] { return theta; });
}

PolicyConfig PolicySpec::apply(PolicyConfig base) const {
  base.mode = mode;
  base.fixed_level = fixed_level;
  if (mode == PolicyMode::fixed) base.start_level = fixed_level;
  return base;
}

PolicySpec parse_policy(std::string_view spec) {
  PolicySpec p;
  p.name = std::string(spec);
  if (spec == "hybrid") {
    p.mode = PolicyMode::hybrid;
  } else if (spec == "stat" || spec == "stat_only") {
    p.mode = PolicyMode::stat_only;
  } else if (spec == "rl" || spec == "rl_only") {
    p.mode = PolicyMode::rl_only;
  } else if (spec.substr(0, 6) == "fixed:") {
    const auto d = parse_difficulty(spec.substr(6));
    if (!d) throw Error(ErrorCode::validation, "unknown difficulty in '" + std::string(spec) + "'");
    p.mode = PolicyMode::fixed;
    p.fixed_level = *d;
  } else {
    throw Error(ErrorCode::validation, "unknown policy '" + std::string(spec) + "'");
  }
  return p;
}

std::vector<std::uint64_t> parse_seed_range(std::string_view spec) {
  auto parse_seed = [&](std::string_view s) {
    const std::string str(text::trim(s));
    std::size_t used = 0;
    std::uint64_t v = 0;
    try {
      v = std::stoull(str, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (str.empty() || used != str.size() || str[0] == '-') {
      throw Error(ErrorCode::validation, "bad seed range '" + std::string(spec) + "'");
    }
    return v;
  };
  const std::size_t dots = spec.find("..");
  if (dots == std::string_view::npos) return {parse_seed(spec)};
  const std::uint64_t a = parse_seed(spec.substr(0, dots));
  const std::uint64_t b = parse_seed(spec.substr(dots + 2));
  if (b < a) throw Error(ErrorCode::validation, "seed range is reversed: '" + std::string(spec) + "'");
  std::vector<std::uint64_t> out;
  for (std::uint64_t s = a;; ++s) {
    out.push_back(s);
    if (s == b) break;
  }
  return out;
}

ComparisonReport compare_policies(const std::vector<PolicySpec>& policies,
                                  const std::vector<SyntheticLearner>& population,
                                  const std::vector<std::uint64_t>& seeds, std::size_t n_questions,
                                  const PolicyConfig& base) {
  if (policies.empty()) throw Error(ErrorCode::validation, "no policies to compare");
  if (population.empty()) throw Error(ErrorCode::validation, "empty learner population");
  if (seeds.empty()) throw Error(ErrorCode::validation, "empty seed list");

  ComparisonReport report;
  for (const auto& policy : policies) {
    const PolicyConfig cfg = policy.apply(base);
    for (const auto& learner : population) {
      std::vector<double> zone, switches, reward, error;
      for (std::uint64_t seed : seeds) {
        const SimMetrics m = run_episode(cfg, learner, n_questions, seed);
        zone.push_back(m.time_in_zone);
        switches.push_back(static_cast<double>(m.level_switches));
        reward.push_back(m.cumulative_reward);
        error.push_back(m.final_theta_error);
      }
      report.rows.push_back({policy.name, learner.label(), seeds.size(), summarize(zone),
                             summarize(switches), summarize(reward), summarize(error)});
    }
  }
  return report;
}

std::string ComparisonReport::to_text() const {
  std::string out;
  char line[256];
  std::snprintf(line, sizeof line, "%-12s %-18s %5s  %-15s %-15s %-17s %-15s\n", "policy", "learner", "n",
                "time_in_zone", "level_switches", "cumulative_reward", "theta_error");
  out += line;
  auto cell = [](const MetricSummary& m) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.3f±%.3f", m.mean, m.stddev);
    return std::string(buf);
  };
  for (const auto& r : rows) {
    // The ± sign is two bytes, so widths are padded by one.
    std::snprintf(line, sizeof line, "%-12s %-18s %5zu  %-16s %-16s %-18s %-16s\n", r.policy.c_str(),
                  r.learner.c_str(), r.episodes, cell(r.time_in_zone).c_str(),
                  cell(r.level_switches).c_str(), cell(r.cumulative_reward).c_str(),
                  cell(r.final_theta_error).c_str());
    out += line;
  }
  return out;
}

std::string ComparisonReport::to_csv() const {
  std::string out =
      "policy,learner,episodes,time_in_zone_mean,time_in_zone_std,level_switches_mean,"
      "level_switches_std,cumulative_reward_mean,cumulative_reward_std,final_theta_error_mean,"
      "final_theta_error_std\n";
  char buf[512];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%s,\"%s\",%zu,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f\n", r.policy.c_str(),
                  r.learner.c_str(), r.episodes, r.time_in_zone.mean, r.time_in_zone.stddev,
                  r.level_switches.mean, r.level_switches.stddev, r.cumulative_reward.mean,
                  r.cumulative_reward.stddev, r.final_theta_error.mean, r.final_theta_error.stddev);
    out += buf;
  }
  return out;
}

} // namespace pal
