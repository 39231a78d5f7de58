#include "pal/bank.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <utility>

#include "json.hpp"
#include "pal/errors.hpp"
#include "pal/text.hpp"

namespace pal {

namespace {

using nlohmann::json;

std::string json_string(std::string_view s) {
  return json(std::string(s)).dump(-1, ' ', false, json::error_handler_t::replace);
}

std::string format_t(double t) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", t);
  return buf;
}

std::string index_path(std::size_t i) { return "questions[" + std::to_string(i) + "]"; }

} // namespace

std::size_t Bank::count(Difficulty d) const noexcept {
  return static_cast<std::size_t>(
      std::count_if(questions.begin(), questions.end(), [d](const auto& q) { return q.d == d; }));
}

double quantize_timestamp(double t) noexcept { return std::round(t * 1000.0) / 1000.0; }

std::vector<BankViolation> check_record(const QuestionRecord& r) {
  std::vector<BankViolation> out;
  if (r.q.empty()) out.push_back({"q", "stem must be non-empty"});
  if (r.a.options.size() < 2) out.push_back({"a.options", "at least two options required"});
  for (std::size_t i = 0; i < r.a.options.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (r.a.options[i] == r.a.options[j]) {
        out.push_back({"a.options[" + std::to_string(i) + "]",
                       "duplicates option " + std::to_string(j)});
      }
    }
  }
  if (r.a.correct_index >= r.a.options.size()) {
    out.push_back({"a.correct_index", "index " + std::to_string(r.a.correct_index) +
                                          " out of range for " +
                                          std::to_string(r.a.options.size()) + " options"});
  }
  if (!std::isfinite(r.t) || r.t < 0.0) out.push_back({"t", "timestamp must be >= 0"});
  return out;
}

std::string assemble_bank(std::vector<QuestionRecord> records, std::string_view source_id) {
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto problems = check_record(records[i]);
    if (!problems.empty()) {
      throw Error(ErrorCode::validation,
                  "record " + std::to_string(i) + ": " + problems.front().path + ": " +
                      problems.front().reason);
    }
    records[i].t = quantize_timestamp(records[i].t);
  }
  std::stable_sort(records.begin(), records.end(),
                   [](const auto& x, const auto& y) { return x.t < y.t; });
  std::set<std::pair<double, std::string>> seen;
  for (const auto& r : records) {
    if (!seen.emplace(r.t, r.q).second) {
      throw Error(ErrorCode::validation, "duplicate question at t=" + format_t(r.t) + ": " + r.q);
    }
  }

  std::string out;
  out += "{\n";
  out += "  \"schema\": " + json_string(kBankSchema) + ",\n";
  out += "  \"source_id\": " + json_string(source_id) + ",\n";
  if (records.empty()) {
    out += "  \"questions\": []\n}\n";
    return out;
  }
  out += "  \"questions\": [\n";
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    out += "    {\"q\": " + json_string(r.q) + ", \"a\": {\"options\": [";
    for (std::size_t k = 0; k < r.a.options.size(); ++k) {
      if (k) out += ", ";
      out += json_string(r.a.options[k]);
    }
    out += "], \"correct_index\": " + std::to_string(r.a.correct_index) + "}";
    out += ", \"d\": " + json_string(to_string(r.d));
    out += ", \"t\": " + format_t(r.t);
    out += ", \"c\": " + json_string(r.c) + "}";
    out += i + 1 < records.size() ? ",\n" : "\n";
  }
  out += "  ]\n}\n";
  return out;
}

BankValidation validate_bank(std::string_view bytes) {
  BankValidation result;
  auto& v = result.violations;
  json doc;
  try {
    doc = json::parse(bytes);
  } catch (const json::parse_error& e) {
    v.push_back({"$", std::string("invalid JSON: ") + e.what()});
    return result;
  }
  if (!doc.is_object()) {
    v.push_back({"$", "bank must be a JSON object"});
    return result;
  }
  if (!doc.contains("schema") || !doc["schema"].is_string() ||
      doc["schema"].get<std::string>() != kBankSchema) {
    v.push_back({"schema", "unsupported schema version (expected " + std::string(kBankSchema) + ")"});
    return result;
  }

  Bank bank;
  if (!doc.contains("source_id") || !doc["source_id"].is_string()) {
    v.push_back({"source_id", "must be a string"});
  } else {
    bank.source_id = doc["source_id"].get<std::string>();
  }
  if (!doc.contains("questions") || !doc["questions"].is_array()) {
    v.push_back({"questions", "must be an array"});
    return result;
  }

  const auto& questions = doc["questions"];
  double prev_t = -1.0;
  std::set<std::pair<double, std::string>> seen;
  for (std::size_t i = 0; i < questions.size(); ++i) {
    const auto& item = questions[i];
    const std::string base = index_path(i);
    if (!item.is_object()) {
      v.push_back({base, "must be an object"});
      continue;
    }
    QuestionRecord r;
    const bool q_ok = item.contains("q") && item["q"].is_string();
    if (q_ok) r.q = item["q"].get<std::string>();
    else v.push_back({base + ".q", "must be a string"});

    bool options_ok = false;
    if (!item.contains("a") || !item["a"].is_object()) {
      v.push_back({base + ".a", "must be an object"});
    } else {
      const auto& a = item["a"];
      if (!a.contains("options") || !a["options"].is_array()) {
        v.push_back({base + ".a.options", "must be an array"});
      } else {
        options_ok = true;
        for (std::size_t k = 0; k < a["options"].size(); ++k) {
          if (!a["options"][k].is_string()) {
            v.push_back({base + ".a.options[" + std::to_string(k) + "]", "must be a string"});
            options_ok = false;
          } else {
            r.a.options.push_back(a["options"][k].get<std::string>());
          }
        }
      }
      if (!a.contains("correct_index") || !a["correct_index"].is_number_integer() ||
          a["correct_index"].get<long long>() < 0) {
        v.push_back({base + ".a.correct_index", "must be a non-negative integer"});
        options_ok = false;
      } else {
        r.a.correct_index = a["correct_index"].get<std::size_t>();
      }
    }

    if (!item.contains("d") || !item["d"].is_string() ||
        !parse_difficulty(item["d"].get<std::string>())) {
      v.push_back({base + ".d", "must be one of easy, medium, hard"});
    } else {
      r.d = *parse_difficulty(item["d"].get<std::string>());
    }

    bool t_ok = false;
    if (!item.contains("t") || !item["t"].is_number()) {
      v.push_back({base + ".t", "must be a number"});
    } else {
      r.t = item["t"].get<double>();
      t_ok = true;
    }

    if (item.contains("c") && item["c"].is_string()) r.c = item["c"].get<std::string>();
    else v.push_back({base + ".c", "must be a string"});

    // Record-level invariants only where the shape was sound.
    for (auto& problem : check_record(r)) {
      const bool shape_issue = problem.path.rfind("a.", 0) == 0 && !options_ok;
      const bool t_issue = problem.path == "t" && !t_ok;
      const bool q_issue = problem.path == "q" && !q_ok;
      if (shape_issue || t_issue || q_issue) continue;
      v.push_back({base + "." + problem.path, problem.reason});
    }
    if (t_ok) {
      if (r.t < prev_t) v.push_back({base + ".t", "timestamps must be non-decreasing"});
      prev_t = std::max(prev_t, r.t);
      if (!seen.emplace(r.t, r.q).second) {
        v.push_back({base, "duplicate (t, q) pair"});
      }
    }
    bank.questions.push_back(std::move(r));
  }

  if (v.empty()) result.bank = std::move(bank);
  return result;
}

std::string bank_id_for(std::string_view canonical_bytes) {
  const std::uint64_t h = text::fnv1a64(canonical_bytes);
  char buf[32];
  std::snprintf(buf, sizeof buf, "b%016llx", static_cast<unsigned long long>(h));
  return buf;
}

} // namespace pal
