#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pal/difficulty.hpp"

namespace pal {

inline constexpr std::string_view kBankSchema = "pal-bank/1";

struct AnswerKey {
  std::vector<std::string> options;
  std::size_t correct_index = 0;

  friend bool operator==(const AnswerKey&, const AnswerKey&) = default;
};

/// One (q, a, d, t, c) question: stem, answer key, difficulty, lecture
/// timestamp in seconds and context text.
struct QuestionRecord {
  std::string q;
  AnswerKey a;
  Difficulty d = Difficulty::Medium;
  double t = 0.0;
  std::string c;

  friend bool operator==(const QuestionRecord&, const QuestionRecord&) = default;
};

struct Bank {
  std::string schema{kBankSchema};
  std::string source_id;
  std::vector<QuestionRecord> questions;

  std::size_t count(Difficulty d) const noexcept;

  friend bool operator==(const Bank&, const Bank&) = default;
};

struct BankViolation {
  std::string path;
  std::string reason;

  friend bool operator==(const BankViolation&, const BankViolation&) = default;
};

struct BankValidation {
  std::optional<Bank> bank;
  std::vector<BankViolation> violations;

  bool ok() const noexcept { return bank.has_value(); }
};

/// Empty when the record satisfies its invariants; otherwise the reasons,
/// with paths relative to the record.
std::vector<BankViolation> check_record(const QuestionRecord& record);

/// Timestamps snap to whole milliseconds, the precision of the bank file.
double quantize_timestamp(double t) noexcept;

/// Canonical bank file: questions sorted by t (stable), fixed key order,
/// t printed with three decimals, one question per line.
///
/// Throws Error(validation) on an invalid record or a duplicate (t, q).
std::string assemble_bank(std::vector<QuestionRecord> records, std::string_view source_id);

/// Parses and checks a bank file, reporting every violation found. An
/// unknown schema version stops the check with that single violation.
BankValidation validate_bank(std::string_view bytes);

/// Content-derived identifier ("b" + 16 hex digits of FNV-1a).
std::string bank_id_for(std::string_view canonical_bytes);

} // namespace pal
