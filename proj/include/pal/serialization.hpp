#pragma once

// JSON mapping for the domain types. Doubles round-trip exactly through
// nlohmann's shortest representation, which replay relies on.

#include "json.hpp"
#include "pal/bank.hpp"
#include "pal/core_model.hpp"
#include "pal/hybrid_policy.hpp"
#include "pal/question_pipeline.hpp"
#include "pal/summary_engine.hpp"

namespace pal {

using Json = nlohmann::json;

Json to_json(const DifficultyDistribution& d);
Json to_json(DifficultySet s);
Json to_json(const RewardBreakdown& r);
Json to_json(const LearnerState& s, bool with_history = false);
Json to_json(const LadderState& l);
Json to_json(const QTable& q);
Json to_json(const DecisionTrace& t);
Json to_json(const PolicyConfig& c);
Json to_json(const SummaryReport& r);

/// Overlays the fields present in `j` onto `base`; throws Error(validation)
/// on wrong types or unknown enum names.
PolicyConfig policy_config_from_json(const Json& j, PolicyConfig base = {});

Difficulty difficulty_from_json(const Json& j);

/// Overlay as above for cue_phrases, every_n and min_sentence_tokens.
PipelineConfig pipeline_config_from_json(const Json& j, PipelineConfig base = {});

/// The plain JSON transcript form: [{"t": seconds, "u": text}, ...].
Json to_json(const Transcript& t);

} // namespace pal
