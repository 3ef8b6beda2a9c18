#pragma once

#include <iosfwd>
#include <json.hpp>

#include "sbsa/qsdc.hpp"

namespace sbsa {

// Config schema (all keys optional, defaults from QsdcConfig):
//   {"message": "0110", "pair_count": 0, "sample_fraction": 0.1,
//    "eve": {"model": "none" | "intercept_resend", "fraction": 1.0},
//    "channel": {"mode_flip_prob": 0.0, "phase_flip_prob": 0.0},
//    "seed": 42, "qber_abort_threshold": 0.11}
// Unknown keys are rejected. `base` supplies values for absent keys.
QsdcConfig config_from_json(const nlohmann::json& j, QsdcConfig base = {});
nlohmann::json config_to_json(const QsdcConfig& config);

nlohmann::json event_to_json(const SessionEvent& e);
nlohmann::json report_to_json(const SessionReport& report);

// One compact JSON object per line.
void write_transcript_jsonl(std::ostream& out, const std::vector<SessionEvent>& transcript);

}  // namespace sbsa
