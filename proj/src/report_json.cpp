#include "sbsa/report_json.hpp"

#include <ostream>
#include <set>
#include <stdexcept>

namespace sbsa {

using nlohmann::json;

namespace {

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw std::invalid_argument(where + " must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!allowed.contains(key)) throw std::invalid_argument("unknown key '" + key + "' in " + where);
  }
}

template <typename T>
void read_if(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw std::invalid_argument(std::string("invalid value for '") + key + "'");
  }
}

}  // namespace

QsdcConfig config_from_json(const json& j, QsdcConfig base) {
  reject_unknown(j,
                 {"message", "pair_count", "sample_fraction", "eve", "channel", "seed", "qber_abort_threshold"},
                 "config");
  read_if(j, "message", base.message_bits);
  read_if(j, "pair_count", base.pair_count);
  read_if(j, "sample_fraction", base.sample_fraction);
  read_if(j, "seed", base.seed);
  read_if(j, "qber_abort_threshold", base.qber_abort_threshold);
  if (j.contains("eve")) {
    const auto& e = j.at("eve");
    reject_unknown(e, {"model", "fraction"}, "eve");
    std::string model = base.eve.kind == EveModel::Kind::none ? "none" : "intercept_resend";
    read_if(e, "model", model);
    if (model == "none") {
      base.eve.kind = EveModel::Kind::none;
    } else if (model == "intercept_resend") {
      base.eve.kind = EveModel::Kind::intercept_resend;
      if (!e.contains("fraction") && base.eve.fraction == 0.0) base.eve.fraction = 1.0;
    } else {
      throw std::invalid_argument("unknown eve model '" + model + "'");
    }
    read_if(e, "fraction", base.eve.fraction);
  }
  if (j.contains("channel")) {
    const auto& c = j.at("channel");
    reject_unknown(c, {"mode_flip_prob", "phase_flip_prob"}, "channel");
    read_if(c, "mode_flip_prob", base.channel.mode_flip_prob);
    read_if(c, "phase_flip_prob", base.channel.phase_flip_prob);
  }
  return base;
}

json config_to_json(const QsdcConfig& c) {
  return {{"message", c.message_bits},
          {"pair_count", c.pair_count},
          {"sample_fraction", c.sample_fraction},
          {"eve",
           {{"model", c.eve.kind == EveModel::Kind::none ? "none" : "intercept_resend"},
            {"fraction", c.eve.fraction}}},
          {"channel", {{"mode_flip_prob", c.channel.mode_flip_prob}, {"phase_flip_prob", c.channel.phase_flip_prob}}},
          {"seed", c.seed},
          {"qber_abort_threshold", c.qber_abort_threshold}};
}

json event_to_json(const SessionEvent& e) {
  json out = json::object();
  out["event"] = e.type;
  if (e.pair) out["pair"] = *e.pair;
  for (const auto& [key, value] : e.fields) {
    std::visit([&](const auto& v) { out[key] = v; }, value);
  }
  return out;
}

json report_to_json(const SessionReport& r) {
  json transcript = json::array();
  for (const auto& e : r.transcript) transcript.push_back(event_to_json(e));
  return {{"pair_count", r.pair_count},
          {"phase1_samples", r.phase1_samples},
          {"phase1_errors", r.phase1_errors},
          {"phase1_qber", r.phase1_qber},
          {"aborted", r.aborted},
          {"decoded_bits", r.decoded_bits},
          {"phase2_checks", r.phase2_checks},
          {"phase2_check_errors", r.phase2_check_errors},
          {"phase2_sample_error_rate", r.phase2_sample_error_rate},
          {"transcript", std::move(transcript)}};
}

void write_transcript_jsonl(std::ostream& out, const std::vector<SessionEvent>& transcript) {
  for (const auto& e : transcript) out << event_to_json(e).dump() << '\n';
}

}  // namespace sbsa
