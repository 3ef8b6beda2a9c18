#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "sbsa/register.hpp"
#include "sbsa/rng.hpp"

namespace sbsa {

struct EveModel {
  enum class Kind { none, intercept_resend };
  Kind kind = Kind::none;
  // Fraction of in-transit photons intercepted.
  double fraction = 0.0;
};

struct ChannelModel {
  double mode_flip_prob = 0.0;
  double phase_flip_prob = 0.0;
};

// Two-step direct communication over spatial-mode Bell pairs. Phase 1 checks
// the channel on a random sample of the transmitted photons; phase 2 encodes
// two message bits per remaining pair, interleaved with random check pairs
// (every pair not carrying message bits).
struct QsdcConfig {
  std::string message_bits;  // '0'/'1' characters, even length
  // 0 selects the smallest count that fits the message, a phase-1 sample and
  // at least one phase-2 check pair per eight message pairs.
  std::size_t pair_count = 0;
  double sample_fraction = 0.1;
  EveModel eve;
  ChannelModel channel;
  std::uint64_t seed = 0;
  double qber_abort_threshold = 0.11;

  // Throws std::invalid_argument when the config is malformed or infeasible.
  void validate() const;
  std::size_t resolved_pair_count() const;
  std::size_t phase1_sample_count() const;
};

using FieldValue = std::variant<bool, std::int64_t, double, std::string>;

// One transcript record: event type, the pair it concerns (if any) and
// ordered key/value details.
struct SessionEvent {
  std::string type;
  std::optional<std::size_t> pair;
  std::vector<std::pair<std::string, FieldValue>> fields;
};

struct SessionReport {
  std::size_t pair_count = 0;
  std::size_t phase1_samples = 0;
  std::size_t phase1_errors = 0;
  double phase1_qber = 0.0;
  bool aborted = false;
  std::string decoded_bits;
  std::size_t phase2_checks = 0;
  std::size_t phase2_check_errors = 0;
  double phase2_sample_error_rate = 0.0;
  std::vector<SessionEvent> transcript;
};

std::string_view to_string(SpatialUnitary u);
std::string_view basis_name(Basis b);

// Message bits 00, 01, 10, 11 select U1, U2, U3, U4.
SpatialUnitary encode_bits(char hi, char lo);
std::string decode_bell(BellState s);

struct Interception {
  Basis basis;
  std::size_t outcome;
};

// Measures the spatial qubit in Z or X (uniformly chosen) and resends the
// eigenstate found.
Interception eve_intercept_resend(QuantumRegister& reg, std::string_view spatial_id, Rng& rng);

struct ChannelHits {
  bool mode_flip = false;
  bool phase_flip = false;
};

// Independent U2 (mode flip) and U3 (phase flip) errors.
ChannelHits apply_channel(QuantumRegister& reg, std::string_view spatial_id, const ChannelModel& channel,
                          Rng& rng);

SessionReport run_session(const QsdcConfig& config);

}  // namespace sbsa
