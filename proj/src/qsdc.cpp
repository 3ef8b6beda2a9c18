#include "sbsa/qsdc.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sbsa/bsa.hpp"

namespace sbsa {

namespace {

std::size_t ceil_fraction(double fraction, std::size_t n) {
  return static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n)));
}

bool in_unit_interval(double p) { return p >= 0.0 && p <= 1.0; }

// k distinct positions out of n, in ascending order (partial Fisher-Yates).
std::vector<std::size_t> choose_positions(std::size_t n, std::size_t k, Rng& rng) {
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(k);
  std::sort(idx.begin(), idx.end());
  return idx;
}

std::array<Complex, 4> spatial_amplitudes(const QuantumRegister& pair) {
  const auto a = pair.amplitudes();
  return {a[0], a[1], a[2], a[3]};
}

SessionEvent event(std::string type, std::optional<std::size_t> pair = std::nullopt) {
  return SessionEvent{std::move(type), pair, {}};
}

std::int64_t as_int(std::size_t v) { return static_cast<std::int64_t>(v); }

}  // namespace

std::string_view to_string(SpatialUnitary u) {
  switch (u) {
    case SpatialUnitary::U1: return "U1";
    case SpatialUnitary::U2: return "U2";
    case SpatialUnitary::U3: return "U3";
    case SpatialUnitary::U4: return "U4";
  }
  return "?";
}

std::string_view basis_name(Basis b) {
  switch (b) {
    case Basis::Z: return "Z";
    case Basis::X: return "X";
    case Basis::Y: return "Y";
  }
  return "?";
}

SpatialUnitary encode_bits(char hi, char lo) {
  const int v = (hi == '1' ? 2 : 0) + (lo == '1' ? 1 : 0);
  return static_cast<SpatialUnitary>(v);
}

std::string decode_bell(BellState s) {
  // U1..U4 applied to photon a of phi+ give phi+, psi+, phi-, psi-.
  switch (s) {
    case BellState::phi_plus: return "00";
    case BellState::psi_plus: return "01";
    case BellState::phi_minus: return "10";
    case BellState::psi_minus: return "11";
  }
  return "??";
}

void QsdcConfig::validate() const {
  if (message_bits.empty()) throw std::invalid_argument("message must not be empty");
  if (message_bits.size() % 2 != 0) throw std::invalid_argument("message must have an even number of bits");
  if (message_bits.find_first_not_of("01") != std::string::npos) {
    throw std::invalid_argument("message may only contain '0' and '1'");
  }
  if (!(sample_fraction > 0.0 && sample_fraction < 1.0)) {
    throw std::invalid_argument("sample_fraction must lie in (0, 1)");
  }
  if (!in_unit_interval(channel.mode_flip_prob) || !in_unit_interval(channel.phase_flip_prob)) {
    throw std::invalid_argument("channel probabilities must lie in [0, 1]");
  }
  if (eve.kind == EveModel::Kind::intercept_resend && !in_unit_interval(eve.fraction)) {
    throw std::invalid_argument("eve fraction must lie in [0, 1]");
  }
  if (!std::isfinite(qber_abort_threshold) || qber_abort_threshold < 0.0) {
    throw std::invalid_argument("qber_abort_threshold must be finite and >= 0");
  }
  if (pair_count != 0) {
    const std::size_t sampled = ceil_fraction(sample_fraction, pair_count);
    if (pair_count < sampled + message_bits.size() / 2) {
      throw std::invalid_argument("pair_count too small: need at least " +
                                  std::to_string(message_bits.size() / 2) + " message pairs plus " +
                                  std::to_string(sampled) + " sampled pairs");
    }
  }
}

std::size_t QsdcConfig::resolved_pair_count() const {
  if (pair_count != 0) return pair_count;
  const std::size_t message_pairs = message_bits.size() / 2;
  const std::size_t checks = std::max<std::size_t>(1, (message_pairs + 7) / 8);
  std::size_t n = message_pairs + checks + 1;
  while (n - ceil_fraction(sample_fraction, n) < message_pairs + checks) ++n;
  return n;
}

std::size_t QsdcConfig::phase1_sample_count() const {
  return ceil_fraction(sample_fraction, resolved_pair_count());
}

Interception eve_intercept_resend(QuantumRegister& reg, std::string_view spatial_id, Rng& rng) {
  reg.require_kind(spatial_id, SubsystemKind::spatial);
  const Basis basis = rng.coin() ? Basis::X : Basis::Z;
  const auto result = measure(reg, spatial_id, basis, rng);
  return {basis, result.outcome};
}

ChannelHits apply_channel(QuantumRegister& reg, std::string_view spatial_id, const ChannelModel& channel,
                          Rng& rng) {
  ChannelHits hits;
  hits.mode_flip = rng.bernoulli(channel.mode_flip_prob);
  hits.phase_flip = rng.bernoulli(channel.phase_flip_prob);
  if (hits.mode_flip) apply_spatial_unitary(reg, spatial_id, SpatialUnitary::U2);
  if (hits.phase_flip) apply_spatial_unitary(reg, spatial_id, SpatialUnitary::U3);
  return hits;
}

namespace {

// Photon a of `pair` travels one leg of the channel, possibly through Eve.
void transit(QuantumRegister& pair, std::size_t index, std::string_view leg, const QsdcConfig& config,
             Rng& rng, std::vector<SessionEvent>& transcript) {
  const auto hits = apply_channel(pair, ids::spatial_a, config.channel, rng);
  if (hits.mode_flip || hits.phase_flip) {
    auto e = event("channel_error", index);
    e.fields = {{"leg", std::string(leg)}, {"mode_flip", hits.mode_flip}, {"phase_flip", hits.phase_flip}};
    transcript.push_back(std::move(e));
  }
  if (config.eve.kind == EveModel::Kind::intercept_resend && rng.bernoulli(config.eve.fraction)) {
    const auto hit = eve_intercept_resend(pair, ids::spatial_a, rng);
    auto e = event("intercept", index);
    e.fields = {{"leg", std::string(leg)},
                {"basis", std::string(basis_name(hit.basis))},
                {"outcome", as_int(hit.outcome)}};
    transcript.push_back(std::move(e));
  }
}

}  // namespace

SessionReport run_session(const QsdcConfig& config) {
  config.validate();
  Rng rng(config.seed);
  SessionReport report;
  auto& transcript = report.transcript;

  const std::size_t n = config.resolved_pair_count();
  const std::size_t message_pairs = config.message_bits.size() / 2;
  report.pair_count = n;
  {
    auto e = event("prepare");
    e.fields = {{"pairs", as_int(n)}, {"state", std::string("phi+")}};
    transcript.push_back(std::move(e));
  }

  // Phase 1: S_A goes to Alice, S_B stays with Bob.
  std::vector<QuantumRegister> pairs(n, make_bell(BellState::phi_plus));
  for (std::size_t i = 0; i < n; ++i) transit(pairs[i], i, "bob_to_alice", config, rng, transcript);

  const auto sampled = choose_positions(n, config.phase1_sample_count(), rng);
  std::vector<bool> consumed(n, false);
  for (std::size_t i : sampled) {
    consumed[i] = true;
    const Basis basis = rng.coin() ? Basis::X : Basis::Z;
    const auto alice = measure(pairs[i], ids::spatial_a, basis, rng).outcome;
    // Bob measures the partner in the basis Alice announced.
    const auto bob = measure(pairs[i], ids::spatial_b, basis, rng).outcome;
    if (alice != bob) ++report.phase1_errors;
    auto e = event("sample", i);
    e.fields = {{"basis", std::string(basis_name(basis))}, {"alice", as_int(alice)}, {"bob", as_int(bob)}};
    transcript.push_back(std::move(e));
  }
  report.phase1_samples = sampled.size();
  report.phase1_qber =
      sampled.empty() ? 0.0 : static_cast<double>(report.phase1_errors) / static_cast<double>(sampled.size());
  {
    auto e = event("phase1_result");
    e.fields = {{"samples", as_int(report.phase1_samples)},
                {"errors", as_int(report.phase1_errors)},
                {"qber", report.phase1_qber},
                {"threshold", config.qber_abort_threshold}};
    transcript.push_back(std::move(e));
  }
  if (report.phase1_qber > config.qber_abort_threshold) {
    report.aborted = true;
    transcript.push_back(event("abort"));
    return report;
  }

  // Phase 2: Alice encodes on the remaining photons, interleaving check pairs.
  std::vector<std::size_t> remaining;
  for (std::size_t i = 0; i < n; ++i) {
    if (!consumed[i]) remaining.push_back(i);
  }
  const auto message_slots = choose_positions(remaining.size(), message_pairs, rng);
  std::vector<bool> carries_message(remaining.size(), false);
  for (std::size_t k : message_slots) carries_message[k] = true;

  struct Encoded {
    std::size_t pair;
    bool message;
    SpatialUnitary op;
  };
  std::vector<Encoded> encoded;
  encoded.reserve(remaining.size());
  std::size_t next_bit = 0;
  for (std::size_t k = 0; k < remaining.size(); ++k) {
    const std::size_t i = remaining[k];
    SpatialUnitary op;
    if (carries_message[k]) {
      op = encode_bits(config.message_bits[next_bit], config.message_bits[next_bit + 1]);
      next_bit += 2;
    } else {
      op = static_cast<SpatialUnitary>(rng.below(4));
    }
    apply_spatial_unitary(pairs[i], ids::spatial_a, op);
    encoded.push_back({i, carries_message[k], op});
    auto e = event("encode", i);
    e.fields = {{"role", std::string(carries_message[k] ? "message" : "check")},
                {"op", std::string(to_string(op))}};
    transcript.push_back(std::move(e));
  }

  // S_A returns to Bob, who runs the Bell-state analyzer on every pair.
  const CavityParams params;
  for (const auto& enc : encoded) {
    transit(pairs[enc.pair], enc.pair, "alice_to_bob", config, rng, transcript);
    const auto amps = spatial_amplitudes(pairs[enc.pair]);
    const auto record = analyze(std::span<const Complex, 4>(amps), params, true, rng);
    const std::string bits = decode_bell(record.inferred);
    auto e = event("decode", enc.pair);
    e.fields = {{"spin_changed", record.spin_changed},
                {"detectors", std::string(to_string(record.detectors))},
                {"inferred", std::string(to_string(record.inferred))},
                {"bits", bits}};
    transcript.push_back(std::move(e));

    if (enc.message) {
      report.decoded_bits += bits;
    } else {
      ++report.phase2_checks;
      const auto expected = static_cast<int>(enc.op);
      const std::string expected_bits{static_cast<char>('0' + expected / 2), static_cast<char>('0' + expected % 2)};
      if (bits != expected_bits) ++report.phase2_check_errors;
    }
  }
  report.phase2_sample_error_rate = report.phase2_checks == 0
                                        ? 0.0
                                        : static_cast<double>(report.phase2_check_errors) /
                                              static_cast<double>(report.phase2_checks);
  {
    auto e = event("phase2_result");
    e.fields = {{"checks", as_int(report.phase2_checks)},
                {"errors", as_int(report.phase2_check_errors)},
                {"error_rate", report.phase2_sample_error_rate}};
    transcript.push_back(std::move(e));
  }
  return report;
}

}  // namespace sbsa
