#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sbsa/rng.hpp"

namespace sbsa {

using Complex = std::complex<double>;
using Mat2 = std::array<std::array<Complex, 2>, 2>;

// Basis index 0/1 per kind: polarization R/L, spatial mode1/mode2, spin up/down.
enum class SubsystemKind { polarization, spatial, spin };

struct SubsystemLabel {
  std::string id;
  SubsystemKind kind;
};

// Z = computational basis; X = (|0> +- |1>)/sqrt2; Y = (|0> +- i|1>)/sqrt2.
// For polarization, X outcome 0 is |H> and Y is the pair used to read the
// auxiliary photon after one reflection.
enum class Basis { Z, X, Y };

enum class BellState { phi_plus, phi_minus, psi_plus, psi_minus };

inline constexpr std::array<BellState, 4> kAllBellStates = {
    BellState::phi_plus, BellState::phi_minus, BellState::psi_plus, BellState::psi_minus};

// Dense-coding operations on one spatial qubit: identity, swap, phase,
// swap-with-sign.
enum class SpatialUnitary { U1, U2, U3, U4 };

std::string_view to_string(BellState s);
std::optional<BellState> parse_bell_state(std::string_view text);
bool is_even_parity(BellState s);
std::string_view to_string(SubsystemKind k);

class RegisterError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Pure state over labeled qubits. Amplitude indexing is big-endian in label
// order: the first label is the most significant bit of the index.
//
// The vector is not renormalized by lossy operations, so its squared norm is
// the probability that every lossy step so far succeeded.
class QuantumRegister {
 public:
  QuantumRegister() : amplitudes_{Complex{1.0, 0.0}} {}

  // Register over `labels` with the given amplitudes (size must be 2^n).
  QuantumRegister(std::vector<SubsystemLabel> labels, std::vector<Complex> amplitudes);

  std::size_t num_qubits() const { return labels_.size(); }
  std::size_t dimension() const { return amplitudes_.size(); }
  const std::vector<SubsystemLabel>& labels() const { return labels_; }
  std::span<const Complex> amplitudes() const { return amplitudes_; }
  std::span<Complex> amplitudes() { return amplitudes_; }
  Complex amplitude(std::size_t index) const { return amplitudes_.at(index); }

  bool contains(std::string_view id) const;
  std::size_t position(std::string_view id) const;
  const SubsystemLabel& label(std::string_view id) const;
  // Bit mask of `id` within a basis index.
  std::size_t mask(std::string_view id) const;

  double norm_squared() const;
  void normalize();

  // Appends a qubit in state state[0]|0> + state[1]|1> (tensor product on the
  // right, so it becomes the least significant bit).
  void append(SubsystemLabel label, std::array<Complex, 2> state);

  // Contracts qubit `id` with <v| and drops it. Used once the qubit is known
  // to be in state v (for example after a projective measurement).
  void release(std::string_view id, std::array<Complex, 2> v);

  void apply(std::string_view id, const Mat2& u);
  void apply_controlled(std::string_view control, std::size_t control_value, std::string_view target,
                        const Mat2& u);

  // Multiplies amplitude i by factor(i) for every basis index.
  template <typename F>
  void apply_diagonal(F&& factor) {
    for (std::size_t i = 0; i < amplitudes_.size(); ++i) amplitudes_[i] *= factor(i);
  }

  // Reduced amplitudes of qubit `id` are the pair (amp[i with bit 0], amp[i with bit 1]).
  std::size_t bit(std::size_t index, std::string_view id) const { return (index & mask(id)) ? 1 : 0; }

  void require_kind(std::string_view id, SubsystemKind kind) const;

 private:
  std::vector<SubsystemLabel> labels_;
  std::vector<Complex> amplitudes_;
};

// Fidelity |<a|b>|^2 / (|a|^2 |b|^2); equals 1 iff the states agree up to global phase.
double overlap_fidelity(const QuantumRegister& a, const QuantumRegister& b);
double overlap_fidelity(std::span<const Complex> a, std::span<const Complex> b);

namespace gates {
Mat2 hadamard();
Mat2 pauli_x();
Mat2 pauli_z();
Mat2 spatial(SpatialUnitary u);
}  // namespace gates

// Basis vector for `outcome` in `basis`.
std::array<Complex, 2> basis_vector(Basis basis, std::size_t outcome);

// Two-photon spatial Bell state over qubits "a" and "b". With a polarization
// the register is pol_a, a, pol_b, b with both photons in that polarization state.
QuantumRegister make_bell(BellState label,
                          std::optional<std::array<Complex, 2>> with_polarization = std::nullopt);

// Spatial amplitudes (a1b1, a1b2, a2b1, a2b2) of a Bell state.
std::array<Complex, 4> bell_amplitudes(BellState label);

// 50:50 beam splitter |1> -> (|1>+|2>)/sqrt2, |2> -> (|1>-|2>)/sqrt2.
void apply_bs(QuantumRegister& reg, std::string_view spatial_id);

// PBS + HWP network: |H>|mode1> -> |H>|mode1>, |V>|mode1> -> |H>|mode2>.
// Throws if the spatial qubit has any weight on mode2.
void pol_to_spatial(QuantumRegister& reg, std::string_view polarization_id, std::string_view spatial_id);

void apply_spatial_unitary(QuantumRegister& reg, std::string_view spatial_id, SpatialUnitary u);
void hadamard_spin(QuantumRegister& reg, std::string_view spin_id);
// U_P = |R><R| - |L><L|.
void phase_flip_correction(QuantumRegister& reg, std::string_view polarization_id);

struct MeasurementResult {
  std::size_t outcome;
  double probability;
};

// Outcome probabilities relative to the current squared norm.
std::array<double, 2> outcome_probabilities(const QuantumRegister& reg, std::string_view id, Basis basis);

// Samples an outcome by inverting one uniform draw against the cumulative
// probabilities, collapses and renormalizes the register.
MeasurementResult measure(QuantumRegister& reg, std::string_view id, Basis basis, Rng& rng);

}  // namespace sbsa
