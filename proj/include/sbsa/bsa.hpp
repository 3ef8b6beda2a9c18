#pragma once

#include <array>
#include <optional>
#include <span>
#include <string_view>

#include "sbsa/cavity.hpp"
#include "sbsa/register.hpp"
#include "sbsa/rng.hpp"

namespace sbsa {

// Which pair of detectors clicked behind the two beam splitters (c for
// photon a, d for photon b).
enum class DetectorPair { c1d1, c1d2, c2d1, c2d2 };

std::string_view to_string(DetectorPair d);

struct BsaRecord {
  bool spin_changed = false;
  DetectorPair detectors = DetectorPair::c1d1;
  BellState inferred = BellState::phi_plus;
  // Squared norm surviving the lossy cavity steps; 1 in the ideal model.
  double success_probability = 1.0;
};

struct QualityPoint {
  double g_over_ktot;
  double ks_over_k;
  double abs_r0;
  double abs_rh;
  double f1;
  double eta1;
  double f2;
  // 1/2 + eta1^2, not a probability: reaches 1.5 when |r_0| = |r_h| = 1.
  double eta2;
};

struct DecoherenceParams {
  double delta_t;  // ns between input photons
  double t2e;      // electron spin coherence time, ns
};

// Subsystem ids used by the analyzer's register.
namespace ids {
inline constexpr std::string_view pol_a = "pol_a";
inline constexpr std::string_view spatial_a = "a";
inline constexpr std::string_view pol_b = "pol_b";
inline constexpr std::string_view spatial_b = "b";
inline constexpr std::string_view spin = "e";
inline constexpr std::string_view aux = "p";
}  // namespace ids

// Register pol_a, a, pol_b, b, e with both photons in |R>, the given spatial
// amplitudes (a1b1, a1b2, a2b1, a2b2) and the spin in |+>.
QuantumRegister make_analyzer_input(std::span<const Complex, 4> spatial);

// Parity-check QND: mode a1 of photon a and then mode b1 of photon b each make
// a double pass through the cavity followed by U_P on the photon's polarization.
// The spin must be in |+>, unentangled, at call time.
void parity_qnd(QuantumRegister& reg, std::string_view spin, const CavityParams& params, bool ideal);

// Hadamard on the spin, one reflection of an auxiliary (|R>+|L>)/sqrt2 photon,
// readout of that photon in the (R +- iL)/sqrt2 basis. Returns true when the
// (R - iL) outcome fires. The auxiliary photon is removed afterwards.
bool spin_readout(QuantumRegister& reg, std::string_view spin, const CavityParams& params, bool ideal,
                  Rng& rng);

// P(spin_readout reports a change), evaluated without sampling. Does not
// modify `reg`.
double spin_change_probability(const QuantumRegister& reg, std::string_view spin, const CavityParams& params,
                               bool ideal);

DetectorPair detect(QuantumRegister& reg, Rng& rng);

BellState classify(bool spin_changed, DetectorPair detectors);

BsaRecord analyze(BellState input, const CavityParams& params, bool ideal, Rng& rng);
BsaRecord analyze(std::span<const Complex, 4> spatial, const CavityParams& params, bool ideal, Rng& rng);

// Fidelity and efficiency of the odd-parity (F1, eta1) and even-parity
// (F2, eta2) analysis from |r_0| and |r_h|.
QualityPoint quality(const CavityParams& params);
QualityPoint quality_from_magnitudes(double abs_r0, double abs_rh);

// [1 + exp(-delta_t / T2e)] / 2
double decoherence_factor(const DecoherenceParams& p);

}  // namespace sbsa
