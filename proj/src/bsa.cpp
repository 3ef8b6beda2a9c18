#include "sbsa/bsa.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sbsa {

std::string_view to_string(DetectorPair d) {
  switch (d) {
    case DetectorPair::c1d1: return "c1d1";
    case DetectorPair::c1d2: return "c1d2";
    case DetectorPair::c2d1: return "c2d1";
    case DetectorPair::c2d2: return "c2d2";
  }
  return "?";
}

QuantumRegister make_analyzer_input(std::span<const Complex, 4> spatial) {
  std::vector<SubsystemLabel> labels = {{std::string(ids::pol_a), SubsystemKind::polarization},
                                        {std::string(ids::spatial_a), SubsystemKind::spatial},
                                        {std::string(ids::pol_b), SubsystemKind::polarization},
                                        {std::string(ids::spatial_b), SubsystemKind::spatial}};
  std::vector<Complex> amps(16);
  // Both polarizations R (index 0): only pol bits 0 are populated.
  for (std::size_t sa = 0; sa < 2; ++sa) {
    for (std::size_t sb = 0; sb < 2; ++sb) amps[(sa << 2) | sb] = spatial[2 * sa + sb];
  }
  QuantumRegister reg(std::move(labels), std::move(amps));
  reg.append({std::string(ids::spin), SubsystemKind::spin}, basis_vector(Basis::X, 0));
  return reg;
}

namespace {

void require_spin_plus(const QuantumRegister& reg, std::string_view spin) {
  reg.require_kind(spin, SubsystemKind::spin);
  const std::size_t m = reg.mask(spin);
  const auto amps = reg.amplitudes();
  const double scale = std::max(reg.norm_squared(), 1e-300);
  double minus_weight = 0.0;
  for (std::size_t i = 0; i < amps.size(); ++i) {
    if (i & m) continue;
    minus_weight += std::norm(amps[i] - amps[i | m]) / 2.0;
  }
  if (minus_weight > 1e-12 * scale) {
    throw std::logic_error("parity check requires the spin prepared in |+>");
  }
}

}  // namespace

void parity_qnd(QuantumRegister& reg, std::string_view spin, const CavityParams& params, bool ideal) {
  require_spin_plus(reg, spin);
  // Photon a finishes both passes before photon b enters.
  scatter_photon_routed(reg, ids::pol_a, spin, ids::spatial_a, 0, params, 2, ideal);
  reg.apply_controlled(ids::spatial_a, 0, ids::pol_a, gates::pauli_z());
  scatter_photon_routed(reg, ids::pol_b, spin, ids::spatial_b, 0, params, 2, ideal);
  reg.apply_controlled(ids::spatial_b, 0, ids::pol_b, gates::pauli_z());
}

namespace {

void inject_and_reflect_aux(QuantumRegister& reg, std::string_view spin, const CavityParams& params,
                            bool ideal) {
  hadamard_spin(reg, spin);
  reg.append({std::string(ids::aux), SubsystemKind::polarization}, basis_vector(Basis::X, 0));
  scatter_photon(reg, ids::aux, spin, params, 1, ideal);
}

}  // namespace

bool spin_readout(QuantumRegister& reg, std::string_view spin, const CavityParams& params, bool ideal,
                  Rng& rng) {
  inject_and_reflect_aux(reg, spin, params, ideal);
  const auto result = measure(reg, ids::aux, Basis::Y, rng);
  reg.release(ids::aux, basis_vector(Basis::Y, result.outcome));
  return result.outcome == 1;
}

double spin_change_probability(const QuantumRegister& reg, std::string_view spin, const CavityParams& params,
                               bool ideal) {
  QuantumRegister copy = reg;
  inject_and_reflect_aux(copy, spin, params, ideal);
  return outcome_probabilities(copy, ids::aux, Basis::Y)[1];
}

DetectorPair detect(QuantumRegister& reg, Rng& rng) {
  const auto a = measure(reg, ids::spatial_a, Basis::Z, rng).outcome;
  const auto b = measure(reg, ids::spatial_b, Basis::Z, rng).outcome;
  static constexpr DetectorPair table[2][2] = {{DetectorPair::c1d1, DetectorPair::c1d2},
                                               {DetectorPair::c2d1, DetectorPair::c2d2}};
  return table[a][b];
}

BellState classify(bool spin_changed, DetectorPair detectors) {
  const bool same = detectors == DetectorPair::c1d1 || detectors == DetectorPair::c2d2;
  if (spin_changed) return same ? BellState::psi_plus : BellState::psi_minus;
  return same ? BellState::phi_plus : BellState::phi_minus;
}

BsaRecord analyze(BellState input, const CavityParams& params, bool ideal, Rng& rng) {
  const auto amps = bell_amplitudes(input);
  return analyze(std::span<const Complex, 4>(amps), params, ideal, rng);
}

BsaRecord analyze(std::span<const Complex, 4> spatial, const CavityParams& params, bool ideal, Rng& rng) {
  QuantumRegister reg = make_analyzer_input(spatial);
  if (!(reg.norm_squared() > 0.0)) throw std::invalid_argument("analyzer input has zero norm");
  reg.normalize();

  BsaRecord record;
  parity_qnd(reg, ids::spin, params, ideal);
  // Measurement renormalizes, so fold the surviving weight in first.
  double success = reg.norm_squared();
  record.spin_changed = spin_readout(reg, ids::spin, params, ideal, rng);
  apply_bs(reg, ids::spatial_a);
  apply_bs(reg, ids::spatial_b);
  success *= reg.norm_squared();
  record.detectors = detect(reg, rng);
  record.inferred = classify(record.spin_changed, record.detectors);
  record.success_probability = success;
  return record;
}

QualityPoint quality_from_magnitudes(double r0, double rh) {
  const auto p = [](double x, int n) { return std::pow(x, n); };
  QualityPoint q{};
  q.abs_r0 = r0;
  q.abs_rh = rh;

  const double f1_num = p(r0, 3) + p(rh, 3) + p(r0, 2) * rh + r0 * p(rh, 2);
  const double f1_den = 4.0 * (p(r0, 6) + p(rh, 6) + p(r0, 4) * p(rh, 2) + p(r0, 2) * p(rh, 4));
  // Both ratios are bounded by 1 analytically; clamp the last-ulp overshoot at |r_0| = |r_h|.
  q.f1 = std::clamp(f1_num * f1_num / f1_den, 0.0, 1.0);
  q.eta1 = 0.5 * p(r0, 4) + 0.5 * p(rh, 4);

  const double f2_num = p(r0, 5) + p(rh, 5) + p(r0, 4) * rh + r0 * p(rh, 4);
  const double f2_den = 8.0 * (p(r0, 10) + p(rh, 10) + p(r0, 8) * p(rh, 2) + p(r0, 2) * p(rh, 8));
  q.f2 = std::clamp(f2_num * f2_num / f2_den + (r0 + rh) * (r0 + rh) / (4.0 * (r0 * r0 + rh * rh)), 0.0, 1.0);
  q.eta2 = 0.5 + q.eta1 * q.eta1;
  return q;
}

QualityPoint quality(const CavityParams& params) {
  auto q = quality_from_magnitudes(std::abs(reflection(params, false)), std::abs(reflection(params, true)));
  q.g_over_ktot = params.g / (params.kappa + params.kappa_s);
  q.ks_over_k = params.kappa_s / params.kappa;
  return q;
}

double decoherence_factor(const DecoherenceParams& p) {
  if (!(p.delta_t > 0.0) || !(p.t2e > 0.0)) {
    throw std::invalid_argument("delta_t and T2e must be positive");
  }
  return (1.0 + std::exp(-p.delta_t / p.t2e)) / 2.0;
}

}  // namespace sbsa
