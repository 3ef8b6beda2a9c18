#include "sbsa/register.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <unordered_set>

namespace sbsa {

namespace {

constexpr double kInvSqrt2 = std::numbers::sqrt2 / 2.0;

bool is_power_of_two_match(std::size_t n_qubits, std::size_t size) {
  return n_qubits < 8 * sizeof(std::size_t) && (std::size_t{1} << n_qubits) == size;
}

}  // namespace

std::string_view to_string(BellState s) {
  switch (s) {
    case BellState::phi_plus: return "phi+";
    case BellState::phi_minus: return "phi-";
    case BellState::psi_plus: return "psi+";
    case BellState::psi_minus: return "psi-";
  }
  return "?";
}

std::optional<BellState> parse_bell_state(std::string_view text) {
  for (BellState s : kAllBellStates) {
    if (to_string(s) == text) return s;
  }
  return std::nullopt;
}

bool is_even_parity(BellState s) { return s == BellState::phi_plus || s == BellState::phi_minus; }

std::string_view to_string(SubsystemKind k) {
  switch (k) {
    case SubsystemKind::polarization: return "polarization";
    case SubsystemKind::spatial: return "spatial";
    case SubsystemKind::spin: return "spin";
  }
  return "?";
}

QuantumRegister::QuantumRegister(std::vector<SubsystemLabel> labels, std::vector<Complex> amplitudes)
    : labels_(std::move(labels)), amplitudes_(std::move(amplitudes)) {
  if (!is_power_of_two_match(labels_.size(), amplitudes_.size())) {
    throw RegisterError("amplitude vector size does not match 2^(number of labels)");
  }
  std::unordered_set<std::string_view> seen;
  for (const auto& l : labels_) {
    if (!seen.insert(l.id).second) throw RegisterError("duplicate subsystem id: " + l.id);
  }
}

bool QuantumRegister::contains(std::string_view id) const {
  return std::any_of(labels_.begin(), labels_.end(), [&](const auto& l) { return l.id == id; });
}

std::size_t QuantumRegister::position(std::string_view id) const {
  for (std::size_t k = 0; k < labels_.size(); ++k) {
    if (labels_[k].id == id) return k;
  }
  throw RegisterError("unknown subsystem id: " + std::string(id));
}

const SubsystemLabel& QuantumRegister::label(std::string_view id) const { return labels_[position(id)]; }

std::size_t QuantumRegister::mask(std::string_view id) const {
  return std::size_t{1} << (labels_.size() - 1 - position(id));
}

double QuantumRegister::norm_squared() const {
  double s = 0.0;
  for (const auto& a : amplitudes_) s += std::norm(a);
  return s;
}

void QuantumRegister::normalize() {
  const double n2 = norm_squared();
  if (!(n2 > 0.0)) throw RegisterError("cannot normalize a zero-norm register");
  const double inv = 1.0 / std::sqrt(n2);
  for (auto& a : amplitudes_) a *= inv;
}

void QuantumRegister::append(SubsystemLabel label, std::array<Complex, 2> state) {
  if (contains(label.id)) throw RegisterError("duplicate subsystem id: " + label.id);
  std::vector<Complex> next(amplitudes_.size() * 2);
  for (std::size_t i = 0; i < amplitudes_.size(); ++i) {
    next[2 * i] = amplitudes_[i] * state[0];
    next[2 * i + 1] = amplitudes_[i] * state[1];
  }
  labels_.push_back(std::move(label));
  amplitudes_ = std::move(next);
}

void QuantumRegister::release(std::string_view id, std::array<Complex, 2> v) {
  const std::size_t pos = position(id);
  const std::size_t m = mask(id);
  const std::size_t low_bits = m - 1;
  std::vector<Complex> next(amplitudes_.size() / 2);
  for (std::size_t j = 0; j < next.size(); ++j) {
    // Re-insert a zero bit at the released position.
    const std::size_t i0 = ((j & ~low_bits) << 1) | (j & low_bits);
    next[j] = std::conj(v[0]) * amplitudes_[i0] + std::conj(v[1]) * amplitudes_[i0 | m];
  }
  labels_.erase(labels_.begin() + static_cast<std::ptrdiff_t>(pos));
  amplitudes_ = std::move(next);
}

void QuantumRegister::apply(std::string_view id, const Mat2& u) {
  const std::size_t m = mask(id);
  for (std::size_t i = 0; i < amplitudes_.size(); ++i) {
    if (i & m) continue;
    const Complex a0 = amplitudes_[i];
    const Complex a1 = amplitudes_[i | m];
    amplitudes_[i] = u[0][0] * a0 + u[0][1] * a1;
    amplitudes_[i | m] = u[1][0] * a0 + u[1][1] * a1;
  }
}

void QuantumRegister::apply_controlled(std::string_view control, std::size_t control_value,
                                       std::string_view target, const Mat2& u) {
  const std::size_t cm = mask(control);
  const std::size_t tm = mask(target);
  if (cm == tm) throw RegisterError("control and target must differ");
  for (std::size_t i = 0; i < amplitudes_.size(); ++i) {
    if ((i & tm) || (((i & cm) != 0) != (control_value != 0))) continue;
    const Complex a0 = amplitudes_[i];
    const Complex a1 = amplitudes_[i | tm];
    amplitudes_[i] = u[0][0] * a0 + u[0][1] * a1;
    amplitudes_[i | tm] = u[1][0] * a0 + u[1][1] * a1;
  }
}

void QuantumRegister::require_kind(std::string_view id, SubsystemKind kind) const {
  const auto& l = label(id);
  if (l.kind != kind) {
    throw RegisterError("subsystem " + l.id + " is " + std::string(to_string(l.kind)) + ", expected " +
                        std::string(to_string(kind)));
  }
}

double overlap_fidelity(std::span<const Complex> a, std::span<const Complex> b) {
  if (a.size() != b.size()) throw RegisterError("overlap of registers with different dimensions");
  Complex inner{0.0, 0.0};
  double na = 0.0;
  double nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    inner += std::conj(a[i]) * b[i];
    na += std::norm(a[i]);
    nb += std::norm(b[i]);
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return std::norm(inner) / (na * nb);
}

double overlap_fidelity(const QuantumRegister& a, const QuantumRegister& b) {
  return overlap_fidelity(a.amplitudes(), b.amplitudes());
}

namespace gates {

Mat2 hadamard() { return {{{kInvSqrt2, kInvSqrt2}, {kInvSqrt2, -kInvSqrt2}}}; }
Mat2 pauli_x() { return {{{0.0, 1.0}, {1.0, 0.0}}}; }
Mat2 pauli_z() { return {{{1.0, 0.0}, {0.0, -1.0}}}; }

Mat2 spatial(SpatialUnitary u) {
  switch (u) {
    case SpatialUnitary::U1: return {{{1.0, 0.0}, {0.0, 1.0}}};
    case SpatialUnitary::U2: return {{{0.0, 1.0}, {1.0, 0.0}}};
    case SpatialUnitary::U3: return {{{1.0, 0.0}, {0.0, -1.0}}};
    // |a1><a2| - |a2><a1|
    case SpatialUnitary::U4: return {{{0.0, 1.0}, {-1.0, 0.0}}};
  }
  throw RegisterError("unknown spatial unitary");
}

}  // namespace gates

std::array<Complex, 2> basis_vector(Basis basis, std::size_t outcome) {
  const double sign = outcome == 0 ? 1.0 : -1.0;
  switch (basis) {
    case Basis::Z: return outcome == 0 ? std::array<Complex, 2>{1.0, 0.0} : std::array<Complex, 2>{0.0, 1.0};
    case Basis::X: return {kInvSqrt2, sign * kInvSqrt2};
    case Basis::Y: return {kInvSqrt2, Complex{0.0, sign * kInvSqrt2}};
  }
  throw RegisterError("unknown basis");
}

std::array<Complex, 4> bell_amplitudes(BellState label) {
  const Complex h{kInvSqrt2, 0.0};
  switch (label) {
    case BellState::phi_plus: return {h, 0.0, 0.0, h};
    case BellState::phi_minus: return {h, 0.0, 0.0, -h};
    case BellState::psi_plus: return {0.0, h, h, 0.0};
    case BellState::psi_minus: return {0.0, h, -h, 0.0};
  }
  throw RegisterError("unknown Bell state");
}

QuantumRegister make_bell(BellState label, std::optional<std::array<Complex, 2>> with_polarization) {
  const auto spatial = bell_amplitudes(label);
  if (!with_polarization) {
    return QuantumRegister({{"a", SubsystemKind::spatial}, {"b", SubsystemKind::spatial}},
                           {spatial.begin(), spatial.end()});
  }
  const auto& pol = *with_polarization;
  std::vector<SubsystemLabel> labels = {{"pol_a", SubsystemKind::polarization},
                                        {"a", SubsystemKind::spatial},
                                        {"pol_b", SubsystemKind::polarization},
                                        {"b", SubsystemKind::spatial}};
  std::vector<Complex> amps(16);
  for (std::size_t i = 0; i < 16; ++i) {
    const std::size_t pa = (i >> 3) & 1;
    const std::size_t sa = (i >> 2) & 1;
    const std::size_t pb = (i >> 1) & 1;
    const std::size_t sb = i & 1;
    amps[i] = pol[pa] * pol[pb] * spatial[2 * sa + sb];
  }
  return QuantumRegister(std::move(labels), std::move(amps));
}

void apply_bs(QuantumRegister& reg, std::string_view spatial_id) {
  reg.require_kind(spatial_id, SubsystemKind::spatial);
  reg.apply(spatial_id, gates::hadamard());
}

void pol_to_spatial(QuantumRegister& reg, std::string_view polarization_id, std::string_view spatial_id) {
  reg.require_kind(polarization_id, SubsystemKind::polarization);
  reg.require_kind(spatial_id, SubsystemKind::spatial);
  const std::size_t m = reg.mask(spatial_id);
  const auto amps = reg.amplitudes();
  const double total = reg.norm_squared();
  double occupied = 0.0;
  for (std::size_t i = 0; i < amps.size(); ++i) {
    if (i & m) occupied += std::norm(amps[i]);
  }
  if (occupied > 1e-12 * std::max(total, 1.0)) {
    throw RegisterError("pol_to_spatial needs spatial qubit " + std::string(spatial_id) + " in mode1");
  }
  // Rotate H/V onto the R/L slots, move the V component to mode2, reset the
  // polarization of that branch to H, and rotate back.
  reg.apply(polarization_id, gates::hadamard());
  reg.apply_controlled(polarization_id, 1, spatial_id, gates::pauli_x());
  reg.apply_controlled(spatial_id, 1, polarization_id, gates::pauli_x());
  reg.apply(polarization_id, gates::hadamard());
}

void apply_spatial_unitary(QuantumRegister& reg, std::string_view spatial_id, SpatialUnitary u) {
  reg.require_kind(spatial_id, SubsystemKind::spatial);
  reg.apply(spatial_id, gates::spatial(u));
}

void hadamard_spin(QuantumRegister& reg, std::string_view spin_id) {
  reg.require_kind(spin_id, SubsystemKind::spin);
  reg.apply(spin_id, gates::hadamard());
}

void phase_flip_correction(QuantumRegister& reg, std::string_view polarization_id) {
  reg.require_kind(polarization_id, SubsystemKind::polarization);
  reg.apply(polarization_id, gates::pauli_z());
}

namespace {

void require_basis(const QuantumRegister& reg, std::string_view id, Basis basis) {
  if (basis == Basis::Y && reg.label(id).kind != SubsystemKind::polarization) {
    throw RegisterError("circular basis measurement is only defined for polarization qubits");
  }
}

// Weight of the projection of each amplitude pair onto basis vector `v`.
double projected_weight(const QuantumRegister& reg, std::size_t m, const std::array<Complex, 2>& v) {
  const auto amps = reg.amplitudes();
  double w = 0.0;
  for (std::size_t i = 0; i < amps.size(); ++i) {
    if (i & m) continue;
    w += std::norm(std::conj(v[0]) * amps[i] + std::conj(v[1]) * amps[i | m]);
  }
  return w;
}

}  // namespace

std::array<double, 2> outcome_probabilities(const QuantumRegister& reg, std::string_view id, Basis basis) {
  require_basis(reg, id, basis);
  const std::size_t m = reg.mask(id);
  const double total = reg.norm_squared();
  if (!(total > 0.0)) throw RegisterError("measurement of a zero-norm register");
  const double w0 = projected_weight(reg, m, basis_vector(basis, 0));
  const double w1 = projected_weight(reg, m, basis_vector(basis, 1));
  return {w0 / total, w1 / total};
}

MeasurementResult measure(QuantumRegister& reg, std::string_view id, Basis basis, Rng& rng) {
  const auto probs = outcome_probabilities(reg, id, basis);
  const double u = rng.uniform();
  const std::size_t outcome = (u < probs[0] || probs[1] == 0.0) ? 0 : 1;

  const auto v = basis_vector(basis, outcome);
  const std::size_t m = reg.mask(id);
  auto amps = reg.amplitudes();
  for (std::size_t i = 0; i < amps.size(); ++i) {
    if (i & m) continue;
    const Complex c = std::conj(v[0]) * amps[i] + std::conj(v[1]) * amps[i | m];
    amps[i] = c * v[0];
    amps[i | m] = c * v[1];
  }
  reg.normalize();
  return {outcome, probs[outcome]};
}

}  // namespace sbsa
