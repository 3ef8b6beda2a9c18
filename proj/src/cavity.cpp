#include "sbsa/cavity.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace sbsa {

namespace {

constexpr std::complex<double> kI{0.0, 1.0};

struct ReflectionPair {
  std::complex<double> cold;
  std::complex<double> hot;
};

ReflectionPair reflection_pair(const CavityParams& params, bool ideal) {
  if (ideal) return {std::complex<double>{0.0, -1.0}, std::complex<double>{1.0, 0.0}};
  return {reflection(params, false), reflection(params, true)};
}

void scatter_impl(QuantumRegister& reg, std::string_view photon, std::string_view spin,
                  std::size_t route_mask, std::size_t route_value, const CavityParams& params, int passes,
                  bool ideal) {
  if (passes != 1 && passes != 2) throw std::invalid_argument("passes must be 1 or 2");
  reg.require_kind(photon, SubsystemKind::polarization);
  reg.require_kind(spin, SubsystemKind::spin);
  const auto r = reflection_pair(params, ideal);
  const auto cold = passes == 2 ? r.cold * r.cold : r.cold;
  const auto hot = passes == 2 ? r.hot * r.hot : r.hot;
  const std::size_t pm = reg.mask(photon);
  const std::size_t sm = reg.mask(spin);
  reg.apply_diagonal([&](std::size_t i) -> std::complex<double> {
    if ((i & route_mask) != route_value) return 1.0;
    const bool left = (i & pm) != 0;
    const bool down = (i & sm) != 0;
    // R couples to the dot only for spin down, L only for spin up.
    return left != down ? hot : cold;
  });
}

}  // namespace

CavityParams CavityParams::from_ratios(double g_over_ktot, double ks_over_k, double gamma, double detuning) {
  CavityParams p;
  p.kappa = 1.0;
  p.kappa_s = ks_over_k;
  p.g = g_over_ktot * (p.kappa + p.kappa_s);
  p.gamma = gamma;
  p.delta_c = detuning;
  p.delta_x = detuning;
  return p;
}

void CavityParams::validate() const {
  auto finite = [](double v) { return std::isfinite(v); };
  if (!finite(g) || !finite(kappa) || !finite(kappa_s) || !finite(gamma) || !finite(delta_c) ||
      !finite(delta_x)) {
    throw std::invalid_argument("cavity parameters must be finite");
  }
  if (g < 0.0) throw std::invalid_argument("g must be >= 0");
  if (kappa <= 0.0) throw std::invalid_argument("kappa must be > 0");
  if (kappa_s < 0.0) throw std::invalid_argument("kappa_s must be >= 0");
  if (gamma < 0.0) throw std::invalid_argument("gamma must be >= 0");
}

std::complex<double> reflection(const CavityParams& params, bool coupled) {
  params.validate();
  // i(w_c - w) + kappa/2 + kappa_s/2
  const auto cavity = -kI * params.delta_c + (params.kappa + params.kappa_s) / 2.0;
  if (!coupled) {
    return (-kI * params.delta_c - params.kappa / 2.0 + params.kappa_s / 2.0) / cavity;
  }
  // i(w_X - w) + gamma/2
  const auto dipole = -kI * params.delta_x + params.gamma / 2.0;
  const auto denominator = dipole * cavity + params.g * params.g;
  if (denominator == 0.0) {
    throw std::invalid_argument("degenerate cavity parameters: reflection denominator vanishes");
  }
  return 1.0 - params.kappa * dipole / denominator;
}

// arg in (-pi, pi]; std::arg yields -pi for a negative real with a -0 imaginary part.
static double principal_arg(std::complex<double> z) {
  const double a = std::arg(z);
  return a == -std::numbers::pi ? std::numbers::pi : a;
}

PhaseShifts phase_shifts(const CavityParams& params) {
  const double phi_0 = principal_arg(reflection(params, false));
  const double phi_h = principal_arg(reflection(params, true));
  const double delta = phi_h - phi_0;
  return {phi_0, phi_h, delta, -delta / 2.0};
}

void scatter_photon(QuantumRegister& reg, std::string_view photon, std::string_view spin,
                    const CavityParams& params, int passes, bool ideal) {
  scatter_impl(reg, photon, spin, 0, 0, params, passes, ideal);
}

void scatter_photon_routed(QuantumRegister& reg, std::string_view photon, std::string_view spin,
                           std::string_view route_spatial, std::size_t route_mode,
                           const CavityParams& params, int passes, bool ideal) {
  reg.require_kind(route_spatial, SubsystemKind::spatial);
  const std::size_t m = reg.mask(route_spatial);
  scatter_impl(reg, photon, spin, m, route_mode ? m : 0, params, passes, ideal);
}

}  // namespace sbsa
