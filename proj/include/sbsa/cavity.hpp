#pragma once

#include <complex>
#include <string_view>

#include "sbsa/register.hpp"

namespace sbsa {

// Quantum-dot / one-sided micropillar parameters. All rates are in units of
// the cavity decay rate, so kappa is normally 1. Detunings are probe minus
// resonance: delta_c = w - w_c, delta_x = w - w_X.
struct CavityParams {
  double g = 2.4;
  double kappa = 1.0;
  double kappa_s = 0.0;
  double gamma = 0.1;
  double delta_c = 0.5;
  double delta_x = 0.5;

  // g given as a multiple of (kappa + kappa_s), kappa_s as a multiple of kappa.
  static CavityParams from_ratios(double g_over_ktot, double ks_over_k, double gamma = 0.1,
                                  double detuning = 0.5);

  // Throws std::invalid_argument on negative rates or kappa <= 0.
  void validate() const;
};

struct PhaseShifts {
  double phi_0;      // arg r_0, cold cavity
  double phi_h;      // arg r_h, hot cavity
  double delta_phi;  // phi_h - phi_0
  double theta_f;    // (phi_0 - phi_h) / 2, Faraday angle for spin up
};

// Weak-excitation steady-state reflection coefficient. coupled=false is the
// cold cavity (no dot coupling), coupled=true the hot cavity.
std::complex<double> reflection(const CavityParams& params, bool coupled);

PhaseShifts phase_shifts(const CavityParams& params);

// Conditional photon-spin scattering off the cavity, applied `passes` times:
// |R,up> and |L,down> pick up r_0, |L,up> and |R,down> pick up r_h. With
// ideal=true the unit-modulus phases r_0 = -i, r_h = 1 are used instead.
// Lossy scattering leaves the register unnormalized.
void scatter_photon(QuantumRegister& reg, std::string_view photon, std::string_view spin,
                    const CavityParams& params, int passes, bool ideal);

// Same, restricted to the branch in which `route_spatial` is in `route_mode`
// (0 = mode1). Other branches never reach the cavity and are left untouched.
void scatter_photon_routed(QuantumRegister& reg, std::string_view photon, std::string_view spin,
                           std::string_view route_spatial, std::size_t route_mode,
                           const CavityParams& params, int passes, bool ideal);

}  // namespace sbsa
