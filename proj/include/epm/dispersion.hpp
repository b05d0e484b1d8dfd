#pragma once

#include <optional>
#include <string>
#include <vector>

namespace epm {

// Unit system used throughout: angular frequency in rad/ps, time in ps,
// length in um.  Wavenumbers are rad/um, inverse group velocities ps/um,
// group-velocity dispersion ps^2/um.
namespace constants {
inline constexpr double c = 299.792458;  // speed of light, um/ps
}

// Second-order Taylor model of the wavenumber k(omega) for one beam.
// k(omega) = k0 + k1*(omega - omega_ref) + (k2/2)*(omega - omega_ref)^2
struct BeamDispersion {
  double omega_ref;  // expansion center, rad/ps
  double k0;         // wavenumber at omega_ref, rad/um
  double k1;         // inverse group velocity, ps/um
  double k2;         // group-velocity dispersion, ps^2/um
};

// One downconversion crystal: three beam dispersions, length, optional
// poling period, and the pump center frequency.
struct CrystalConfig {
  BeamDispersion pump;
  BeamDispersion signal;
  BeamDispersion idler;
  double length;                        // um
  std::optional<double> poling_period;  // um; empty = unpoled
  double pump_center;                   // omega_p, rad/ps
};

// Throws physics_error unless k0 > 0, all coefficients finite, L > 0,
// Lambda > 0 when present, and the expansion centers sit at omega_p
// (pump) and omega_p/2 (signal, idler).
void validate(const CrystalConfig& cfg);

double wavenumber(const BeamDispersion& d, double omega);        // rad/um
double refractive_index(const BeamDispersion& d, double omega);  // dimensionless

// Phase mismatch k_p(ws+wi) - k_s(ws) - k_i(wi) [+ 2pi/Lambda when poled].
// The grating term enters with a plus sign: it cancels a negative
// zeroth-order mismatch, which is how the presets are constructed.
double delta_k(const CrystalConfig& cfg, double omega_s, double omega_i);

// |k'_p(omega_p) - k'_s(omega_p/2)|, ps/um
double gamma(const CrystalConfig& cfg);

// Largest-magnitude eigenvalue of the Hessian of delta_k(ws, wi) at the
// degenerate point, ps^2/um.
double hessian_mu(const CrystalConfig& cfg);

// Named crystal presets ("ppktp-790").  Returned configs are unpoled;
// use solve_grating_period / with_grating to pole them.
CrystalConfig preset(const std::string& name, double length_um = 20000.0);
std::vector<std::string> preset_names();

CrystalConfig with_grating(CrystalConfig cfg, double period_um);
CrystalConfig with_length(CrystalConfig cfg, double length_um);

}  // namespace epm
