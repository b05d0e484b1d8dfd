#include "epm/dispersion.hpp"

#include <cmath>
#include <numbers>

#include "epm/errors.hpp"

namespace epm {

namespace {

void check_beam(const BeamDispersion& d, const char* which) {
  if (!(d.k0 > 0.0))
    throw physics_error(std::string(which) + ": k0 must be positive");
  if (!std::isfinite(d.omega_ref) || !std::isfinite(d.k0) ||
      !std::isfinite(d.k1) || !std::isfinite(d.k2))
    throw physics_error(std::string(which) + ": non-finite coefficient");
}

void check_omega(double omega) {
  if (!(omega > 0.0))
    throw physics_error("frequency must be positive");
}

}  // namespace

void validate(const CrystalConfig& cfg) {
  check_beam(cfg.pump, "pump");
  check_beam(cfg.signal, "signal");
  check_beam(cfg.idler, "idler");
  if (!(cfg.length > 0.0)) throw physics_error("crystal length must be positive");
  if (cfg.poling_period && !(*cfg.poling_period > 0.0))
    throw physics_error("grating period must be positive");
  if (!(cfg.pump_center > 0.0))
    throw physics_error("pump center frequency must be positive");
  const double wp = cfg.pump_center;
  const double tol = 1e-9 * wp;
  if (std::abs(cfg.pump.omega_ref - wp) > tol ||
      std::abs(cfg.signal.omega_ref - wp / 2) > tol ||
      std::abs(cfg.idler.omega_ref - wp / 2) > tol)
    throw physics_error(
        "expansion centers must sit at omega_p (pump) and omega_p/2 "
        "(signal, idler)");
}

double wavenumber(const BeamDispersion& d, double omega) {
  check_omega(omega);
  const double x = omega - d.omega_ref;
  return d.k0 + d.k1 * x + 0.5 * d.k2 * x * x;
}

double refractive_index(const BeamDispersion& d, double omega) {
  check_omega(omega);
  return constants::c * wavenumber(d, omega) / omega;
}

double delta_k(const CrystalConfig& cfg, double omega_s, double omega_i) {
  check_omega(omega_s);
  check_omega(omega_i);
  double dk = wavenumber(cfg.pump, omega_s + omega_i) -
              wavenumber(cfg.signal, omega_s) -
              wavenumber(cfg.idler, omega_i);
  if (cfg.poling_period) dk += 2.0 * std::numbers::pi / *cfg.poling_period;
  return dk;
}

double gamma(const CrystalConfig& cfg) {
  return std::abs(cfg.pump.k1 - cfg.signal.k1);
}

double hessian_mu(const CrystalConfig& cfg) {
  // H = [[k2p - k2s, k2p], [k2p, k2p - k2i]] at the degenerate point
  const double a = cfg.pump.k2 - cfg.signal.k2;
  const double c = cfg.pump.k2 - cfg.idler.k2;
  const double b = cfg.pump.k2;
  const double mean = 0.5 * (a + c);
  const double disc = std::sqrt(0.25 * (a - c) * (a - c) + b * b);
  return std::max(std::abs(mean + disc), std::abs(mean - disc));
}

namespace {

// PPKTP at 790 nm pump, poled at 47.7 um, from the quoted design point:
// gamma = 1.4e-4 ps/um, type-II gap 2.8e-4 ps/um, mu = 3.6e-7 ps^2/um,
// group index baseline 1.80.  The unpoled zeroth-order mismatch is built
// to be exactly -2pi/47.7 rad/um so the quoted grating period is the
// exact QPM solution.
CrystalConfig make_ppktp_790(double length_um) {
  using std::numbers::pi;
  const double lambda_pump = 0.790;  // um
  const double wp = 2.0 * pi * constants::c / lambda_pump;
  const double w0 = wp / 2.0;

  const double n_si = 1.80;
  const double k1_s = 6.0e-3;
  const double k1_i = k1_s + 2.8e-4;
  const double k1_p = 0.5 * (k1_s + k1_i);  // slowness-matched (gamma = 1.4e-4)

  // mu = (3/2) k2p for k2s = k2i = k2p/2
  const double k2_p = 3.6e-7 * 2.0 / 3.0;
  const double k2_si = 0.5 * k2_p;

  const double grating = 47.7;  // um
  const double k0_si = n_si * w0 / constants::c;
  const double k0_p = 2.0 * k0_si - 2.0 * pi / grating;

  CrystalConfig cfg;
  cfg.pump = {wp, k0_p, k1_p, k2_p};
  cfg.signal = {w0, k0_si, k1_s, k2_si};
  cfg.idler = {w0, k0_si, k1_i, k2_si};
  cfg.length = length_um;
  cfg.poling_period = std::nullopt;
  cfg.pump_center = wp;
  return cfg;
}

}  // namespace

CrystalConfig preset(const std::string& name, double length_um) {
  if (name == "ppktp-790") return make_ppktp_790(length_um);
  throw config_error("unknown crystal preset: " + name);
}

std::vector<std::string> preset_names() { return {"ppktp-790"}; }

CrystalConfig with_grating(CrystalConfig cfg, double period_um) {
  if (!(period_um > 0.0)) throw physics_error("grating period must be positive");
  cfg.poling_period = period_um;
  return cfg;
}

CrystalConfig with_length(CrystalConfig cfg, double length_um) {
  if (!(length_um > 0.0)) throw physics_error("crystal length must be positive");
  cfg.length = length_um;
  return cfg;
}

}  // namespace epm
