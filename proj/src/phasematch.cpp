#include "epm/phasematch.hpp"

#include <cmath>
#include <numbers>

#include "epm/errors.hpp"

namespace epm {

double solve_grating_period(const CrystalConfig& cfg) {
  validate(cfg);
  const double wp = cfg.pump_center;
  const double dk0 = wavenumber(cfg.pump, wp) -
                     wavenumber(cfg.signal, wp / 2) -
                     wavenumber(cfg.idler, wp / 2);
  if (dk0 == 0.0)
    throw physics_error("already phase matched: no grating needed");
  return 2.0 * std::numbers::pi / std::abs(dk0);
}

PhaseMatchReport check_extended_pm(const CrystalConfig& cfg, double tol_index,
                                   double tol_slowness) {
  validate(cfg);
  const double wp = cfg.pump_center;
  const double w0 = wp / 2;

  double index_mismatch = refractive_index(cfg.pump, wp) -
                          0.5 * (refractive_index(cfg.signal, w0) +
                                 refractive_index(cfg.idler, w0));
  if (cfg.poling_period)
    index_mismatch +=
        2.0 * std::numbers::pi * constants::c / (*cfg.poling_period * wp);

  PhaseMatchReport r;
  r.residual_index = std::abs(index_mismatch);
  r.residual_slowness =
      std::abs(cfg.pump.k1 - 0.5 * (cfg.signal.k1 + cfg.idler.k1));
  r.type_ii_gap = std::abs(cfg.signal.k1 - cfg.idler.k1);
  r.gamma = gamma(cfg);
  r.mu = hessian_mu(cfg);
  r.index_ok = r.residual_index <= tol_index;
  r.slowness_ok = r.residual_slowness <= tol_slowness;
  r.type_ii_ok = r.type_ii_gap > tol_slowness;
  r.satisfied = r.index_ok && r.slowness_ok && r.type_ii_ok;
  return r;
}

LengthWindow length_window(const CrystalConfig& cfg, double pump_bandwidth) {
  if (!(pump_bandwidth > 0.0))
    throw physics_error("pump bandwidth must be positive");
  const double g = gamma(cfg);
  const double mu = hessian_mu(cfg);
  if (g == 0.0 || mu == 0.0)
    throw physics_error("degenerate design: gamma or mu vanishes, "
                        "length window undefined");
  using std::numbers::pi;
  return {2.0 * pi / (g * pump_bandwidth),
          8.0 * pi / (mu * pump_bandwidth * pump_bandwidth), pump_bandwidth};
}

double omega_f(const CrystalConfig& cfg) {
  const double gap = std::abs(cfg.signal.k1 - cfg.idler.k1);
  if (gap == 0.0)
    throw physics_error(
        "type-I input (k'_s = k'_i): fluorescence bandwidth undefined");
  if (!(cfg.length > 0.0)) throw physics_error("crystal length must be positive");
  return 4.0 * std::numbers::pi / (cfg.length * gap);
}

}  // namespace epm
