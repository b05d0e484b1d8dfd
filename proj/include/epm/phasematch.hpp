#pragma once

#include "epm/dispersion.hpp"

namespace epm {

// Residuals of the two extended phase-matching conditions plus the
// type-II gap.  All residuals are stored as magnitudes.
struct PhaseMatchReport {
  double residual_index;     // pump index vs signal/idler average, grating-shifted
  double residual_slowness;  // inverse-group-velocity matching, ps/um
  double type_ii_gap;        // |k'_s - k'_i|, ps/um
  double gamma;              // ps/um
  double mu;                 // ps^2/um
  bool index_ok;
  bool slowness_ok;
  bool type_ii_ok;
  bool satisfied;  // all three
};

struct LengthWindow {
  double l_min;    // um
  double l_max;    // um
  double omega_p_bandwidth;  // pump bandwidth used, rad/ps
};

inline constexpr double kDefaultTolIndex = 1e-9;
inline constexpr double kDefaultTolSlowness = 1e-9;  // ps/um

// Grating period Lambda = 2pi/|dk0| cancelling the zeroth-order mismatch
// dk0 = k_p(wp) - k_s(wp/2) - k_i(wp/2).  Throws physics_error if the
// config is already phase matched (dk0 = 0).
double solve_grating_period(const CrystalConfig& cfg);

PhaseMatchReport check_extended_pm(const CrystalConfig& cfg,
                                   double tol_index = kDefaultTolIndex,
                                   double tol_slowness = kDefaultTolSlowness);

// Valid crystal-length window 2pi/(gamma*Wp) ... 8pi/(mu*Wp^2).
// Throws physics_error when gamma or mu vanishes.
LengthWindow length_window(const CrystalConfig& cfg, double pump_bandwidth);

// Fluorescence bandwidth 4pi/(L |k'_s - k'_i|).  Throws on type-I input.
double omega_f(const CrystalConfig& cfg);

}  // namespace epm
