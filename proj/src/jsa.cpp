#include "epm/jsa.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "epm/errors.hpp"
#include "epm/kernels.hpp"
#include "epm/phasematch.hpp"

namespace epm {

std::complex<double> pump_amplitude(const PumpSpectrum& p, double omega) {
  if (!(omega > 0.0)) throw physics_error("frequency must be positive");
  const double x = (omega - p.omega_p) / p.bandwidth;
  return {std::exp(-2.0 * x * x), 0.0};
}

void validate(const FrequencyGrid& g) {
  if (g.n < 16 || (g.n & (g.n - 1)) != 0)
    throw physics_error("grid size must be a power of two >= 16");
  if (!(g.span > 0.0)) throw physics_error("grid span must be positive");
}

double JsaGrid::l2_norm_sq() const {
  const double d = grid.spacing();
  return kernels::active().sum_abs2(values.data(), values.size()) * d * d;
}

std::complex<double> alpha(const CrystalConfig& cfg, const PumpSpectrum& p,
                           double omega_s, double omega_i,
                           bool flat_prefactor) {
  double pre;
  if (flat_prefactor) {
    const double w0 = cfg.pump_center / 2;
    pre = w0 / (refractive_index(cfg.signal, w0) *
                refractive_index(cfg.idler, w0));
  } else {
    pre = std::sqrt(omega_s * omega_i) /
          (refractive_index(cfg.signal, omega_s) *
           refractive_index(cfg.idler, omega_i));
  }
  return pre * pump_amplitude(p, omega_s + omega_i);
}

double phi_L(const CrystalConfig& cfg, double omega_s, double omega_i) {
  const double dk = delta_k(cfg, omega_s, omega_i);
  const double x = 0.5 * dk * cfg.length;
  if (std::abs(x) < 1e-6)
    return cfg.length * (1.0 - x * x / 6.0);  // sinc series, removable singularity
  return std::sin(x) / (0.5 * dk);
}

FrequencyGrid default_grid(const CrystalConfig& cfg, const PumpSpectrum& p,
                           int n) {
  const double g = gamma(cfg);
  if (g == 0.0) throw physics_error("degenerate design: gamma vanishes");
  const double span = std::max(2.0 * p.bandwidth,
                               8.0 * std::numbers::pi / (g * cfg.length));
  return {n, span};
}

namespace {

void check_resolution(const CrystalConfig& cfg, const PumpSpectrum& p,
                      const FrequencyGrid& grid, LimitKind limit) {
  const double d = grid.spacing();
  const double sinc_width =
      2.0 * std::numbers::pi / (gamma(cfg) * cfg.length);
  const double pump_width = p.bandwidth;
  double width;
  const char* name;
  switch (limit) {
    case LimitKind::cw_twin_beam:
      width = sinc_width;
      name = "phase-matching width 2pi/(gamma L)";
      break;
    case LimitKind::long_crystal_db:
      width = pump_width;
      name = "pump bandwidth";
      break;
    default:
      if (pump_width <= sinc_width) {
        width = pump_width;
        name = "pump bandwidth";
      } else {
        width = sinc_width;
        name = "phase-matching width 2pi/(gamma L)";
      }
  }
  if (!(d < width / 8.0))
    throw physics_error("under-resolved grid: spacing " + std::to_string(d) +
                        " rad/ps does not resolve the " + name + " (" +
                        std::to_string(width) + " rad/ps); need spacing < " +
                        std::to_string(width / 8.0));
}

}  // namespace

JsaGrid build_jsa(const CrystalConfig& cfg, const PumpSpectrum& p,
                  const FrequencyGrid& grid, const BuildOptions& opts) {
  validate(cfg);
  validate(grid);
  if (!(p.bandwidth > 0.0)) throw physics_error("pump bandwidth must be positive");
  check_resolution(cfg, p, grid, opts.limit);

  const int n = grid.n;
  const double w0 = cfg.pump_center / 2;
  JsaGrid j{grid, std::vector<std::complex<double>>(
                      static_cast<std::size_t>(n) * n),
            cfg, p, opts};

  switch (opts.limit) {
    case LimitKind::none:
      for (int a = 0; a < n; ++a) {
        const double ws = w0 + grid.nu(a);
        auto* row = j.values.data() + static_cast<std::size_t>(a) * n;
        for (int b = 0; b < n; ++b) {
          const double wi = w0 + grid.nu(b);
          row[b] = alpha(cfg, p, ws, wi, opts.flat_prefactor) *
                   phi_L(cfg, ws, wi);
        }
      }
      break;
    case LimitKind::cw_twin_beam:
      // cw pump: support collapses onto nu_s + nu_i = 0; the pump factor
      // is constant there, so only the phase-matching function remains.
      for (int a = 0; a < n; ++a) {
        const int b = n - 1 - a;  // nu_b = -nu_a exactly on this grid
        const double ws = w0 + grid.nu(a);
        const double wi = w0 + grid.nu(b);
        double pre = 1.0;
        if (!opts.flat_prefactor)
          pre = std::sqrt(ws * wi) / (refractive_index(cfg.signal, ws) *
                                      refractive_index(cfg.idler, wi));
        j.values[static_cast<std::size_t>(a) * n + b] = pre * phi_L(cfg, ws, wi);
      }
      break;
    case LimitKind::long_crystal_db:
      // Infinite crystal: support collapses onto nu_s = nu_i with the
      // pump-defined spectral function phi(nu), |phi|^2 = exp(-4 nu^2/Wp^2).
      for (int a = 0; a < n; ++a) {
        const double nu = grid.nu(a);
        const double ws = w0 + nu;
        double pre = 1.0;
        if (!opts.flat_prefactor)
          pre = ws / (refractive_index(cfg.signal, ws) *
                      refractive_index(cfg.idler, ws));
        j.values[static_cast<std::size_t>(a) * n + a] =
            pre * pump_amplitude(p, p.omega_p + nu);
      }
      break;
  }

  const double norm = j.l2_norm_sq();
  if (!(norm > 0.0)) throw physics_error("joint amplitude vanishes on this grid");
  kernels::active().scale(j.values.data(), j.values.size(),
                          1.0 / std::sqrt(norm));
  return j;
}

std::pair<std::vector<double>, std::vector<double>>
marginal_spectra(const JsaGrid& j) {
  const int n = j.grid.n;
  const double d = j.grid.spacing();
  std::vector<double> w(static_cast<std::size_t>(n) * n);
  kernels::active().abs2(j.values.data(), w.data(), w.size());
  std::vector<double> signal(n, 0.0), idler(n, 0.0);
  kernels::active().row_col_sums(w.data(), n, n, signal.data(), idler.data());
  for (auto& x : signal) x *= d;
  for (auto& x : idler) x *= d;
  return {std::move(signal), std::move(idler)};
}

double tb_spectral_density(const CrystalConfig& cfg, double detuning) {
  const double wf = omega_f(cfg);
  const double x = 2.0 * std::numbers::pi * detuning / wf;
  if (std::abs(x) < 1e-8) return cfg.length * cfg.length * (1.0 - x * x / 3.0);
  const double s = std::sin(x) / (x / cfg.length);
  return s * s;
}

}  // namespace epm
