#pragma once

#include <complex>
#include <utility>
#include <vector>

#include "epm/dispersion.hpp"

namespace epm {

// Gaussian pump pulse, transform limited (flat spectral phase).
// Amplitude convention: E_p(w) = exp(-2 (w - omega_p)^2 / bandwidth^2),
// so the spectral power falls to 1/e at detuning bandwidth/2.
struct PumpSpectrum {
  double omega_p;    // center, rad/ps
  double bandwidth;  // Omega_p, rad/ps
};

std::complex<double> pump_amplitude(const PumpSpectrum& p, double omega);

// Uniform square detuning grid around omega_p/2: nu_a = -span + a*spacing,
// spacing = 2*span/(n-1).  n must be a power of two >= 16.
struct FrequencyGrid {
  int n;
  double span;  // rad/ps

  double spacing() const { return 2.0 * span / (n - 1); }
  double nu(int a) const { return -span + a * spacing(); }
};

void validate(const FrequencyGrid& g);

// Analytic delta-function limits of the joint amplitude: a cw pump pins
// the state to the antidiagonal nu_s + nu_i = 0 (twin-beam limit); an
// infinite crystal pins it to the diagonal nu_s = nu_i (difference-beam
// limit).  Represented as one-dimensional amplitudes on those ridges.
enum class LimitKind { none, cw_twin_beam, long_crystal_db };

struct BuildOptions {
  LimitKind limit = LimitKind::none;
  // Replace sqrt(ws*wi)/(n_s n_i) by its degenerate-point value.
  bool flat_prefactor = false;
};

// Discretized joint spectral amplitude.  Entry (a,b) is the value at
// (omega_p/2 + nu_a, omega_p/2 + nu_b), row-major, normalized so that
// sum |values|^2 * spacing^2 = 1.
struct JsaGrid {
  FrequencyGrid grid;
  std::vector<std::complex<double>> values;  // n*n, row-major
  CrystalConfig cfg;
  PumpSpectrum pump;
  BuildOptions opts;

  const std::complex<double>& at(int a, int b) const {
    return values[static_cast<std::size_t>(a) * grid.n + b];
  }
  double l2_norm_sq() const;  // sum |v|^2 spacing^2
};

// Pump-spectrum factor of the joint amplitude:
// sqrt(ws*wi)/(n_s(ws) n_i(wi)) * E_p(ws + wi)
std::complex<double> alpha(const CrystalConfig& cfg, const PumpSpectrum& p,
                           double omega_s, double omega_i,
                           bool flat_prefactor = false);

// Phase-matching function sin(dk L/2)/(dk/2); equals L at dk = 0.
double phi_L(const CrystalConfig& cfg, double omega_s, double omega_i);

JsaGrid build_jsa(const CrystalConfig& cfg, const PumpSpectrum& p,
                  const FrequencyGrid& grid, const BuildOptions& opts = {});

// Default grid per the library's resolution rule: N = 512,
// span = max(2*bandwidth, 8pi/(gamma*L)).
FrequencyGrid default_grid(const CrystalConfig& cfg, const PumpSpectrum& p,
                           int n = 512);

// Marginal intensity spectra: signal[a] = sum_b |v(a,b)|^2 spacing,
// idler[b] = sum_a |v(a,b)|^2 spacing.  Each sums to 1 with a spacing
// weight.
std::pair<std::vector<double>, std::vector<double>>
marginal_spectra(const JsaGrid& j);

// Closed-form twin-beam fluorescence spectrum
// sin^2(2pi w/Omega_f) / [2pi w/(Omega_f L)]^2, equal to L^2 at w = 0.
// w is the detuning from omega_p/2.
double tb_spectral_density(const CrystalConfig& cfg, double detuning);

}  // namespace epm
