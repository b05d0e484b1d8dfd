#pragma once

#include <string>
#include <vector>

#include "epm/jsa.hpp"
#include "epm/phasematch.hpp"

namespace epm {

enum class ScanMode { hom, mz };
enum class StateKind { tb, db, db_l, generic };

std::string to_string(ScanMode m);
std::string to_string(StateKind k);

// One-dimensional biphoton state living on a ridge in the (w1, w2) plane.
// For the twin-beam limit the photons sit at (w0 - nu, w0 + nu); for the
// difference-beam limit at (w0 + nu, w0 + nu).  weight[k] holds the
// spectral density |phi(nu_k)|^2 times the quadrature step.
struct RidgeState {
  StateKind kind;  // tb or db
  double omega_p;
  double nu_min;
  double nu_step;
  std::vector<double> weight;
};

// Dense quadrature states for the analytic limits.  The twin-beam span
// covers `lobes` sinc lobes on each side of nu = 0.
RidgeState make_tb_limit_state(const CrystalConfig& cfg, int n_points = 65537,
                               int lobes = 1200);
RidgeState make_db_limit_state(const PumpSpectrum& pump, int n_points = 8193,
                               double n_sigma = 8.0);

// Coincidence probability versus delay, normalized to the
// non-interfering baseline term.
struct ScanResult {
  ScanMode mode;
  StateKind kind;
  std::vector<double> tau;  // ps
  std::vector<double> p;    // dimensionless, in [0, 2]
};

// Baseline-normalized coincidence probability
//   P(tau) = < 1 +/- cos[(w1 +/- w2) tau] >
// averaged over |alpha Phi_L|^2 (minus: HOM, plus: MZ).  The grid variant
// asserts exchange symmetry of the spectral weight and throws
// physics_error on a clearly asymmetric state.
double coincidence(const JsaGrid& j, ScanMode mode, double tau);
double coincidence(const RidgeState& s, ScanMode mode, double tau);

ScanResult scan(const JsaGrid& j, ScanMode mode, double tau_min,
                double tau_max, int n_points);
ScanResult scan(const RidgeState& s, ScanMode mode, double tau_min,
                double tau_max, int n_points);

// Closed forms for the analytic limits:
//   tb/hom: 1 - max(0, 1 - |tau| Omega_f/(2pi))     (triangular dip)
//   tb/mz : 1 + cos(omega_p tau)
//   db/hom: 0
//   db/mz : 1 + exp(-Omega_p^2 tau^2 / 4) cos(omega_p tau)
double analytic_reference(StateKind kind, ScanMode mode,
                          const CrystalConfig& cfg, const PumpSpectrum& pump,
                          double tau);

// Width/visibility estimators used in reports.
// Dip width: 2x the first |tau| at which P returns within 1% of baseline.
double dip_width(const ScanResult& r);
// Fringe envelope: modulus of the analytic signal of P - 1; returns the
// envelope samples aligned with r.tau.
std::vector<double> fringe_envelope(const ScanResult& r);
// FWHM of the envelope, by linear interpolation of the half-max crossings.
double envelope_fwhm(const ScanResult& r);
double visibility(const ScanResult& r);  // 1 - min(P)/baseline

// Precomputed sum/difference-frequency weight histograms of a JsaGrid;
// makes a full scan O(N) per delay instead of O(N^2).
class ScanEngine {
public:
  explicit ScanEngine(const JsaGrid& j);
  double coincidence(ScanMode mode, double tau) const;
  StateKind kind() const { return kind_; }

private:
  double omega_p_;
  double step_;           // grid spacing, rad/ps
  double total_;          // sum of weights
  std::vector<double> diff_hist_;  // indexed by (a - b) + (n-1)
  std::vector<double> sum_hist_;   // indexed by a + b
  StateKind kind_;
};

}  // namespace epm
