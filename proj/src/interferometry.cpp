#include "epm/interferometry.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <numbers>

#include <fftw3.h>

#include "epm/errors.hpp"
#include "epm/kernels.hpp"

namespace epm {

std::string to_string(ScanMode m) { return m == ScanMode::hom ? "hom" : "mz"; }

std::string to_string(StateKind k) {
  switch (k) {
    case StateKind::tb: return "tb";
    case StateKind::db: return "db";
    case StateKind::db_l: return "db_l";
    default: return "generic";
  }
}

RidgeState make_tb_limit_state(const CrystalConfig& cfg, int n_points,
                               int lobes) {
  if (n_points < 3 || lobes < 1) throw physics_error("bad ridge sampling");
  const double wf = omega_f(cfg);
  // endpoints at sinc zeros keep the trapezoid rule clean
  const double span = lobes * wf / 2.0;
  RidgeState s;
  s.kind = StateKind::tb;
  s.omega_p = cfg.pump_center;
  s.nu_min = -span;
  s.nu_step = 2.0 * span / (n_points - 1);
  s.weight.resize(n_points);
  double total = 0.0;
  for (int k = 0; k < n_points; ++k) {
    const double nu = s.nu_min + k * s.nu_step;
    s.weight[k] = tb_spectral_density(cfg, nu) * s.nu_step;
    total += s.weight[k];
  }
  for (auto& w : s.weight) w /= total;
  return s;
}

RidgeState make_db_limit_state(const PumpSpectrum& pump, int n_points,
                               double n_sigma) {
  if (n_points < 3 || !(n_sigma > 0.0)) throw physics_error("bad ridge sampling");
  // |phi(nu)|^2 = exp(-4 nu^2 / Wp^2), std sigma = Wp/(2 sqrt(2))
  const double sigma = pump.bandwidth / (2.0 * std::numbers::sqrt2);
  const double span = n_sigma * sigma;
  RidgeState s;
  s.kind = StateKind::db;
  s.omega_p = pump.omega_p;
  s.nu_min = -span;
  s.nu_step = 2.0 * span / (n_points - 1);
  s.weight.resize(n_points);
  double total = 0.0;
  for (int k = 0; k < n_points; ++k) {
    const double nu = s.nu_min + k * s.nu_step;
    s.weight[k] = std::exp(-4.0 * nu * nu /
                           (pump.bandwidth * pump.bandwidth)) *
                  s.nu_step;
    total += s.weight[k];
  }
  for (auto& w : s.weight) w /= total;
  return s;
}

double coincidence(const RidgeState& s, ScanMode mode, double tau) {
  const auto& k = kernels::active();
  const std::size_t n = s.weight.size();
  if (s.kind == StateKind::tb) {
    if (mode == ScanMode::mz) return 1.0 + std::cos(s.omega_p * tau);
    // photons at (w0 - nu, w0 + nu): w1 - w2 = -2 nu
    const double c = k.cos_sum(s.weight.data(), n, 2.0 * s.nu_min * tau,
                               2.0 * s.nu_step * tau);
    return 1.0 - c;
  }
  // db: photons at (w0 + nu, w0 + nu)
  if (mode == ScanMode::hom) return 0.0;  // w1 - w2 = 0 for every component
  const double c = k.cos_sum(s.weight.data(), n,
                             (s.omega_p + 2.0 * s.nu_min) * tau,
                             2.0 * s.nu_step * tau);
  return 1.0 + c;
}

ScanEngine::ScanEngine(const JsaGrid& j) {
  const int n = j.grid.n;
  omega_p_ = j.cfg.pump_center;
  step_ = j.grid.spacing();

  std::vector<double> w(static_cast<std::size_t>(n) * n);
  kernels::active().abs2(j.values.data(), w.data(), w.size());

  // Eq.-of-motion contract: the spectral weight must be exchange
  // symmetric.  Small asymmetry from second-order dispersion is allowed.
  double asym = 0.0, ref = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      const double d = w[static_cast<std::size_t>(a) * n + b] -
                       w[static_cast<std::size_t>(b) * n + a];
      asym += d * d;
      ref += w[static_cast<std::size_t>(a) * n + b] *
             w[static_cast<std::size_t>(a) * n + b];
    }
  if (ref > 0.0 && std::sqrt(asym / ref) > 0.1)
    throw physics_error(
        "coincidence contract violated: spectral weight is not symmetric "
        "in (omega_1, omega_2)");

  diff_hist_.assign(2 * n - 1, 0.0);
  sum_hist_.assign(2 * n - 1, 0.0);
  total_ = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const double v = w[static_cast<std::size_t>(a) * n + b];
      diff_hist_[a - b + n - 1] += v;
      sum_hist_[a + b] += v;
      total_ += v;
    }
  if (!(total_ > 0.0)) throw physics_error("empty joint spectral amplitude");

  switch (j.opts.limit) {
    case LimitKind::cw_twin_beam: kind_ = StateKind::tb; break;
    case LimitKind::long_crystal_db: kind_ = StateKind::db; break;
    default: {
      const auto pm = check_extended_pm(j.cfg);
      kind_ = pm.satisfied ? StateKind::db_l : StateKind::generic;
    }
  }
}

double ScanEngine::coincidence(ScanMode mode, double tau) const {
  const auto& k = kernels::active();
  const std::size_t m = diff_hist_.size();
  const int n = static_cast<int>((m + 1) / 2);
  if (mode == ScanMode::hom) {
    const double c = k.cos_sum(diff_hist_.data(), m,
                               -(n - 1) * step_ * tau, step_ * tau);
    return 1.0 - c / total_;
  }
  // w1 + w2 = omega_p + nu_a + nu_b, nu_a + nu_b = -2 span + (a+b) step
  const double theta0 = (omega_p_ - (n - 1) * step_) * tau;
  const double c = k.cos_sum(sum_hist_.data(), m, theta0, step_ * tau);
  return 1.0 + c / total_;
}

double coincidence(const JsaGrid& j, ScanMode mode, double tau) {
  return ScanEngine(j).coincidence(mode, tau);
}

namespace {

ScanResult scan_impl(StateKind kind, ScanMode mode, double tau_min,
                     double tau_max, int n_points,
                     const std::function<double(double)>& p_of_tau) {
  if (n_points < 2 || !(tau_min < tau_max))
    throw physics_error("scan needs n_points >= 2 and tau_min < tau_max");
  ScanResult r;
  r.mode = mode;
  r.kind = kind;
  r.tau.resize(n_points);
  r.p.resize(n_points);
  const double dt = (tau_max - tau_min) / (n_points - 1);
  for (int i = 0; i < n_points; ++i) {
    r.tau[i] = tau_min + i * dt;
    r.p[i] = p_of_tau(r.tau[i]);
  }
  return r;
}

}  // namespace

ScanResult scan(const JsaGrid& j, ScanMode mode, double tau_min,
                double tau_max, int n_points) {
  ScanEngine engine(j);
  return scan_impl(engine.kind(), mode, tau_min, tau_max, n_points,
                   [&](double t) { return engine.coincidence(mode, t); });
}

ScanResult scan(const RidgeState& s, ScanMode mode, double tau_min,
                double tau_max, int n_points) {
  return scan_impl(s.kind, mode, tau_min, tau_max, n_points,
                   [&](double t) { return coincidence(s, mode, t); });
}

double analytic_reference(StateKind kind, ScanMode mode,
                          const CrystalConfig& cfg, const PumpSpectrum& pump,
                          double tau) {
  using std::numbers::pi;
  if (kind == StateKind::tb) {
    if (mode == ScanMode::hom) {
      const double wf = omega_f(cfg);
      return 1.0 - std::max(0.0, 1.0 - std::abs(tau) * wf / (2.0 * pi));
    }
    return 1.0 + std::cos(cfg.pump_center * tau);
  }
  if (kind == StateKind::db) {
    if (mode == ScanMode::hom) return 0.0;
    const double w = pump.bandwidth;
    return 1.0 + std::exp(-w * w * tau * tau / 4.0) *
                     std::cos(pump.omega_p * tau);
  }
  throw physics_error("analytic_reference: no closed form for state kind " +
                      to_string(kind));
}

double dip_width(const ScanResult& r) {
  // first |tau| (outward from zero delay) where P is back within 1% of
  // the unit baseline
  const int n = static_cast<int>(r.tau.size());
  int i0 = 0;
  for (int i = 1; i < n; ++i)
    if (std::abs(r.tau[i]) < std::abs(r.tau[i0])) i0 = i;
  for (int i = i0; i < n; ++i)
    if (std::abs(r.p[i] - 1.0) <= 0.01) return 2.0 * std::abs(r.tau[i]);
  return std::numeric_limits<double>::quiet_NaN();
}

std::vector<double> fringe_envelope(const ScanResult& r) {
  const int n = static_cast<int>(r.p.size());
  std::vector<std::complex<double>> buf(n);
  for (int i = 0; i < n; ++i) buf[i] = r.p[i] - 1.0;

  fftw_plan fwd = fftw_plan_dft_1d(
      n, reinterpret_cast<fftw_complex*>(buf.data()),
      reinterpret_cast<fftw_complex*>(buf.data()), FFTW_FORWARD, FFTW_ESTIMATE);
  fftw_execute(fwd);
  fftw_destroy_plan(fwd);

  // analytic signal: keep DC (and Nyquist), double positives, drop negatives
  for (int i = 1; i < (n + 1) / 2; ++i) buf[i] *= 2.0;
  for (int i = n / 2 + 1; i < n; ++i) buf[i] = 0.0;

  fftw_plan bwd = fftw_plan_dft_1d(
      n, reinterpret_cast<fftw_complex*>(buf.data()),
      reinterpret_cast<fftw_complex*>(buf.data()), FFTW_BACKWARD, FFTW_ESTIMATE);
  fftw_execute(bwd);
  fftw_destroy_plan(bwd);

  std::vector<double> env(n);
  for (int i = 0; i < n; ++i) env[i] = std::abs(buf[i]) / n;
  return env;
}

double envelope_fwhm(const ScanResult& r) {
  const std::vector<double> env = fringe_envelope(r);
  const int n = static_cast<int>(env.size());
  int peak = 0;
  for (int i = 1; i < n; ++i)
    if (env[i] > env[peak]) peak = i;
  const double half = 0.5 * env[peak];

  auto cross = [&](int dir) -> double {
    for (int i = peak; i + dir >= 0 && i + dir < n; i += dir) {
      if (env[i + dir] < half) {
        const double f = (env[i] - half) / (env[i] - env[i + dir]);
        return r.tau[i] + f * (r.tau[i + dir] - r.tau[i]);
      }
    }
    return std::numeric_limits<double>::quiet_NaN();
  };
  return cross(+1) - cross(-1);
}

double visibility(const ScanResult& r) {
  return 1.0 - *std::min_element(r.p.begin(), r.p.end());
}

}  // namespace epm
