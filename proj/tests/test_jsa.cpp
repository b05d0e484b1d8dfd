#include <cmath>
#include <complex>
#include <numbers>

#include <doctest.h>

#include "epm/errors.hpp"
#include "epm/jsa.hpp"
#include "epm/phasematch.hpp"

using namespace epm;
using std::numbers::pi;

namespace {

CrystalConfig poled_preset(double length_um) {
  CrystalConfig cfg = preset("ppktp-790", length_um);
  return with_grating(cfg, solve_grating_period(cfg));
}

// first-order design only: no curvature, exactly exchange-symmetric JSA
CrystalConfig linearized_preset(double length_um) {
  CrystalConfig cfg = poled_preset(length_um);
  cfg.pump.k2 = cfg.signal.k2 = cfg.idler.k2 = 0.0;
  return cfg;
}

const PumpSpectrum kPump{preset("ppktp-790").pump_center, 2 * pi * 3.0};

}  // namespace

TEST_CASE("pump_amplitude Gaussian convention") {
  PumpSpectrum p{2384.4, 18.85};
  CHECK(pump_amplitude(p, p.omega_p).real() == doctest::Approx(1.0));
  const double amp =
      pump_amplitude(p, p.omega_p + p.bandwidth / 2).real();
  CHECK(amp == doctest::Approx(std::exp(-0.5)).epsilon(1e-12));
  CHECK(amp * amp == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
  CHECK_THROWS_AS(pump_amplitude(p, -1.0), physics_error);
}

TEST_CASE("alpha") {
  const CrystalConfig cfg = poled_preset(2e4);
  const double w0 = cfg.pump_center / 2;
  SUBCASE("pump peak at degeneracy") {
    const double pre = w0 / (1.80 * 1.80);
    CHECK(alpha(cfg, kPump, w0, w0).real() ==
          doctest::Approx(pre).epsilon(1e-9));
  }
  SUBCASE("sum-detuned by half the bandwidth falls by e^-1/2") {
    const double r = std::abs(alpha(cfg, kPump, w0 + kPump.bandwidth / 4,
                                    w0 + kPump.bandwidth / 4, true)) /
                     std::abs(alpha(cfg, kPump, w0, w0, true));
    CHECK(r == doctest::Approx(std::exp(-0.5)).epsilon(1e-12));
  }
}

TEST_CASE("phi_L") {
  const CrystalConfig cfg = poled_preset(2e4);
  const double w0 = cfg.pump_center / 2;
  SUBCASE("sinc limit at the phase-matched point") {
    CHECK(phi_L(cfg, w0, w0) == doctest::Approx(cfg.length).epsilon(1e-10));
  }
  SUBCASE("first zero along the antidiagonal near 2pi/(gamma L)") {
    // linearized: delta_k = 2 gamma nu on the antidiagonal, zero at
    // |nu_s - nu_i| = 2 nu = 2pi/(gamma L)
    const CrystalConfig lin = linearized_preset(2e4);
    const double nu = pi / (gamma(lin) * lin.length);
    CHECK(2 * nu == doctest::Approx(2.244).epsilon(1e-3));
    CHECK(std::abs(phi_L(lin, w0 + nu, w0 - nu)) < 1e-6 * lin.length);
  }
}

TEST_CASE("build_jsa core invariants") {
  const CrystalConfig cfg = poled_preset(5000.0);
  const FrequencyGrid grid{256, 30.0};
  const JsaGrid j = build_jsa(cfg, kPump, grid);

  SUBCASE("unit L2 norm") {
    CHECK(std::abs(j.l2_norm_sq() - 1.0) < 1e-9);
  }
  SUBCASE("pointwise factorization into alpha * phi_L") {
    // values = alpha*phi_L / sqrt(raw norm); the ratio must be one
    // global constant
    const double w0 = cfg.pump_center / 2;
    double ref_ratio = 0.0;
    double vmax = 0.0;
    for (const auto& v : j.values) vmax = std::max(vmax, std::abs(v));
    for (int a = 0; a < grid.n; a += 7)
      for (int b = 0; b < grid.n; b += 7) {
        const std::complex<double> v = j.at(a, b);
        if (std::abs(v) < 1e-6 * vmax) continue;
        const double prod =
            (alpha(cfg, kPump, w0 + grid.nu(a), w0 + grid.nu(b)) *
             phi_L(cfg, w0 + grid.nu(a), w0 + grid.nu(b)))
                .real();
        const double ratio = v.real() / prod;
        if (ref_ratio == 0.0) ref_ratio = ratio;
        CHECK(ratio == doctest::Approx(ref_ratio).epsilon(1e-12));
      }
  }
  SUBCASE("exchange of the beams transposes the grid exactly") {
    CrystalConfig swapped = cfg;
    std::swap(swapped.signal, swapped.idler);
    const JsaGrid jt = build_jsa(swapped, kPump, grid);
    for (int a = 0; a < grid.n; a += 3)
      for (int b = 0; b < grid.n; b += 3)
        CHECK(jt.at(b, a).real() ==
              doctest::Approx(j.at(a, b).real()).epsilon(1e-12));
  }
}

TEST_CASE("marginal spectra") {
  SUBCASE("normalization: each marginal sums to one") {
    const JsaGrid j =
        build_jsa(poled_preset(5000.0), kPump, FrequencyGrid{256, 30.0});
    const auto [sig, idl] = marginal_spectra(j);
    double ssum = 0, isum = 0;
    for (int a = 0; a < 256; ++a) {
      ssum += sig[a] * j.grid.spacing();
      isum += idl[a] * j.grid.spacing();
    }
    CHECK(ssum == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(isum == doctest::Approx(1.0).epsilon(1e-9));
  }
  SUBCASE("signal and idler spectra identical under extended PM") {
    // first-order design: the phase-matching function is even in
    // delta_k, which is antisymmetric under exchange
    const JsaGrid j = build_jsa(linearized_preset(5000.0), kPump,
                                FrequencyGrid{256, 30.0},
                                {LimitKind::none, true});
    const auto [sig, idl] = marginal_spectra(j);
    double linf = 0.0;
    for (int a = 0; a < 256; ++a)
      linf = std::max(linf, std::abs(sig[a] - idl[a]));
    CHECK(linf < 1e-6);
  }
  SUBCASE("second-order curvature breaks the symmetry only mildly") {
    const JsaGrid j =
        build_jsa(poled_preset(5000.0), kPump, FrequencyGrid{256, 30.0});
    const auto [sig, idl] = marginal_spectra(j);
    double linf = 0.0, peak = 0.0;
    for (int a = 0; a < 256; ++a) {
      linf = std::max(linf, std::abs(sig[a] - idl[a]));
      peak = std::max(peak, sig[a]);
    }
    CHECK(linf < 0.05 * peak);
  }
}

TEST_CASE("analytic limit grids") {
  const CrystalConfig cfg = poled_preset(2e4);
  const FrequencyGrid grid{512, 37.7};
  SUBCASE("cw pump: support only on the antidiagonal") {
    const JsaGrid j =
        build_jsa(cfg, kPump, grid, {LimitKind::cw_twin_beam, true});
    for (int a = 0; a < grid.n; a += 11)
      for (int b = 0; b < grid.n; b += 11)
        if (b != grid.n - 1 - a) CHECK(std::abs(j.at(a, b)) == 0.0);
    CHECK(std::abs(j.l2_norm_sq() - 1.0) < 1e-9);
  }
  SUBCASE("infinite crystal: support only on the diagonal") {
    const JsaGrid j =
        build_jsa(cfg, kPump, grid, {LimitKind::long_crystal_db, true});
    for (int a = 0; a < grid.n; a += 11)
      for (int b = 0; b < grid.n; b += 11)
        if (b != a) CHECK(std::abs(j.at(a, b)) == 0.0);
  }
  SUBCASE("cw marginal reproduces the closed-form fluorescence spectrum") {
    const JsaGrid j =
        build_jsa(cfg, kPump, grid, {LimitKind::cw_twin_beam, true});
    const auto [sig, idl] = marginal_spectra(j);
    std::vector<double> oracle(grid.n);
    double osum = 0, msum = 0;
    for (int a = 0; a < grid.n; ++a) {
      oracle[a] = tb_spectral_density(cfg, grid.nu(a));
      osum += oracle[a];
      msum += sig[a];
    }
    double rms = 0, peak = 0;
    for (int a = 0; a < grid.n; ++a) {
      const double d = sig[a] / msum - oracle[a] / osum;
      rms += d * d;
      peak = std::max(peak, oracle[a] / osum);
    }
    rms = std::sqrt(rms / grid.n);
    CHECK(rms < 0.01 * peak);
  }
}

TEST_CASE("tb_spectral_density closed form") {
  const CrystalConfig cfg = poled_preset(2e4);
  const double wf = omega_f(cfg);
  CHECK(tb_spectral_density(cfg, 0.0) ==
        doctest::Approx(cfg.length * cfg.length).epsilon(1e-12));
  CHECK(std::abs(tb_spectral_density(cfg, wf / 2)) <
        1e-15 * cfg.length * cfg.length);
  // half-height scale sits inside the first lobe
  CHECK(tb_spectral_density(cfg, wf / 8) >
        0.5 * tb_spectral_density(cfg, 0.0));
}

TEST_CASE("grid validation and resolution errors") {
  const CrystalConfig cfg = poled_preset(2e4);
  CHECK_THROWS_AS(validate(FrequencyGrid{15, 1.0}), physics_error);
  CHECK_THROWS_AS(validate(FrequencyGrid{48, 1.0}), physics_error);  // not 2^k
  CHECK_THROWS_AS(validate(FrequencyGrid{64, -1.0}), physics_error);
  SUBCASE("under-resolved grid names the violated width") {
    try {
      build_jsa(cfg, kPump, FrequencyGrid{64, 37.7});
      FAIL("expected under-resolved grid error");
    } catch (const physics_error& e) {
      CHECK(std::string(e.what()).find("phase-matching width") !=
            std::string::npos);
    }
  }
  SUBCASE("pump-limited case names the pump width") {
    PumpSpectrum narrow{cfg.pump_center, 0.05};
    try {
      build_jsa(cfg, narrow, FrequencyGrid{64, 10.0});
      FAIL("expected under-resolved grid error");
    } catch (const physics_error& e) {
      CHECK(std::string(e.what()).find("pump bandwidth") != std::string::npos);
    }
  }
}

TEST_CASE("default_grid covers both widths") {
  const CrystalConfig cfg = poled_preset(2e4);
  const FrequencyGrid g = default_grid(cfg, kPump);
  CHECK(g.n == 512);
  CHECK(g.span == doctest::Approx(2 * kPump.bandwidth));
  CHECK_NOTHROW(build_jsa(cfg, kPump, g));
  // short crystal: the sinc term dominates the span choice
  const CrystalConfig shorty = poled_preset(500.0);
  const FrequencyGrid gs = default_grid(shorty, kPump);
  CHECK(gs.span ==
        doctest::Approx(8 * pi / (gamma(shorty) * shorty.length)));
}
