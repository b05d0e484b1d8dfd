#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include <doctest.h>

#include "epm/analysis.hpp"
#include "epm/errors.hpp"
#include "epm/phasematch.hpp"

using namespace epm;
using std::numbers::pi;

namespace {

CrystalConfig poled_preset(double length_um) {
  CrystalConfig cfg = preset("ppktp-790", length_um);
  return with_grating(cfg, solve_grating_period(cfg));
}

const PumpSpectrum kPump{preset("ppktp-790").pump_center, 2 * pi * 3.0};

// hand-built normalized grid, bypassing the physics
template <typename F>
JsaGrid toy_grid(int n, double span, F fill) {
  JsaGrid j;
  j.grid = {n, span};
  j.values.resize(static_cast<std::size_t>(n) * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      j.values[static_cast<std::size_t>(a) * n + b] =
          fill(j.grid.nu(a), j.grid.nu(b));
  double norm = 0.0;
  for (const auto& v : j.values) norm += std::norm(v);
  norm *= j.grid.spacing() * j.grid.spacing();
  for (auto& v : j.values) v /= std::sqrt(norm);
  return j;
}

}  // namespace

TEST_CASE("schmidt_decompose") {
  SUBCASE("separable state has K = 1") {
    const JsaGrid j = toy_grid(64, 10.0, [](double a, double b) {
      return std::complex<double>(
          std::exp(-a * a / 8.0) * std::exp(-(b - 1.0) * (b - 1.0) / 2.0),
          0.0);
    });
    const SchmidtSpectrum s = schmidt_decompose(j);
    CHECK(s.schmidt_number == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(s.entropy == doctest::Approx(0.0).epsilon(1e-8));
    CHECK(s.coefficients[0] == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(s.truncation_mass < 1e-10);
  }
  SUBCASE("two equal cross terms give K = 2, entropy ln 2") {
    JsaGrid j;
    j.grid = {16, 1.0};
    j.values.assign(16 * 16, {0.0, 0.0});
    const double d = j.grid.spacing();
    j.values[0 * 16 + 1] = {1.0 / (std::numbers::sqrt2 * d), 0.0};
    j.values[1 * 16 + 0] = {1.0 / (std::numbers::sqrt2 * d), 0.0};
    const SchmidtSpectrum s = schmidt_decompose(j, 4);
    CHECK(s.coefficients[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(s.coefficients[1] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(s.schmidt_number == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(s.entropy == doctest::Approx(std::numbers::ln2).epsilon(1e-12));
  }
  SUBCASE("K is invariant under transposition, complex path included") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    JsaGrid j = toy_grid(16, 1.0, [&](double, double) {
      return std::complex<double>(u(rng), u(rng));
    });
    JsaGrid jt = j;
    for (int a = 0; a < 16; ++a)
      for (int b = 0; b < 16; ++b)
        jt.values[static_cast<std::size_t>(a) * 16 + b] =
            j.values[static_cast<std::size_t>(b) * 16 + a];
    CHECK(schmidt_decompose(j, 16).schmidt_number ==
          doctest::Approx(schmidt_decompose(jt, 16).schmidt_number)
              .epsilon(1e-10));
  }
  SUBCASE("entanglement grows with crystal length") {
    const FrequencyGrid grid{512, 30.0};
    double prev = 0.0;
    for (double L : {5e3, 1e4, 2e4}) {
      const double K =
          schmidt_decompose(build_jsa(poled_preset(L), kPump, grid))
              .schmidt_number;
      CHECK(K > prev);
      prev = K;
    }
    CHECK(prev > 5.0);
  }
  SUBCASE("limit states are strongly multimode") {
    const CrystalConfig cfg = poled_preset(2e4);
    const FrequencyGrid grid{512, 37.7};
    const double k_tb =
        schmidt_decompose(
            build_jsa(cfg, kPump, grid, {LimitKind::cw_twin_beam, true}))
            .schmidt_number;
    CHECK(k_tb > 8.0);
    const double k_db =
        schmidt_decompose(
            build_jsa(cfg, kPump, grid, {LimitKind::long_crystal_db, true}))
            .schmidt_number;
    CHECK(k_db > 50.0);
  }
  SUBCASE("truncation mass accounts for the discarded tail") {
    const JsaGrid j = build_jsa(poled_preset(2e4), kPump,
                                FrequencyGrid{512, 30.0});
    const SchmidtSpectrum full = schmidt_decompose(j, 512);
    const SchmidtSpectrum cut = schmidt_decompose(j, 4);
    double kept = 0.0;
    for (int i = 0; i < 4; ++i) kept += full.coefficients[i];
    CHECK(cut.truncation_mass == doctest::Approx(1.0 - kept).epsilon(1e-9));
    CHECK(full.truncation_mass < 1e-9);
    CHECK(cut.schmidt_number ==
          doctest::Approx(full.schmidt_number).epsilon(1e-12));
  }
  SUBCASE("contract violations") {
    JsaGrid j = toy_grid(16, 1.0,
                         [](double, double) { return std::complex<double>(1.0, 0.0); });
    CHECK_THROWS_AS(schmidt_decompose(j, 0), physics_error);
    CHECK_THROWS_AS(schmidt_decompose(j, 17), physics_error);
    for (auto& v : j.values) v *= 2.0;  // break normalization
    CHECK_THROWS_AS(schmidt_decompose(j, 16), physics_error);
  }
}

TEST_CASE("time_domain") {
  SUBCASE("Parseval: unit norm is preserved") {
    const JsaGrid j = build_jsa(poled_preset(5000.0), kPump,
                                FrequencyGrid{256, 30.0});
    const TimeDomainAmplitude t = time_domain(j);
    CHECK(t.l2_norm_sq() == doctest::Approx(1.0).epsilon(1e-9));
  }
  SUBCASE("separable Gaussian transforms to the known widths") {
    // exp(-nu^2/2) per axis -> |psi|^2 ~ exp(-t^2) per axis,
    // RMS width 1/sqrt(2) along every direction
    const JsaGrid j = toy_grid(128, 8.0, [](double a, double b) {
      return std::complex<double>(std::exp(-(a * a + b * b) / 2.0), 0.0);
    });
    const TimeDomainAmplitude t = time_domain(j);
    CHECK(t.width_diff == doctest::Approx(1 / std::numbers::sqrt2).epsilon(1e-3));
    CHECK(t.width_sum == doctest::Approx(1 / std::numbers::sqrt2).epsilon(1e-3));
    CHECK(std::abs(t.t0) < 1e-9);
    CHECK(t.l2_norm_sq() == doctest::Approx(1.0).epsilon(1e-9));
  }
  SUBCASE("rotated Gaussian: each time width is dual to the opposite axis") {
    // A ~ exp(-u^2/(2 su^2)) exp(-w^2/(2 sw^2)) in the rotated frequency
    // frame gives RMS time widths 1/(su sqrt 2) and 1/(sw sqrt 2)
    const double su = 0.4, sw = 6.0;
    const JsaGrid j = toy_grid(256, 20.0, [&](double a, double b) {
      const double u = (a + b) / std::numbers::sqrt2;
      const double w = (a - b) / std::numbers::sqrt2;
      return std::complex<double>(
          std::exp(-u * u / (2 * su * su) - w * w / (2 * sw * sw)), 0.0);
    });
    const TimeDomainAmplitude t = time_domain(j);
    CHECK(t.width_sum ==
          doctest::Approx(1 / (su * std::numbers::sqrt2)).epsilon(5e-3));
    CHECK(t.width_diff ==
          doctest::Approx(1 / (sw * std::numbers::sqrt2)).epsilon(5e-3));
    CHECK(t.width_sum > 5.0 * t.width_diff);  // anticorrelated frequencies
  }
  SUBCASE("frequency correlation maps to tight time sums") {
    // finite-length extended-PM state: pump sets the sum width, the
    // phase-matching bandwidth the (much larger) difference width
    const JsaGrid j = build_jsa(poled_preset(2e4), kPump,
                                FrequencyGrid{512, 30.0});
    const TimeDomainAmplitude t = time_domain(j);
    CHECK(t.width_diff > 5.0 * t.width_sum);
    CHECK(t.width_sum == doctest::Approx(1.0 / kPump.bandwidth).epsilon(0.1));
  }
  SUBCASE("grid of the wrong norm is rejected") {
    JsaGrid j = toy_grid(16, 1.0, [](double a, double b) {
      return std::complex<double>(std::exp(-(a * a + b * b)), 0.0);
    });
    for (auto& v : j.values) v *= 1.5;
    CHECK_THROWS_AS(time_domain(j), physics_error);
  }
}
