#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <doctest.h>

#include "epm/kernels.hpp"

using namespace epm::kernels;

namespace {

std::mt19937_64 rng(20260823);

std::vector<std::complex<double>> random_complex(std::size_t n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<std::complex<double>> v(n);
  for (auto& z : v) z = {u(rng), u(rng)};
  return v;
}

std::vector<double> random_real(std::size_t n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

}  // namespace

TEST_CASE("scalar kernels agree with naive formulas") {
  const auto& k = scalar();
  auto v = random_complex(37);

  double ref = 0.0;
  for (auto& z : v) ref += std::norm(z);
  CHECK(k.sum_abs2(v.data(), v.size()) == doctest::Approx(ref).epsilon(1e-14));

  std::vector<double> a(v.size());
  k.abs2(v.data(), a.data(), v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    CHECK(a[i] == doctest::Approx(std::norm(v[i])).epsilon(1e-14));

  auto w = random_real(211);
  double cref = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i)
    cref += w[i] * std::cos(0.3 + i * 0.0137);
  CHECK(k.cos_sum(w.data(), w.size(), 0.3, 0.0137) ==
        doctest::Approx(cref).epsilon(1e-13));
}

TEST_CASE("simd variants match the scalar reference") {
  const Kernels* simd = avx2();
  if (!simd) {
    MESSAGE("avx2 not available on this host; dispatch falls back to scalar");
    CHECK(&active() == &scalar());
    return;
  }
  const auto& ref = scalar();

  // ragged sizes hit the vector tails
  for (std::size_t n : {1u, 4u, 7u, 64u, 1001u, 100000u}) {
    auto v = random_complex(n);
    CHECK(simd->sum_abs2(v.data(), n) ==
          doctest::Approx(ref.sum_abs2(v.data(), n)).epsilon(1e-12));

    std::vector<double> a(n), b(n);
    ref.abs2(v.data(), a.data(), n);
    simd->abs2(v.data(), b.data(), n);
    for (std::size_t i = 0; i < n; ++i)
      CHECK(b[i] == doctest::Approx(a[i]).epsilon(1e-14));

    auto vs = v;
    ref.scale(v.data(), n, 0.731);
    simd->scale(vs.data(), n, 0.731);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(vs[i].real() == doctest::Approx(v[i].real()).epsilon(1e-14));
      CHECK(vs[i].imag() == doctest::Approx(v[i].imag()).epsilon(1e-14));
    }
  }

  SUBCASE("cos_sum across phase magnitudes") {
    for (double theta0 : {0.0, -313.7, 2384.4 * 5.0}) {
      for (double dtheta : {0.0, 1e-4, 0.21, 3.9}) {
        auto w = random_real(4097);
        const double a = ref.cos_sum(w.data(), w.size(), theta0, dtheta);
        const double b = simd->cos_sum(w.data(), w.size(), theta0, dtheta);
        CHECK(b == doctest::Approx(a).epsilon(1e-9));
        CHECK(std::abs(b - a) < 1e-7);
      }
    }
  }

  SUBCASE("row/col sums") {
    const std::size_t rows = 33, cols = 67;
    auto w = random_real(rows * cols);
    std::vector<double> r1(rows, 0.1), c1(cols, 0.2), r2(rows, 0.1),
        c2(cols, 0.2);
    ref.row_col_sums(w.data(), rows, cols, r1.data(), c1.data());
    simd->row_col_sums(w.data(), rows, cols, r2.data(), c2.data());
    for (std::size_t i = 0; i < rows; ++i)
      CHECK(r2[i] == doctest::Approx(r1[i]).epsilon(1e-12));
    for (std::size_t i = 0; i < cols; ++i)
      CHECK(c2[i] == doctest::Approx(c1[i]).epsilon(1e-12));
  }
}

TEST_CASE("kernel selection") {
  CHECK(set_active("scalar"));
  CHECK(std::string(active().name) == "scalar");
  if (avx2_supported()) {
    CHECK(set_active("avx2"));
    CHECK(std::string(active().name) == "avx2");
  } else {
    CHECK_FALSE(set_active("avx2"));
  }
  CHECK_FALSE(set_active("avx512-unicorn"));
}
