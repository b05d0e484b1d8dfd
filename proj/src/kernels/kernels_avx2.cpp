// AVX2 variants of the inner-loop kernels.  Compiled with -mavx2 -mfma;
// only referenced after a runtime cpuid check.
#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <cmath>
#include <complex>
#include <cstddef>

#include "epm/kernels.hpp"

namespace epm::kernels {
namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

// cos for 4 lanes.  Half-period range reduction with a split pi, then an
// even Taylor polynomial through r^16 on [-pi/2, pi/2]; absolute error
// below ~1e-12 for |theta| < 1e6.
inline __m256d cos_pd(__m256d theta) {
  const __m256d inv_pi = _mm256_set1_pd(0.31830988618379067154);
  const __m256d pi_hi = _mm256_set1_pd(3.141592653589793116);
  const __m256d pi_lo = _mm256_set1_pd(1.2246467991473531772e-16);

  __m256d q = _mm256_round_pd(_mm256_mul_pd(theta, inv_pi),
                              _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(q, pi_hi, theta);
  r = _mm256_fnmadd_pd(q, pi_lo, r);

  const __m256d r2 = _mm256_mul_pd(r, r);
  __m256d p = _mm256_set1_pd(4.7794773323873852974e-14);
  p = _mm256_fmadd_pd(p, r2, _mm256_set1_pd(-1.1470745597729724714e-11));
  p = _mm256_fmadd_pd(p, r2, _mm256_set1_pd(2.0876756987868098979e-9));
  p = _mm256_fmadd_pd(p, r2, _mm256_set1_pd(-2.7557319223985890653e-7));
  p = _mm256_fmadd_pd(p, r2, _mm256_set1_pd(2.4801587301587301587e-5));
  p = _mm256_fmadd_pd(p, r2, _mm256_set1_pd(-1.3888888888888888889e-3));
  p = _mm256_fmadd_pd(p, r2, _mm256_set1_pd(4.1666666666666666667e-2));
  p = _mm256_fmadd_pd(p, r2, _mm256_set1_pd(-0.5));
  p = _mm256_fmadd_pd(p, r2, _mm256_set1_pd(1.0));

  // sign flip for odd q
  const __m256d magic = _mm256_set1_pd(6755399441055744.0);  // 1.5 * 2^52
  __m256i qi = _mm256_castpd_si256(_mm256_add_pd(q, magic));
  __m256i sign =
      _mm256_slli_epi64(_mm256_and_si256(qi, _mm256_set1_epi64x(1)), 63);
  return _mm256_xor_pd(p, _mm256_castsi256_pd(sign));
}

double sum_abs2_avx2(const std::complex<double>* v, std::size_t n) {
  const double* d = reinterpret_cast<const double*>(v);
  const std::size_t m = 2 * n;
  __m256d acc = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 4 <= m; k += 4) {
    __m256d x = _mm256_loadu_pd(d + k);
    acc = _mm256_fmadd_pd(x, x, acc);
  }
  double tail = 0.0;
  for (; k < m; ++k) tail += d[k] * d[k];
  return hsum(acc) + tail;
}

void abs2_avx2(const std::complex<double>* v, double* out, std::size_t n) {
  const double* d = reinterpret_cast<const double*>(v);
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    __m256d a = _mm256_loadu_pd(d + 2 * k);      // r0 i0 r1 i1
    __m256d b = _mm256_loadu_pd(d + 2 * k + 4);  // r2 i2 r3 i3
    a = _mm256_mul_pd(a, a);
    b = _mm256_mul_pd(b, b);
    __m256d s = _mm256_hadd_pd(a, b);  // |z0| |z2| |z1| |z3|
    s = _mm256_permute4x64_pd(s, _MM_SHUFFLE(3, 1, 2, 0));
    _mm256_storeu_pd(out + k, s);
  }
  for (; k < n; ++k) out[k] = std::norm(v[k]);
}

void scale_avx2(std::complex<double>* v, std::size_t n, double s) {
  double* d = reinterpret_cast<double*>(v);
  const std::size_t m = 2 * n;
  const __m256d sv = _mm256_set1_pd(s);
  std::size_t k = 0;
  for (; k + 4 <= m; k += 4)
    _mm256_storeu_pd(d + k, _mm256_mul_pd(_mm256_loadu_pd(d + k), sv));
  for (; k < m; ++k) d[k] *= s;
}

double cos_sum_avx2(const double* w, std::size_t n, double theta0,
                    double dtheta) {
  const __m256d lane = _mm256_set_pd(3.0, 2.0, 1.0, 0.0);
  const __m256d dt = _mm256_set1_pd(dtheta);
  const __m256d t0 = _mm256_set1_pd(theta0);
  __m256d acc = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    // theta_k rebuilt from the index each block to avoid drift
    __m256d kv = _mm256_add_pd(_mm256_set1_pd(static_cast<double>(k)), lane);
    __m256d theta = _mm256_fmadd_pd(kv, dt, t0);
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(w + k), cos_pd(theta), acc);
  }
  double tail = 0.0;
  for (; k < n; ++k)
    tail += w[k] * std::cos(theta0 + static_cast<double>(k) * dtheta);
  return hsum(acc) + tail;
}

void row_col_sums_avx2(const double* w, std::size_t rows, std::size_t cols,
                       double* row_out, double* col_out) {
  for (std::size_t a = 0; a < rows; ++a) {
    const double* row = w + a * cols;
    __m256d racc = _mm256_setzero_pd();
    std::size_t b = 0;
    for (; b + 4 <= cols; b += 4) {
      __m256d x = _mm256_loadu_pd(row + b);
      racc = _mm256_add_pd(racc, x);
      _mm256_storeu_pd(col_out + b,
                       _mm256_add_pd(_mm256_loadu_pd(col_out + b), x));
    }
    double tail = 0.0;
    for (; b < cols; ++b) {
      tail += row[b];
      col_out[b] += row[b];
    }
    row_out[a] += hsum(racc) + tail;
  }
}

}  // namespace

const Kernels* avx2() {
  static const Kernels k{"avx2",     sum_abs2_avx2, abs2_avx2,
                         scale_avx2, cos_sum_avx2,  row_col_sums_avx2};
  return avx2_supported() ? &k : nullptr;
}

}  // namespace epm::kernels

#else

#include "epm/kernels.hpp"

namespace epm::kernels {
const Kernels* avx2() { return nullptr; }
}  // namespace epm::kernels

#endif
