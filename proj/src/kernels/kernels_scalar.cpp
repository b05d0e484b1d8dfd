#include <cmath>
#include <complex>
#include <cstddef>

#include "epm/kernels.hpp"

namespace epm::kernels {
namespace {

double sum_abs2_scalar(const std::complex<double>* v, std::size_t n) {
  // Accumulate over the raw doubles; |z|^2 = re^2 + im^2.
  const double* d = reinterpret_cast<const double*>(v);
  double acc = 0.0;
  for (std::size_t k = 0; k < 2 * n; ++k) acc += d[k] * d[k];
  return acc;
}

void abs2_scalar(const std::complex<double>* v, double* out, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) out[k] = std::norm(v[k]);
}

void scale_scalar(std::complex<double>* v, std::size_t n, double s) {
  for (std::size_t k = 0; k < n; ++k) v[k] *= s;
}

double cos_sum_scalar(const double* w, std::size_t n, double theta0,
                      double dtheta) {
  double acc = 0.0;
  for (std::size_t k = 0; k < n; ++k)
    acc += w[k] * std::cos(theta0 + static_cast<double>(k) * dtheta);
  return acc;
}

void row_col_sums_scalar(const double* w, std::size_t rows, std::size_t cols,
                         double* row_out, double* col_out) {
  for (std::size_t a = 0; a < rows; ++a) {
    const double* row = w + a * cols;
    double acc = 0.0;
    for (std::size_t b = 0; b < cols; ++b) {
      acc += row[b];
      col_out[b] += row[b];
    }
    row_out[a] += acc;
  }
}

}  // namespace

const Kernels& scalar() {
  static const Kernels k{"scalar",      sum_abs2_scalar, abs2_scalar,
                         scale_scalar,  cos_sum_scalar,  row_col_sums_scalar};
  return k;
}

}  // namespace epm::kernels
