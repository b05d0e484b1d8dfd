#pragma once

#include <complex>
#include <cstddef>
#include <string>

// Data-parallel inner loops, in scalar reference form and (on x86) an
// AVX2 variant selected at runtime.  Higher-level code always goes
// through active(); tests compare the variants directly.
namespace epm::kernels {

struct Kernels {
  const char* name;

  // sum |v_k|^2
  double (*sum_abs2)(const std::complex<double>* v, std::size_t n);

  // out_k = |v_k|^2
  void (*abs2)(const std::complex<double>* v, double* out, std::size_t n);

  // v_k *= s
  void (*scale)(std::complex<double>* v, std::size_t n, double s);

  // sum_k w_k cos(theta0 + k*dtheta)
  double (*cos_sum)(const double* w, std::size_t n, double theta0,
                    double dtheta);

  // row_out[a] += sum_b w[a*cols+b];  col_out[b] += sum_a w[a*cols+b]
  void (*row_col_sums)(const double* w, std::size_t rows, std::size_t cols,
                       double* row_out, double* col_out);
};

const Kernels& scalar();

// Highest variant supported by this CPU; honors EPM_KERNELS=scalar|avx2
// in the environment (first call wins).
const Kernels& active();

// Force a variant by name; returns false if unavailable.  Test hook.
bool set_active(const std::string& name);

bool avx2_supported();
const Kernels* avx2();  // nullptr when not compiled in or unsupported

}  // namespace epm::kernels
