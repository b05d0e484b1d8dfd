#pragma once

#include <complex>
#include <vector>

#include "epm/jsa.hpp"

namespace epm {

// Singular-value spectrum of the joint amplitude.
struct SchmidtSpectrum {
  std::vector<double> coefficients;  // descending p_n, truncated at rank_cut
  double schmidt_number;             // K = 1/sum p_n^2 (full spectrum)
  double entropy;                    // -sum p_n ln p_n (full spectrum)
  double truncation_mass;            // probability discarded by rank_cut
};

SchmidtSpectrum schmidt_decompose(const JsaGrid& j, int rank_cut = 64);

// Two-photon amplitude in the time domain, from the centered 2-D Fourier
// transform of the JSA.  Times are relative to the pump-pulse peak at the
// crystal output face.
struct TimeDomainAmplitude {
  std::vector<double> times;                 // ps, length n (same for both axes)
  std::vector<std::complex<double>> values;  // n*n row-major, (t_s, t_i)
  double width_diff;  // RMS width along (t_s - t_i)/sqrt(2), ps
  double width_sum;   // RMS width along (t_s + t_i)/sqrt(2), ps
  double t0;          // centroid of (t_s + t_i)/2, ps

  double dt() const { return times.size() > 1 ? times[1] - times[0] : 0.0; }
  double l2_norm_sq() const;  // sum |psi|^2 dt^2
};

TimeDomainAmplitude time_domain(const JsaGrid& j);

}  // namespace epm
