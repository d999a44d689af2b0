#pragma once

#include "ccs/types.hpp"

namespace ccs {

struct MusicSpectrum {
  std::vector<double> grid;    // G frequencies in [0, 1)
  std::vector<double> values;  // pseudospectrum, capped at 1e12
  int assumed_sources = 0;     // K
};

/// (1/L) Y_omega Y_omega^H.
CMatrix sample_covariance(const CMatrix& y_omega);

/// MUSIC pseudospectrum P(f) = 1 / ||E_n^H a_omega(f)||^2 on a uniform grid,
/// with E_n spanning the M-K smallest eigenvectors of R. Requires K < M;
/// K = 0 treats everything as noise.
MusicSpectrum music_spectrum(const CMatrix& r, const IndexList& omega, int k, int grid_size = 4096);

struct PeakEstimate {
  std::vector<double> frequencies;  // descending peak height
  bool underdetermined = false;     // fewer than K local maxima found
};

/// K largest local maxima (wrap-around), refined by quadratic interpolation.
PeakEstimate pick_peaks(const MusicSpectrum& spectrum, int k);

}  // namespace ccs
