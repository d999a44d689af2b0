#include "ccs/music.hpp"

#include "ccs/signal_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ccs {

namespace {
constexpr double kSpectrumCap = 1e12;  // noiseless pseudospectrum diverges
}

CMatrix sample_covariance(const CMatrix& y_omega) {
  if (y_omega.cols() < 1) throw std::invalid_argument("need at least one snapshot");
  return (y_omega * y_omega.adjoint()) / static_cast<double>(y_omega.cols());
}

MusicSpectrum music_spectrum(const CMatrix& r, const IndexList& omega, int k, int grid_size) {
  const int m = static_cast<int>(omega.size());
  if (r.rows() != m || r.cols() != m)
    throw std::invalid_argument("covariance must be M x M with M = |omega|");
  if (k < 0 || k >= m) throw std::domain_error("need 0 <= K < M");
  if (grid_size < 2) throw std::invalid_argument("grid must have at least 2 points");

  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (r + r.adjoint()));
  if (es.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");
  CMatrix noise_basis = es.eigenvectors().leftCols(m - k);  // ascending eigenvalues

  MusicSpectrum out;
  out.assumed_sources = k;
  out.grid.resize(grid_size);
  out.values.resize(grid_size);
  for (int g = 0; g < grid_size; ++g) {
    double f = static_cast<double>(g) / grid_size;
    out.grid[g] = f;
    double denom = (noise_basis.adjoint() * steering_vector_sub(f, omega)).squaredNorm();
    out.values[g] = std::min(1.0 / std::max(denom, 1.0 / kSpectrumCap), kSpectrumCap);
  }
  return out;
}

PeakEstimate pick_peaks(const MusicSpectrum& spectrum, int k) {
  if (k < 1) throw std::invalid_argument("K must be at least 1");
  const int g = static_cast<int>(spectrum.values.size());
  if (g < 2) throw std::invalid_argument("spectrum too short");

  struct Peak {
    int index;
    double value;
  };
  std::vector<Peak> peaks;
  for (int i = 0; i < g; ++i) {
    double prev = spectrum.values[(i + g - 1) % g];
    double next = spectrum.values[(i + 1) % g];
    if (spectrum.values[i] > prev && spectrum.values[i] >= next)
      peaks.push_back({i, spectrum.values[i]});
  }
  std::stable_sort(peaks.begin(), peaks.end(),
                   [](const Peak& a, const Peak& b) { return a.value > b.value; });

  PeakEstimate out;
  out.underdetermined = static_cast<int>(peaks.size()) < k;
  int take = std::min<int>(k, peaks.size());
  for (int i = 0; i < take; ++i) {
    int idx = peaks[i].index;
    double prev = spectrum.values[(idx + g - 1) % g];
    double next = spectrum.values[(idx + 1) % g];
    double denom = prev - 2.0 * spectrum.values[idx] + next;
    double shift = 0.0;
    if (std::fabs(denom) > 1e-300) shift = 0.5 * (prev - next) / denom;
    if (!(shift > -0.5 && shift < 0.5)) shift = 0.0;  // degenerate fit
    double f = (idx + shift) / g;
    f -= std::floor(f);
    out.frequencies.push_back(f);
  }
  return out;
}

}  // namespace ccs
