#pragma once

#include "ccs/types.hpp"

#include <random>

namespace ccs {

/// Wrap-around distance between two normalized frequencies on [0, 1).
double torus_distance(double a, double b);

/// Ground-truth parametric signal: K sinusoids shared by L snapshots.
struct FrequencySparseSignal {
  int num_samples = 0;               // N
  int num_snapshots = 0;             // L
  std::vector<double> frequencies;   // K entries in [0, 1), pairwise distinct
  CMatrix amplitudes;                // K x L; row k is the amplitude vector of component k

  int num_components() const { return static_cast<int>(frequencies.size()); }

  /// Row norms ||s_k||_2; strictly positive for a valid signal.
  std::vector<double> coefficients() const;

  /// Unit-norm amplitude directions, row k = s_k / ||s_k||.
  CMatrix directions() const;

  /// Throws std::invalid_argument when any invariant is violated.
  void validate() const;
};

/// Partial observation of a signal on the row index set omega (1-based).
struct ObservationProblem {
  int num_samples = 0;    // N
  int num_snapshots = 0;  // L
  IndexList omega;        // M strictly increasing indices in {1, ..., N}
  CMatrix observed;       // M x L
  double noise_bound = 0.0;

  int sample_count() const { return static_cast<int>(omega.size()); }
  void validate() const;
};

/// a(f) = [1, e^{i2pi f}, ..., e^{i2pi(N-1)f}]^T. Norm is sqrt(N).
CVector steering_vector(double f, int n);

/// Steering vector restricted to the rows listed in omega (1-based).
CVector steering_vector_sub(double f, const IndexList& omega);

/// Y = sum_k a(f_k) s_k, the N x L noise-free signal matrix.
CMatrix synthesize(const FrequencySparseSignal& signal);

/// Rows of y indexed by omega (1-based).
CMatrix sample(const CMatrix& y, const IndexList& omega);

struct NoisyObservation {
  CMatrix noisy;
  double eta = 0.0;  // realized Frobenius norm of the injected noise
};

/// Adds i.i.d. circular complex Gaussian noise at the given SNR, defined as
/// mean per-sample signal power over per-sample noise variance. An infinite
/// snr_db is the noiseless flag and returns the input with eta = 0.
NoisyObservation add_noise(const CMatrix& clean, double snr_db, std::mt19937_64& rng);

struct RandomProblem {
  FrequencySparseSignal signal;
  ObservationProblem problem;
};

/// Random instance: omega uniform M-subset of {1,...,N}; frequencies drawn by
/// rejection with pairwise torus separation >= min_sep; amplitudes
/// (0.5 + w^2) e^{i theta} with w standard normal and theta uniform.
RandomProblem random_problem(int n, int m, int k, int l, double min_sep, std::mt19937_64& rng);

/// ||estimate - truth||_F / ||truth||_F.
double relative_error(const CMatrix& estimate, const CMatrix& truth);

}  // namespace ccs
