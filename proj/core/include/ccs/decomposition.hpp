#pragma once

#include "ccs/admm.hpp"
#include "ccs/types.hpp"

namespace ccs {

/// Retrieved atomic decomposition Y = sum_k c_k a(f_k) phi_k.
struct AtomicDecomposition {
  std::vector<double> frequencies;   // r entries in [0, 1), ascending
  std::vector<double> powers;        // Vandermonde weights of T(u)
  CMatrix amplitudes;                // r x L, row k = s_k
  std::vector<double> coefficients;  // c_k = ||s_k||_2
  CMatrix directions;                // r x L, unit-norm rows

  int size() const { return static_cast<int>(frequencies.size()); }
};

struct VandermondeResult {
  std::vector<double> frequencies;  // ascending
  std::vector<double> powers;       // positive, aligned with frequencies
};

/// Vandermonde decomposition T(u) = sum_k p_k a(f_k) a(f_k)^H for a PSD
/// Toeplitz block of numerical rank r < N. Frequencies via rotational
/// invariance of the signal subspace, powers via nonnegative least squares.
VandermondeResult vandermonde_decompose(const CVector& u, double rank_tol = 1e-6);

/// Least-squares amplitudes S minimizing ||Y - sum_k a(f_k) s_k||_F.
CMatrix retrieve_amplitudes(const CMatrix& y, const std::vector<double>& frequencies);

/// Frequencies from T(u), amplitudes refit on the completed Y (or on the
/// observed rows only when fit_observed is given), components with
/// c_k < 1e-6 * max c pruned.
AtomicDecomposition full_decomposition(const SolverSolution& solution,
                                       double rank_tol = 1e-6,
                                       const ObservationProblem* fit_observed = nullptr);

}  // namespace ccs
