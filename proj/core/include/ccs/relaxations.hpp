#pragma once

#include "ccs/admm.hpp"

namespace ccs {

enum class EpsilonMode {
  relative_to_spectrum,  // eps = epsilon_value * lambda_max(U_prev), floored
  absolute,
};

struct RwtmConfig {
  int max_outer = 3;
  EpsilonMode epsilon_mode = EpsilonMode::relative_to_spectrum;
  double epsilon_value = 1e-2;
  double epsilon_floor = 1e-8;
  SolverConfig inner;
  bool loose_early = true;   // loose inner tolerance before the last outer pass
  double loose_tol = 1e-4;
};

/// ||Y||_A via the trace SDP with full observation: optimal tr(U) / (2 sqrt(N)).
double atomic_norm(const CMatrix& y, const SolverConfig& config = {});

/// Atomic norm minimization: completes Y from its observed rows by minimizing
/// tr(U) subject to the structured PSD constraint and the eta-ball.
SolverSolution anm_complete(const ObservationProblem& problem, const SolverConfig& config = {});

struct RwtmResult {
  SolverSolution solution;          // last outer iteration
  std::vector<double> surrogates;   // ln det(U_j + eps_j I) per outer pass
  std::vector<double> epsilons;     // eps_j actually used
  int outer_iterations = 0;
};

/// Reweighted trace minimization: outer pass j solves the weighted problem
/// with B_j = (U_{j-1} + eps_j I)^{-1}, starting from U_0 = I. The first pass
/// is exactly the convex relaxation.
RwtmResult rwtm(const ObservationProblem& problem, const RwtmConfig& config = {});

/// sum_i ln(lambda_i + epsilon) over eigenvalues, negatives clipped at 0.
double logdet_surrogate(const CMatrix& u, double epsilon);

}  // namespace ccs
