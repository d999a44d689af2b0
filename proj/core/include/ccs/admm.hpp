#pragma once

#include "ccs/signal_model.hpp"
#include "ccs/types.hpp"

namespace ccs {

/// Variable blocks of the structured SDP
///   U = [[W, Y^H], [Y, T(u)]]  with U >= 0,
/// where T(u) is Hermitian Toeplitz with first row u^T.
struct SdpBlockMatrix {
  CMatrix W;  // L x L
  CMatrix Y;  // N x L
  CVector u;  // N, first entry real
  CMatrix U;  // (N+L) x (N+L), Hermitian PSD at convergence
};

/// Hermitian PSD weight B = [[B1, B2^H], [B2, B3]] partitioned as U.
struct WeightMatrix {
  CMatrix B1;  // L x L Hermitian
  CMatrix B2;  // N x L
  CMatrix B3;  // N x N Hermitian

  static WeightMatrix identity(int n, int l);
  CMatrix assembled() const;
};

struct SolverConfig {
  double rho = 1.0;        // initial ADMM penalty
  int max_iters = 50000;
  double eps_abs = 1e-5;
  double eps_rel = 1e-5;
  bool adaptive_rho = true;
  double rho_scale = 2.0;        // multiplicative rho step
  double residual_ratio = 10.0;  // imbalance that triggers a rho step
  double over_relax = 1.6;       // 1.0 disables over-relaxation
};

struct SolverSolution {
  SdpBlockMatrix blocks;
  double objective = 0.0;  // tr(B * [[W, Y^H], [Y, T(u)]]) at exit
  int iterations = 0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  bool converged = false;
  CMatrix dual;  // scaled dual at exit; usable as a warm start
};

/// Hermitian Toeplitz matrix with first row u^T; requires Im(u_1) = 0.
CMatrix toeplitz(const CVector& u);

/// Adjoint pairing of u -> T(u): g_1 = Re tr(M), and for d >= 2 g_d is the
/// superdiagonal-(d-1) sum of M plus the conjugated subdiagonal sum, so that
/// Re tr(M^H T(u)) = Re <u, g> for every valid u.
CVector toeplitz_adjoint(const CMatrix& m);

/// Frobenius-nearest PSD matrix: symmetrize, eigendecompose, clip negatives.
CMatrix psd_project(const CMatrix& h);

/// Projection of y_omega onto the Frobenius ball of radius eta around center.
/// eta = 0 collapses to the equality constraint and returns center.
CMatrix ball_project(const CMatrix& y_omega, const CMatrix& center, double eta);

/// [[W, Y^H], [Y, T(u)]] assembled as one (N+L) x (N+L) matrix.
CMatrix assemble_blocks(const CMatrix& w, const CMatrix& y, const CVector& u);

/// Smallest eigenvalue of the symmetrized input.
double min_eigenvalue(const CMatrix& h);

/// First-order ADMM for
///   min  tr(B1 W) + tr(B3 T(u)) + tr(B2^H Y + Y^H B2)
///   s.t. U = [[W, Y^H], [Y, T(u)]] >= 0,  ||Y_omega - Y^o_omega||_F <= eta.
/// Closed-form block updates; one order-(N+L) Hermitian eigendecomposition
/// per iteration. The iterate path is invariant to positive scaling of B.
SolverSolution solve_weighted_trace(const WeightMatrix& b,
                                    const ObservationProblem& problem,
                                    const SolverConfig& config,
                                    const SolverSolution* warm_start = nullptr);

}  // namespace ccs
