#include "ccs/relaxations.hpp"

#include <cmath>
#include <stdexcept>

namespace ccs {

namespace {

// (U + eps I)^{-1} through the eigendecomposition, negatives clipped so the
// weight stays Hermitian PSD.
WeightMatrix inverse_weight(const CMatrix& u, double eps, int n, int l) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (u + u.adjoint()));
  if (es.info() != Eigen::Success)
    throw std::runtime_error("eigendecomposition failed while building the reweighting matrix");
  RVector inv = (es.eigenvalues().cwiseMax(0.0).array() + eps).inverse();
  CMatrix b = es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().adjoint();
  b = 0.5 * (b + b.adjoint());
  return {b.topLeftCorner(l, l), b.bottomLeftCorner(n, l), b.bottomRightCorner(n, n)};
}

}  // namespace

double atomic_norm(const CMatrix& y, const SolverConfig& config) {
  if (!y.allFinite()) throw std::invalid_argument("Y must be finite");
  const int n = static_cast<int>(y.rows());
  const int l = static_cast<int>(y.cols());
  ObservationProblem full;
  full.num_samples = n;
  full.num_snapshots = l;
  full.omega.resize(n);
  for (int i = 0; i < n; ++i) full.omega[i] = i + 1;
  full.observed = y;
  full.noise_bound = 0.0;
  SolverSolution sol = solve_weighted_trace(WeightMatrix::identity(n, l), full, config);
  return sol.objective / (2.0 * std::sqrt(static_cast<double>(n)));
}

SolverSolution anm_complete(const ObservationProblem& problem, const SolverConfig& config) {
  problem.validate();
  return solve_weighted_trace(
      WeightMatrix::identity(problem.num_samples, problem.num_snapshots), problem, config);
}

RwtmResult rwtm(const ObservationProblem& problem, const RwtmConfig& config) {
  problem.validate();
  if (config.max_outer < 1) throw std::invalid_argument("max_outer must be at least 1");
  if (!(config.epsilon_value > 0)) throw std::invalid_argument("epsilon must be positive");

  const int n = problem.num_samples;
  const int l = problem.num_snapshots;
  const int dim = n + l;

  RwtmResult out;
  CMatrix u_prev = CMatrix::Identity(dim, dim);
  double eps_prev = std::numeric_limits<double>::infinity();
  SolverSolution sol;

  for (int j = 1; j <= config.max_outer; ++j) {
    double eps = config.epsilon_value;
    if (config.epsilon_mode == EpsilonMode::relative_to_spectrum) {
      Eigen::SelfAdjointEigenSolver<CMatrix> es(u_prev, Eigen::EigenvaluesOnly);
      eps = std::max(config.epsilon_value * es.eigenvalues().maxCoeff(), config.epsilon_floor);
    }
    // Nonincreasing eps keeps the surrogate sequence monotone across passes.
    eps = std::min(eps, eps_prev);

    SolverConfig inner = config.inner;
    if (config.loose_early && j < config.max_outer) {
      inner.eps_abs = std::max(inner.eps_abs, config.loose_tol);
      inner.eps_rel = std::max(inner.eps_rel, config.loose_tol);
    }

    WeightMatrix b = inverse_weight(u_prev, eps, n, l);
    sol = solve_weighted_trace(b, problem, inner, j > 1 ? &sol : nullptr);

    out.surrogates.push_back(logdet_surrogate(sol.blocks.U, eps));
    out.epsilons.push_back(eps);
    out.outer_iterations = j;
    u_prev = sol.blocks.U;
    eps_prev = eps;
  }

  out.solution = std::move(sol);
  return out;
}

double logdet_surrogate(const CMatrix& u, double epsilon) {
  if (!(epsilon > 0)) throw std::invalid_argument("epsilon must be positive");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (u + u.adjoint()), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");
  double acc = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    acc += std::log(std::max(es.eigenvalues()(i), 0.0) + epsilon);
  return acc;
}

}  // namespace ccs
