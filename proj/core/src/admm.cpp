#include "ccs/admm.hpp"

#include <cmath>
#include <stdexcept>

namespace ccs {

namespace {

CMatrix hermitian_part(const CMatrix& m) { return 0.5 * (m + m.adjoint()); }

double real_inner(const CMatrix& a, const CMatrix& b) {
  // <A, B> = tr(A^H B); equals tr(A B) for Hermitian A.
  return (a.array().conjugate() * b.array()).sum().real();
}

// Averages an (N+L)^2 matrix onto the structured subspace
// {[[W, Y^H], [Y, T(u)]]} and subtracts shift/rho blockwise. shift may be
// null (pure orthogonal projection, used for the dual residual).
void structured_average(const CMatrix& g, const WeightMatrix* shift, double rho,
                        int n, int l, CMatrix& w, CMatrix& y, CVector& u) {
  w = hermitian_part(g.topLeftCorner(l, l));
  y = 0.5 * (g.bottomLeftCorner(n, l) + g.topRightCorner(l, n).adjoint());
  CMatrix t = hermitian_part(g.bottomRightCorner(n, n));
  if (shift != nullptr) {
    w -= shift->B1 / rho;
    y -= shift->B2 / rho;
    t -= shift->B3 / rho;
  }
  CVector adj = toeplitz_adjoint(t);
  u.resize(n);
  u(0) = adj(0).real() / static_cast<double>(n);
  for (int d = 1; d < n; ++d) u(d) = adj(d) / (2.0 * static_cast<double>(n - d));
}

}  // namespace

WeightMatrix WeightMatrix::identity(int n, int l) {
  return {CMatrix::Identity(l, l), CMatrix::Zero(n, l), CMatrix::Identity(n, n)};
}

CMatrix WeightMatrix::assembled() const {
  int l = static_cast<int>(B1.rows());
  int n = static_cast<int>(B3.rows());
  CMatrix b(n + l, n + l);
  b.topLeftCorner(l, l) = B1;
  b.topRightCorner(l, n) = B2.adjoint();
  b.bottomLeftCorner(n, l) = B2;
  b.bottomRightCorner(n, n) = B3;
  return b;
}

CMatrix toeplitz(const CVector& u) {
  int n = static_cast<int>(u.size());
  if (n < 1) throw std::invalid_argument("u must be nonempty");
  if (std::fabs(u(0).imag()) > 1e-12 * std::max(1.0, std::fabs(u(0).real())))
    throw std::domain_error("first Toeplitz entry must be real");
  CMatrix t(n, n);
  for (int i = 0; i < n; ++i) {
    t(i, i) = u(0).real();
    for (int j = i + 1; j < n; ++j) {
      t(i, j) = u(j - i);
      t(j, i) = std::conj(u(j - i));
    }
  }
  return t;
}

CVector toeplitz_adjoint(const CMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("square matrix required");
  int n = static_cast<int>(m.rows());
  CVector g(n);
  g(0) = Complex(m.trace().real(), 0.0);
  for (int d = 1; d < n; ++d) {
    Complex upper = 0.0, lower = 0.0;
    for (int i = 0; i + d < n; ++i) {
      upper += m(i, i + d);
      lower += m(i + d, i);
    }
    g(d) = upper + std::conj(lower);
  }
  return g;
}

CMatrix psd_project(const CMatrix& h) {
  if (h.rows() != h.cols()) throw std::invalid_argument("square matrix required");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(h));
  if (es.info() != Eigen::Success)
    throw std::runtime_error("Hermitian eigendecomposition failed in psd_project");
  CMatrix p = es.eigenvectors() * es.eigenvalues().cwiseMax(0.0).asDiagonal() *
              es.eigenvectors().adjoint();
  return hermitian_part(p);
}

CMatrix ball_project(const CMatrix& y_omega, const CMatrix& center, double eta) {
  if (y_omega.rows() != center.rows() || y_omega.cols() != center.cols())
    throw std::invalid_argument("shape mismatch");
  if (eta < 0) throw std::invalid_argument("eta must be nonnegative");
  if (eta == 0.0) return center;
  CMatrix diff = y_omega - center;
  double dist = diff.norm();
  if (dist <= eta) return y_omega;
  return center + (eta / dist) * diff;
}

CMatrix assemble_blocks(const CMatrix& w, const CMatrix& y, const CVector& u) {
  int l = static_cast<int>(w.rows());
  int n = static_cast<int>(y.rows());
  CMatrix s(n + l, n + l);
  s.topLeftCorner(l, l) = w;
  s.topRightCorner(l, n) = y.adjoint();
  s.bottomLeftCorner(n, l) = y;
  s.bottomRightCorner(n, n) = toeplitz(u);
  return s;
}

double min_eigenvalue(const CMatrix& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(h), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("Hermitian eigendecomposition failed");
  return es.eigenvalues().minCoeff();
}

SolverSolution solve_weighted_trace(const WeightMatrix& b,
                                    const ObservationProblem& problem,
                                    const SolverConfig& config,
                                    const SolverSolution* warm_start) {
  problem.validate();
  if (config.max_iters < 1) throw std::invalid_argument("max_iters must be at least 1");
  if (!(config.eps_abs > 0) || !(config.eps_rel > 0))
    throw std::invalid_argument("tolerances must be positive");
  if (!(config.rho > 0)) throw std::invalid_argument("rho must be positive");
  if (!(config.over_relax >= 1.0 && config.over_relax < 2.0))
    throw std::invalid_argument("over_relax must lie in [1, 2)");

  const int n = problem.num_samples;
  const int l = problem.num_snapshots;
  const int dim = n + l;
  if (b.B1.rows() != l || b.B1.cols() != l || b.B2.rows() != n || b.B2.cols() != l ||
      b.B3.rows() != n || b.B3.cols() != n)
    throw std::invalid_argument("weight blocks do not match problem dimensions");

  const CMatrix b_full = b.assembled();
  {
    double scale = std::max(1.0, b_full.norm());
    if ((b_full - b_full.adjoint()).norm() > 1e-10 * scale)
      throw std::invalid_argument("weight matrix must be Hermitian");
    if (min_eigenvalue(b_full) < -1e-10 * scale)
      throw std::invalid_argument("weight matrix must be positive semidefinite");
  }

  // The iterate path must not depend on positive rescaling of B (a weighted
  // objective c*B has the same minimizer), so normalize to unit mean diagonal.
  double b_scale = b_full.trace().real() / static_cast<double>(dim);
  if (!(b_scale > 1e-300)) b_scale = 1.0;
  WeightMatrix bn{b.B1 / b_scale, b.B2 / b_scale, b.B3 / b_scale};

  const CMatrix& data = problem.observed;
  const double eta = problem.noise_bound;
  std::vector<int> rows(problem.omega.size());
  for (size_t r = 0; r < rows.size(); ++r) rows[r] = problem.omega[r] - 1;

  double rho = config.rho;
  CMatrix sx, big_u, lam;
  if (warm_start != nullptr && warm_start->blocks.U.rows() == dim) {
    sx = assemble_blocks(warm_start->blocks.W, warm_start->blocks.Y, warm_start->blocks.u);
    big_u = warm_start->blocks.U;
    lam = (warm_start->dual.rows() == dim) ? warm_start->dual : CMatrix::Zero(dim, dim);
  } else {
    CMatrix y0 = CMatrix::Zero(n, l);
    for (size_t r = 0; r < rows.size(); ++r) y0.row(rows[r]) = data.row(r);
    sx = assemble_blocks(CMatrix::Zero(l, l), y0, CVector::Zero(n));
    big_u = psd_project(sx);
    lam = CMatrix::Zero(dim, dim);
  }

  CMatrix w(l, l), y(n, l), dw(l, l), dy(n, l);
  CVector u(n), du(n);
  SolverSolution out;

  int iter = 0;
  double primal = 0.0, dual = 0.0;
  bool converged = false;
  for (iter = 1; iter <= config.max_iters; ++iter) {
    // Block update: structured projection of U + dual shifted by -B/rho,
    // observed rows pulled back into the eta-ball.
    CMatrix g = big_u + lam;
    structured_average(g, &bn, rho, n, l, w, y, u);
    if (!rows.empty()) {
      CMatrix y_obs(rows.size(), l);
      for (size_t r = 0; r < rows.size(); ++r) y_obs.row(r) = y.row(rows[r]);
      CMatrix proj = ball_project(y_obs, data, eta);
      for (size_t r = 0; r < rows.size(); ++r) y.row(rows[r]) = proj.row(r);
    }
    CMatrix sx_new = assemble_blocks(w, y, u);

    // Over-relaxation mixes the previous U into the coupling term.
    const double alpha = config.over_relax;
    CMatrix sx_mix = alpha == 1.0 ? sx_new : CMatrix(alpha * sx_new + (1.0 - alpha) * big_u);
    CMatrix big_u_new = psd_project(sx_mix - lam);
    lam += big_u_new - sx_mix;

    primal = (big_u_new - sx_new).norm();
    // Dual residual on the structured subspace image of the U step.
    structured_average(big_u_new - big_u, nullptr, rho, n, l, dw, dy, du);
    dual = rho * assemble_blocks(dw, dy, du).norm();

    sx.swap(sx_new);
    big_u.swap(big_u_new);

    double eps_pri = dim * config.eps_abs + config.eps_rel * std::max(big_u.norm(), sx.norm());
    double eps_dual = dim * config.eps_abs + config.eps_rel * rho * lam.norm();
    if (primal <= eps_pri && dual <= eps_dual) {
      converged = true;
      break;
    }

    if (config.adaptive_rho) {
      if (primal > config.residual_ratio * dual && rho < 1e8) {
        rho *= config.rho_scale;
        lam /= config.rho_scale;
      } else if (dual > config.residual_ratio * primal && rho > 1e-8) {
        rho /= config.rho_scale;
        lam *= config.rho_scale;
      }
    }
  }

  out.blocks = SdpBlockMatrix{w, y, u, big_u};
  out.objective = real_inner(b_full, sx);
  out.iterations = std::min(iter, config.max_iters);
  out.primal_residual = primal;
  out.dual_residual = dual;
  out.converged = converged;
  out.dual = lam;
  return out;
}

}  // namespace ccs
