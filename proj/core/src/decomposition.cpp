#include "ccs/decomposition.hpp"

#include "ccs/signal_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace ccs {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Active-set nonnegative least squares on the normal equations:
// min ||A p - t||^2 with p >= 0, given G = A^T A and b = A^T t.
RVector nnls_gram(const RMatrix& gram, const RVector& b) {
  const int n = static_cast<int>(b.size());
  RVector p = RVector::Zero(n);
  std::vector<bool> passive(n, false);
  const double tol = 1e-12 * std::max(1.0, b.cwiseAbs().maxCoeff());

  for (int outer = 0; outer < 8 * n + 32; ++outer) {
    RVector grad = b - gram * p;
    int best = -1;
    double best_val = tol;
    for (int i = 0; i < n; ++i)
      if (!passive[i] && grad(i) > best_val) { best = i; best_val = grad(i); }
    if (best < 0) break;
    passive[best] = true;

    for (int inner = 0; inner <= n + 1; ++inner) {
      std::vector<int> idx;
      for (int i = 0; i < n; ++i)
        if (passive[i]) idx.push_back(i);
      if (idx.empty()) break;
      RMatrix gs(idx.size(), idx.size());
      RVector bs(idx.size());
      for (size_t r = 0; r < idx.size(); ++r) {
        bs(r) = b(idx[r]);
        for (size_t c = 0; c < idx.size(); ++c) gs(r, c) = gram(idx[r], idx[c]);
      }
      RVector z = gs.ldlt().solve(bs);
      if (z.minCoeff() > 0) {
        p.setZero();
        for (size_t r = 0; r < idx.size(); ++r) p(idx[r]) = z(r);
        break;
      }
      // Step back to the boundary, then drop the blocking coordinates.
      double alpha = 1.0;
      for (size_t r = 0; r < idx.size(); ++r) {
        if (z(r) > 0) continue;
        double denom = p(idx[r]) - z(r);
        if (denom > 0) alpha = std::min(alpha, p(idx[r]) / denom);
      }
      RVector stepped = RVector::Zero(n);
      for (size_t r = 0; r < idx.size(); ++r)
        stepped(idx[r]) = p(idx[r]) + alpha * (z(r) - p(idx[r]));
      p = stepped;
      double floor = 1e-14 * std::max(1.0, p.maxCoeff());
      for (size_t r = 0; r < idx.size(); ++r) {
        if (z(r) <= 0 && p(idx[r]) <= floor) {
          p(idx[r]) = 0.0;
          passive[idx[r]] = false;
        }
      }
    }
  }
  return p;
}

}  // namespace

VandermondeResult vandermonde_decompose(const CVector& u, double rank_tol) {
  const int n = static_cast<int>(u.size());
  if (n < 1) throw std::invalid_argument("u must be nonempty");
  if (!(rank_tol > 0)) throw std::invalid_argument("rank_tol must be positive");

  CMatrix t = toeplitz(u);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(t);
  if (es.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");
  const RVector& evals = es.eigenvalues();  // ascending
  double lam_max = evals(n - 1);
  if (lam_max <= 0.0) {
    if (evals.minCoeff() < -1e-10 * std::max(1.0, std::fabs(lam_max)))
      throw std::domain_error("Toeplitz block is not positive semidefinite");
    return {};  // zero matrix: empty decomposition
  }
  // Converged solutions carry residual-scale negative eigenvalues; only a
  // clearly indefinite block is rejected.
  if (evals.minCoeff() < -1e-3 * lam_max)
    throw std::domain_error("Toeplitz block is not positive semidefinite");

  int rank = 0;
  for (int i = 0; i < n; ++i)
    if (evals(i) > rank_tol * lam_max) ++rank;
  if (rank == 0) return {};
  if (rank >= n)
    throw std::runtime_error("T(u) has full numerical rank; no unique sparse decomposition");

  // Rotational invariance on the signal subspace: the one-row shift acts as
  // diag(e^{i2pi f_k}) on span{a(f_k)}.
  CMatrix es_basis = es.eigenvectors().rightCols(rank);
  CMatrix top = es_basis.topRows(n - 1);
  CMatrix bottom = es_basis.bottomRows(n - 1);
  CMatrix psi = top.colPivHouseholderQr().solve(bottom);
  Eigen::ComplexEigenSolver<CMatrix> ces(psi);
  if (ces.info() != Eigen::Success) throw std::runtime_error("shift-operator eigensolve failed");

  std::vector<double> freqs(rank);
  for (int k = 0; k < rank; ++k) {
    double f = std::arg(ces.eigenvalues()(k)) / kTwoPi;
    f -= std::floor(f);
    if (f >= 1.0) f = 0.0;
    freqs[k] = f;
  }
  std::sort(freqs.begin(), freqs.end());

  // Powers by nonnegative least squares against the Toeplitz entries:
  // Gram(j,k) = |a_j^H a_k|^2, rhs(k) = a_k^H T a_k.
  std::vector<CVector> atoms(rank);
  for (int k = 0; k < rank; ++k) atoms[k] = steering_vector(freqs[k], n);
  RMatrix gram(rank, rank);
  RVector rhs(rank);
  for (int j = 0; j < rank; ++j) {
    for (int k = 0; k < rank; ++k) gram(j, k) = std::norm(atoms[j].dot(atoms[k]));
    rhs(j) = (atoms[j].adjoint() * t * atoms[j])(0, 0).real();
  }
  RVector powers = nnls_gram(gram, rhs);

  VandermondeResult out;
  double p_floor = 1e-12 * powers.maxCoeff();
  for (int k = 0; k < rank; ++k) {
    if (powers(k) > p_floor && powers(k) > 0.0) {
      out.frequencies.push_back(freqs[k]);
      out.powers.push_back(powers(k));
    }
  }
  return out;
}

CMatrix retrieve_amplitudes(const CMatrix& y, const std::vector<double>& frequencies) {
  const int n = static_cast<int>(y.rows());
  const int r = static_cast<int>(frequencies.size());
  if (r == 0) return CMatrix(0, y.cols());
  if (r > n) throw std::invalid_argument("more frequencies than samples");
  for (int j = 0; j < r; ++j)
    for (int k = j + 1; k < r; ++k)
      if (torus_distance(frequencies[j], frequencies[k]) < 1e-8)
        throw std::runtime_error("steering vectors nearly collinear; amplitude fit ill-conditioned");

  CMatrix a(n, r);
  for (int k = 0; k < r; ++k) a.col(k) = steering_vector(frequencies[k], n);
  return a.colPivHouseholderQr().solve(y);
}

AtomicDecomposition full_decomposition(const SolverSolution& solution, double rank_tol,
                                       const ObservationProblem* fit_observed) {
  VandermondeResult vd = vandermonde_decompose(solution.blocks.u, rank_tol);
  const int l = static_cast<int>(solution.blocks.Y.cols());

  CMatrix amps;
  if (fit_observed != nullptr) {
    // Fit on the observed rows only, with sub-sampled steering vectors.
    const int r = static_cast<int>(vd.frequencies.size());
    CMatrix a(fit_observed->sample_count(), r);
    for (int k = 0; k < r; ++k) a.col(k) = steering_vector_sub(vd.frequencies[k], fit_observed->omega);
    amps = r > 0 ? CMatrix(a.colPivHouseholderQr().solve(fit_observed->observed))
                 : CMatrix(0, fit_observed->num_snapshots);
  } else {
    amps = retrieve_amplitudes(solution.blocks.Y, vd.frequencies);
  }

  // Spurious-source pruning on the retrieved coefficients.
  std::vector<double> coeffs(vd.frequencies.size());
  double c_max = 0.0;
  for (size_t k = 0; k < vd.frequencies.size(); ++k) {
    coeffs[k] = amps.row(k).norm();
    c_max = std::max(c_max, coeffs[k]);
  }

  AtomicDecomposition out;
  std::vector<int> keep;
  for (size_t k = 0; k < vd.frequencies.size(); ++k)
    if (coeffs[k] > 1e-6 * c_max && coeffs[k] > 0.0) keep.push_back(static_cast<int>(k));

  out.frequencies.reserve(keep.size());
  out.powers.reserve(keep.size());
  out.coefficients.reserve(keep.size());
  out.amplitudes.resize(keep.size(), l);
  out.directions.resize(keep.size(), l);
  for (size_t i = 0; i < keep.size(); ++i) {
    int k = keep[i];
    out.frequencies.push_back(vd.frequencies[k]);
    out.powers.push_back(vd.powers[k]);
    out.coefficients.push_back(coeffs[k]);
    out.amplitudes.row(i) = amps.row(k);
    out.directions.row(i) = amps.row(k) / coeffs[k];
  }
  return out;
}

}  // namespace ccs
