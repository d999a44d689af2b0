#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ccs/admm.hpp"
#include "ccs/rng.hpp"

#include <cmath>
#include <numbers>

using namespace ccs;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

CMatrix random_hermitian(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  CMatrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = Complex(g(rng), g(rng));
  return 0.5 * (a + a.adjoint());
}

CVector random_toeplitz_param(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  CVector u(n);
  u(0) = g(rng);
  for (int d = 1; d < n; ++d) u(d) = Complex(g(rng), g(rng));
  return u;
}

}  // namespace

TEST_CASE("toeplitz fixed examples") {
  CVector e1(3);
  e1 << 1.0, 0.0, 0.0;
  CHECK((toeplitz(e1) - CMatrix::Identity(3, 3)).norm() == 0.0);

  CVector u(2);
  u << Complex(2, 0), Complex(0, 1);
  CMatrix t = toeplitz(u);
  CHECK(std::abs(t(0, 0) - Complex(2, 0)) == 0.0);
  CHECK(std::abs(t(0, 1) - Complex(0, 1)) == 0.0);
  CHECK(std::abs(t(1, 0) - Complex(0, -1)) == 0.0);
  CHECK(std::abs(t(1, 1) - Complex(2, 0)) == 0.0);

  // Rank-one construction: u_n = p e^{-i2pi f (n-1)} gives p a(f) a(f)^H.
  const double f = 0.2;
  const int n = 4;
  CVector up(n);
  for (int d = 0; d < n; ++d) up(d) = std::polar(1.0, -kTwoPi * f * d);
  CVector a(n);
  for (int j = 0; j < n; ++j) a(j) = std::polar(1.0, kTwoPi * f * j);
  CHECK((toeplitz(up) - a * a.adjoint()).norm() < 1e-14);

  CVector bad(2);
  bad << Complex(1, 0.5), Complex(0, 0);
  CHECK_THROWS_AS(toeplitz(bad), std::domain_error);
}

TEST_CASE("toeplitz_adjoint pairing on fixed cases") {
  auto rng = make_rng(21);
  // Diagonal-only: <T(u), I> = N u_1.
  CVector g_eye = toeplitz_adjoint(CMatrix::Identity(3, 3));
  for (int rep = 0; rep < 10; ++rep) {
    CVector u = random_toeplitz_param(3, rng);
    double via_trace = toeplitz(u).trace().real();
    double via_adjoint = (u.conjugate().cwiseProduct(g_eye)).sum().real();
    CHECK(via_trace == doctest::Approx(via_adjoint).epsilon(1e-12));
  }

  // First superdiagonal of a(f) a(f)^H sums to (N-1) e^{-i2pi f}.
  const int n = 6;
  const double f = 0.37;
  CVector a(n);
  for (int j = 0; j < n; ++j) a(j) = std::polar(1.0, kTwoPi * f * j);
  CVector e2 = CVector::Zero(n);
  e2(1) = 1.0;
  CMatrix outer = a * a.adjoint();
  double paired = (e2.conjugate().cwiseProduct(toeplitz_adjoint(outer))).sum().real();
  CHECK(paired == doctest::Approx(2.0 * (n - 1) * std::cos(kTwoPi * f)).epsilon(1e-12));
}

TEST_CASE("toeplitz_adjoint identity fuzz") {
  auto rng = make_rng(22);
  for (int rep = 0; rep < 50; ++rep) {
    int n = 2 + rep % 7;
    CMatrix m = random_hermitian(n, rng);
    CVector u = random_toeplitz_param(n, rng);
    double direct = (m.adjoint() * toeplitz(u)).trace().real();
    double paired = (u.conjugate().cwiseProduct(toeplitz_adjoint(m))).sum().real();
    CHECK(std::fabs(direct - paired) < 1e-12 * std::max(1.0, std::fabs(direct)));
  }
}

TEST_CASE("psd_project") {
  CMatrix d = CMatrix::Zero(2, 2);
  d(0, 0) = 3.0;
  d(1, 1) = -1.0;
  CMatrix pd = psd_project(d);
  CHECK(std::abs(pd(0, 0) - Complex(3, 0)) < 1e-14);
  CHECK(std::abs(pd(1, 1)) < 1e-14);

  auto rng = make_rng(9);
  CMatrix h = random_hermitian(5, rng);
  CMatrix psd = h * h.adjoint();  // guaranteed PSD
  CHECK((psd_project(psd) - psd).norm() < 1e-12 * psd.norm());

  CMatrix swap = CMatrix::Zero(2, 2);
  swap(0, 1) = 1.0;
  swap(1, 0) = 1.0;
  CMatrix ps = psd_project(swap);
  CHECK(std::abs(ps(0, 0) - Complex(0.5, 0)) < 1e-14);
  CHECK(std::abs(ps(0, 1) - Complex(0.5, 0)) < 1e-14);
  CHECK(std::abs(ps(1, 0) - Complex(0.5, 0)) < 1e-14);
  CHECK(std::abs(ps(1, 1) - Complex(0.5, 0)) < 1e-14);
}

TEST_CASE("ball_project") {
  CMatrix center = CMatrix::Ones(2, 2);
  CMatrix anywhere = 5 * CMatrix::Ones(2, 2);
  CHECK((ball_project(anywhere, center, 0.0) - center).norm() == 0.0);

  CMatrix inside = center + 0.1 * CMatrix::Identity(2, 2);
  CHECK((ball_project(inside, center, 1.0) - inside).norm() == 0.0);

  CMatrix far(1, 1);
  far(0, 0) = 2.0;
  CMatrix proj = ball_project(far, CMatrix::Zero(1, 1), 1.0);
  CHECK(std::abs(proj(0, 0) - Complex(1, 0)) < 1e-14);
}

TEST_CASE("solver recovers the single-atom atomic norm") {
  auto rng = make_rng(7);
  std::normal_distribution<double> g;
  const int n = 8, l = 2;
  CVector phi(l);
  phi << Complex(g(rng), g(rng)), Complex(g(rng), g(rng));
  phi /= phi.norm();
  CVector a(n);
  for (int j = 0; j < n; ++j) a(j) = std::polar(1.0, kTwoPi * 0.3 * j);
  CMatrix y = 3.0 * a * phi.transpose();

  ObservationProblem full;
  full.num_samples = n;
  full.num_snapshots = l;
  for (int i = 1; i <= n; ++i) full.omega.push_back(i);
  full.observed = y;

  SolverConfig cfg;
  cfg.eps_abs = cfg.eps_rel = 1e-7;
  SolverSolution sol = solve_weighted_trace(WeightMatrix::identity(n, l), full, cfg);
  CHECK(sol.converged);
  CHECK(sol.objective / (2.0 * std::sqrt(double(n))) == doctest::Approx(3.0).epsilon(1e-4));
}

TEST_CASE("solver maps zero data to zero blocks") {
  ObservationProblem p;
  p.num_samples = 6;
  p.num_snapshots = 2;
  p.omega = {1, 2, 3, 4, 5, 6};
  p.observed = CMatrix::Zero(6, 2);
  SolverSolution sol = solve_weighted_trace(WeightMatrix::identity(6, 2), p, {});
  CHECK(sol.converged);
  CHECK(sol.objective == 0.0);
  CHECK(sol.blocks.Y.norm() == 0.0);
  CHECK(sol.blocks.u.norm() == 0.0);
}

TEST_CASE("solver completes a small instance exactly") {
  auto rng = make_rng(42);
  auto inst = random_problem(16, 12, 2, 3, 2.0 / 16, rng);
  CMatrix truth = synthesize(inst.signal);
  SolverConfig cfg;
  cfg.eps_abs = cfg.eps_rel = 1e-7;
  SolverSolution sol = solve_weighted_trace(WeightMatrix::identity(16, 3), inst.problem, cfg);
  CHECK(sol.converged);
  CHECK(relative_error(sol.blocks.Y, truth) < 1e-5);

  // Contracts at exit.
  CHECK(min_eigenvalue(sol.blocks.U) >= -1e-10);
  CMatrix assembled = assemble_blocks(sol.blocks.W, sol.blocks.Y, sol.blocks.u);
  CMatrix tu = assembled.bottomRightCorner(16, 16);
  CHECK((tu - toeplitz(sol.blocks.u)).norm() == 0.0);
  CMatrix y_obs = sample(sol.blocks.Y, inst.problem.omega);
  CHECK((y_obs - inst.problem.observed).norm() <= inst.problem.noise_bound + 1e-12);
}

TEST_CASE("solver respects a noisy ball constraint") {
  auto rng = make_rng(12);
  auto inst = random_problem(12, 9, 2, 2, 2.0 / 12, rng);
  auto noisy = add_noise(inst.problem.observed, 20.0, rng);
  inst.problem.observed = noisy.noisy;
  inst.problem.noise_bound = noisy.eta;
  SolverConfig cfg;
  cfg.eps_abs = cfg.eps_rel = 1e-7;
  SolverSolution sol = solve_weighted_trace(WeightMatrix::identity(12, 2), inst.problem, cfg);
  CHECK(sol.converged);
  CMatrix y_obs = sample(sol.blocks.Y, inst.problem.omega);
  CHECK((y_obs - inst.problem.observed).norm() <= inst.problem.noise_bound + 1e-12);
}

TEST_CASE("objective scales with the data") {
  auto rng = make_rng(13);
  auto inst = random_problem(10, 7, 2, 2, 2.0 / 10, rng);
  SolverConfig cfg;
  cfg.eps_abs = cfg.eps_rel = 1e-9;
  SolverSolution base = solve_weighted_trace(WeightMatrix::identity(10, 2), inst.problem, cfg);

  ObservationProblem scaled = inst.problem;
  scaled.observed *= 2.0;
  scaled.noise_bound *= 2.0;
  SolverSolution doubled = solve_weighted_trace(WeightMatrix::identity(10, 2), scaled, cfg);
  CHECK(doubled.objective == doctest::Approx(2.0 * base.objective).epsilon(1e-5));
}

TEST_CASE("objective is invariant to the initial penalty") {
  auto rng = make_rng(14);
  auto inst = random_problem(12, 8, 2, 2, 2.0 / 12, rng);
  SolverConfig cfg;
  cfg.eps_abs = cfg.eps_rel = 1e-8;
  std::vector<double> objectives;
  for (double rho : {1.0, 10.0, 100.0}) {
    cfg.rho = rho;
    objectives.push_back(
        solve_weighted_trace(WeightMatrix::identity(12, 2), inst.problem, cfg).objective);
  }
  CHECK(std::fabs(objectives[1] - objectives[0]) < 1e-6 * std::fabs(objectives[0]));
  CHECK(std::fabs(objectives[2] - objectives[0]) < 1e-6 * std::fabs(objectives[0]));
}

TEST_CASE("solver rejects an indefinite weight") {
  ObservationProblem p;
  p.num_samples = 4;
  p.num_snapshots = 1;
  p.omega = {1, 2, 3, 4};
  p.observed = CMatrix::Ones(4, 1);
  WeightMatrix bad = WeightMatrix::identity(4, 1);
  bad.B1(0, 0) = -1.0;
  CHECK_THROWS_AS(solve_weighted_trace(bad, p, {}), std::invalid_argument);
}

TEST_CASE("iteration cap reports non-convergence") {
  auto rng = make_rng(15);
  auto inst = random_problem(12, 8, 3, 2, 1.0 / 12, rng);
  SolverConfig cfg;
  cfg.max_iters = 3;
  cfg.eps_abs = cfg.eps_rel = 1e-12;
  SolverSolution sol = solve_weighted_trace(WeightMatrix::identity(12, 2), inst.problem, cfg);
  CHECK_FALSE(sol.converged);
  CHECK(sol.iterations == 3);
  CHECK(sol.primal_residual >= 0.0);
  CHECK(sol.dual_residual >= 0.0);
}
