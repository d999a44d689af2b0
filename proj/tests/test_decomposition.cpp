#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ccs/decomposition.hpp"
#include "ccs/relaxations.hpp"
#include "ccs/rng.hpp"

#include <cmath>
#include <numbers>

using namespace ccs;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Forward-construction oracle, straight from the model: u for
// T(u) = sum_k p_k a(f_k) a(f_k)^H has entries u_n = sum_k p_k e^{-i2pi f_k (n-1)}.
CVector toeplitz_param_from(const std::vector<double>& f, const std::vector<double>& p, int n) {
  CVector u = CVector::Zero(n);
  for (size_t k = 0; k < f.size(); ++k)
    for (int d = 0; d < n; ++d) u(d) += p[k] * std::polar(1.0, -kTwoPi * f[k] * d);
  u(0) = Complex(u(0).real(), 0.0);
  return u;
}

CMatrix outer_sum(const std::vector<double>& f, const std::vector<double>& p, int n) {
  CMatrix t = CMatrix::Zero(n, n);
  for (size_t k = 0; k < f.size(); ++k) {
    CVector a(n);
    for (int j = 0; j < n; ++j) a(j) = std::polar(1.0, kTwoPi * f[k] * j);
    t += p[k] * a * a.adjoint();
  }
  return t;
}

// Best cyclic alignment of two equal-size ascending frequency sets.
double matched_torus_error(std::vector<double> a, std::vector<double> b) {
  REQUIRE(a.size() == b.size());
  if (a.empty()) return 0.0;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double best = 1.0;
  for (size_t shift = 0; shift < a.size(); ++shift) {
    double worst = 0.0;
    for (size_t i = 0; i < a.size(); ++i)
      worst = std::max(worst, torus_distance(a[(i + shift) % a.size()], b[i]));
    best = std::min(best, worst);
  }
  return best;
}

}  // namespace

TEST_CASE("full-rank Toeplitz block has no sparse decomposition") {
  CVector e1 = CVector::Zero(4);
  e1(0) = 1.0;  // T = I
  CHECK_THROWS_AS(vandermonde_decompose(e1), std::runtime_error);
}

TEST_CASE("single-component recovery") {
  const int n = 8;
  CVector u(n);
  for (int d = 0; d < n; ++d) u(d) = 2.0 * std::polar(1.0, -kTwoPi * 0.1 * d);
  VandermondeResult res = vandermonde_decompose(u);
  REQUIRE(res.frequencies.size() == 1);
  CHECK(torus_distance(res.frequencies[0], 0.1) < 1e-8);
  CHECK(res.powers[0] == doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("two-component roundtrip") {
  std::vector<double> f = {0.1, 0.4};
  std::vector<double> p = {1.0, 2.0};
  VandermondeResult res = vandermonde_decompose(toeplitz_param_from(f, p, 6));
  REQUIRE(res.frequencies.size() == 2);
  CHECK(matched_torus_error(res.frequencies, f) < 1e-8);
  CHECK(res.powers[0] == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(res.powers[1] == doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("random roundtrip with reconstruction residual") {
  auto rng = make_rng(77);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const int n = 16;
  for (int rep = 0; rep < 30; ++rep) {
    int r = 1 + static_cast<int>(rng() % (n / 2));
    std::vector<double> f;
    while (static_cast<int>(f.size()) < r) {
      double cand = unif(rng);
      bool ok = cand < 1.0;
      for (double g : f) ok = ok && torus_distance(cand, g) >= 1.0 / n;
      if (ok) f.push_back(cand);
    }
    std::vector<double> p;
    for (int k = 0; k < r; ++k) p.push_back(0.5 + 1.5 * unif(rng));

    CVector u = toeplitz_param_from(f, p, n);
    VandermondeResult res = vandermonde_decompose(u, 1e-8);
    REQUIRE(static_cast<int>(res.frequencies.size()) == r);
    CHECK(matched_torus_error(res.frequencies, f) < 1e-8);

    std::vector<double> p_sorted = p;
    std::vector<size_t> order(r);
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return f[a] < f[b]; });
    for (int k = 0; k < r; ++k) {
      CHECK(res.powers[k] > 0.0);
      CHECK(res.powers[k] == doctest::Approx(p[order[k]]).epsilon(1e-8));
    }

    CMatrix t = outer_sum(f, p, n);
    CMatrix t_rec = outer_sum(res.frequencies, res.powers, n);
    CHECK((t_rec - t).norm() <= 1e-6 * t.norm());
  }
}

TEST_CASE("amplitude retrieval") {
  FrequencySparseSignal one{8, 1, {0.2}, CMatrix::Constant(1, 1, Complex(1, 1))};
  CMatrix s1 = retrieve_amplitudes(synthesize(one), {0.2});
  CHECK(std::abs(s1(0, 0) - Complex(1, 1)) < 1e-12);

  auto rng = make_rng(5);
  std::normal_distribution<double> g;
  CMatrix amps(2, 3);
  for (int a = 0; a < 2; ++a)
    for (int t = 0; t < 3; ++t) amps(a, t) = Complex(g(rng), g(rng));
  FrequencySparseSignal two{10, 3, {0.15, 0.62}, amps};
  CMatrix s2 = retrieve_amplitudes(synthesize(two), {0.15, 0.62});
  CHECK((s2 - amps).norm() < 1e-8 * amps.norm());

  // Absent component fits to (numerically) zero.
  CVector a02(8);
  for (int j = 0; j < 8; ++j) a02(j) = std::polar(1.0, kTwoPi * 0.2 * j);
  CMatrix y = a02 * Eigen::RowVector2cd(1.0, 0.0);
  CMatrix s3 = retrieve_amplitudes(y, {0.2, 0.7});
  CHECK(s3.row(1).norm() < 1e-10);

  CHECK_THROWS_AS(retrieve_amplitudes(y, {0.2, 0.2 + 1e-12}), std::runtime_error);
}

TEST_CASE("full decomposition of a completed solution") {
  auto rng = make_rng(42);
  auto inst = random_problem(16, 12, 2, 3, 2.0 / 16, rng);
  SolverConfig cfg;
  cfg.eps_abs = cfg.eps_rel = 1e-7;
  SolverSolution sol = anm_complete(inst.problem, cfg);
  AtomicDecomposition dec = full_decomposition(sol);
  REQUIRE(dec.size() == 2);
  CHECK(matched_torus_error(dec.frequencies, inst.signal.frequencies) < 1e-6);

  // Consistency: re-synthesizing the decomposition reproduces the completion.
  FrequencySparseSignal back{16, 3, dec.frequencies, dec.amplitudes};
  CHECK((synthesize(back) - sol.blocks.Y).norm() < 1e-5 * sol.blocks.Y.norm());

  // Fitting on the observed rows only gives the same components here.
  AtomicDecomposition dec_obs = full_decomposition(sol, 1e-6, &inst.problem);
  REQUIRE(dec_obs.size() == 2);
  CHECK((dec_obs.amplitudes - dec.amplitudes).norm() < 1e-6 * dec.amplitudes.norm());

  for (int k = 0; k < dec.size(); ++k) {
    CHECK(dec.coefficients[k] == doctest::Approx(dec.amplitudes.row(k).norm()));
    CHECK(dec.directions.row(k).norm() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("zero solution decomposes to nothing") {
  SolverSolution sol;
  sol.blocks.W = CMatrix::Zero(2, 2);
  sol.blocks.Y = CMatrix::Zero(6, 2);
  sol.blocks.u = CVector::Zero(6);
  sol.blocks.U = CMatrix::Zero(8, 8);
  AtomicDecomposition dec = full_decomposition(sol);
  CHECK(dec.size() == 0);
}
