#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ccs/rng.hpp"
#include "ccs/signal_model.hpp"

#include <cmath>
#include <numbers>

using namespace ccs;

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

TEST_CASE("steering vector fixed values") {
  CVector a0 = steering_vector(0.0, 3);
  for (int j = 0; j < 3; ++j) CHECK(std::abs(a0(j) - Complex(1, 0)) < 1e-15);

  CVector ah = steering_vector(0.5, 4);
  CHECK(std::abs(ah(0) - Complex(1, 0)) < 1e-15);
  CHECK(std::abs(ah(1) - Complex(-1, 0)) < 1e-15);
  CHECK(std::abs(ah(2) - Complex(1, 0)) < 1e-14);
  CHECK(std::abs(ah(3) - Complex(-1, 0)) < 1e-14);

  CVector aq = steering_vector(0.25, 4);
  CHECK(std::abs(aq(0) - Complex(1, 0)) < 1e-15);
  CHECK(std::abs(aq(1) - Complex(0, 1)) < 1e-15);
  CHECK(std::abs(aq(2) - Complex(-1, 0)) < 1e-14);
  CHECK(std::abs(aq(3) - Complex(0, -1)) < 1e-14);
}

TEST_CASE("steering vector norm is sqrt(N)") {
  auto rng = make_rng(101);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int rep = 0; rep < 50; ++rep) {
    int n = 1 + rep % 17;
    double f = unif(rng);
    CHECK(steering_vector(f, n).norm() == doctest::Approx(std::sqrt(double(n))).epsilon(1e-12));
  }
}

TEST_CASE("steering vector rejects out-of-range frequency") {
  CHECK_THROWS_AS(steering_vector(1.0, 4), std::domain_error);
  CHECK_THROWS_AS(steering_vector(-0.1, 4), std::domain_error);
}

TEST_CASE("synthesize single atom") {
  FrequencySparseSignal s{4, 1, {0.25}, CMatrix::Constant(1, 1, Complex(2, 0))};
  CMatrix y = synthesize(s);
  CHECK(std::abs(y(0, 0) - Complex(2, 0)) < 1e-14);
  CHECK(std::abs(y(1, 0) - Complex(0, 2)) < 1e-14);
  CHECK(std::abs(y(2, 0) - Complex(-2, 0)) < 1e-14);
  CHECK(std::abs(y(3, 0) - Complex(0, -2)) < 1e-14);
}

TEST_CASE("synthesize constructive/destructive sum") {
  CMatrix amps = CMatrix::Ones(2, 1);
  FrequencySparseSignal s{2, 1, {0.0, 0.5}, amps};
  CMatrix y = synthesize(s);
  CHECK(std::abs(y(0, 0) - Complex(2, 0)) < 1e-14);
  CHECK(std::abs(y(1, 0)) < 1e-14);
}

TEST_CASE("synthesize matches a direct double-loop evaluation") {
  auto rng = make_rng(7);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> g;
  const int n = 16, l = 4, k = 3;
  std::vector<double> f = {unif(rng), unif(rng), unif(rng)};
  CMatrix s(k, l);
  for (int a = 0; a < k; ++a)
    for (int t = 0; t < l; ++t) s(a, t) = Complex(g(rng), g(rng));

  // Independent oracle: entrywise sum straight from the model definition.
  CMatrix expected = CMatrix::Zero(n, l);
  for (int j = 0; j < n; ++j)
    for (int t = 0; t < l; ++t)
      for (int a = 0; a < k; ++a)
        expected(j, t) += s(a, t) * std::polar(1.0, kTwoPi * j * f[a]);

  CMatrix y = synthesize({n, l, f, s});
  CHECK((y - expected).norm() < 1e-12 * expected.norm());
}

TEST_CASE("synthesize is linear in the amplitudes") {
  auto rng = make_rng(8);
  std::normal_distribution<double> g;
  std::vector<double> f = {0.12, 0.57, 0.83};
  auto draw = [&] {
    CMatrix s(3, 2);
    for (int a = 0; a < 3; ++a)
      for (int t = 0; t < 2; ++t) s(a, t) = Complex(g(rng), g(rng));
    return s;
  };
  CMatrix s1 = draw(), s2 = draw();
  double alpha = 1.7, beta = -0.3;
  CMatrix lhs = synthesize({8, 2, f, alpha * s1 + beta * s2});
  CMatrix rhs = alpha * synthesize({8, 2, f, s1}) + beta * synthesize({8, 2, f, s2});
  CHECK((lhs - rhs).norm() < 1e-12 * rhs.norm());
}

TEST_CASE("sample basic rows") {
  CMatrix eye = CMatrix::Identity(3, 3);
  CMatrix out = sample(eye, {1, 3});
  CHECK((out.row(0) - eye.row(0)).norm() == 0.0);
  CHECK((out.row(1) - eye.row(2)).norm() == 0.0);

  CMatrix full = sample(eye, {1, 2, 3});
  CHECK((full - eye).norm() == 0.0);

  FrequencySparseSignal s{4, 1, {0.25}, CMatrix::Ones(1, 1)};
  CMatrix picked = sample(synthesize(s), {2});
  CHECK(std::abs(picked(0, 0) - Complex(0, 1)) < 1e-14);

  CHECK_THROWS_AS(sample(eye, {0, 2}), std::invalid_argument);
  CHECK_THROWS_AS(sample(eye, {1, 4}), std::invalid_argument);
}

TEST_CASE("sampling commutes with sub-sampled synthesis") {
  auto rng = make_rng(15);
  std::normal_distribution<double> g;
  std::vector<double> f = {0.21, 0.66};
  CMatrix amps(2, 3);
  for (int a = 0; a < 2; ++a)
    for (int t = 0; t < 3; ++t) amps(a, t) = Complex(g(rng), g(rng));
  IndexList omega = {2, 3, 7, 11};

  CMatrix via_rows = sample(synthesize({12, 3, f, amps}), omega);
  CMatrix direct = CMatrix::Zero(4, 3);
  for (int a = 0; a < 2; ++a) direct += steering_vector_sub(f[a], omega) * amps.row(a);
  CHECK((via_rows - direct).norm() < 1e-12 * direct.norm());
}

TEST_CASE("add_noise noiseless flag and determinism") {
  CMatrix clean = CMatrix::Ones(2, 2);
  auto rng = make_rng(1);
  auto res = add_noise(clean, std::numeric_limits<double>::infinity(), rng);
  CHECK(res.eta == 0.0);
  CHECK((res.noisy - clean).norm() == 0.0);

  auto rng_a = make_rng(99), rng_b = make_rng(99);
  auto a = add_noise(clean, 10.0, rng_a);
  auto b = add_noise(clean, 10.0, rng_b);
  CHECK((a.noisy - b.noisy).norm() == 0.0);
  CHECK(a.eta == b.eta);

  CHECK_THROWS_AS(add_noise(CMatrix::Zero(2, 2), 10.0, rng), std::domain_error);
}

TEST_CASE("add_noise hits the requested SNR in expectation") {
  CMatrix clean = CMatrix::Ones(2, 2);
  const int reps = 10000;
  double acc = 0.0;
  for (int rep = 0; rep < reps; ++rep) {
    auto rng = make_rng({1234, std::uint64_t(rep)});
    auto res = add_noise(clean, 10.0, rng);
    acc += (res.noisy - clean).squaredNorm() / clean.squaredNorm();
  }
  // E[||E||^2]/||clean||^2 = 10^(-1); MC std of the mean is 5e-4.
  CHECK(std::fabs(acc / reps - 0.1) < 2e-3);
}

TEST_CASE("random_problem satisfies the separation and invariants") {
  auto rng = make_rng(2024);
  auto inst = random_problem(128, 20, 4, 5, 1.0 / 128, rng);
  inst.signal.validate();
  inst.problem.validate();
  CHECK(inst.problem.sample_count() == 20);
  CHECK(inst.signal.num_components() == 4);
  for (int j = 0; j < 4; ++j)
    for (int k = j + 1; k < 4; ++k)
      CHECK(torus_distance(inst.signal.frequencies[j], inst.signal.frequencies[k]) >= 1.0 / 128);

  auto single = random_problem(16, 8, 1, 1, 0.9, rng);
  CHECK(single.signal.num_components() == 1);
}

TEST_CASE("random_problem amplitude magnitude moment") {
  auto rng = make_rng(55);
  double acc = 0.0;
  long count = 0;
  for (int rep = 0; rep < 2000; ++rep) {
    auto inst = random_problem(8, 4, 1, 50, 0.0, rng);
    for (int t = 0; t < 50; ++t) acc += std::abs(inst.signal.amplitudes(0, t));
    count += 50;
  }
  // |s| = 0.5 + w^2 has mean 1.5 and variance 2; 3 sigma ~ 0.014 here.
  CHECK(std::fabs(acc / count - 1.5) < 0.02);
}

TEST_CASE("random_problem fails loudly on a degenerate separation") {
  auto rng = make_rng(3);
  CHECK_THROWS_AS(random_problem(16, 8, 3, 1, 0.34, rng), std::invalid_argument);
  CHECK_THROWS_AS(random_problem(16, 8, 3, 1, 1.0 / 3, rng), std::runtime_error);
}

TEST_CASE("relative_error") {
  CMatrix truth = CMatrix::Random(4, 2);
  CHECK(relative_error(truth, truth) == 0.0);
  CHECK(relative_error(2 * truth, truth) == doctest::Approx(1.0).epsilon(1e-12));

  CMatrix unit = CMatrix::Zero(3, 1);
  unit(0, 0) = 1.0;
  CMatrix perturbed = unit;
  perturbed(1, 0) += 1e-3;
  CHECK(relative_error(perturbed, unit) == doctest::Approx(1e-3).epsilon(1e-9));

  CHECK_THROWS_AS(relative_error(truth, CMatrix::Zero(4, 2)), std::domain_error);
}

TEST_CASE("torus distance wraps") {
  CHECK(torus_distance(0.1, 0.9) == doctest::Approx(0.2));
  CHECK(torus_distance(0.0, 0.5) == doctest::Approx(0.5));
  CHECK(torus_distance(0.3, 0.3) == 0.0);
}
