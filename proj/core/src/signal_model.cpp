#include "ccs/signal_model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ccs {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_omega(const IndexList& omega, int n) {
  if (omega.empty()) throw std::invalid_argument("omega must be nonempty");
  int prev = 0;
  for (int idx : omega) {
    if (idx <= prev) throw std::invalid_argument("omega must be strictly increasing and 1-based");
    if (idx > n) throw std::invalid_argument("omega index exceeds N");
    prev = idx;
  }
}

}  // namespace

double torus_distance(double a, double b) {
  double d = std::fabs(a - b);
  d -= std::floor(d);
  return std::min(d, 1.0 - d);
}

std::vector<double> FrequencySparseSignal::coefficients() const {
  std::vector<double> c(frequencies.size());
  for (int k = 0; k < num_components(); ++k) c[k] = amplitudes.row(k).norm();
  return c;
}

CMatrix FrequencySparseSignal::directions() const {
  CMatrix phi = amplitudes;
  for (int k = 0; k < num_components(); ++k) {
    double c = amplitudes.row(k).norm();
    if (c > 0) phi.row(k) /= c;
  }
  return phi;
}

void FrequencySparseSignal::validate() const {
  if (num_samples < 1) throw std::invalid_argument("N must be positive");
  if (num_snapshots < 1) throw std::invalid_argument("L must be positive");
  if (amplitudes.rows() != num_components() || amplitudes.cols() != num_snapshots)
    throw std::invalid_argument("amplitude matrix must be K x L");
  for (size_t j = 0; j < frequencies.size(); ++j) {
    double f = frequencies[j];
    if (!(f >= 0.0 && f < 1.0)) throw std::invalid_argument("frequency outside [0, 1)");
    for (size_t k = j + 1; k < frequencies.size(); ++k)
      if (frequencies[j] == frequencies[k]) throw std::invalid_argument("frequencies must be distinct");
  }
  for (int k = 0; k < num_components(); ++k)
    if (amplitudes.row(k).norm() == 0.0)
      throw std::invalid_argument("all-zero amplitude row");
}

void ObservationProblem::validate() const {
  if (num_samples < 1) throw std::invalid_argument("N must be positive");
  if (num_snapshots < 1) throw std::invalid_argument("L must be positive");
  check_omega(omega, num_samples);
  if (observed.rows() != sample_count() || observed.cols() != num_snapshots)
    throw std::invalid_argument("observed matrix must be M x L");
  if (!(noise_bound >= 0.0)) throw std::invalid_argument("eta must be nonnegative");
}

CVector steering_vector(double f, int n) {
  if (n < 1) throw std::invalid_argument("N must be positive");
  if (!(f >= 0.0 && f < 1.0)) throw std::domain_error("frequency outside [0, 1)");
  CVector a(n);
  for (int j = 0; j < n; ++j) a(j) = std::polar(1.0, kTwoPi * f * j);
  return a;
}

CVector steering_vector_sub(double f, const IndexList& omega) {
  if (!(f >= 0.0 && f < 1.0)) throw std::domain_error("frequency outside [0, 1)");
  CVector a(omega.size());
  for (size_t r = 0; r < omega.size(); ++r) a(r) = std::polar(1.0, kTwoPi * f * (omega[r] - 1));
  return a;
}

CMatrix synthesize(const FrequencySparseSignal& signal) {
  signal.validate();
  CMatrix y = CMatrix::Zero(signal.num_samples, signal.num_snapshots);
  for (int k = 0; k < signal.num_components(); ++k)
    y.noalias() += steering_vector(signal.frequencies[k], signal.num_samples) * signal.amplitudes.row(k);
  return y;
}

CMatrix sample(const CMatrix& y, const IndexList& omega) {
  check_omega(omega, static_cast<int>(y.rows()));
  CMatrix out(omega.size(), y.cols());
  for (size_t r = 0; r < omega.size(); ++r) out.row(r) = y.row(omega[r] - 1);
  return out;
}

NoisyObservation add_noise(const CMatrix& clean, double snr_db, std::mt19937_64& rng) {
  if (std::isinf(snr_db) && snr_db > 0) return {clean, 0.0};
  if (!std::isfinite(snr_db)) throw std::domain_error("snr_db must be finite or +inf");
  double signal_power = clean.squaredNorm() / static_cast<double>(clean.size());
  if (signal_power == 0.0) throw std::domain_error("SNR undefined for a zero matrix");
  double sigma2 = signal_power * std::pow(10.0, -snr_db / 10.0);
  double scale = std::sqrt(sigma2 / 2.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  CMatrix noisy = clean;
  double eta2 = 0.0;
  for (Eigen::Index i = 0; i < clean.rows(); ++i) {
    for (Eigen::Index j = 0; j < clean.cols(); ++j) {
      Complex e(scale * gauss(rng), scale * gauss(rng));
      noisy(i, j) += e;
      eta2 += std::norm(e);
    }
  }
  return {noisy, std::sqrt(eta2)};
}

RandomProblem random_problem(int n, int m, int k, int l, double min_sep, std::mt19937_64& rng) {
  if (k < 1) throw std::invalid_argument("K must be at least 1");
  if (m < 1 || m > n) throw std::invalid_argument("need 1 <= M <= N");
  if (l < 1) throw std::invalid_argument("L must be positive");
  if (min_sep < 0 || min_sep * k > 1.0)
    throw std::invalid_argument("min_sep * K must not exceed 1");

  // Uniform M-subset via partial Fisher-Yates, then sorted.
  std::vector<int> pool(n);
  for (int i = 0; i < n; ++i) pool[i] = i + 1;
  for (int i = 0; i < m; ++i) {
    std::uniform_int_distribution<int> pick(i, n - 1);
    std::swap(pool[i], pool[pick(rng)]);
  }
  IndexList omega(pool.begin(), pool.begin() + m);
  std::sort(omega.begin(), omega.end());

  constexpr int kRetryBudget = 10000;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> freqs;
  freqs.reserve(k);
  int attempts = 0;
  while (static_cast<int>(freqs.size()) < k) {
    if (++attempts > kRetryBudget)
      throw std::runtime_error("frequency rejection sampler exceeded retry budget; min_sep too tight");
    double f = unif(rng);
    if (f >= 1.0) continue;
    bool ok = true;
    for (double g : freqs)
      if (torus_distance(f, g) < min_sep) { ok = false; break; }
    if (ok) freqs.push_back(f);
  }

  std::normal_distribution<double> gauss(0.0, 1.0);
  CMatrix amps(k, l);
  std::uniform_real_distribution<double> phase(0.0, kTwoPi);
  for (int row = 0; row < k; ++row) {
    for (int col = 0; col < l; ++col) {
      double w = gauss(rng);
      amps(row, col) = std::polar(0.5 + w * w, phase(rng));
    }
  }

  FrequencySparseSignal signal{n, l, std::move(freqs), std::move(amps)};
  signal.validate();
  ObservationProblem problem{n, l, omega, sample(synthesize(signal), omega), 0.0};
  return {std::move(signal), std::move(problem)};
}

double relative_error(const CMatrix& estimate, const CMatrix& truth) {
  if (estimate.rows() != truth.rows() || estimate.cols() != truth.cols())
    throw std::invalid_argument("shape mismatch");
  double denom = truth.norm();
  if (denom == 0.0) throw std::domain_error("relative error undefined for zero truth");
  return (estimate - truth).norm() / denom;
}

}  // namespace ccs
