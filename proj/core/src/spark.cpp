#include "ccs/spark.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

namespace ccs {

namespace {

void check_omega(const IndexList& omega, int n) {
  if (omega.empty()) throw std::invalid_argument("omega must be nonempty");
  int prev = 0;
  for (int idx : omega) {
    if (idx <= prev) throw std::invalid_argument("omega must be strictly increasing and 1-based");
    if (n > 0 && idx > n) throw std::invalid_argument("omega index exceeds N");
    prev = idx;
  }
}

// gcd of all nonzero pairwise differences equals the gcd of the offsets to
// the smallest element; 0 when M = 1.
int anchor_gcd(const int* sorted, int m) {
  int g = 0;
  for (int i = 1; i < m; ++i) {
    g = std::gcd(g, sorted[i] - sorted[0]);
    if (g == 1) return 1;
  }
  return g;
}

}  // namespace

const char* to_string(SparkReason reason) {
  switch (reason) {
    case SparkReason::noncoprime_diffset: return "noncoprime_diffset";
    case SparkReason::consecutive_block: return "consecutive_block";
    case SparkReason::bounds_only: return "bounds_only";
  }
  return "unknown";
}

std::vector<int> difference_set(const IndexList& omega) {
  check_omega(omega, 0);
  std::set<int> diffs;
  for (size_t i = 0; i < omega.size(); ++i)
    for (size_t j = 0; j <= i; ++j) diffs.insert(omega[i] - omega[j]);
  return {diffs.begin(), diffs.end()};
}

SparkBounds spark_bounds(const IndexList& omega, int n) {
  check_omega(omega, n);
  int m = static_cast<int>(omega.size());
  SparkBounds out;
  out.upper = m + 1;

  if (omega.back() - omega.front() == m - 1) {
    out.lower = out.upper = m + 1;
    out.exact = m + 1;
    out.reason = SparkReason::consecutive_block;
    return out;
  }

  // Definition-faithful gcd over the nonzero difference set.
  int g = 0;
  for (int d : difference_set(omega))
    if (d != 0) g = std::gcd(g, d);
  if (g > 1) {
    out.lower = out.upper = 2;
    out.exact = 2;
    out.reason = SparkReason::noncoprime_diffset;
    return out;
  }

  out.lower = 3;  // coprime differences rule out 2
  out.reason = SparkReason::bounds_only;
  return out;
}

bool l0_certificate(int k, int spark_lower, int rank_obs) {
  if (k < 1 || spark_lower < 1 || rank_obs < 1)
    throw std::invalid_argument("arguments must be positive");
  return 2 * k < spark_lower - 1 + rank_obs;
}

MonteCarloEstimate noncoprime_probability(int n, int m, long trials, std::mt19937_64& rng) {
  if (trials < 1) throw std::invalid_argument("trials must be at least 1");
  if (m < 1 || m > n) throw std::invalid_argument("need 1 <= M <= N");

  std::vector<int> pool(n);
  std::vector<int> subset(m);
  long hits = 0;
  for (long t = 0; t < trials; ++t) {
    for (int i = 0; i < n; ++i) pool[i] = i + 1;
    for (int i = 0; i < m; ++i) {
      std::uniform_int_distribution<int> pick(i, n - 1);
      std::swap(pool[i], pool[pick(rng)]);
    }
    std::copy(pool.begin(), pool.begin() + m, subset.begin());
    std::sort(subset.begin(), subset.end());
    if (anchor_gcd(subset.data(), m) > 1) ++hits;
  }

  double p = static_cast<double>(hits) / static_cast<double>(trials);
  double std_err = std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
  return {p, std_err, trials};
}

}  // namespace ccs
