#pragma once

#include "ccs/types.hpp"

#include <optional>
#include <random>

namespace ccs {

enum class SparkReason {
  noncoprime_diffset,  // exact = 2: nonzero differences share a factor
  consecutive_block,   // exact = M + 1: omega is a run of consecutive integers
  bounds_only,         // only the range [lower, upper] is known
};

/// Spark of the sub-sampled steering dictionary: smallest number of linearly
/// dependent atoms. Exact only in the two decidable cases above.
struct SparkBounds {
  int lower = 2;
  int upper = 2;
  std::optional<int> exact;
  SparkReason reason = SparkReason::bounds_only;
};

const char* to_string(SparkReason reason);

/// {m1 - m2 : m1, m2 in omega, m1 >= m2}, sorted ascending. Always contains 0.
std::vector<int> difference_set(const IndexList& omega);

SparkBounds spark_bounds(const IndexList& omega, int n);

/// Sufficient condition for unique sparsest recovery: 2K < spark - 1 + rank.
/// Conservative (sound, not complete) when fed a spark lower bound.
bool l0_certificate(int k, int spark_lower, int rank_obs);

struct MonteCarloEstimate {
  double estimate = 0.0;
  double std_err = 0.0;
  long trials = 0;
};

/// Monte Carlo probability that a uniform M-subset of {1,...,N} has a
/// non-coprime nonzero difference set (the spark = 2 condition).
MonteCarloEstimate noncoprime_probability(int n, int m, long trials, std::mt19937_64& rng);

}  // namespace ccs
