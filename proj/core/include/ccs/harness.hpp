#pragma once

#include "ccs/decomposition.hpp"
#include "ccs/music.hpp"
#include "ccs/relaxations.hpp"
#include "ccs/signal_model.hpp"

#include <cstdint>
#include <filesystem>
#include <string>

namespace ccs {

enum class Method { anm, rwtm };
const char* to_string(Method method);

struct PhaseTransitionGrid {
  int n = 32;
  int l = 1;
  std::vector<int> m_values;
  std::vector<int> k_values;
  int trials = 5;
  double threshold = 1e-6;       // success: relative error below this
  double min_sep_factor = 1.0;   // separation = factor / n
  std::uint64_t base_seed = 1;
};

struct TrialRecord {
  Method method = Method::anm;
  int n = 0, l = 0, m = 0, k = 0, trial = 0;
  std::uint64_t seed = 0;
  double relative_error = 0.0;
  double freq_error = 0.0;  // max over true frequencies of nearest-estimate torus distance
  int iterations = 0;
  bool converged = false;
  bool success = false;
  double runtime_seconds = 0.0;  // informative only; excluded from reproducibility
};

struct PhaseTransitionResult {
  PhaseTransitionGrid grid;
  Method method = Method::anm;
  RMatrix success;  // |m_values| x |k_values| success fraction
  std::vector<TrialRecord> records;
};

/// Runs trials for every (M, K) cell; each trial owns an RNG stream derived
/// from (base_seed, cell, trial) so serial and parallel runs agree.
PhaseTransitionResult run_phase_transition(const PhaseTransitionGrid& grid,
                                           Method method,
                                           const RwtmConfig& solver = {},
                                           int threads = 1);

struct DoaScenario {
  IndexList omega;
  std::vector<double> frequencies;
  std::vector<double> powers;   // per-source variance of the snapshots
  int l = 10;
  double snr_db = 14.2;
  std::uint64_t seed = 1;
  int n = 0;                    // 0: use max(omega)
  int music_grid = 4096;
  double rank_tol = 1e-6;
  RwtmConfig solver;
};

struct DoaMethodResult {
  std::string method;
  std::vector<double> frequencies;
  std::vector<double> powers;
  int iterations = 0;
  bool converged = true;
  double runtime_seconds = 0.0;
  std::string error;  // nonempty when the method failed
};

struct DoaResult {
  DoaScenario scenario;
  double realized_eta = 0.0;
  std::vector<double> true_frequencies;
  DoaMethodResult anm;
  DoaMethodResult rwtm;
  DoaMethodResult music;
  MusicSpectrum spectrum;
};

/// Same noisy data through ANM, RWTM (both with retrieval) and MUSIC.
DoaResult run_doa(const DoaScenario& scenario);

struct GridOracleConfig {
  int max_iters = 100000;
  double tol = 1e-9;       // relative stall of the feasible objective
  double rho = 0.0;        // 0: scale-derived default
  int check_every = 25;
};

struct GridOracleResult {
  double value = 0.0;  // feasible-point objective: upper bound on the grid optimum
  int iterations = 0;
  bool converged = false;
};

/// Independent discretized oracle: min sum_g ||c_g||_2 s.t. sum_g a(g/G) c_g = Y
/// by proximal splitting (group soft-thresholding + affine projection).
/// The value is an upper bound on ||Y||_A and tightens as G grows.
GridOracleResult grid_atomic_norm(const CMatrix& y, int grid_size,
                                  const GridOracleConfig& config = {});

/// Max over true frequencies of the torus distance to the nearest estimate.
/// Returns +inf when estimates are empty and truth is not.
double matched_frequency_error(const std::vector<double>& estimates,
                               const std::vector<double>& truth);

// ---- plot/data emission (gnuplot-ready, deterministic ordering) ----

/// <prefix>_phase.dat (M K success), <prefix>_matrix.csv, and the reference
/// line K = (M + L) / 2. Empty record sets produce header-only files.
void emit_phase_plots(const PhaseTransitionResult& result,
                      const std::filesystem::path& out_dir,
                      const std::string& prefix);

/// MUSIC pseudospectrum CSV plus one stem file per method, clipped to
/// [0, f_max].
void emit_doa_plots(const DoaResult& result,
                    const std::filesystem::path& out_dir,
                    double f_max = 1.0);

}  // namespace ccs
