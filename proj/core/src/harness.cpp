#include "ccs/harness.hpp"

#include "ccs/rng.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <thread>

namespace ccs {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double now_seconds() {
  return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch()).count();
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17e", v);
  return buf;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  return out;
}

// Rowwise group soft threshold: shrink each row's norm by tau.
void group_soft(CMatrix& v, double tau) {
  for (Eigen::Index g = 0; g < v.rows(); ++g) {
    double norm = v.row(g).norm();
    if (norm <= tau)
      v.row(g).setZero();
    else
      v.row(g) *= (1.0 - tau / norm);
  }
}

}  // namespace

const char* to_string(Method method) { return method == Method::anm ? "anm" : "rwtm"; }

double matched_frequency_error(const std::vector<double>& estimates,
                               const std::vector<double>& truth) {
  if (truth.empty()) return 0.0;
  if (estimates.empty()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (double t : truth) {
    double best = 1.0;
    for (double e : estimates) best = std::min(best, torus_distance(e, t));
    worst = std::max(worst, best);
  }
  return worst;
}

PhaseTransitionResult run_phase_transition(const PhaseTransitionGrid& grid, Method method,
                                           const RwtmConfig& solver, int threads) {
  if (grid.n < 1 || grid.l < 1) throw std::invalid_argument("invalid grid sizes");
  if (grid.m_values.empty() || grid.k_values.empty())
    throw std::invalid_argument("grid needs M and K values");
  if (grid.trials < 1) throw std::invalid_argument("need at least one trial per cell");
  double min_sep = grid.min_sep_factor / grid.n;
  for (int k : grid.k_values)
    if (k * min_sep > 1.0) throw std::invalid_argument("K * min_sep exceeds 1; grid infeasible");
  for (int m : grid.m_values)
    if (m < 1 || m > grid.n) throw std::invalid_argument("M outside {1,...,N}");

  struct Task {
    int mi, ki, trial;
  };
  std::vector<Task> tasks;
  for (int mi = 0; mi < static_cast<int>(grid.m_values.size()); ++mi)
    for (int ki = 0; ki < static_cast<int>(grid.k_values.size()); ++ki)
      for (int t = 0; t < grid.trials; ++t) tasks.push_back({mi, ki, t});

  std::vector<TrialRecord> records(tasks.size());
  std::atomic<size_t> cursor{0};

  auto run_task = [&](size_t ti) {
    const Task& task = tasks[ti];
    int m = grid.m_values[task.mi];
    int k = grid.k_values[task.ki];
    std::uint64_t cell = static_cast<std::uint64_t>(task.mi) * grid.k_values.size() + task.ki;
    std::uint64_t seed = mix_seed({grid.base_seed, cell, static_cast<std::uint64_t>(task.trial)});

    TrialRecord rec;
    rec.method = method;
    rec.n = grid.n;
    rec.l = grid.l;
    rec.m = m;
    rec.k = k;
    rec.trial = task.trial;
    rec.seed = seed;
    double t0 = now_seconds();
    try {
      auto rng = make_rng(seed);
      RandomProblem instance = random_problem(grid.n, m, k, grid.l, min_sep, rng);
      CMatrix truth = synthesize(instance.signal);

      SolverSolution sol;
      if (method == Method::anm) {
        sol = anm_complete(instance.problem, solver.inner);
      } else {
        RwtmResult res = rwtm(instance.problem, solver);
        sol = std::move(res.solution);
      }
      rec.iterations = sol.iterations;
      rec.converged = sol.converged;
      rec.relative_error = relative_error(sol.blocks.Y, truth);
      rec.success = rec.relative_error < grid.threshold;
      try {
        AtomicDecomposition dec = full_decomposition(sol);
        rec.freq_error = matched_frequency_error(dec.frequencies, instance.signal.frequencies);
      } catch (const std::exception&) {
        rec.freq_error = std::numeric_limits<double>::infinity();
      }
    } catch (const std::exception&) {
      rec.relative_error = std::numeric_limits<double>::infinity();
      rec.freq_error = std::numeric_limits<double>::infinity();
      rec.converged = false;
      rec.success = false;
    }
    rec.runtime_seconds = now_seconds() - t0;
    records[ti] = std::move(rec);
  };

  threads = std::clamp<int>(threads, 1, static_cast<int>(tasks.size()));
  if (threads <= 1) {
    for (size_t ti = 0; ti < tasks.size(); ++ti) run_task(ti);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int w = 0; w < threads; ++w)
      pool.emplace_back([&] {
        for (size_t ti = cursor.fetch_add(1); ti < tasks.size(); ti = cursor.fetch_add(1))
          run_task(ti);
      });
    for (auto& th : pool) th.join();
  }

  PhaseTransitionResult out;
  out.grid = grid;
  out.method = method;
  out.success = RMatrix::Zero(grid.m_values.size(), grid.k_values.size());
  for (size_t ti = 0; ti < tasks.size(); ++ti)
    if (records[ti].success) out.success(tasks[ti].mi, tasks[ti].ki) += 1.0;
  out.success /= static_cast<double>(grid.trials);
  out.records = std::move(records);
  return out;
}

DoaResult run_doa(const DoaScenario& scenario) {
  if (scenario.omega.empty()) throw std::invalid_argument("omega must be nonempty");
  if (scenario.frequencies.empty()) throw std::invalid_argument("need at least one source");
  if (scenario.frequencies.size() != scenario.powers.size())
    throw std::invalid_argument("frequencies and powers must align");
  for (double p : scenario.powers)
    if (!(p > 0)) throw std::invalid_argument("powers must be positive");

  const int n = scenario.n > 0 ? scenario.n : *std::max_element(scenario.omega.begin(), scenario.omega.end());
  const int k = static_cast<int>(scenario.frequencies.size());
  const int l = scenario.l;

  auto rng = make_rng({scenario.seed, 0xD0A5EEDULL});
  std::normal_distribution<double> gauss(0.0, 1.0);
  CMatrix amps(k, l);
  for (int row = 0; row < k; ++row) {
    double s = std::sqrt(scenario.powers[row] / 2.0);
    for (int col = 0; col < l; ++col) amps(row, col) = Complex(s * gauss(rng), s * gauss(rng));
  }
  FrequencySparseSignal signal{n, l, scenario.frequencies, std::move(amps)};
  signal.validate();

  CMatrix clean = sample(synthesize(signal), scenario.omega);
  NoisyObservation noisy = add_noise(clean, scenario.snr_db, rng);
  ObservationProblem problem{n, l, scenario.omega, noisy.noisy, noisy.eta};

  DoaResult out;
  out.scenario = scenario;
  out.realized_eta = noisy.eta;
  out.true_frequencies = scenario.frequencies;

  auto retrieve = [&](const SolverSolution& sol, DoaMethodResult& res) {
    AtomicDecomposition dec = full_decomposition(sol, scenario.rank_tol);
    res.frequencies = dec.frequencies;
    res.powers = dec.powers;
    res.iterations = sol.iterations;
    res.converged = sol.converged;
  };

  out.anm.method = "anm";
  {
    double t0 = now_seconds();
    try {
      retrieve(anm_complete(problem, scenario.solver.inner), out.anm);
    } catch (const std::exception& e) {
      out.anm.converged = false;
      out.anm.error = e.what();
    }
    out.anm.runtime_seconds = now_seconds() - t0;
  }

  out.rwtm.method = "rwtm";
  {
    double t0 = now_seconds();
    try {
      RwtmResult res = rwtm(problem, scenario.solver);
      retrieve(res.solution, out.rwtm);
    } catch (const std::exception& e) {
      out.rwtm.converged = false;
      out.rwtm.error = e.what();
    }
    out.rwtm.runtime_seconds = now_seconds() - t0;
  }

  out.music.method = "music";
  {
    double t0 = now_seconds();
    try {
      out.spectrum = music_spectrum(sample_covariance(noisy.noisy), scenario.omega, k,
                                    scenario.music_grid);
      PeakEstimate peaks = pick_peaks(out.spectrum, k);
      out.music.frequencies = peaks.frequencies;
      out.music.converged = !peaks.underdetermined;
    } catch (const std::exception& e) {
      out.music.converged = false;
      out.music.error = e.what();
    }
    out.music.runtime_seconds = now_seconds() - t0;
  }

  return out;
}

GridOracleResult grid_atomic_norm(const CMatrix& y, int grid_size, const GridOracleConfig& config) {
  const int n = static_cast<int>(y.rows());
  const int l = static_cast<int>(y.cols());
  if (n < 1 || l < 1) throw std::invalid_argument("Y must be nonempty");
  if (grid_size < 2 * n) throw std::invalid_argument("grid must have at least 2N points");

  double y_norm = y.norm();
  if (y_norm == 0.0) return {0.0, 0, true};

  // A(j, g) = e^{i 2 pi j g / G}; the uniform grid makes A A^H = G I, so the
  // affine projection onto {A c = Y} is a single correction step.
  CMatrix a(n, grid_size);
  for (int j = 0; j < n; ++j)
    for (int g = 0; g < grid_size; ++g) a(j, g) = std::polar(1.0, kTwoPi * j * g / grid_size);

  auto project = [&](const CMatrix& v) -> CMatrix {
    return v - a.adjoint() * ((a * v - y) / static_cast<double>(grid_size));
  };
  auto value_of = [](const CMatrix& v) {
    double acc = 0.0;
    for (Eigen::Index g = 0; g < v.rows(); ++g) acc += v.row(g).norm();
    return acc;
  };

  double rho = config.rho;
  if (!(rho > 0)) rho = 10.0 * std::sqrt(static_cast<double>(n)) / y_norm;

  constexpr double kRelax = 1.7;  // over-relaxation
  CMatrix z = CMatrix::Zero(grid_size, l);
  CMatrix dual = CMatrix::Zero(grid_size, l);
  CMatrix x = project(z);
  double last_value = value_of(x);
  GridOracleResult out;
  out.value = last_value;

  int stall_count = 0;
  for (int iter = 1; iter <= config.max_iters; ++iter) {
    x = project(z - dual);
    CMatrix z_old = std::move(z);
    CMatrix x_hat = kRelax * x + (1.0 - kRelax) * z_old;
    z = x_hat + dual;
    group_soft(z, 1.0 / rho);
    dual += x_hat - z;

    if (iter % config.check_every == 0) {
      double primal = (x - z).norm();
      double dual_res = rho * (z - z_old).norm();
      double value = value_of(x);
      out.value = value;
      out.iterations = iter;
      // x is feasible throughout, so a persistent stall of its objective is
      // the stopping signal; two consecutive windows guard against flukes.
      bool stalled = std::fabs(value - last_value) <= config.tol * std::max(1.0, value);
      stall_count = stalled ? stall_count + 1 : 0;
      if (stall_count >= 2 && iter >= 8 * config.check_every) {
        out.converged = true;
        return out;
      }
      last_value = value;
      // Residual balancing keeps the threshold 1/rho on the data's scale.
      if (primal > 10.0 * dual_res) {
        rho *= 2.0;
        dual /= 2.0;
      } else if (dual_res > 10.0 * primal) {
        rho /= 2.0;
        dual *= 2.0;
      }
    }
  }
  out.iterations = config.max_iters;
  out.value = value_of(x);
  out.converged = false;
  return out;
}

void emit_phase_plots(const PhaseTransitionResult& result, const std::filesystem::path& out_dir,
                      const std::string& prefix) {
  std::filesystem::create_directories(out_dir);
  const auto& grid = result.grid;

  // Per-cell aggregates in lexicographic (M, K) order.
  auto csv = open_out(out_dir / (prefix + "_matrix.csv"));
  csv << "M,K,success,trials,mean_relative_error,median_frequency_error\n";
  auto dat = open_out(out_dir / (prefix + "_phase.dat"));
  dat << "# M K success\n";
  for (size_t mi = 0; mi < grid.m_values.size(); ++mi) {
    for (size_t ki = 0; ki < grid.k_values.size(); ++ki) {
      std::vector<double> errs, freq_errs;
      for (const TrialRecord& rec : result.records) {
        if (rec.m == grid.m_values[mi] && rec.k == grid.k_values[ki]) {
          errs.push_back(rec.relative_error);
          freq_errs.push_back(rec.freq_error);
        }
      }
      double mean_err = 0.0;
      for (double e : errs) mean_err += e;
      if (!errs.empty()) mean_err /= errs.size();
      double median_freq = 0.0;
      if (!freq_errs.empty()) {
        std::sort(freq_errs.begin(), freq_errs.end());
        median_freq = freq_errs[freq_errs.size() / 2];
      }
      double frac = result.success(mi, ki);
      csv << grid.m_values[mi] << ',' << grid.k_values[ki] << ',' << fmt(frac) << ','
          << errs.size() << ',' << fmt(mean_err) << ',' << fmt(median_freq) << '\n';
      dat << grid.m_values[mi] << ' ' << grid.k_values[ki] << ' ' << fmt(frac) << '\n';
    }
    dat << '\n';  // gnuplot pm3d block separator
  }

  auto ref = open_out(out_dir / (prefix + "_reference.dat"));
  ref << "# M K  (K = (M + L) / 2)\n";
  for (int m : grid.m_values) ref << m << ' ' << fmt(0.5 * (m + grid.l)) << '\n';
}

void emit_doa_plots(const DoaResult& result, const std::filesystem::path& out_dir, double f_max) {
  std::filesystem::create_directories(out_dir);

  auto csv = open_out(out_dir / "music_spectrum.csv");
  csv << "f,pseudospectrum\n";
  auto mdat = open_out(out_dir / "doa_music.dat");
  mdat << "# f pseudospectrum\n";
  for (size_t g = 0; g < result.spectrum.grid.size(); ++g) {
    if (result.spectrum.grid[g] > f_max) continue;
    csv << fmt(result.spectrum.grid[g]) << ',' << fmt(result.spectrum.values[g]) << '\n';
    mdat << fmt(result.spectrum.grid[g]) << ' ' << fmt(result.spectrum.values[g]) << '\n';
  }

  auto stems = [&](const DoaMethodResult& res, const std::string& name) {
    auto dat = open_out(out_dir / ("doa_" + name + ".dat"));
    dat << "# f power\n";
    std::vector<size_t> order(res.frequencies.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
      return res.frequencies[a] < res.frequencies[b];
    });
    for (size_t i : order) {
      if (res.frequencies[i] > f_max) continue;
      double power = i < res.powers.size() ? res.powers[i] : 0.0;
      dat << fmt(res.frequencies[i]) << ' ' << fmt(power) << '\n';
    }
  };
  stems(result.anm, "anm");
  stems(result.rwtm, "rwtm");
}

}  // namespace ccs
