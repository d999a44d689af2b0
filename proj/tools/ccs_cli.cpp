// Command-line front end: synthesis, solving, retrieval, baselines and the
// experiment harness, all reading/writing the JSON/CSV formats of the library.

#include "ccs/harness.hpp"
#include "ccs/relaxations.hpp"
#include "ccs/rng.hpp"
#include "ccs/serialize.hpp"
#include "ccs/spark.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <thread>

namespace {

using namespace ccs;

int effective_threads(int requested) {
  if (requested > 0) return requested;
  unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

std::filesystem::path in_dir(const std::string& out_dir, const std::string& name) {
  return out_dir.empty() ? std::filesystem::path(name) : std::filesystem::path(out_dir) / name;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gridless compressed sensing toolkit: atomic-norm and reweighted-trace "
               "recovery of frequency-sparse signals from partial samples"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Read option defaults from a TOML-style config file");
  app.get_config_formatter_base()->comment('#');

  std::uint64_t seed = 1;
  int threads = 0;
  std::string out_dir;
  app.add_option("--seed", seed, "Base RNG seed")->capture_default_str();
  app.add_option("--threads", threads, "Worker threads (0 = hardware)")->capture_default_str();
  app.add_option("--out-dir", out_dir, "Directory for output files");

  // ---- synth ----
  auto* synth = app.add_subcommand("synth", "Generate a random frequency-sparse problem");
  int sy_n = 32, sy_m = 0, sy_k = 3, sy_l = 1;
  double sy_min_sep = -1.0, sy_snr = std::numeric_limits<double>::infinity();
  std::string sy_out = "problem.json";
  synth->add_option("--n", sy_n, "Full sample count N")->capture_default_str();
  synth->add_option("--m", sy_m, "Observed sample count M (default N)");
  synth->add_option("--k", sy_k, "Number of sinusoids K")->capture_default_str();
  synth->add_option("--l", sy_l, "Snapshots L")->capture_default_str();
  synth->add_option("--min-sep", sy_min_sep, "Minimal torus separation (default 1/N)");
  synth->add_option("--snr-db", sy_snr, "SNR in dB (inf = noiseless)");
  synth->add_option("--out", sy_out, "Output problem JSON")->capture_default_str();

  // ---- solve ----
  auto* solve = app.add_subcommand("solve", "Complete a partially observed signal");
  std::string so_problem, so_method = "anm", so_out = "solution.json";
  double so_eta = -1.0, so_rho = 1.0, so_tol = 1e-5, so_eps_rel = 1e-2, so_eps_abs = 0.0;
  int so_max_iters = 50000, so_outer = 3;
  bool so_no_loose = false;
  solve->add_option("--problem", so_problem, "Problem JSON")->required();
  solve->add_option("--method", so_method, "anm or rwtm")
      ->check(CLI::IsMember({"anm", "rwtm"}))
      ->capture_default_str();
  solve->add_option("--eta", so_eta, "Noise bound override (default: from file)");
  solve->add_option("--rho", so_rho, "Initial ADMM penalty")->capture_default_str();
  solve->add_option("--max-iters", so_max_iters, "Iteration cap")->capture_default_str();
  solve->add_option("--tol", so_tol, "Residual tolerance")->capture_default_str();
  solve->add_option("--outer", so_outer, "Reweighting passes (rwtm)")->capture_default_str();
  solve->add_option("--epsilon-rel", so_eps_rel, "Reweighting epsilon relative to spectrum")
      ->capture_default_str();
  solve->add_option("--epsilon-abs", so_eps_abs, "Absolute reweighting epsilon (overrides relative)");
  solve->add_flag("--no-loose-early", so_no_loose, "Tight tolerance on every reweighting pass");
  solve->add_option("--out", so_out, "Output solution JSON")->capture_default_str();

  // ---- decompose ----
  auto* decompose = app.add_subcommand("decompose", "Frequency/amplitude retrieval from a solution");
  std::string de_solution, de_problem, de_out = "decomposition.json";
  double de_rank_tol = 1e-6;
  bool de_fit_observed = false;
  decompose->add_option("--solution", de_solution, "Solution JSON")->required();
  decompose->add_option("--problem", de_problem, "Problem JSON (for --fit-observed)");
  decompose->add_option("--rank-tol", de_rank_tol, "Relative rank threshold on T(u)")
      ->capture_default_str();
  decompose->add_flag("--fit-observed", de_fit_observed,
                      "Fit amplitudes on the observed rows instead of the completed signal");
  decompose->add_option("--out", de_out, "Output decomposition JSON")->capture_default_str();

  // ---- music ----
  auto* music = app.add_subcommand("music", "MUSIC pseudospectrum baseline");
  std::string mu_problem, mu_out = "spectrum.csv", mu_peaks;
  int mu_k = 0, mu_grid = 4096;
  music->add_option("--problem", mu_problem, "Problem JSON")->required();
  music->add_option("--k", mu_k, "Known source count")->required();
  music->add_option("--grid", mu_grid, "Grid size")->capture_default_str();
  music->add_option("--out", mu_out, "Output CSV (f, pseudospectrum)")->capture_default_str();
  music->add_option("--peaks-out", mu_peaks, "Optional peak-list JSON");

  // ---- spark ----
  auto* spark = app.add_subcommand("spark", "Spark bounds or the non-coprimality probability");
  IndexList sp_omega;
  int sp_n = 0, sp_m = 0;
  long sp_trials = 1000000;
  bool sp_monte_carlo = false;
  std::string sp_out;
  spark->add_option("--omega", sp_omega, "Sample indices, e.g. 1,3,5")->delimiter(',');
  spark->add_option("--n", sp_n, "Full sample count N")->required();
  spark->add_flag("--monte-carlo", sp_monte_carlo, "Estimate the spark-2 probability");
  spark->add_option("--m", sp_m, "Subset size for --monte-carlo");
  spark->add_option("--trials", sp_trials, "Monte Carlo trials")->capture_default_str();
  spark->add_option("--out", sp_out, "Output JSON (default: stdout)");

  // ---- phase-transition ----
  auto* phase = app.add_subcommand("phase-transition", "Success-rate study over the (M, K) plane");
  int ph_n = 32, ph_l = 1, ph_trials = 5;
  std::vector<int> ph_m, ph_k;
  double ph_threshold = 1e-6, ph_tol = 1e-7, ph_min_sep_factor = 1.0;
  int ph_max_iters = 50000;
  std::string ph_method = "both";
  phase->add_option("--n", ph_n, "Full sample count N")->capture_default_str();
  phase->add_option("--l", ph_l, "Snapshots L")->capture_default_str();
  phase->add_option("--m-values", ph_m, "M values, e.g. 8,12,16")->delimiter(',')->required();
  phase->add_option("--k-values", ph_k, "K values, e.g. 2,4,6")->delimiter(',')->required();
  phase->add_option("--trials", ph_trials, "Trials per cell")->capture_default_str();
  phase->add_option("--threshold", ph_threshold, "Relative-error success threshold")
      ->capture_default_str();
  phase->add_option("--tol", ph_tol, "Solver residual tolerance")->capture_default_str();
  phase->add_option("--max-iters", ph_max_iters, "Solver iteration cap")->capture_default_str();
  phase->add_option("--min-sep-factor", ph_min_sep_factor, "Separation = factor / N")
      ->capture_default_str();
  phase->add_option("--method", ph_method, "anm, rwtm or both")
      ->check(CLI::IsMember({"anm", "rwtm", "both"}))
      ->capture_default_str();

  // ---- doa ----
  auto* doa = app.add_subcommand("doa", "Sparse-array DOA comparison: ANM, RWTM, MUSIC");
  DoaScenario sc;
  sc.omega = {1, 2, 7, 11, 24, 27, 35, 42, 54, 56};
  sc.frequencies = {0.1, 0.106, 0.3};
  sc.powers = {1.0, 1.0, 0.25};
  double doa_tol = 1e-6, doa_fmax = 0.35;
  doa->add_option("--omega", sc.omega, "Array element positions")->delimiter(',')->capture_default_str();
  doa->add_option("--f", sc.frequencies, "True frequencies")->delimiter(',')->capture_default_str();
  doa->add_option("--powers", sc.powers, "Source powers")->delimiter(',')->capture_default_str();
  doa->add_option("--l", sc.l, "Snapshots L")->capture_default_str();
  doa->add_option("--snr-db", sc.snr_db, "SNR in dB")->capture_default_str();
  doa->add_option("--n", sc.n, "Aperture N (0 = max omega)");
  doa->add_option("--grid", sc.music_grid, "MUSIC grid size")->capture_default_str();
  doa->add_option("--rank-tol", sc.rank_tol, "Retrieval rank threshold")->capture_default_str();
  doa->add_option("--tol", doa_tol, "Solver residual tolerance")->capture_default_str();
  doa->add_option("--f-max", doa_fmax, "Clip emitted spectra to [0, f-max]")->capture_default_str();

  // ---- oracle ----
  auto* oracle = app.add_subcommand("oracle", "Grid-based atomic-norm oracle");
  std::string or_problem, or_out;
  int or_grid = 16384, or_max_iters = 100000;
  double or_tol = 1e-9;
  bool or_sdp = false;
  oracle->add_option("--problem", or_problem, "Problem JSON with ground truth or full observation")
      ->required();
  oracle->add_option("--grid", or_grid, "Grid size G")->capture_default_str();
  oracle->add_option("--max-iters", or_max_iters, "Iteration cap")->capture_default_str();
  oracle->add_option("--tol", or_tol, "Objective stall tolerance")->capture_default_str();
  oracle->add_flag("--sdp", or_sdp, "Also compute the SDP value and report the gap");
  oracle->add_option("--out", or_out, "Output JSON (default: stdout)");

  // Global flags may appear after the subcommand name.
  for (auto* sub : app.get_subcommands([](const CLI::App*) { return true; })) sub->fallthrough();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*synth) {
      if (sy_m <= 0) sy_m = sy_n;
      if (sy_min_sep < 0) sy_min_sep = 1.0 / sy_n;
      auto rng = make_rng({seed, 0x5157ULL});
      RandomProblem instance = random_problem(sy_n, sy_m, sy_k, sy_l, sy_min_sep, rng);
      if (std::isfinite(sy_snr)) {
        NoisyObservation noisy = add_noise(instance.problem.observed, sy_snr, rng);
        instance.problem.observed = std::move(noisy.noisy);
        instance.problem.noise_bound = noisy.eta;
      }
      save_problem({instance.problem, instance.signal, seed}, in_dir(out_dir, sy_out));
      std::cout << "wrote " << in_dir(out_dir, sy_out).string() << "\n";
    }

    if (*solve) {
      ProblemBundle bundle = load_problem(so_problem);
      if (so_eta >= 0) bundle.problem.noise_bound = so_eta;
      SolverConfig inner;
      inner.rho = so_rho;
      inner.max_iters = so_max_iters;
      inner.eps_abs = inner.eps_rel = so_tol;

      SolutionRecord record;
      record.method = so_method;
      record.n = bundle.problem.num_samples;
      record.l = bundle.problem.num_snapshots;
      record.omega = bundle.problem.omega;
      record.eta = bundle.problem.noise_bound;
      if (so_method == "anm") {
        record.solution = anm_complete(bundle.problem, inner);
      } else {
        RwtmConfig cfg;
        cfg.inner = inner;
        cfg.max_outer = so_outer;
        cfg.loose_early = !so_no_loose;
        if (so_eps_abs > 0) {
          cfg.epsilon_mode = EpsilonMode::absolute;
          cfg.epsilon_value = so_eps_abs;
        } else {
          cfg.epsilon_value = so_eps_rel;
        }
        RwtmResult res = rwtm(bundle.problem, cfg);
        record.solution = std::move(res.solution);
        record.outer_iterations = res.outer_iterations;
        record.surrogates = std::move(res.surrogates);
        record.epsilons = std::move(res.epsilons);
      }
      record.solution.dual.resize(0, 0);  // not part of the file format
      save_solution(record, in_dir(out_dir, so_out));
      std::printf("%s: objective %.12e, %d iterations, %s\n", so_method.c_str(),
                  record.solution.objective, record.solution.iterations,
                  record.solution.converged ? "converged" : "NOT converged");
      std::cout << "wrote " << in_dir(out_dir, so_out).string() << "\n";
    }

    if (*decompose) {
      SolutionRecord record = load_solution(de_solution);
      AtomicDecomposition dec;
      if (de_fit_observed) {
        if (de_problem.empty())
          throw std::runtime_error("--fit-observed requires --problem");
        ProblemBundle bundle = load_problem(de_problem);
        dec = full_decomposition(record.solution, de_rank_tol, &bundle.problem);
      } else {
        dec = full_decomposition(record.solution, de_rank_tol);
      }
      save_decomposition(dec, in_dir(out_dir, de_out));
      std::printf("%d component(s)\n", dec.size());
      for (int k = 0; k < dec.size(); ++k)
        std::printf("  f = %.9f  power = %.6e  c = %.6e\n", dec.frequencies[k], dec.powers[k],
                    dec.coefficients[k]);
      std::cout << "wrote " << in_dir(out_dir, de_out).string() << "\n";
    }

    if (*music) {
      ProblemBundle bundle = load_problem(mu_problem);
      MusicSpectrum spectrum = music_spectrum(sample_covariance(bundle.problem.observed),
                                              bundle.problem.omega, mu_k, mu_grid);
      std::string csv = "f,pseudospectrum\n";
      char line[96];
      for (size_t g = 0; g < spectrum.grid.size(); ++g) {
        std::snprintf(line, sizeof(line), "%.17e,%.17e\n", spectrum.grid[g], spectrum.values[g]);
        csv += line;
      }
      write_text_file(in_dir(out_dir, mu_out), csv);
      std::cout << "wrote " << in_dir(out_dir, mu_out).string() << "\n";
      if (!mu_peaks.empty() || mu_k > 0) {
        PeakEstimate peaks = pick_peaks(spectrum, mu_k);
        std::printf("peaks:");
        for (double f : peaks.frequencies) std::printf(" %.9f", f);
        if (peaks.underdetermined) std::printf("  (underdetermined)");
        std::printf("\n");
        if (!mu_peaks.empty()) {
          std::string text = "{\n  \"f\": [";
          for (size_t i = 0; i < peaks.frequencies.size(); ++i) {
            std::snprintf(line, sizeof(line), "%s%.17e", i ? ", " : "", peaks.frequencies[i]);
            text += line;
          }
          text += "],\n  \"underdetermined\": ";
          text += peaks.underdetermined ? "true" : "false";
          text += "\n}\n";
          write_text_file(in_dir(out_dir, mu_peaks), text);
          std::cout << "wrote " << in_dir(out_dir, mu_peaks).string() << "\n";
        }
      }
    }

    if (*spark) {
      std::string text;
      char line[160];
      if (sp_monte_carlo) {
        if (sp_m <= 0) throw std::runtime_error("--monte-carlo requires --m");
        auto rng = make_rng({seed, 0x5BA4ULL});
        MonteCarloEstimate est = noncoprime_probability(sp_n, sp_m, sp_trials, rng);
        std::snprintf(line, sizeof(line),
                      "{\n  \"estimate\": %.17e,\n  \"std_err\": %.17e,\n  \"trials\": %ld\n}\n",
                      est.estimate, est.std_err, est.trials);
        text = line;
      } else {
        if (sp_omega.empty()) throw std::runtime_error("need --omega (or --monte-carlo)");
        SparkBounds bounds = spark_bounds(sp_omega, sp_n);
        std::snprintf(line, sizeof(line), "{\n  \"lower\": %d,\n  \"upper\": %d,\n", bounds.lower,
                      bounds.upper);
        text = line;
        if (bounds.exact) {
          std::snprintf(line, sizeof(line), "  \"exact\": %d,\n", *bounds.exact);
          text += line;
        }
        std::snprintf(line, sizeof(line), "  \"reason\": \"%s\"\n}\n", to_string(bounds.reason));
        text += line;
      }
      if (sp_out.empty())
        std::cout << text;
      else {
        write_text_file(in_dir(out_dir, sp_out), text);
        std::cout << "wrote " << in_dir(out_dir, sp_out).string() << "\n";
      }
    }

    if (*phase) {
      PhaseTransitionGrid grid;
      grid.n = ph_n;
      grid.l = ph_l;
      grid.m_values = ph_m;
      grid.k_values = ph_k;
      grid.trials = ph_trials;
      grid.threshold = ph_threshold;
      grid.min_sep_factor = ph_min_sep_factor;
      grid.base_seed = seed;
      RwtmConfig solver;
      solver.inner.eps_abs = solver.inner.eps_rel = ph_tol;
      solver.inner.max_iters = ph_max_iters;

      std::vector<Method> methods;
      if (ph_method != "rwtm") methods.push_back(Method::anm);
      if (ph_method != "anm") methods.push_back(Method::rwtm);
      for (Method method : methods) {
        PhaseTransitionResult result =
            run_phase_transition(grid, method, solver, effective_threads(threads));
        std::string prefix = std::string(to_string(method)) + "_L" + std::to_string(ph_l);
        emit_phase_plots(result, out_dir.empty() ? "." : out_dir, prefix);
        write_text_file(in_dir(out_dir, prefix + "_records.json"), phase_records_to_json(result));
        double mean = result.success.mean();
        std::printf("%s: mean success %.3f over %ld cells\n", to_string(method), mean,
                    static_cast<long>(result.success.size()));
      }
    }

    if (*doa) {
      sc.seed = seed;
      sc.solver.inner.eps_abs = sc.solver.inner.eps_rel = doa_tol;
      DoaResult result = run_doa(sc);
      emit_doa_plots(result, out_dir.empty() ? "." : out_dir, doa_fmax);
      write_text_file(in_dir(out_dir, "doa_records.json"), doa_records_to_json(result));
      auto report = [](const DoaMethodResult& res) {
        std::printf("%-5s:", res.method.c_str());
        for (size_t i = 0; i < res.frequencies.size(); ++i) std::printf(" %.6f", res.frequencies[i]);
        if (!res.error.empty()) std::printf("  [error: %s]", res.error.c_str());
        std::printf("\n");
      };
      std::printf("eta = %.6f\n", result.realized_eta);
      report(result.anm);
      report(result.rwtm);
      report(result.music);
    }

    if (*oracle) {
      ProblemBundle bundle = load_problem(or_problem);
      CMatrix y;
      if (bundle.signal) {
        y = synthesize(*bundle.signal);
      } else if (bundle.problem.sample_count() == bundle.problem.num_samples) {
        y = bundle.problem.observed;
      } else {
        throw std::runtime_error("oracle needs ground truth or a fully observed problem");
      }
      GridOracleConfig cfg;
      cfg.max_iters = or_max_iters;
      cfg.tol = or_tol;
      GridOracleResult res = grid_atomic_norm(y, or_grid, cfg);
      std::string text;
      char line[256];
      std::snprintf(line, sizeof(line),
                    "{\n  \"grid\": %d,\n  \"value\": %.17e,\n  \"iterations\": %d,\n"
                    "  \"converged\": %s",
                    or_grid, res.value, res.iterations, res.converged ? "true" : "false");
      text = line;
      if (or_sdp) {
        SolverConfig cfg_sdp;
        cfg_sdp.eps_abs = cfg_sdp.eps_rel = 1e-7;
        double sdp = atomic_norm(y, cfg_sdp);
        std::snprintf(line, sizeof(line), ",\n  \"sdp\": %.17e,\n  \"gap\": %.17e", sdp,
                      res.value - sdp);
        text += line;
      }
      text += "\n}\n";
      if (or_out.empty())
        std::cout << text;
      else {
        write_text_file(in_dir(out_dir, or_out), text);
        std::cout << "wrote " << in_dir(out_dir, or_out).string() << "\n";
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
