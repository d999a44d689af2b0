#pragma once

#include "ccs/admm.hpp"
#include "ccs/decomposition.hpp"
#include "ccs/harness.hpp"
#include "ccs/signal_model.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

namespace ccs {

/// Problem file: observation plus optional ground truth, one JSON object with
/// fields {N, L, K, f, S, omega, observed, eta, seed}. Complex entries are
/// [re, im] pairs, matrices row-major lists of rows, omega 1-based.
struct ProblemBundle {
  ObservationProblem problem;
  std::optional<FrequencySparseSignal> signal;  // ground truth, if known
  std::uint64_t seed = 0;
};

std::string problem_to_json(const ProblemBundle& bundle);
ProblemBundle problem_from_json(const std::string& text);
void save_problem(const ProblemBundle& bundle, const std::filesystem::path& path);
ProblemBundle load_problem(const std::filesystem::path& path);

/// Solution file: converged blocks plus solve diagnostics. U is not stored;
/// it is implied by the structured blocks.
struct SolutionRecord {
  SolverSolution solution;
  std::string method = "anm";
  int n = 0, l = 0;
  IndexList omega;
  double eta = 0.0;
  int outer_iterations = 1;
  std::vector<double> surrogates;  // rwtm only
  std::vector<double> epsilons;    // rwtm only
};

std::string solution_to_json(const SolutionRecord& record);
SolutionRecord solution_from_json(const std::string& text);
void save_solution(const SolutionRecord& record, const std::filesystem::path& path);
SolutionRecord load_solution(const std::filesystem::path& path);

std::string decomposition_to_json(const AtomicDecomposition& decomposition);
AtomicDecomposition decomposition_from_json(const std::string& text);
void save_decomposition(const AtomicDecomposition& decomposition, const std::filesystem::path& path);
AtomicDecomposition load_decomposition(const std::filesystem::path& path);

/// Phase-transition trial records with the grid config snapshot.
std::string phase_records_to_json(const PhaseTransitionResult& result);
PhaseTransitionResult phase_records_from_json(const std::string& text);

/// DOA comparison records with scenario snapshot and convention metadata.
std::string doa_records_to_json(const DoaResult& result);

void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace ccs
