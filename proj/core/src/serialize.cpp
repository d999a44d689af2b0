#include "ccs/serialize.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace ccs {

namespace {

using nlohmann::json;

json complex_to_json(const Complex& z) { return json::array({z.real(), z.imag()}); }

Complex complex_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2) throw std::runtime_error("complex entries must be [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

json matrix_to_json(const CMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(complex_to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

CMatrix matrix_from_json(const json& j, int expect_cols = -1) {
  if (!j.is_array()) throw std::runtime_error("matrix must be a list of rows");
  int rows = static_cast<int>(j.size());
  int cols = rows > 0 ? static_cast<int>(j[0].size()) : std::max(expect_cols, 0);
  CMatrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    if (static_cast<int>(j[i].size()) != cols) throw std::runtime_error("ragged matrix rows");
    for (int c = 0; c < cols; ++c) m(i, c) = complex_from_json(j[i][c]);
  }
  return m;
}

json vector_to_json(const CVector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v(i)));
  return out;
}

CVector vector_from_json(const json& j) {
  CVector v(j.size());
  for (size_t i = 0; i < j.size(); ++i) v(i) = complex_from_json(j[i]);
  return v;
}

json parse(const std::string& text) {
  json j = json::parse(text, nullptr, true, true);  // allow comments
  if (!j.is_object()) throw std::runtime_error("expected a JSON object");
  return j;
}

}  // namespace

std::string problem_to_json(const ProblemBundle& bundle) {
  bundle.problem.validate();
  json j;
  j["N"] = bundle.problem.num_samples;
  j["L"] = bundle.problem.num_snapshots;
  j["omega"] = bundle.problem.omega;
  j["observed"] = matrix_to_json(bundle.problem.observed);
  j["eta"] = bundle.problem.noise_bound;
  j["seed"] = bundle.seed;
  if (bundle.signal) {
    bundle.signal->validate();
    j["K"] = bundle.signal->num_components();
    j["f"] = bundle.signal->frequencies;
    j["S"] = matrix_to_json(bundle.signal->amplitudes);
  }
  return j.dump(2) + "\n";
}

ProblemBundle problem_from_json(const std::string& text) {
  json j = parse(text);
  ProblemBundle bundle;
  bundle.problem.num_samples = j.at("N").get<int>();
  bundle.problem.num_snapshots = j.at("L").get<int>();
  bundle.problem.omega = j.at("omega").get<IndexList>();
  bundle.problem.observed = matrix_from_json(j.at("observed"), bundle.problem.num_snapshots);
  bundle.problem.noise_bound = j.value("eta", 0.0);
  bundle.seed = j.value("seed", std::uint64_t{0});
  bundle.problem.validate();
  if (j.contains("f")) {
    FrequencySparseSignal signal;
    signal.num_samples = bundle.problem.num_samples;
    signal.num_snapshots = bundle.problem.num_snapshots;
    signal.frequencies = j.at("f").get<std::vector<double>>();
    signal.amplitudes = matrix_from_json(j.at("S"), signal.num_snapshots);
    signal.validate();
    bundle.signal = std::move(signal);
  }
  return bundle;
}

std::string solution_to_json(const SolutionRecord& record) {
  json j;
  j["method"] = record.method;
  j["N"] = record.n;
  j["L"] = record.l;
  j["omega"] = record.omega;
  j["eta"] = record.eta;
  j["W"] = matrix_to_json(record.solution.blocks.W);
  j["Y"] = matrix_to_json(record.solution.blocks.Y);
  j["u"] = vector_to_json(record.solution.blocks.u);
  j["objective"] = record.solution.objective;
  j["iterations"] = record.solution.iterations;
  j["primal_residual"] = record.solution.primal_residual;
  j["dual_residual"] = record.solution.dual_residual;
  j["converged"] = record.solution.converged;
  if (record.method == "rwtm") {
    j["outer_iterations"] = record.outer_iterations;
    j["surrogate_trace"] = record.surrogates;
    j["epsilon_trace"] = record.epsilons;
  }
  return j.dump(2) + "\n";
}

SolutionRecord solution_from_json(const std::string& text) {
  json j = parse(text);
  SolutionRecord record;
  record.method = j.value("method", std::string("anm"));
  record.n = j.at("N").get<int>();
  record.l = j.at("L").get<int>();
  if (j.contains("omega")) record.omega = j.at("omega").get<IndexList>();
  record.eta = j.value("eta", 0.0);
  record.solution.blocks.W = matrix_from_json(j.at("W"), record.l);
  record.solution.blocks.Y = matrix_from_json(j.at("Y"), record.l);
  record.solution.blocks.u = vector_from_json(j.at("u"));
  record.solution.objective = j.at("objective").get<double>();
  record.solution.iterations = j.at("iterations").get<int>();
  record.solution.primal_residual = j.value("primal_residual", 0.0);
  record.solution.dual_residual = j.value("dual_residual", 0.0);
  record.solution.converged = j.at("converged").get<bool>();
  record.outer_iterations = j.value("outer_iterations", 1);
  if (j.contains("surrogate_trace"))
    record.surrogates = j.at("surrogate_trace").get<std::vector<double>>();
  if (j.contains("epsilon_trace"))
    record.epsilons = j.at("epsilon_trace").get<std::vector<double>>();
  return record;
}

std::string decomposition_to_json(const AtomicDecomposition& decomposition) {
  json j;
  j["f"] = decomposition.frequencies;
  j["p"] = decomposition.powers;
  j["S"] = matrix_to_json(decomposition.amplitudes);
  j["c"] = decomposition.coefficients;
  return j.dump(2) + "\n";
}

AtomicDecomposition decomposition_from_json(const std::string& text) {
  json j = parse(text);
  AtomicDecomposition d;
  d.frequencies = j.at("f").get<std::vector<double>>();
  d.powers = j.at("p").get<std::vector<double>>();
  d.amplitudes = matrix_from_json(j.at("S"));
  d.coefficients = j.at("c").get<std::vector<double>>();
  d.directions = d.amplitudes;
  for (int k = 0; k < d.size(); ++k)
    if (d.coefficients[k] > 0) d.directions.row(k) /= d.coefficients[k];
  return d;
}

namespace {

// JSON has no infinity literal; failed trials carry +inf errors, stored as null.
json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double from_finite_or_null(const json& j) {
  return j.is_null() ? std::numeric_limits<double>::infinity() : j.get<double>();
}

json record_to_json(const TrialRecord& rec) {
  json j;
  j["method"] = to_string(rec.method);
  j["n"] = rec.n;
  j["l"] = rec.l;
  j["m"] = rec.m;
  j["k"] = rec.k;
  j["trial"] = rec.trial;
  j["seed"] = rec.seed;
  j["relative_error"] = finite_or_null(rec.relative_error);
  j["freq_error"] = finite_or_null(rec.freq_error);
  j["iterations"] = rec.iterations;
  j["converged"] = rec.converged;
  j["success"] = rec.success;
  j["runtime_seconds"] = rec.runtime_seconds;
  return j;
}

TrialRecord record_from_json(const json& j) {
  TrialRecord rec;
  rec.method = j.at("method").get<std::string>() == "rwtm" ? Method::rwtm : Method::anm;
  rec.n = j.at("n").get<int>();
  rec.l = j.at("l").get<int>();
  rec.m = j.at("m").get<int>();
  rec.k = j.at("k").get<int>();
  rec.trial = j.at("trial").get<int>();
  rec.seed = j.at("seed").get<std::uint64_t>();
  rec.relative_error = from_finite_or_null(j.at("relative_error"));
  rec.freq_error = from_finite_or_null(j.at("freq_error"));
  rec.iterations = j.at("iterations").get<int>();
  rec.converged = j.at("converged").get<bool>();
  rec.success = j.at("success").get<bool>();
  rec.runtime_seconds = j.value("runtime_seconds", 0.0);
  return rec;
}

}  // namespace

std::string phase_records_to_json(const PhaseTransitionResult& result) {
  json j;
  j["config"] = {
      {"n", result.grid.n},
      {"l", result.grid.l},
      {"m_values", result.grid.m_values},
      {"k_values", result.grid.k_values},
      {"trials", result.grid.trials},
      {"threshold", result.grid.threshold},
      {"min_sep_factor", result.grid.min_sep_factor},
      {"base_seed", result.grid.base_seed},
      {"method", to_string(result.method)},
  };
  json success = json::array();
  for (Eigen::Index mi = 0; mi < result.success.rows(); ++mi) {
    json row = json::array();
    for (Eigen::Index ki = 0; ki < result.success.cols(); ++ki) row.push_back(result.success(mi, ki));
    success.push_back(std::move(row));
  }
  j["success"] = std::move(success);
  json records = json::array();
  for (const TrialRecord& rec : result.records) records.push_back(record_to_json(rec));
  j["records"] = std::move(records);
  return j.dump(2) + "\n";
}

PhaseTransitionResult phase_records_from_json(const std::string& text) {
  json j = parse(text);
  PhaseTransitionResult result;
  const json& cfg = j.at("config");
  result.grid.n = cfg.at("n").get<int>();
  result.grid.l = cfg.at("l").get<int>();
  result.grid.m_values = cfg.at("m_values").get<std::vector<int>>();
  result.grid.k_values = cfg.at("k_values").get<std::vector<int>>();
  result.grid.trials = cfg.at("trials").get<int>();
  result.grid.threshold = cfg.at("threshold").get<double>();
  result.grid.min_sep_factor = cfg.value("min_sep_factor", 1.0);
  result.grid.base_seed = cfg.at("base_seed").get<std::uint64_t>();
  result.method = cfg.at("method").get<std::string>() == "rwtm" ? Method::rwtm : Method::anm;
  const json& success = j.at("success");
  result.success.resize(result.grid.m_values.size(), result.grid.k_values.size());
  for (size_t mi = 0; mi < success.size(); ++mi)
    for (size_t ki = 0; ki < success[mi].size(); ++ki)
      result.success(mi, ki) = success[mi][ki].get<double>();
  for (const json& rec : j.at("records")) result.records.push_back(record_from_json(rec));
  return result;
}

std::string doa_records_to_json(const DoaResult& result) {
  json j;
  j["scenario"] = {
      {"omega", result.scenario.omega},
      {"f", result.scenario.frequencies},
      {"powers", result.scenario.powers},
      {"L", result.scenario.l},
      {"snr_db", result.scenario.snr_db},
      {"seed", result.scenario.seed},
      {"N", result.scenario.n},
      {"music_grid", result.scenario.music_grid},
      {"rank_tol", result.scenario.rank_tol},
  };
  j["metadata"] = {
      {"snr_definition", "mean per-sample signal power over per-sample noise variance"},
      {"noise_model", "iid circular complex Gaussian"},
      {"eta", result.realized_eta},
      {"music_peak_rule", "K largest wrap-around local maxima, quadratic refinement"},
      {"pseudospectrum_cap", 1e12},
  };
  auto method_json = [](const DoaMethodResult& res) {
    json m;
    m["method"] = res.method;
    m["f"] = res.frequencies;
    m["powers"] = res.powers;
    m["iterations"] = res.iterations;
    m["converged"] = res.converged;
    m["runtime_seconds"] = res.runtime_seconds;
    if (!res.error.empty()) m["error"] = res.error;
    return m;
  };
  j["anm"] = method_json(result.anm);
  j["rwtm"] = method_json(result.rwtm);
  j["music"] = method_json(result.music);
  return j.dump(2) + "\n";
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out << text;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void save_problem(const ProblemBundle& bundle, const std::filesystem::path& path) {
  write_text_file(path, problem_to_json(bundle));
}

ProblemBundle load_problem(const std::filesystem::path& path) {
  return problem_from_json(read_text_file(path));
}

void save_solution(const SolutionRecord& record, const std::filesystem::path& path) {
  write_text_file(path, solution_to_json(record));
}

SolutionRecord load_solution(const std::filesystem::path& path) {
  return solution_from_json(read_text_file(path));
}

void save_decomposition(const AtomicDecomposition& decomposition, const std::filesystem::path& path) {
  write_text_file(path, decomposition_to_json(decomposition));
}

AtomicDecomposition load_decomposition(const std::filesystem::path& path) {
  return decomposition_from_json(read_text_file(path));
}

}  // namespace ccs
