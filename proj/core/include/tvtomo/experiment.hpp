#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tvtomo/solvers.hpp"
#include "tvtomo/tomo.hpp"

namespace tvtomo::bench {

// Key=value config file: '#' comments, blank lines ignored, keys below.
std::map<std::string, std::string> parse_kv_file(const std::string& path);
std::vector<std::string> split_csv(const std::string& s);

struct ExperimentConfig {
  std::string problem = "T1-desk";          // preset name or path to a problem spec file
  std::vector<Algorithm> solvers = {Algorithm::Gp, Algorithm::Gpbb, Algorithm::Nesterov,
                                    Algorithm::Upn, Algorithm::Upn0};
  std::vector<double> alphas = {1.0};
  std::vector<double> taus = {1e-4};
  double eps_bar = 1e-3;
  std::size_t max_iters = 10000;
  std::uint64_t seed = 0;
  std::string out_dir = "runs";
  std::string reference = "compute";  // compute | none | path to a reference file
  bool wall_clock = true;             // false writes wall_s as 0 for byte-stable outputs
  std::optional<double> noise;        // overrides the preset noise level

  // Parses a config file and applies it over the defaults; unknown keys are
  // errors. CLI layers its overrides on top of the returned value.
  static ExperimentConfig from_file(const std::string& path);
  void apply(const std::map<std::string, std::string>& kv);
  void validate() const;
};

struct RunRecord {
  std::string problem;
  Algorithm algorithm = Algorithm::Upn;
  double alpha = 0.0;
  double tau = 0.0;
  double eps_bar = 0.0;
  std::uint64_t seed = 0;
  double mu_init = 0.0;
  double L_init = 0.0;
  ConvergenceHistory history;
  StopReason reason = StopReason::MaxIters;
  double phi_star = 0.0;     // meaningful only when has_reference
  bool has_reference = false;
  bool wall_clock = true;
  double wall_total = 0.0;
  DenseVector x_final;
};

struct Reference {
  DenseVector x;
  double phi_star = 0.0;
  double eps_bar = 0.0;  // tolerance the reference run used
  bool converged = false;
};

// Pinned pipeline constants.
inline constexpr double kRefTolFactor = 1e-4;     // reference runs at eps_bar * this
inline constexpr std::size_t kRefMaxIters = 200000;
inline constexpr double kRelSuboptFloor = 1e-15;  // keeps log-scale plots finite
inline constexpr std::size_t kPowerIters = 100;

// Initial constants handed to the solvers: L_init is the power-iteration
// estimate of ||A||^2 divided by 10 (deliberately low; backtracking ramps
// up), mu_init = L_init / 10.
SolverConfig default_solver_config(const TvRegProblem& p, std::uint64_t seed);

// Content hash identifying (A, b, alpha, tau, eps) for the reference cache.
std::uint64_t problem_content_hash(const TvRegProblem& p, double eps);

// High-accuracy solve used as phi_star ground truth, cached on disk under
// cache_dir keyed by problem_content_hash. A cache hit is returned verbatim.
// converged = false means the run hit the iteration cap; the partial result
// is still returned (and not cached).
Reference compute_reference(const TvRegProblem& p, double eps_bar, const DenseVector& x0,
                            const std::string& cache_dir);

Reference read_reference(const std::string& path);
void write_reference(const Reference& r, const std::string& path);

// CSV with the pinned header
//   iter,phi,rel_subopt,grad_map_norm,mu_k,L_k,restarts,fevals,gevals,wall_s
// one row per produced iterate, %.17g numbers. rel_subopt is
// max((phi - phi_star)/phi_star, 1e-15), or nan without a reference.
std::string history_csv(const RunRecord& rec);
void emit_history_csv(const RunRecord& rec, const std::string& path);

// (k, rel_subopt) series for gnuplot.
std::string history_dat(const RunRecord& rec, const std::string& label);

// Runs the full grid (problem x alphas x taus x solvers), writes per-run CSV
// (and .dat when a reference exists), a config echo and manifest.txt with an
// FNV-1a content hash per emitted file.
std::vector<RunRecord> run_experiment(const ExperimentConfig& cfg);

// Resolves a preset name or spec file into a ProblemSpec (keys: m,n,l,
// det_pixels,n_proj,noise).
tomo::ProblemSpec resolve_problem(const std::string& name_or_path, std::uint64_t seed,
                                  std::optional<double> noise_override);

// Filesystem-safe problem tag: preset names pass through, paths keep the stem.
std::string problem_label(const std::string& name_or_path);
std::string run_label(const std::string& problem, double alpha, double tau, Algorithm algo);

}  // namespace tvtomo::bench
