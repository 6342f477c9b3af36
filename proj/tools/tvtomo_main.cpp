#include "CLI11.hpp"

#include <cstdio>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tvtomo/experiment.hpp"
#include "tvtomo/io.hpp"
#include "tvtomo/solvers.hpp"
#include "tvtomo/tomo.hpp"
#include "tvtomo/volume.hpp"

namespace {

using namespace tvtomo;

void print_record(const bench::RunRecord& rec) {
  const std::string label = bench::run_label(rec.problem, rec.alpha, rec.tau, rec.algorithm);
  if (rec.history.empty()) {
    std::printf("%s: empty history\n", label.c_str());
    return;
  }
  const HistoryRecord& last = rec.history.back();
  std::printf("%s: %s after %zu iters, phi=%.10g, grad_map=%.4g", label.c_str(),
              to_string(rec.reason), last.iter, last.phi, last.grad_map_norm);
  if (rec.has_reference) std::printf(", gap=%.4g", last.phi - rec.phi_star);
  if (rec.wall_clock) std::printf(", wall=%.2fs", rec.wall_total);
  std::printf("\n");
}

int exit_code_for(const std::vector<bench::RunRecord>& recs) {
  for (const auto& r : recs)
    if (r.reason == StopReason::MaxIters) return 2;
  return 0;
}

// Shared CLI state for the solver-driving subcommands.
struct SolveArgs {
  std::string problem = "T1-desk";
  std::string algorithm = "upn";
  double alpha = 1.0;
  double tau = 1e-4;
  double eps_bar = 1e-3;
  std::size_t max_iters = 10000;
  std::uint64_t seed = 0;
  double noise = 0.0;
  bool has_noise = false;
  std::string out_dir = "runs";
  std::string reference = "compute";
  bool no_wall_clock = false;
  bool save_solution = false;
};

void add_problem_options(CLI::App* sub, SolveArgs& a, CLI::Option*& noise_opt) {
  sub->add_option("-p,--problem", a.problem, "preset name or path to a problem spec file");
  sub->add_option("--alpha", a.alpha, "TV regularization weight");
  sub->add_option("--tau", a.tau, "TV smoothing parameter");
  sub->add_option("-s,--seed", a.seed, "RNG seed for problem generation");
  noise_opt = sub->add_option("--noise", a.noise, "relative noise level override");
}

int run_solve(const SolveArgs& a) {
  bench::ExperimentConfig cfg;
  cfg.problem = a.problem;
  cfg.alphas = {a.alpha};
  cfg.taus = {a.tau};
  cfg.eps_bar = a.eps_bar;
  cfg.max_iters = a.max_iters;
  cfg.seed = a.seed;
  cfg.out_dir = a.out_dir;
  cfg.reference = a.reference;
  cfg.wall_clock = !a.no_wall_clock;
  if (a.has_noise) cfg.noise = a.noise;
  cfg.apply({{"solvers", a.algorithm}});
  cfg.validate();

  const auto recs = bench::run_experiment(cfg);
  for (const auto& rec : recs) print_record(rec);

  if (a.save_solution) {
    const auto spec = bench::resolve_problem(cfg.problem, cfg.seed, cfg.noise);
    Volume v(spec.m, spec.n, spec.l);
    v.data = recs.front().x_final;
    const std::string path =
        cfg.out_dir + "/" +
        bench::run_label(cfg.problem, a.alpha, a.tau, recs.front().algorithm) + "_x.raw";
    write_volume_raw(v, path);
    std::printf("solution: %s\n", path.c_str());
  }
  return exit_code_for(recs);
}

int run_reference(const SolveArgs& a, const std::string& out, const std::string& cache_dir) {
  const auto spec = bench::resolve_problem(a.problem, a.seed,
                                           a.has_noise ? std::optional<double>(a.noise)
                                                       : std::nullopt);
  const auto tp = tomo::make_test_problem(spec);
  const auto p = tomo::make_tvreg_problem(tp, a.alpha, a.tau);
  const auto ref = bench::compute_reference(p, a.eps_bar, tp.x0, cache_dir);
  if (!out.empty()) bench::write_reference(ref, out);
  std::printf("phi_star=%s eps_bar=%s converged=%d%s%s\n", format_g17(ref.phi_star).c_str(),
              format_g17(ref.eps_bar).c_str(), ref.converged ? 1 : 0,
              out.empty() ? "" : " -> ", out.c_str());
  return ref.converged ? 0 : 2;
}

int run_experiment_cmd(const std::string& config_path,
                       const std::map<std::string, std::string>& overrides) {
  bench::ExperimentConfig cfg;
  if (!config_path.empty()) cfg = bench::ExperimentConfig::from_file(config_path);
  cfg.apply(overrides);
  cfg.validate();
  const auto recs = bench::run_experiment(cfg);
  for (const auto& rec : recs) print_record(rec);
  std::printf("wrote %s/manifest.txt (%zu runs)\n", cfg.out_dir.c_str(), recs.size());
  return exit_code_for(recs);
}

int run_phantom(const std::vector<std::size_t>& dims, const std::string& out,
                const std::string& format) {
  const Volume v = tomo::shepp_logan_3d(dims[0], dims[1], dims[2]);
  const bool raw = format == "raw" || (format == "auto" && out.size() >= 4 &&
                                       out.compare(out.size() - 4, 4, ".raw") == 0);
  if (raw)
    write_volume_raw(v, out);
  else
    write_volume_text(v, out);
  std::printf("%zu x %zu x %zu phantom -> %s\n", v.m, v.n, v.l, out.c_str());
  return 0;
}

int run_matrix(const std::string& problem, std::uint64_t seed, const std::string& out,
               const std::string& directions_out) {
  const auto spec = bench::resolve_problem(problem, seed, std::nullopt);
  const auto geom = tomo::make_geometry(spec.n_proj, spec.det_pixels);
  const SparseMatrix a = tomo::build_system_matrix(geom, spec.m, spec.n, spec.l);
  write_matrix_market(a, out);
  if (!directions_out.empty()) write_directions(geom.directions, directions_out);
  std::printf("%zu x %zu matrix, %zu nonzeros -> %s\n", a.rows(), a.cols(), a.nnz(),
              out.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"matrix-free first-order solvers for box-constrained TV-regularized tomography"};
  app.require_subcommand(1);

  SolveArgs sa;
  CLI::Option* noise_opt = nullptr;

  auto* solve = app.add_subcommand("solve", "run one solver and write its iteration history");
  add_problem_options(solve, sa, noise_opt);
  solve->add_option("-a,--algorithm", sa.algorithm, "gp | gpbb | nesterov | upn | upn0");
  solve->add_option("-e,--eps-bar", sa.eps_bar, "gradient-map stopping tolerance");
  solve->add_option("-k,--max-iters", sa.max_iters, "iteration budget");
  solve->add_option("-o,--out", sa.out_dir, "output directory");
  solve->add_option("-r,--reference", sa.reference, "compute | none | path to a reference file");
  solve->add_flag("--save-solution", sa.save_solution, "write the final iterate as a raw volume");
  solve->add_flag("--no-wall-clock", sa.no_wall_clock, "write wall_s as 0 for byte-stable output");

  SolveArgs ra;
  CLI::Option* ref_noise_opt = nullptr;
  std::string ref_out;
  std::string ref_cache = "refcache";
  auto* reference = app.add_subcommand("reference", "compute a high-accuracy reference solution");
  add_problem_options(reference, ra, ref_noise_opt);
  reference->add_option("-e,--eps-bar", ra.eps_bar,
                        "target tolerance; the reference run tightens it by 1e-4");
  reference->add_option("-o,--out", ref_out, "path for the reference file");
  reference->add_option("--cache", ref_cache, "reference cache directory");

  std::string exp_config, exp_problem, exp_solvers, exp_alphas, exp_taus, exp_eps, exp_iters,
      exp_seed, exp_out, exp_reference, exp_noise;
  bool exp_no_wall = false;
  auto* experiment = app.add_subcommand("experiment", "run a solver grid and write a run bundle");
  experiment->add_option("-c,--config", exp_config, "key = value config file");
  auto* o_problem = experiment->add_option("-p,--problem", exp_problem, "preset or spec file");
  auto* o_solvers = experiment->add_option("--solvers", exp_solvers, "comma-separated list");
  auto* o_alphas = experiment->add_option("--alphas", exp_alphas, "comma-separated list");
  auto* o_taus = experiment->add_option("--taus", exp_taus, "comma-separated list");
  auto* o_eps = experiment->add_option("-e,--eps-bar", exp_eps, "stopping tolerance");
  auto* o_iters = experiment->add_option("-k,--max-iters", exp_iters, "iteration budget");
  auto* o_seed = experiment->add_option("-s,--seed", exp_seed, "RNG seed");
  auto* o_out = experiment->add_option("-o,--out", exp_out, "output directory");
  auto* o_reference =
      experiment->add_option("-r,--reference", exp_reference, "compute | none | path");
  auto* o_noise = experiment->add_option("--noise", exp_noise, "relative noise level override");
  experiment->add_flag("--no-wall-clock", exp_no_wall, "write wall_s as 0");

  std::vector<std::size_t> dims;
  std::string phantom_out;
  std::string phantom_format = "auto";
  auto* phantom = app.add_subcommand("phantom", "write the layered ellipsoid phantom volume");
  phantom->add_option("--dims", dims, "grid size m,n,l")
      ->required()
      ->expected(3)
      ->delimiter(',');
  phantom->add_option("-o,--out", phantom_out, "output path")->required();
  phantom->add_option("--format", phantom_format, "auto | text | raw")
      ->check(CLI::IsMember({"auto", "text", "raw"}));

  std::string mat_problem = "T1-desk";
  std::uint64_t mat_seed = 0;
  std::string mat_out, mat_directions;
  auto* matrix = app.add_subcommand("matrix", "build the projection matrix and write it");
  matrix->add_option("-p,--problem", mat_problem, "preset or spec file");
  matrix->add_option("-s,--seed", mat_seed, "RNG seed");
  matrix->add_option("-o,--out", mat_out, "Matrix Market output path")->required();
  matrix->add_option("--directions-out", mat_directions, "write projection directions here");

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) {
      sa.has_noise = noise_opt->count() > 0;
      return run_solve(sa);
    }
    if (reference->parsed()) {
      ra.has_noise = ref_noise_opt->count() > 0;
      return run_reference(ra, ref_out, ref_cache);
    }
    if (experiment->parsed()) {
      std::map<std::string, std::string> kv;
      if (o_problem->count() > 0) kv["problem"] = exp_problem;
      if (o_solvers->count() > 0) kv["solvers"] = exp_solvers;
      if (o_alphas->count() > 0) kv["alphas"] = exp_alphas;
      if (o_taus->count() > 0) kv["taus"] = exp_taus;
      if (o_eps->count() > 0) kv["eps_bar"] = exp_eps;
      if (o_iters->count() > 0) kv["max_iters"] = exp_iters;
      if (o_seed->count() > 0) kv["seed"] = exp_seed;
      if (o_out->count() > 0) kv["out"] = exp_out;
      if (o_reference->count() > 0) kv["reference"] = exp_reference;
      if (o_noise->count() > 0) kv["noise"] = exp_noise;
      if (exp_no_wall) kv["wall_clock"] = "false";
      return run_experiment_cmd(exp_config, kv);
    }
    if (phantom->parsed()) return run_phantom(dims, phantom_out, phantom_format);
    if (matrix->parsed()) return run_matrix(mat_problem, mat_seed, mat_out, mat_directions);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
