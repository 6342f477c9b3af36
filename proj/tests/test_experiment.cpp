#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <string>

#include "tvtomo/experiment.hpp"
#include "tvtomo/hash.hpp"
#include "tvtomo/io.hpp"
#include "tvtomo/linear_operator.hpp"
#include "tvtomo/objective.hpp"
#include "tvtomo/vec.hpp"

using namespace tvtomo;
using namespace tvtomo::bench;
namespace fs = std::filesystem;

namespace {

// Scratch area reset once per binary run.
const fs::path& scratch() {
  static const fs::path p = [] {
    fs::path d = fs::temp_directory_path() / "tvtomo_experiment_tests";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return p;
}

std::string write_file(const std::string& name, const std::string& content) {
  const fs::path p = scratch() / name;
  std::ofstream os(p, std::ios::binary);
  os << content;
  os.close();
  return p.string();
}

std::string read_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  REQUIRE(is.good());
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

// Small enough to solve in milliseconds, large enough to be a real problem.
tomo::ProblemSpec tiny_spec() {
  tomo::ProblemSpec s;
  s.m = s.n = s.l = 7;
  s.det_pixels = 9;
  s.n_proj = 13;
  s.noise = 0.01;
  s.seed = 1;
  return s;
}

}  // namespace

TEST_CASE("kv files: comments, blanks, whitespace") {
  const std::string path = write_file("a.cfg",
                                      "# leading comment\n"
                                      "\n"
                                      "  key1 = value with spaces  \n"
                                      "key2=v2   # trailing comment\n"
                                      "  \t \n"
                                      "key3 =\n");
  const auto kv = parse_kv_file(path);
  REQUIRE(kv.size() == 3);
  CHECK(kv.at("key1") == "value with spaces");
  CHECK(kv.at("key2") == "v2");
  CHECK(kv.at("key3") == "");

  CHECK_THROWS_AS((void)parse_kv_file(write_file("b.cfg", "no equals sign\n")),
                  std::runtime_error);
  CHECK_THROWS_AS((void)parse_kv_file(write_file("c.cfg", "= value\n")), std::runtime_error);
  CHECK_THROWS_AS((void)parse_kv_file((scratch() / "missing.cfg").string()), std::runtime_error);
}

TEST_CASE("split_csv trims and drops empties") {
  CHECK(split_csv("a, b ,,c") == std::vector<std::string>{"a", "b", "c"});
  CHECK(split_csv("").empty());
  CHECK(split_csv(" , ").empty());
}

TEST_CASE("config files layer over the defaults") {
  const std::string path = write_file("exp.cfg",
                                      "problem = T2-desk\n"
                                      "solvers = upn, gp\n"
                                      "alphas = 0.5, 1\n"
                                      "taus = 1e-3\n"
                                      "eps_bar = 1e-2\n"
                                      "max_iters = 123\n"
                                      "seed = 7\n"
                                      "out = somewhere\n"
                                      "reference = none\n"
                                      "wall_clock = off\n"
                                      "noise = 0.05\n");
  const ExperimentConfig cfg = ExperimentConfig::from_file(path);
  CHECK(cfg.problem == "T2-desk");
  CHECK(cfg.solvers == std::vector<Algorithm>{Algorithm::Upn, Algorithm::Gp});
  CHECK(cfg.alphas == std::vector<double>{0.5, 1.0});
  CHECK(cfg.taus == std::vector<double>{1e-3});
  CHECK(cfg.eps_bar == 1e-2);
  CHECK(cfg.max_iters == 123);
  CHECK(cfg.seed == 7);
  CHECK(cfg.out_dir == "somewhere");
  CHECK(cfg.reference == "none");
  CHECK_FALSE(cfg.wall_clock);
  REQUIRE(cfg.noise.has_value());
  CHECK(*cfg.noise == 0.05);

  ExperimentConfig defaults;
  defaults.apply({});  // no keys touched
  CHECK(defaults.problem == "T1-desk");
  CHECK(defaults.solvers.size() == 5);
  CHECK_FALSE(defaults.noise.has_value());

  ExperimentConfig c2;
  CHECK_THROWS_AS(c2.apply({{"nope", "1"}}), std::invalid_argument);
  CHECK_THROWS_AS(c2.apply({{"eps_bar", "fast"}}), std::invalid_argument);
  CHECK_THROWS_AS(c2.apply({{"max_iters", "-3"}}), std::invalid_argument);
  CHECK_THROWS_AS(c2.apply({{"wall_clock", "maybe"}}), std::invalid_argument);
  CHECK_THROWS_AS(c2.apply({{"solvers", "upn,frobnicate"}}), std::invalid_argument);
}

TEST_CASE("config validation rejects each bad field") {
  const ExperimentConfig good;
  good.validate();

  auto expect_throw = [](auto mutate) {
    ExperimentConfig c;
    mutate(c);
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  };
  expect_throw([](ExperimentConfig& c) { c.solvers.clear(); });
  expect_throw([](ExperimentConfig& c) { c.alphas.clear(); });
  expect_throw([](ExperimentConfig& c) { c.alphas = {-1.0}; });
  expect_throw([](ExperimentConfig& c) { c.taus.clear(); });
  expect_throw([](ExperimentConfig& c) { c.taus = {0.0}; });
  expect_throw([](ExperimentConfig& c) { c.eps_bar = 0.0; });
  expect_throw([](ExperimentConfig& c) { c.max_iters = 0; });
  expect_throw([](ExperimentConfig& c) { c.out_dir = ""; });
  expect_throw([](ExperimentConfig& c) { c.reference = ""; });
  expect_throw([](ExperimentConfig& c) { c.noise = -0.1; });
}

TEST_CASE("resolve_problem: presets, spec files, failure message") {
  const tomo::ProblemSpec p = resolve_problem("T2-desk", 11, std::nullopt);
  CHECK(p.m == 21);
  CHECK(p.n_proj == 13);
  CHECK(p.noise == 0.01);
  CHECK(p.seed == 11);

  const tomo::ProblemSpec q = resolve_problem("T2-desk", 11, 0.2);
  CHECK(q.noise == 0.2);

  const std::string file = write_file("prob.cfg",
                                      "m = 7\nn = 6\nl = 5\n"
                                      "det_pixels = 9\nn_proj = 13\nnoise = 0.03\n");
  const tomo::ProblemSpec f = resolve_problem(file, 3, std::nullopt);
  CHECK(f.m == 7);
  CHECK(f.n == 6);
  CHECK(f.l == 5);
  CHECK(f.det_pixels == 9);
  CHECK(f.n_proj == 13);
  CHECK(f.noise == 0.03);
  CHECK(f.seed == 3);

  const std::string partial = write_file("prob_bad.cfg", "m = 7\nn = 6\n");
  CHECK_THROWS_AS((void)resolve_problem(partial, 0, std::nullopt), std::invalid_argument);
  const std::string extra = write_file("prob_extra.cfg",
                                       "m=7\nn=6\nl=5\ndet_pixels=9\nn_proj=13\nwat=1\n");
  CHECK_THROWS_AS((void)resolve_problem(extra, 0, std::nullopt), std::invalid_argument);
  CHECK_THROWS_WITH_AS((void)resolve_problem("T9", 0, std::nullopt),
                       doctest::Contains("presets"), std::invalid_argument);
}

TEST_CASE("run labels are stable") {
  CHECK(run_label("T1-desk", 1.0, 1e-4, Algorithm::Upn) == "T1-desk_alpha1_tau0.0001_upn");
  CHECK(run_label("T2", 0.5, 1e-5, Algorithm::Gpbb) == "T2_alpha0.5_tau1e-05_gpbb");
  // A problem given as a spec-file path must still yield a usable file name.
  CHECK(run_label("/some/dir/p.cfg", 100.0, 0.001, Algorithm::Nesterov) ==
        "p_alpha100_tau0.001_nesterov");
  CHECK(problem_label("T1") == "T1");
  CHECK(problem_label("dir/tiny.cfg") == "tiny");
}

TEST_CASE("history csv golden") {
  RunRecord rec;
  rec.has_reference = true;
  rec.phi_star = 1.0;
  rec.wall_clock = false;
  HistoryRecord r0;
  r0.iter = 0;
  r0.phi = 2.0;
  r0.grad_map_norm = 0.25;
  r0.mu_k = 0.0;
  r0.L_k = 4.0;
  r0.restarts = 0;
  r0.fevals = 2;
  r0.gevals = 1;
  r0.wall_s = 123.0;  // must be suppressed when wall_clock is off
  HistoryRecord r1;
  r1.iter = 1;
  r1.phi = 1.0;  // exactly phi_star: rel_subopt sits on the floor
  r1.grad_map_norm = 0.125;
  r1.mu_k = 0.5;
  r1.L_k = 8.0;
  r1.restarts = 1;
  r1.fevals = 5;
  r1.gevals = 3;
  rec.history = {r0, r1};

  const std::string expected =
      "iter,phi,rel_subopt,grad_map_norm,mu_k,L_k,restarts,fevals,gevals,wall_s\n"
      "0,2,1,0.25,0,4,0,2,1,0\n"
      "1,1," + format_g17(kRelSuboptFloor) + ",0.125,0.5,8,1,5,3,0\n";
  CHECK(history_csv(rec) == expected);

  // Without a reference the column is nan; with wall_clock on, wall_s appears.
  rec.has_reference = false;
  rec.wall_clock = true;
  const std::string s = history_csv(rec);
  CHECK(s.find("0,2,nan,0.25,0,4,0,2,1,123\n") != std::string::npos);

  rec.has_reference = true;
  const std::string dat = history_dat(rec, "lbl");
  CHECK(dat == "# lbl\n# iter rel_subopt\n0 1\n1 " + format_g17(kRelSuboptFloor) + "\n");

  const std::string path = (scratch() / "h.csv").string();
  rec.wall_clock = false;
  rec.has_reference = true;
  emit_history_csv(rec, path);
  CHECK(read_file(path) == expected);
}

TEST_CASE("reference files round-trip bitwise") {
  Reference r;
  r.x = {0.5, -0.25, 1.0 / 3.0, 6.02214076e23, 1e-300};
  r.phi_star = 3.5e-7;
  r.eps_bar = 1e-7;
  r.converged = true;
  const std::string path = (scratch() / "ref.txt").string();
  write_reference(r, path);
  const Reference back = read_reference(path);
  CHECK(back.x == r.x);
  CHECK(back.phi_star == r.phi_star);
  CHECK(back.eps_bar == r.eps_bar);
  CHECK(back.converged == r.converged);

  CHECK_THROWS_AS((void)read_reference((scratch() / "no_ref.txt").string()), std::runtime_error);
  const std::string bad = write_file("ref_bad.txt", "phi 1\n");
  CHECK_THROWS_AS((void)read_reference(bad), std::runtime_error);
  const std::string trunc = write_file("ref_trunc.txt",
                                       "phi_star 1\neps_bar 1e-07\nconverged 1\nn 3\n0.5\n");
  CHECK_THROWS_AS((void)read_reference(trunc), std::runtime_error);
}

TEST_CASE("default solver config follows the operator norm estimate") {
  const tomo::TestProblem tp = tomo::make_test_problem(tiny_spec());
  const TvRegProblem p = tomo::make_tvreg_problem(tp, 0.5, 1e-2);
  const SolverConfig cfg = default_solver_config(p, 5);
  const SparseMatrixOperator op(p.a);
  CHECK(cfg.L_init == power_iter_norm_sq(op, kPowerIters, 5) / 10.0);
  CHECK(cfg.mu_init == cfg.L_init * 1e-1);
  CHECK(cfg.seed == 5);
  CHECK(cfg.L_init > 0.0);
}

TEST_CASE("problem content hash separates problems") {
  const tomo::TestProblem tp = tomo::make_test_problem(tiny_spec());
  const TvRegProblem p = tomo::make_tvreg_problem(tp, 0.5, 1e-2);
  const std::uint64_t h = problem_content_hash(p, 1e-6);
  CHECK(problem_content_hash(p, 1e-6) == h);  // deterministic
  CHECK(problem_content_hash(p, 1e-7) != h);  // tolerance is part of the key
  const TvRegProblem p2 = tomo::make_tvreg_problem(tp, 0.6, 1e-2);
  CHECK(problem_content_hash(p2, 1e-6) != h);
  TvRegProblem p3 = tomo::make_tvreg_problem(tp, 0.5, 1e-2);
  p3.b[0] += 1e-9;
  CHECK(problem_content_hash(p3, 1e-6) != h);
}

TEST_CASE("reference computation converges and caches") {
  const tomo::TestProblem tp = tomo::make_test_problem(tiny_spec());
  const TvRegProblem p = tomo::make_tvreg_problem(tp, 0.5, 1e-2);
  const std::string cache = (scratch() / "refcache").string();

  const Reference ref = compute_reference(p, 1e-1, tp.x0, cache);
  CHECK(ref.converged);
  CHECK(ref.eps_bar == 1e-1 * kRefTolFactor);
  CHECK(ref.x.size() == p.a.cols());
  // phi_star is the trajectory minimum, never above phi at the final iterate.
  CHECK(ref.phi_star <= phi_value(p, ref.x));
  CHECK(ref.phi_star == doctest::Approx(phi_value(p, ref.x)).epsilon(1e-6));
  CHECK(ref.phi_star > 0.0);

  std::size_t n_files = 0;
  for (const auto& e : fs::directory_iterator(cache)) {
    ++n_files;
    CHECK(e.path().filename().string().starts_with("ref_"));
  }
  CHECK(n_files == 1);

  // Second call is served from the cache, bit-identical after the text round-trip.
  const Reference again = compute_reference(p, 1e-1, tp.x0, cache);
  CHECK(again.x == ref.x);
  CHECK(again.phi_star == ref.phi_star);

  // A different tolerance is a different cache entry.
  (void)compute_reference(p, 1e-2, tp.x0, cache);
  n_files = 0;
  for (const auto& e : fs::directory_iterator(cache)) {
    (void)e;
    ++n_files;
  }
  CHECK(n_files == 2);
}

TEST_CASE("run_experiment writes a self-consistent, reproducible bundle") {
  const std::string prob = write_file("tiny.cfg",
                                      "m = 7\nn = 7\nl = 7\n"
                                      "det_pixels = 9\nn_proj = 13\nnoise = 0.01\n");
  ExperimentConfig cfg;
  cfg.problem = prob;
  cfg.solvers = {Algorithm::Gp, Algorithm::Upn};
  cfg.alphas = {0.5};
  cfg.taus = {1e-2};
  cfg.eps_bar = 1e-2;
  cfg.max_iters = 20000;
  cfg.seed = 1;
  cfg.wall_clock = false;
  cfg.out_dir = (scratch() / "out1").string();

  const std::vector<RunRecord> recs = run_experiment(cfg);
  REQUIRE(recs.size() == 2);
  for (const RunRecord& r : recs) {
    CHECK(r.reason != StopReason::MaxIters);
    CHECK(r.has_reference);
    CHECK(!r.history.empty());
    CHECK(all_finite(r.x_final));
    CHECK(r.wall_total == 0.0);
    // Everything the solver certified is at or below the requested tolerance.
    CHECK(r.history.back().grad_map_norm <= cfg.eps_bar);
    // phi_star is a tighter solve, so no run ends below it by more than noise.
    CHECK(r.history.back().phi >= r.phi_star * (1.0 - 1e-9));
  }

  // The per-run CSV on disk is exactly history_csv of the returned record.
  const std::string label0 = run_label(prob, 0.5, 1e-2, Algorithm::Gp);
  CHECK(read_file(cfg.out_dir + "/" + label0 + ".csv") == history_csv(recs[0]));

  // manifest.txt lists every emitted file with its content hash.
  const std::string manifest = read_file(cfg.out_dir + "/manifest.txt");
  std::istringstream ms(manifest);
  std::string name, hex;
  std::size_t listed = 0;
  bool saw_dat = false, saw_summary = false, saw_config = false;
  while (ms >> name >> hex) {
    ++listed;
    const std::string content = read_file(cfg.out_dir + "/" + name);
    CHECK(hash_hex(Fnv1a64().str(content).value()) == hex);
    if (name.ends_with(".dat")) saw_dat = true;
    if (name == "summary.csv") saw_summary = true;
    if (name == "config.txt") saw_config = true;
  }
  CHECK(listed == 6);  // 2 csv + 2 dat + summary + config
  CHECK(saw_dat);
  CHECK(saw_summary);
  CHECK(saw_config);
  CHECK(read_file(cfg.out_dir + "/config.txt").find("norm_A_sq_est=") != std::string::npos);

  // With wall clocks disabled a rerun reproduces every byte.
  ExperimentConfig cfg2 = cfg;
  cfg2.out_dir = (scratch() / "out2").string();
  (void)run_experiment(cfg2);
  CHECK(read_file(cfg2.out_dir + "/manifest.txt") == manifest);
  CHECK(read_file(cfg2.out_dir + "/" + label0 + ".csv") ==
        read_file(cfg.out_dir + "/" + label0 + ".csv"));

  // reference = none: no .dat files, nan suboptimality column.
  ExperimentConfig cfg3 = cfg;
  cfg3.out_dir = (scratch() / "out3").string();
  cfg3.reference = "none";
  cfg3.solvers = {Algorithm::Upn};
  const std::vector<RunRecord> r3 = run_experiment(cfg3);
  REQUIRE(r3.size() == 1);
  CHECK_FALSE(r3[0].has_reference);
  const std::string label3 = run_label(prob, 0.5, 1e-2, Algorithm::Upn);
  CHECK_FALSE(fs::exists(cfg3.out_dir + "/" + label3 + ".dat"));
  const std::string csv3 = read_file(cfg3.out_dir + "/" + label3 + ".csv");
  CHECK(csv3.find(",nan,") != std::string::npos);

  // An invalid grid is rejected before any work happens.
  ExperimentConfig bad = cfg;
  bad.taus = {};
  CHECK_THROWS_AS((void)run_experiment(bad), std::invalid_argument);
}
