#include "tvtomo/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "tvtomo/hash.hpp"
#include "tvtomo/io.hpp"
#include "tvtomo/linear_operator.hpp"

namespace tvtomo::bench {

namespace fs = std::filesystem;

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing characters");
    return d;
  } catch (const std::exception&) {
    throw std::invalid_argument("config: bad number for " + key + ": '" + v + "'");
  }
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
  try {
    // stoull would silently wrap "-3" around; reject signs up front.
    if (v.find('-') != std::string::npos) throw std::invalid_argument("negative");
    std::size_t pos = 0;
    const unsigned long long u = std::stoull(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing characters");
    return u;
  } catch (const std::exception&) {
    throw std::invalid_argument("config: bad integer for " + key + ": '" + v + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  throw std::invalid_argument("config: bad boolean for " + key + ": '" + v + "'");
}

std::string format_g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  os.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!os) throw std::runtime_error("write failed: " + path);
}

}  // namespace

std::map<std::string, std::string> parse_kv_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open config: " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected key=value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw std::runtime_error(path + ":" + std::to_string(lineno) + ": empty key");
    kv[key] = value;
  }
  return kv;
}

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream ss(s);
  while (std::getline(ss, cur, ',')) {
    cur = trim(cur);
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
  ExperimentConfig cfg;
  cfg.apply(parse_kv_file(path));
  return cfg;
}

void ExperimentConfig::apply(const std::map<std::string, std::string>& kv) {
  for (const auto& [key, value] : kv) {
    if (key == "problem") {
      problem = value;
    } else if (key == "solvers") {
      solvers.clear();
      for (const std::string& s : split_csv(value)) solvers.push_back(algorithm_from_string(s));
    } else if (key == "alphas") {
      alphas.clear();
      for (const std::string& s : split_csv(value)) alphas.push_back(parse_double(key, s));
    } else if (key == "taus") {
      taus.clear();
      for (const std::string& s : split_csv(value)) taus.push_back(parse_double(key, s));
    } else if (key == "eps_bar") {
      eps_bar = parse_double(key, value);
    } else if (key == "max_iters") {
      max_iters = parse_u64(key, value);
    } else if (key == "seed") {
      seed = parse_u64(key, value);
    } else if (key == "out") {
      out_dir = value;
    } else if (key == "reference") {
      reference = value;
    } else if (key == "wall_clock") {
      wall_clock = parse_bool(key, value);
    } else if (key == "noise") {
      noise = parse_double(key, value);
    } else {
      throw std::invalid_argument("config: unknown key '" + key + "'");
    }
  }
}

void ExperimentConfig::validate() const {
  if (solvers.empty()) throw std::invalid_argument("config: solver list is empty");
  if (alphas.empty()) throw std::invalid_argument("config: alphas is empty");
  if (taus.empty()) throw std::invalid_argument("config: taus is empty");
  for (double a : alphas)
    if (a < 0.0) throw std::invalid_argument("config: alpha must be nonnegative");
  for (double t : taus)
    if (!(t > 0.0)) throw std::invalid_argument("config: tau must be positive");
  if (!(eps_bar > 0.0)) throw std::invalid_argument("config: eps_bar must be positive");
  if (max_iters == 0) throw std::invalid_argument("config: max_iters must be positive");
  if (out_dir.empty()) throw std::invalid_argument("config: out directory is empty");
  if (reference.empty()) throw std::invalid_argument("config: reference policy is empty");
  if (noise && *noise < 0.0) throw std::invalid_argument("config: noise must be nonnegative");
}

SolverConfig default_solver_config(const TvRegProblem& p, std::uint64_t seed) {
  const SparseMatrixOperator op(p.a);
  SolverConfig cfg;
  cfg.L_init = power_iter_norm_sq(op, kPowerIters, seed) / 10.0;
  if (cfg.L_init <= 0.0) cfg.L_init = 1.0;
  cfg.mu_init = cfg.L_init * 1e-1;
  cfg.seed = seed;
  return cfg;
}

std::uint64_t problem_content_hash(const TvRegProblem& p, double eps) {
  Fnv1a64 h;
  h.u64(p.a.rows()).u64(p.a.cols());
  for (std::size_t o : p.a.row_offsets()) h.u64(o);
  for (std::uint32_t c : p.a.col_indices()) h.u64(c);
  h.f64s(p.a.values());
  h.f64s(p.b);
  h.f64(p.alpha).f64(p.tau);
  h.u64(p.diff.m()).u64(p.diff.n()).u64(p.diff.l());
  h.f64(eps);
  return h.value();
}

void write_reference(const Reference& r, const std::string& path) {
  std::string s;
  s += "phi_star " + format_g17(r.phi_star) + "\n";
  s += "eps_bar " + format_g17(r.eps_bar) + "\n";
  s += "converged " + std::string(r.converged ? "1" : "0") + "\n";
  s += "n " + std::to_string(r.x.size()) + "\n";
  for (double v : r.x) s += format_g17(v) + "\n";
  write_text(path, s);
}

Reference read_reference(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open reference: " + path);
  Reference r;
  std::string key;
  std::size_t n = 0;
  int conv = 0;
  if (!(is >> key >> r.phi_star) || key != "phi_star")
    throw std::runtime_error("reference: bad phi_star line in " + path);
  if (!(is >> key >> r.eps_bar) || key != "eps_bar")
    throw std::runtime_error("reference: bad eps_bar line in " + path);
  if (!(is >> key >> conv) || key != "converged")
    throw std::runtime_error("reference: bad converged line in " + path);
  if (!(is >> key >> n) || key != "n") throw std::runtime_error("reference: bad size line in " + path);
  r.converged = conv != 0;
  r.x.resize(n);
  for (double& v : r.x)
    if (!(is >> v)) throw std::runtime_error("reference: truncated values in " + path);
  return r;
}

Reference compute_reference(const TvRegProblem& p, double eps_bar, const DenseVector& x0,
                            const std::string& cache_dir) {
  const double eps_ref = eps_bar * kRefTolFactor;
  fs::create_directories(cache_dir);
  const std::string path =
      cache_dir + "/ref_" + hash_hex(problem_content_hash(p, eps_ref)) + ".txt";
  if (fs::exists(path)) return read_reference(path);

  SolverConfig cfg = default_solver_config(p, 0);
  cfg.algorithm = Algorithm::Upn0;
  cfg.eps_bar = eps_ref;
  cfg.max_iters = kRefMaxIters;
  const TvRegObjective obj(p);
  SolverResult res = upn0_solve(obj, cfg, x0);

  Reference ref;
  ref.x = std::move(res.x);
  // The momentum iteration is not monotone: late iterates oscillate around
  // the optimum at the scale of the termination tolerance, and on badly
  // conditioned problems the estimated-mu variant can freeze its momentum
  // schedule and orbit. The mu = 0 variant settles deeper, and the trajectory
  // minimum of phi is a tighter, more stable value than phi at the final
  // iterate.
  ref.phi_star = phi_value(p, ref.x);
  for (const HistoryRecord& r : res.history) ref.phi_star = std::min(ref.phi_star, r.phi);
  ref.eps_bar = eps_ref;
  ref.converged = res.reason != StopReason::MaxIters;
  if (ref.converged) write_reference(ref, path);
  return ref;
}

std::string history_csv(const RunRecord& rec) {
  std::string s = "iter,phi,rel_subopt,grad_map_norm,mu_k,L_k,restarts,fevals,gevals,wall_s\n";
  char buf[400];
  for (const HistoryRecord& r : rec.history) {
    double rel = std::numeric_limits<double>::quiet_NaN();
    if (rec.has_reference) rel = std::max((r.phi - rec.phi_star) / rec.phi_star, kRelSuboptFloor);
    const double wall = rec.wall_clock ? r.wall_s : 0.0;
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g,%.17g,%.17g,%zu,%zu,%zu,%.17g\n", r.iter,
                  r.phi, rel, r.grad_map_norm, r.mu_k, r.L_k, r.restarts, r.fevals, r.gevals, wall);
    s += buf;
  }
  return s;
}

void emit_history_csv(const RunRecord& rec, const std::string& path) {
  write_text(path, history_csv(rec));
}

std::string history_dat(const RunRecord& rec, const std::string& label) {
  std::string s = "# " + label + "\n# iter rel_subopt\n";
  char buf[80];
  for (const HistoryRecord& r : rec.history) {
    const double rel = std::max((r.phi - rec.phi_star) / rec.phi_star, kRelSuboptFloor);
    std::snprintf(buf, sizeof buf, "%zu %.17g\n", r.iter, rel);
    s += buf;
  }
  return s;
}

tomo::ProblemSpec resolve_problem(const std::string& name_or_path, std::uint64_t seed,
                                  std::optional<double> noise_override) {
  tomo::ProblemSpec spec;
  if (auto p = tomo::preset(name_or_path)) {
    spec = *p;
  } else if (fs::exists(name_or_path)) {
    const auto kv = parse_kv_file(name_or_path);
    auto need = [&](const char* key) -> std::string {
      const auto it = kv.find(key);
      if (it == kv.end())
        throw std::invalid_argument("problem file " + name_or_path + ": missing key '" + key + "'");
      return it->second;
    };
    spec.m = parse_u64("m", need("m"));
    spec.n = parse_u64("n", need("n"));
    spec.l = parse_u64("l", need("l"));
    spec.det_pixels = parse_u64("det_pixels", need("det_pixels"));
    spec.n_proj = parse_u64("n_proj", need("n_proj"));
    if (const auto it = kv.find("noise"); it != kv.end()) spec.noise = parse_double("noise", it->second);
    for (const auto& [key, value] : kv) {
      (void)value;
      if (key != "m" && key != "n" && key != "l" && key != "det_pixels" && key != "n_proj" &&
          key != "noise")
        throw std::invalid_argument("problem file " + name_or_path + ": unknown key '" + key + "'");
    }
  } else {
    std::string names;
    for (const auto& n : tomo::preset_names()) names += (names.empty() ? "" : ", ") + n;
    throw std::invalid_argument("unknown problem '" + name_or_path + "' (presets: " + names +
                                "; or pass a problem spec file)");
  }
  if (noise_override) spec.noise = *noise_override;
  spec.seed = seed;
  return spec;
}

std::string problem_label(const std::string& name_or_path) {
  if (tomo::preset(name_or_path)) return name_or_path;
  return fs::path(name_or_path).stem().string();
}

std::string run_label(const std::string& problem, double alpha, double tau, Algorithm algo) {
  return problem_label(problem) + "_alpha" + format_g(alpha) + "_tau" + format_g(tau) + "_" +
         to_string(algo);
}

std::vector<RunRecord> run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  fs::create_directories(cfg.out_dir);
  const tomo::ProblemSpec spec = resolve_problem(cfg.problem, cfg.seed, cfg.noise);
  const tomo::TestProblem tp = tomo::make_test_problem(spec);

  const SparseMatrixOperator aop(tp.a);
  const double norm_a_est = power_iter_norm_sq(aop, kPowerIters, cfg.seed);

  std::vector<std::pair<std::string, std::string>> outputs;  // (filename, content)
  std::vector<RunRecord> records;
  std::string summary =
      "label,stop_reason,iters,restarts,fevals,gevals,phi_final,wall_s\n";

  for (double alpha : cfg.alphas) {
    for (double tau : cfg.taus) {
      const TvRegProblem prob = tomo::make_tvreg_problem(tp, alpha, tau);
      const TvRegObjective obj(prob);

      Reference ref;
      bool has_ref = false;
      if (cfg.reference == "compute") {
        ref = compute_reference(prob, cfg.eps_bar, tp.x0, cfg.out_dir + "/refcache");
        has_ref = true;
      } else if (cfg.reference != "none") {
        ref = read_reference(cfg.reference);
        has_ref = true;
      }

      for (Algorithm algo : cfg.solvers) {
        SolverConfig sc;
        sc.algorithm = algo;
        sc.eps_bar = cfg.eps_bar;
        sc.max_iters = cfg.max_iters;
        sc.seed = cfg.seed;
        sc.L_init = norm_a_est / 10.0;
        if (sc.L_init <= 0.0) sc.L_init = 1.0;
        sc.mu_init = sc.L_init * 1e-1;
        if (algo == Algorithm::Nesterov) {
          // No trustworthy strong-convexity constant is available here, so
          // run with mu = 0 and a padded upper bound on the true L (the
          // power estimate approaches ||A||^2 from below).
          sc.mu_init = 0.0;
          sc.L_init = 1.05 * (norm_a_est + alpha * 12.0 / tau);
        }

        SolverResult res = solve(obj, sc, tp.x0);

        RunRecord rec;
        rec.problem = cfg.problem;
        rec.algorithm = algo;
        rec.alpha = alpha;
        rec.tau = tau;
        rec.eps_bar = cfg.eps_bar;
        rec.seed = cfg.seed;
        rec.mu_init = sc.mu_init;
        rec.L_init = sc.L_init;
        rec.history = std::move(res.history);
        rec.reason = res.reason;
        rec.phi_star = ref.phi_star;
        rec.has_reference = has_ref;
        rec.wall_clock = cfg.wall_clock;
        rec.wall_total =
            (cfg.wall_clock && !rec.history.empty()) ? rec.history.back().wall_s : 0.0;
        rec.x_final = std::move(res.x);

        const std::string label = run_label(cfg.problem, alpha, tau, algo);
        outputs.emplace_back(label + ".csv", history_csv(rec));
        if (has_ref) outputs.emplace_back(label + ".dat", history_dat(rec, label));

        char line[400];
        std::snprintf(line, sizeof line, "%s,%s,%zu,%zu,%zu,%zu,%.17g,%.17g\n", label.c_str(),
                      to_string(rec.reason), rec.history.empty() ? 0 : rec.history.back().iter,
                      rec.history.empty() ? 0 : rec.history.back().restarts,
                      rec.history.empty() ? 0 : rec.history.back().fevals,
                      rec.history.empty() ? 0 : rec.history.back().gevals,
                      rec.history.empty() ? 0.0 : rec.history.back().phi, rec.wall_total);
        summary += line;
        records.push_back(std::move(rec));
      }
    }
  }

  outputs.emplace_back("summary.csv", summary);

  std::string echo;
  echo += "problem=" + cfg.problem + "\n";
  std::string solver_list;
  for (Algorithm a : cfg.solvers) solver_list += (solver_list.empty() ? "" : ",") + std::string(to_string(a));
  echo += "solvers=" + solver_list + "\n";
  std::string alpha_list;
  for (double a : cfg.alphas) alpha_list += (alpha_list.empty() ? "" : ",") + format_g(a);
  echo += "alphas=" + alpha_list + "\n";
  std::string tau_list;
  for (double t : cfg.taus) tau_list += (tau_list.empty() ? "" : ",") + format_g(t);
  echo += "taus=" + tau_list + "\n";
  echo += "eps_bar=" + format_g17(cfg.eps_bar) + "\n";
  echo += "max_iters=" + std::to_string(cfg.max_iters) + "\n";
  echo += "seed=" + std::to_string(cfg.seed) + "\n";
  echo += "reference=" + cfg.reference + "\n";
  echo += "wall_clock=" + std::string(cfg.wall_clock ? "1" : "0") + "\n";
  echo += "noise=" + format_g17(spec.noise) + "\n";
  echo += "norm_A_sq_est=" + format_g17(norm_a_est) + "\n";
  outputs.emplace_back("config.txt", echo);

  std::sort(outputs.begin(), outputs.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::string manifest;
  for (const auto& [name, content] : outputs) {
    manifest += name + " " + hash_hex(Fnv1a64().str(content).value()) + "\n";
    write_text(cfg.out_dir + "/" + name, content);
  }
  write_text(cfg.out_dir + "/manifest.txt", manifest);
  return records;
}

}  // namespace tvtomo::bench
