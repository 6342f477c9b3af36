#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "tvtomo/objective.hpp"
#include "tvtomo/vec.hpp"

namespace tvtomo {

enum class Algorithm { Gp, Gpbb, Nesterov, Upn, Upn0 };

enum class StopReason {
  GradMapAtX,  // ||G(x)|| <= eps_bar certified at an x-iterate
  GradMapAtY,  // ||G(y)|| <= eps_bar certified at an extrapolation point
  MaxIters,
};

const char* to_string(Algorithm a);
const char* to_string(StopReason r);
Algorithm algorithm_from_string(const std::string& s);

struct SolverConfig {
  Algorithm algorithm = Algorithm::Upn;
  double eps_bar = 1e-4;       // gradient-map stopping tolerance
  std::size_t max_iters = 10000;
  double mu_init = 0.0;        // UPN: initial mu guess; Nesterov: the known mu
  double L_init = 1.0;         // UPN/GP: initial L guess; Nesterov: the known L
  double rho_L = 1.5;          // backtracking increase factor
  double rho_mu = 0.7;         // restart decrease factor for mu
  double theta0 = 0.0;         // Nesterov only; 0 selects sqrt(mu/L) (1 if mu = 0)
  std::size_t gpbb_window = 2;     // K: nonmonotone window holds K+1 values
  double gpbb_sigma = 1e-4;        // sufficient-decrease parameter
  std::size_t max_restarts = 200;  // cap on restarted stages
  std::uint64_t seed = 0;          // recorded in outputs; iterations are deterministic
};

struct HistoryRecord {
  std::size_t iter = 0;
  double phi = 0.0;
  double grad_map_norm = 0.0;  // the gradient-map norm examined at this iterate
  double mu_k = 0.0;
  double L_k = 0.0;
  std::size_t restarts = 0;
  std::size_t fevals = 0;  // cumulative
  std::size_t gevals = 0;  // cumulative
  double wall_s = 0.0;
};

using ConvergenceHistory = std::vector<HistoryRecord>;

struct SolverResult {
  DenseVector x;
  ConvergenceHistory history;
  StopReason reason = StopReason::MaxIters;
};

struct EvalCounters {
  std::size_t fevals = 0;
  std::size_t gevals = 0;
};

// Backtracking on the descent condition
//   f(x) <= f(y) + <grad f(y), x - y> + L/2 ||x - y||^2,
// where x = P(y - grad f(y)/L). L starts at L_bar and is multiplied by rho_L
// until the condition holds. Costs one value_grad plus one value per trial
// (n_backtracks + 2 function evaluations, one gradient evaluation).
struct BtStepResult {
  DenseVector x;
  double L = 0.0;  // accepted constant; never decreases across calls seeded with the previous L
  int n_backtracks = 0;
  double f_y = 0.0;
  DenseVector grad_y;
  double f_x = 0.0;
};
BtStepResult bt_step(const Objective& f, const DenseVector& y, double L_bar, double rho_L,
                     EvalCounters* counters = nullptr, int max_backtracks = 200);

// Positive root of theta^2 = (1 - theta)*theta_k^2 + ratio*theta, written to
// avoid cancellation. Maps (0,1] x [0,1] into (0,1]; fixed point sqrt(ratio).
double theta_next(double theta_k, double ratio);

// Restart bookkeeping for the unknown-parameter solver. log_prod accumulates
// log(1 - sqrt(mu_i/L_i)) so the decay product never underflows.
struct SolverState {
  double mu_k = 0.0;
  double L_tilde = 0.0;   // certified constant at the tested iterate
  double log_prod = 0.0;
  double gamma1 = 0.0;
  double stage_L0 = 0.0;  // L certified at the stage's starting point
  double G0_norm_sq = 0.0;
};

// True when the measured gradient-map decay contradicts the convergence rate
// implied by the current mu_k, i.e.
//   ||G(x)||^2 / (2 L~)  >  prod(1 - sqrt(mu_i/L_i))
//                           * (2/mu_k - 1/(2 L0) + 2 gamma1/mu_k^2) * ||G0||^2,
// meaning mu_k overestimates the strong convexity and must be reduced.
// Always false when mu_k = 0.
bool restart_check(const SolverState& s, double G_norm_sq);

SolverResult gp_solve(const Objective& f, const SolverConfig& cfg, const DenseVector& x0);
SolverResult gpbb_solve(const Objective& f, const SolverConfig& cfg, const DenseVector& x0);
SolverResult nesterov_solve(const Objective& f, const SolverConfig& cfg, const DenseVector& x0);
SolverResult upn_solve(const Objective& f, const SolverConfig& cfg, const DenseVector& x0);
SolverResult upn0_solve(const Objective& f, const SolverConfig& cfg, const DenseVector& x0);

// Dispatches on cfg.algorithm.
SolverResult solve(const Objective& f, const SolverConfig& cfg, const DenseVector& x0);

}  // namespace tvtomo
