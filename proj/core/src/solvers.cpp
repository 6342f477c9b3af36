#include "tvtomo/solvers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <stdexcept>

namespace tvtomo {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void validate_common(const SolverConfig& cfg) {
  if (!(cfg.eps_bar > 0.0)) throw std::invalid_argument("SolverConfig: eps_bar must be positive");
  if (cfg.max_iters == 0) throw std::invalid_argument("SolverConfig: max_iters must be positive");
  if (!(cfg.L_init > 0.0)) throw std::invalid_argument("SolverConfig: L_init must be positive");
  if (!(cfg.rho_L > 1.0)) throw std::invalid_argument("SolverConfig: rho_L must exceed 1");
  if (!(cfg.rho_mu > 0.0) || !(cfg.rho_mu < 1.0))
    throw std::invalid_argument("SolverConfig: rho_mu must lie in (0,1)");
  if (cfg.mu_init < 0.0) throw std::invalid_argument("SolverConfig: mu_init must be nonnegative");
  if (!(cfg.gpbb_sigma > 0.0) || !(cfg.gpbb_sigma < 1.0))
    throw std::invalid_argument("SolverConfig: gpbb_sigma must lie in (0,1)");
}

// Shared history bookkeeping: one record per produced iterate, cumulative
// eval counters, wall clock from solver entry.
class HistoryBuilder {
 public:
  HistoryBuilder(const EvalCounters& ec, const std::size_t& restarts)
      : t0_(Clock::now()), ec_(&ec), restarts_(&restarts) {}

  void emit(double phi, double grad_map_norm, double mu_k, double L_k) {
    HistoryRecord r;
    r.iter = hist_.size();
    r.phi = phi;
    r.grad_map_norm = grad_map_norm;
    r.mu_k = mu_k;
    r.L_k = L_k;
    r.restarts = *restarts_;
    r.fevals = ec_->fevals;
    r.gevals = ec_->gevals;
    r.wall_s = seconds_since(t0_);
    hist_.push_back(r);
  }

  std::size_t rows() const { return hist_.size(); }
  ConvergenceHistory take() { return std::move(hist_); }

 private:
  Clock::time_point t0_;
  const EvalCounters* ec_;
  const std::size_t* restarts_;
  ConvergenceHistory hist_;
};

}  // namespace

const char* to_string(Algorithm a) {
  switch (a) {
    case Algorithm::Gp: return "gp";
    case Algorithm::Gpbb: return "gpbb";
    case Algorithm::Nesterov: return "nesterov";
    case Algorithm::Upn: return "upn";
    case Algorithm::Upn0: return "upn0";
  }
  return "?";
}

const char* to_string(StopReason r) {
  switch (r) {
    case StopReason::GradMapAtX: return "GradMapAtX";
    case StopReason::GradMapAtY: return "GradMapAtY";
    case StopReason::MaxIters: return "MaxIters";
  }
  return "?";
}

Algorithm algorithm_from_string(const std::string& s) {
  if (s == "gp") return Algorithm::Gp;
  if (s == "gpbb") return Algorithm::Gpbb;
  if (s == "nesterov") return Algorithm::Nesterov;
  if (s == "upn") return Algorithm::Upn;
  if (s == "upn0") return Algorithm::Upn0;
  throw std::invalid_argument("unknown algorithm: " + s + " (expected gp|gpbb|nesterov|upn|upn0)");
}

BtStepResult bt_step(const Objective& f, const DenseVector& y, double L_bar, double rho_L,
                     EvalCounters* counters, int max_backtracks) {
  if (!(L_bar > 0.0)) throw std::invalid_argument("bt_step: L_bar must be positive");
  if (!(rho_L > 1.0)) throw std::invalid_argument("bt_step: rho_L must exceed 1");

  BtStepResult res;
  res.f_y = f.value_grad(y, res.grad_y);
  if (counters != nullptr) {
    ++counters->fevals;
    ++counters->gevals;
  }
  if (!std::isfinite(res.f_y) || !all_finite(res.grad_y))
    throw std::runtime_error("bt_step: objective returned a non-finite value or gradient");

  double L = L_bar;
  for (int n = 0; n <= max_backtracks; ++n) {
    const double inv = 1.0 / L;
    DenseVector x(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
      double p = y[i] - inv * res.grad_y[i];
      if (p < 0.0) p = 0.0;
      else if (p > 1.0) p = 1.0;
      x[i] = p;
    }
    const double f_x = f.value(x);
    if (counters != nullptr) ++counters->fevals;
    double lin = 0.0, dist_sq = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
      const double d = x[i] - y[i];
      lin += res.grad_y[i] * d;
      dist_sq += d * d;
    }
    if (f_x <= res.f_y + lin + 0.5 * L * dist_sq) {
      res.x = std::move(x);
      res.L = L;
      res.n_backtracks = n;
      res.f_x = f_x;
      return res;
    }
    L *= rho_L;
  }
  throw std::runtime_error("bt_step: descent condition still failing after max_backtracks increases");
}

double theta_next(double theta_k, double ratio) {
  if (!(theta_k > 0.0) || theta_k > 1.0) throw std::invalid_argument("theta_next: theta_k must lie in (0,1]");
  if (ratio < 0.0 || ratio > 1.0) throw std::invalid_argument("theta_next: ratio must lie in [0,1]");
  // theta^2 + (theta_k^2 - ratio) theta - theta_k^2 = 0; take the positive
  // root via the form that avoids subtracting nearly equal quantities.
  const double b = theta_k * theta_k - ratio;
  const double disc = std::sqrt(b * b + 4.0 * theta_k * theta_k);
  return b <= 0.0 ? 0.5 * (disc - b) : 2.0 * theta_k * theta_k / (b + disc);
}

bool restart_check(const SolverState& s, double G_norm_sq) {
  if (s.mu_k == 0.0) return false;
  const double lhs = 0.5 * G_norm_sq / s.L_tilde;
  const double factor =
      2.0 / s.mu_k - 1.0 / (2.0 * s.stage_L0) + 2.0 * s.gamma1 / (s.mu_k * s.mu_k);
  const double rhs = std::exp(s.log_prod) * factor * s.G0_norm_sq;
  return lhs > rhs;
}

SolverResult gp_solve(const Objective& f, const SolverConfig& cfg, const DenseVector& x0) {
  validate_common(cfg);
  EvalCounters ec;
  std::size_t restarts = 0;
  HistoryBuilder hist(ec, restarts);

  DenseVector x = project_box(x0);
  for (;;) {
    if (hist.rows() > cfg.max_iters) return {std::move(x), hist.take(), StopReason::MaxIters};
    // A fresh line search per iteration: the trial restarts at L_init so the
    // accepted step tracks local curvature instead of the worst kink met so
    // far; backtracking still certifies descent at every accepted step.
    BtStepResult bt = bt_step(f, x, cfg.L_init, cfg.rho_L, &ec);
    const double norm = bt.L * norm2(sub(x, bt.x));
    hist.emit(bt.f_y, norm, 0.0, bt.L);
    if (norm <= cfg.eps_bar) return {std::move(bt.x), hist.take(), StopReason::GradMapAtX};
    x = std::move(bt.x);
  }
}

SolverResult gpbb_solve(const Objective& f, const SolverConfig& cfg, const DenseVector& x0) {
  validate_common(cfg);
  constexpr double kThetaMin = 1e-10, kThetaMax = 1e10;
  constexpr int kMaxBacktracks = 60;

  EvalCounters ec;
  std::size_t restarts = 0;
  HistoryBuilder hist(ec, restarts);

  DenseVector x = project_box(x0);
  DenseVector g;
  double f_x = f.value_grad(x, g);
  ++ec.fevals;
  ++ec.gevals;

  std::deque<double> window{f_x};  // last K+1 objective values
  DenseVector x_prev, g_prev;
  double theta_prev = 1.0;

  auto trial = [&](double step) {
    DenseVector xb(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      double p = x[i] - step * g[i];
      if (p < 0.0) p = 0.0;
      else if (p > 1.0) p = 1.0;
      xb[i] = p;
    }
    return xb;
  };

  for (std::size_t k = 0;; ++k) {
    if (hist.rows() > cfg.max_iters) return {std::move(x), hist.take(), StopReason::MaxIters};

    double theta = 1.0;
    if (k > 0) {
      double dist_sq = 0.0, denom = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - x_prev[i];
        dist_sq += dx * dx;
        denom += dx * (g[i] - g_prev[i]);
      }
      if (denom > 0.0) theta = dist_sq / denom;
      if (denom <= 0.0 || !std::isfinite(theta))
        theta = std::clamp(theta_prev, kThetaMin, kThetaMax);
    }

    double beta = 0.95;
    DenseVector xb = trial(beta * theta);
    // The nonmonotone search cannot accept a step at a stationary point, so
    // the gradient-map test also guards the first trial.
    double norm = norm2(sub(x, xb)) / (beta * theta);
    if (norm <= cfg.eps_bar) {
      hist.emit(f_x, norm, 0.0, 1.0 / (beta * theta));
      return {std::move(xb), hist.take(), StopReason::GradMapAtX};
    }

    double fhat = window.front();
    for (double v : window) fhat = std::max(fhat, v);
    double fb = f.value(xb);
    ++ec.fevals;
    int n = 0;
    while (n < kMaxBacktracks) {
      double lin = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) lin += g[i] * (x[i] - xb[i]);
      if (fb < fhat - cfg.gpbb_sigma * lin) break;
      beta *= beta;
      xb = trial(beta * theta);
      fb = f.value(xb);
      ++ec.fevals;
      ++n;
    }

    norm = norm2(sub(x, xb)) / (beta * theta);
    hist.emit(f_x, norm, 0.0, 1.0 / (beta * theta));
    if (norm <= cfg.eps_bar) return {std::move(xb), hist.take(), StopReason::GradMapAtX};

    x_prev = std::move(x);
    g_prev = g;
    x = std::move(xb);
    theta_prev = theta;
    f_x = f.value_grad(x, g);
    ++ec.fevals;
    ++ec.gevals;
    window.push_back(f_x);
    while (window.size() > cfg.gpbb_window + 1) window.pop_front();
  }
}

SolverResult nesterov_solve(const Objective& f, const SolverConfig& cfg, const DenseVector& x0) {
  validate_common(cfg);
  const double mu = cfg.mu_init;
  const double L = cfg.L_init;
  if (mu > L) throw std::invalid_argument("nesterov_solve: mu must not exceed L");
  const double ratio = mu / L;
  double theta = cfg.theta0;
  if (theta == 0.0) theta = mu > 0.0 ? std::sqrt(ratio) : 1.0;
  if (!(theta > 0.0) || theta > 1.0 || theta * theta < ratio * (1.0 - 1e-12))
    throw std::invalid_argument("nesterov_solve: theta0 must lie in [sqrt(mu/L), 1]");

  EvalCounters ec;
  std::size_t restarts = 0;
  HistoryBuilder hist(ec, restarts);

  DenseVector x = project_box(x0);
  DenseVector y = x;
  DenseVector g;
  for (;;) {
    if (hist.rows() > cfg.max_iters) return {std::move(x), hist.take(), StopReason::MaxIters};
    f.value_grad(y, g);
    ++ec.fevals;
    ++ec.gevals;
    DenseVector x_next(y.size());
    const double inv = 1.0 / L;
    for (std::size_t i = 0; i < y.size(); ++i) {
      double p = y[i] - inv * g[i];
      if (p < 0.0) p = 0.0;
      else if (p > 1.0) p = 1.0;
      x_next[i] = p;
    }
    const double gy_norm = L * norm2(sub(y, x_next));
    // phi(x_k) is instrumentation only (the method itself never needs it),
    // so it bypasses the eval counters.
    hist.emit(f.value(x), gy_norm, mu, L);
    if (gy_norm <= cfg.eps_bar) return {std::move(x_next), hist.take(), StopReason::GradMapAtY};

    const double th1 = theta_next(theta, ratio);
    const double beta = theta * (1.0 - theta) / (theta * theta + th1);
    y.resize(x_next.size());
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = x_next[i] + beta * (x_next[i] - x[i]);
    x = std::move(x_next);
    theta = th1;
  }
}

namespace {

// Accelerated projected gradient with on-line estimation of both constants.
// Each stage restarts the momentum recursion from scratch; stages after the
// first are triggered by restart_check deciding that mu_k is still too large.
SolverResult upn_impl(const Objective& f, const SolverConfig& cfg, const DenseVector& x0,
                      bool mu_is_zero) {
  validate_common(cfg);
  EvalCounters ec;
  std::size_t restarts = 0;
  HistoryBuilder hist(ec, restarts);

  DenseVector stage_x0 = project_box(x0);
  double stage_mu_bar = mu_is_zero ? 0.0 : cfg.mu_init;
  double stage_L_bar = cfg.L_init;

  for (;;) {  // one pass per stage
    BtStepResult bt1 = bt_step(f, stage_x0, stage_L_bar, cfg.rho_L, &ec);
    const double L0 = bt1.L;
    const double G0_norm_sq = L0 * L0 * norm2_sq(sub(stage_x0, bt1.x));
    double mu = mu_is_zero ? 0.0 : std::min(stage_mu_bar, L0);
    // mu = 0 (either variant) takes the theta_1 = 1 branch; sqrt(mu/L0) would
    // start the recursion at an absorbing zero.
    double theta = mu > 0.0 ? std::sqrt(mu / L0) : 1.0;
    if (hist.rows() == 0) hist.emit(bt1.f_y, std::sqrt(G0_norm_sq), mu, L0);

    DenseVector x_k = std::move(bt1.x);  // x^{(1)}
    DenseVector y = x_k;                 // y^{(1)} = x^{(1)}
    double f_x_k = bt1.f_x;
    double L_k = L0;
    double gamma1 = 0.0;
    double log_prod = 0.0;
    bool restarted = false;

    for (std::size_t k = 1; !restarted; ++k) {
      if (hist.rows() > cfg.max_iters) return {std::move(x_k), hist.take(), StopReason::MaxIters};

      BtStepResult bt4 = bt_step(f, y, L_k, cfg.rho_L, &ec);
      L_k = bt4.L;
      DenseVector x_next = std::move(bt4.x);
      const double gy_norm = L_k * norm2(sub(y, x_next));
      // x^{(1)} gets its row once a gradient map at it is available; y^{(1)}
      // coincides with x^{(1)}, so this is the first opportunity.
      if (k == 1) hist.emit(f_x_k, gy_norm, mu, L_k);

      BtStepResult bt5 = bt_step(f, x_next, L_k, cfg.rho_L, &ec);
      const double L_tilde = bt5.L;
      const double gx_norm = L_tilde * norm2(sub(x_next, bt5.x));
      const double phi_next = bt5.f_y;

      if (gx_norm <= cfg.eps_bar) {
        hist.emit(phi_next, gx_norm, mu, L_k);
        return {std::move(bt5.x), hist.take(), StopReason::GradMapAtX};
      }
      if (gy_norm <= cfg.eps_bar) {
        hist.emit(phi_next, gy_norm, mu, L_k);
        return {std::move(x_next), hist.take(), StopReason::GradMapAtY};
      }

      if (!mu_is_zero) {
        // Heuristic tightening: mu_k = min(mu_{k-1}, M(x^{(k)}, y^{(k)})),
        // clamped into [0, L_k]. At k = 1 the two points coincide and M is
        // +inf, so the update is a no-op.
        const double m = local_mu(f_x_k, bt4.f_y, bt4.grad_y, x_k, y);
        mu = std::min(mu, std::max(m, 0.0));
        mu = std::min(mu, L_k);

        if (k == 1) {
          // gamma1 = theta1 (theta1 L1 - mu1) / (1 - theta1); theta1 -> 1
          // collapses to the limit theta1^2 L1.
          gamma1 = (1.0 - theta < 1e-12) ? theta * theta * L_k
                                         : theta * (theta * L_k - mu) / (1.0 - theta);
        }
        log_prod += std::log1p(-std::sqrt(mu / L_k));

        SolverState st;
        st.mu_k = mu;
        st.L_tilde = L_tilde;
        st.log_prod = log_prod;
        st.gamma1 = gamma1;
        st.stage_L0 = L0;
        st.G0_norm_sq = G0_norm_sq;
        if (restart_check(st, gx_norm * gx_norm)) {
          hist.emit(phi_next, gx_norm, mu, L_k);
          ++restarts;
          if (restarts > cfg.max_restarts)
            return {std::move(x_next), hist.take(), StopReason::MaxIters};
          stage_mu_bar = cfg.rho_mu * mu;
          stage_L_bar = L_k;
          stage_x0 = std::move(x_next);
          restarted = true;
          continue;
        }
      }

      hist.emit(phi_next, gx_norm, mu, L_k);

      const double th1 = theta_next(theta, mu_is_zero ? 0.0 : mu / L_k);
      const double beta = theta * (1.0 - theta) / (theta * theta + th1);
      y.resize(x_next.size());
      for (std::size_t i = 0; i < y.size(); ++i) y[i] = x_next[i] + beta * (x_next[i] - x_k[i]);
      x_k = std::move(x_next);
      f_x_k = phi_next;
      theta = th1;
    }
  }
}

}  // namespace

SolverResult upn_solve(const Objective& f, const SolverConfig& cfg, const DenseVector& x0) {
  return upn_impl(f, cfg, x0, false);
}

SolverResult upn0_solve(const Objective& f, const SolverConfig& cfg, const DenseVector& x0) {
  return upn_impl(f, cfg, x0, true);
}

SolverResult solve(const Objective& f, const SolverConfig& cfg, const DenseVector& x0) {
  if (x0.size() != f.dim()) throw std::invalid_argument("solve: x0 does not match objective dimension");
  switch (cfg.algorithm) {
    case Algorithm::Gp: return gp_solve(f, cfg, x0);
    case Algorithm::Gpbb: return gpbb_solve(f, cfg, x0);
    case Algorithm::Nesterov: return nesterov_solve(f, cfg, x0);
    case Algorithm::Upn: return upn_solve(f, cfg, x0);
    case Algorithm::Upn0: return upn0_solve(f, cfg, x0);
  }
  throw std::invalid_argument("solve: unknown algorithm");
}

}  // namespace tvtomo
