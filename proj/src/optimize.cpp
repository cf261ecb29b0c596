#include "qdcd/optimize.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

namespace qdcd {

uint64_t splitmix64(uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double uniform01(uint64_t bits) { return (bits >> 11) * 0x1.0p-53; }

namespace {

struct BudgetExhausted {};

// Shared evaluation bookkeeping: budget guard, finiteness check, trace and
// incumbent maintenance. One trace point per objective call, no exceptions.
struct Evaluator {
  const Objective& f;
  int budget;
  int evals = 0;
  Trace trace;
  Eigen::VectorXd best_x;
  double best_f = std::numeric_limits<double>::infinity();

  Evaluator(const Objective& f_, int budget_) : f(f_), budget(budget_) {}

  double operator()(const Eigen::VectorXd& x) {
    if (evals >= budget) throw BudgetExhausted{};
    const double v = f(x);
    ++evals;
    if (!std::isfinite(v))
      throw std::runtime_error("minimize: non-finite objective value at iteration " +
                               std::to_string(evals));
    if (v < best_f) {
      best_f = v;
      best_x = x;
    }
    trace.push_back({evals, v, best_f});
    return v;
  }
};

void validate(const OptimizerConfig& cfg) {
  if (cfg.max_iterations < 1)
    throw std::invalid_argument("OptimizerConfig: max_iterations must be >= 1");
  if (!(cfg.initial_step > cfg.tolerance && cfg.tolerance > 0.0))
    throw std::invalid_argument(
        "OptimizerConfig: need initial_step > tolerance > 0");
}

struct Simplex {
  std::vector<Eigen::VectorXd> x;
  std::vector<double> f;

  int best() const {
    return static_cast<int>(std::min_element(f.begin(), f.end()) - f.begin());
  }
  int worst() const {
    return static_cast<int>(std::max_element(f.begin(), f.end()) - f.begin());
  }
};

Simplex build_simplex(Evaluator& ev, const Eigen::VectorXd& center,
                      double radius) {
  const int n = static_cast<int>(center.size());
  Simplex s;
  s.x.push_back(center);
  s.f.push_back(ev(center));
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd xi = center;
    xi(i) += radius;
    s.x.push_back(xi);
    s.f.push_back(ev(xi));
  }
  return s;
}

// Linear interpolation model through the n+1 simplex points: solve
// [x_i^T 1] [g; c] = f_i. Returns false when the system is numerically
// degenerate (collapsed simplex).
bool fit_plane(const Simplex& s, Eigen::VectorXd& g) {
  const int n = static_cast<int>(s.x[0].size());
  Eigen::MatrixXd a(n + 1, n + 1);
  Eigen::VectorXd rhs(n + 1);
  for (int i = 0; i <= n; ++i) {
    a.row(i).head(n) = s.x[i].transpose();
    a(i, n) = 1.0;
    rhs(i) = s.f[i];
  }
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
  if (qr.rank() < n + 1) return false;
  const Eigen::VectorXd sol = qr.solve(rhs);
  g = sol.head(n);
  return g.allFinite();
}

MinimizeResult run_cobyla(const Objective& f, const Eigen::VectorXd& x0,
                          const OptimizerConfig& cfg) {
  const int n = static_cast<int>(x0.size());
  Evaluator ev(f, cfg.max_iterations);
  try {
    double rho = cfg.initial_step;
    double delta = rho;
    const double delta_cap = 16.0 * cfg.initial_step;
    Simplex s = build_simplex(ev, x0, rho);
    Eigen::VectorXd g(n);
    while (rho >= cfg.tolerance) {
      const int b = s.best();
      if (!fit_plane(s, g) || g.norm() < 1e-14) {
        // Degenerate or flat model: refresh geometry at a smaller scale.
        rho *= 0.5;
        delta = rho;
        if (rho < cfg.tolerance) break;
        s = build_simplex(ev, s.x[b], rho);
        continue;
      }
      const Eigen::VectorXd xc = s.x[b] - (delta / g.norm()) * g;
      const double fc = ev(xc);
      const int w = s.worst();
      if (fc < s.f[b]) {
        s.x[w] = xc;
        s.f[w] = fc;
        delta = std::min(delta * 1.7, delta_cap);
      } else {
        if (fc < s.f[w]) {
          s.x[w] = xc;
          s.f[w] = fc;
        }
        delta *= 0.5;
        if (delta < rho) {
          rho *= 0.5;
          delta = rho;
          if (rho < cfg.tolerance) break;
          s = build_simplex(ev, s.x[s.best()], rho);
        }
      }
    }
  } catch (const BudgetExhausted&) {
  }
  if (ev.evals == 0) throw std::runtime_error("minimize: empty budget");
  return {ev.best_x, ev.best_f, std::move(ev.trace)};
}

MinimizeResult run_nelder_mead(const Objective& f, const Eigen::VectorXd& x0,
                               const OptimizerConfig& cfg) {
  const int n = static_cast<int>(x0.size());
  Evaluator ev(f, cfg.max_iterations);
  try {
    Simplex s = build_simplex(ev, x0, cfg.initial_step);
    for (;;) {
      // Order: find best, worst, second worst.
      const int b = s.best();
      const int w = s.worst();
      double fsw = -std::numeric_limits<double>::infinity();
      for (int i = 0; i <= n; ++i)
        if (i != w) fsw = std::max(fsw, s.f[i]);
      double diam = 0.0;
      for (int i = 0; i <= n; ++i)
        diam = std::max(diam, (s.x[i] - s.x[b]).norm());
      if (diam < cfg.tolerance) break;

      Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
      for (int i = 0; i <= n; ++i)
        if (i != w) centroid += s.x[i];
      centroid /= n;

      const Eigen::VectorXd xr = centroid + (centroid - s.x[w]);
      const double fr = ev(xr);
      if (fr < s.f[b]) {
        const Eigen::VectorXd xe = centroid + 2.0 * (centroid - s.x[w]);
        const double fe = ev(xe);
        if (fe < fr) {
          s.x[w] = xe;
          s.f[w] = fe;
        } else {
          s.x[w] = xr;
          s.f[w] = fr;
        }
      } else if (fr < fsw) {
        s.x[w] = xr;
        s.f[w] = fr;
      } else {
        const double side = fr < s.f[w] ? 0.5 : -0.5;
        const Eigen::VectorXd xc = centroid + side * (centroid - s.x[w]);
        const double fcv = ev(xc);
        if (fcv < std::min(fr, s.f[w])) {
          s.x[w] = xc;
          s.f[w] = fcv;
        } else {
          for (int i = 0; i <= n; ++i) {
            if (i == b) continue;
            s.x[i] = s.x[b] + 0.5 * (s.x[i] - s.x[b]);
            s.f[i] = ev(s.x[i]);
          }
        }
      }
    }
  } catch (const BudgetExhausted&) {
  }
  if (ev.evals == 0) throw std::runtime_error("minimize: empty budget");
  return {ev.best_x, ev.best_f, std::move(ev.trace)};
}

double quantile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  if (v.empty()) return 0.0;
  const double pos = q * (static_cast<double>(v.size()) - 1.0);
  const size_t lo = static_cast<size_t>(std::floor(pos));
  const size_t hi = static_cast<size_t>(std::ceil(pos));
  const double frac = pos - static_cast<double>(lo);
  return v[lo] + frac * (v[hi] - v[lo]);
}

}  // namespace

MinimizeResult minimize(const Objective& f, const Eigen::VectorXd& x0,
                        const OptimizerConfig& cfg) {
  validate(cfg);
  if (x0.size() < 1) throw std::invalid_argument("minimize: empty x0");
  return cfg.method == OptMethod::Cobyla ? run_cobyla(f, x0, cfg)
                                         : run_nelder_mead(f, x0, cfg);
}

MultistartResult multistart(
    const Objective& f, int n_params, int restarts,
    const std::vector<std::pair<double, double>>& init_range,
    const OptimizerConfig& cfg) {
  validate(cfg);
  if (restarts < 1) throw std::invalid_argument("multistart: restarts must be >= 1");
  if (static_cast<int>(init_range.size()) != n_params)
    throw std::invalid_argument("multistart: init_range size mismatch");
  MultistartResult out;
  uint64_t chain = cfg.seed;
  for (int r = 0; r < restarts; ++r) {
    OptRun run;
    run.run_id = r;
    run.seed = splitmix64(chain);
    uint64_t rng = run.seed;
    run.x0 = Eigen::VectorXd(n_params);
    for (int i = 0; i < n_params; ++i) {
      const auto& [lo, hi] = init_range[i];
      run.x0(i) = lo + (hi - lo) * uniform01(splitmix64(rng));
    }
    const auto t0 = std::chrono::steady_clock::now();
    try {
      MinimizeResult res = minimize(f, run.x0, cfg);
      run.x = std::move(res.x);
      run.f = res.f;
      run.trace = std::move(res.trace);
    } catch (const std::exception& e) {
      run.error = e.what();
    }
    run.wall_ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
    out.runs.push_back(std::move(run));
  }
  std::vector<double> finals;
  for (const OptRun& run : out.runs) {
    if (run.error) continue;
    finals.push_back(run.f);
    if (out.best_index < 0 || run.f < out.runs[out.best_index].f)
      out.best_index = run.run_id;
  }
  if (!finals.empty()) {
    double sum = 0.0;
    for (double v : finals) sum += v;
    out.mean = sum / static_cast<double>(finals.size());
    double ss = 0.0;
    for (double v : finals) ss += (v - out.mean) * (v - out.mean);
    out.stddev = finals.size() > 1
                     ? std::sqrt(ss / static_cast<double>(finals.size() - 1))
                     : 0.0;
    out.median = quantile(finals, 0.5);
    out.iqr_low = quantile(finals, 0.25);
    out.iqr_high = quantile(finals, 0.75);
  }
  return out;
}

}  // namespace qdcd
