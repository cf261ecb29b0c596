#include <doctest.h>

#include <cmath>
#include <limits>
#include <set>

#include "qdcd/optimize.hpp"

using namespace qdcd;

TEST_SUITE("optimize") {

TEST_CASE("splitmix64 matches the reference stream") {
  // Reference outputs for the standard splitmix64 from seed 0.
  uint64_t state = 0;
  CHECK(splitmix64(state) == 0xE220A8397B1DCDAFull);
  CHECK(splitmix64(state) == 0x6E789E6AA1B965F4ull);
  CHECK(splitmix64(state) == 0x06C45D188009454Full);

  state = 1234567ull;
  const uint64_t a = splitmix64(state);
  uint64_t replay = 1234567ull;
  CHECK(splitmix64(replay) == a);
}

TEST_CASE("uniform01 stays in the half-open unit interval") {
  uint64_t state = 42;
  double lo = 1.0, hi = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double u = uniform01(splitmix64(state));
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    lo = std::min(lo, u);
    hi = std::max(hi, u);
  }
  CHECK(lo < 0.01);
  CHECK(hi > 0.99);
  CHECK(uniform01(0) == doctest::Approx(0.0));
}

TEST_CASE("quadratic bowl converges to the minimizer") {
  const Objective f = [](const Eigen::VectorXd& x) {
    return (x - Eigen::VectorXd::Constant(x.size(), 1.5)).squaredNorm() + 2.0;
  };
  OptimizerConfig cfg;
  cfg.max_iterations = 400;
  const MinimizeResult r = minimize(f, Eigen::VectorXd::Zero(3), cfg);
  CHECK(r.f == doctest::Approx(2.0).epsilon(1e-6));
  CHECK((r.x - Eigen::VectorXd::Constant(3, 1.5)).norm() < 1e-3);
}

TEST_CASE("rosenbrock quality gate") {
  const Objective f = [](const Eigen::VectorXd& x) {
    const double a = 1.0 - x(0);
    const double b = x(1) - x(0) * x(0);
    return a * a + 100.0 * b * b;
  };
  OptimizerConfig cfg;
  // The linear-model simplex follows the curved valley slowly; give it a
  // budget commensurate with the problem and keep the radius floor below the
  // valley curvature scale so it does not stall early.
  cfg.max_iterations = 8000;
  cfg.initial_step = 0.5;
  cfg.tolerance = 1e-9;
  Eigen::VectorXd x0(2);
  x0 << -1.2, 1.0;
  const MinimizeResult r = minimize(f, x0, cfg);
  CHECK(r.f < 1e-4);
  CHECK((r.x - Eigen::VectorXd::Ones(2)).norm() < 0.05);
}

TEST_CASE("budget is exact and the trace is well-formed") {
  int calls = 0;
  const Objective f = [&calls](const Eigen::VectorXd& x) {
    ++calls;
    return x.squaredNorm();
  };
  OptimizerConfig cfg;
  cfg.max_iterations = 57;
  const MinimizeResult r = minimize(f, Eigen::VectorXd::Constant(2, 3.0), cfg);
  CHECK(calls == 57);
  REQUIRE(r.trace.size() == 57);
  double best = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < r.trace.size(); ++i) {
    CHECK(r.trace[i].iteration == static_cast<int>(i) + 1);
    best = std::min(best, r.trace[i].objective);
    CHECK(r.trace[i].best == doctest::Approx(best));
    if (i > 0) CHECK(r.trace[i].best <= r.trace[i - 1].best + 1e-15);
  }
  CHECK(r.f == doctest::Approx(r.trace.back().best));
}

TEST_CASE("tiny budgets still return the incumbent") {
  const Objective f = [](const Eigen::VectorXd& x) { return x.squaredNorm(); };
  OptimizerConfig cfg;
  cfg.max_iterations = 1;
  const MinimizeResult r = minimize(f, Eigen::VectorXd::Constant(2, 1.0), cfg);
  CHECK(r.trace.size() == 1);
  CHECK(r.f == doctest::Approx(2.0));
}

TEST_CASE("non-finite objectives abort with a diagnostic") {
  const Objective f = [](const Eigen::VectorXd& x) {
    return x(0) > 0.5 ? std::numeric_limits<double>::quiet_NaN()
                      : x.squaredNorm();
  };
  OptimizerConfig cfg;
  cfg.max_iterations = 200;
  cfg.initial_step = 2.0;
  CHECK_THROWS_AS(minimize(f, Eigen::VectorXd::Constant(2, 0.4), cfg),
                  std::runtime_error);
}

TEST_CASE("nelder-mead also solves the bowl") {
  const Objective f = [](const Eigen::VectorXd& x) {
    return (x - Eigen::VectorXd::Constant(x.size(), -0.75)).squaredNorm();
  };
  OptimizerConfig cfg;
  cfg.max_iterations = 600;
  cfg.method = OptMethod::NelderMead;
  const MinimizeResult r = minimize(f, Eigen::VectorXd::Ones(3), cfg);
  CHECK(r.f < 1e-6);
  // Nelder-Mead may converge (simplex collapse) before the budget runs out.
  CHECK(r.trace.size() <= 600);
  CHECK(r.f == doctest::Approx(r.trace.back().best));
}

TEST_CASE("multistart determinism and aggregation") {
  const Objective f = [](const Eigen::VectorXd& x) {
    // Two basins: a shallow one near +2 and the global one near -1.
    const double t = x(0);
    return std::min((t - 2.0) * (t - 2.0) + 0.5, (t + 1.0) * (t + 1.0));
  };
  OptimizerConfig cfg;
  cfg.max_iterations = 120;
  cfg.seed = 9;
  const std::vector<std::pair<double, double>> range = {{-3.0, 3.0}};

  const MultistartResult a = multistart(f, 1, 8, range, cfg);
  const MultistartResult b = multistart(f, 1, 8, range, cfg);
  REQUIRE(a.runs.size() == 8);
  REQUIRE(a.best_index >= 0);
  CHECK(a.runs[a.best_index].f == doctest::Approx(0.0).epsilon(1e-5));
  for (int r = 0; r < 8; ++r) {
    CHECK(a.runs[r].run_id == r);
    CHECK(a.runs[r].seed == b.runs[r].seed);
    CHECK(a.runs[r].x0 == b.runs[r].x0);
    CHECK(a.runs[r].f == b.runs[r].f);
    CHECK(a.runs[r].x0(0) >= -3.0);
    CHECK(a.runs[r].x0(0) < 3.0);
  }
  // Seeds differ across restarts.
  std::set<uint64_t> seeds;
  for (const OptRun& r : a.runs) seeds.insert(r.seed);
  CHECK(seeds.size() == 8);
  // Aggregates describe the final objective sample.
  double best = std::numeric_limits<double>::infinity();
  double sum = 0.0;
  for (const OptRun& r : a.runs) {
    best = std::min(best, r.f);
    sum += r.f;
  }
  CHECK(a.runs[a.best_index].f == doctest::Approx(best));
  CHECK(a.mean == doctest::Approx(sum / 8));
  CHECK(a.iqr_low <= a.median);
  CHECK(a.median <= a.iqr_high);
}

TEST_CASE("multistart isolates failing runs") {
  // The minimum sits at -0.5, so descent never crosses the failure wall at
  // 0.9; only restarts whose initial simplex pokes past it (x0 > 0.4) fail.
  int calls = 0;
  const Objective f = [&calls](const Eigen::VectorXd& x) {
    ++calls;
    if (x(0) > 0.9) throw std::runtime_error("simulated failure");
    return (x(0) + 0.5) * (x(0) + 0.5);
  };
  OptimizerConfig cfg;
  cfg.max_iterations = 60;
  cfg.seed = 3;
  const std::vector<std::pair<double, double>> range = {{-1.0, 0.8}};
  const MultistartResult r = multistart(f, 1, 12, range, cfg);
  REQUIRE(r.runs.size() == 12);
  int failed = 0, ok = 0;
  for (const OptRun& run : r.runs) {
    if (run.error) ++failed;
    else ++ok;
  }
  CHECK(failed > 0);
  CHECK(ok > 0);
  CHECK(r.best_index >= 0);
  CHECK_FALSE(r.runs[r.best_index].error.has_value());
  CHECK(r.runs[r.best_index].f >= 0.0);
}

TEST_CASE("different seeds explore different starts") {
  const Objective f = [](const Eigen::VectorXd& x) { return x.squaredNorm(); };
  OptimizerConfig cfg;
  cfg.max_iterations = 5;
  cfg.seed = 1;
  OptimizerConfig cfg2 = cfg;
  cfg2.seed = 2;
  const std::vector<std::pair<double, double>> range = {{0.0, 10.0}};
  const MultistartResult a = multistart(f, 1, 4, range, cfg);
  const MultistartResult b = multistart(f, 1, 4, range, cfg2);
  bool any_differ = false;
  for (int r = 0; r < 4; ++r)
    if (a.runs[r].x0 != b.runs[r].x0) any_differ = true;
  CHECK(any_differ);
}

}  // TEST_SUITE
