#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hbvm/integrator.hpp"
#include "hbvm/problems.hpp"

namespace hbvm {

/// Max-over-mesh errors of one run. The solution entry uses the problem's
/// SolutionNorm per mesh point; everything else is a max-abs value.
struct ErrorReport {
  double solution = 0.0;                    // states vs reference
  std::optional<double> multiplier;         // per-step multiplier vs reference
  double energy = 0.0;                      // |H(q_n, p_n) - H(q_0, p_0)|
  double constraint = 0.0;                  // ||g(q_n)||_inf
  double hidden = 0.0;                      // ||grad(g)^T M^{-1} p_n||_inf

  double h = 0.0;
  int n_steps = 0;
};

/// Errors of `trajectory` against the problem's reference solution sampled on
/// the same mesh. The multiplier entry compares the step-n multiplier with
/// the reference multiplier at the interval start t_n.
ErrorReport compute_errors(const Trajectory& trajectory, const BenchmarkProblem& problem);

/// log(e_coarse / e_fine) / log(h_coarse / h_fine). Requires positive errors
/// and h_fine < h_coarse.
double estimate_rate(double e_coarse, double e_fine, double h_coarse, double h_fine);

/// Errors below this are treated as round-off; rates touching such rows are
/// flagged unreliable and excluded from assertions.
inline constexpr double kRateFloor = 1e-12;

struct LadderLevel {
  std::string label;  // printed level identifier
  double h = 0.0;
  int n_steps = 0;
};

struct ConvergenceRow {
  LadderLevel level;
  ErrorReport errors;
  std::optional<double> rate_solution;    // absent on the first row
  std::optional<double> rate_multiplier;
  std::optional<double> rate_hidden;
  bool rates_reliable = false;            // both solution errors above kRateFloor
  std::optional<std::string> failure;     // set when integration failed at this level
};

struct ConvergenceTable {
  std::string problem;
  int basis_size = 0;
  int node_count = 0;
  std::vector<ConvergenceRow> rows;
};

struct LadderOptions {
  double fp_tol = 1e-14;
  int fp_max_iters = 200;
};

/// Integrates each level (strictly decreasing h), computes errors, and fills
/// rate columns from consecutive rows. A failed level annotates its row and
/// halts the ladder.
ConvergenceTable run_ladder(const BenchmarkProblem& problem, int node_count,
                            int basis_size, const std::vector<LadderLevel>& levels,
                            const LadderOptions& options = {});

}  // namespace hbvm
