#include "hbvm/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hbvm {

ErrorReport compute_errors(const Trajectory& trajectory, const BenchmarkProblem& problem) {
  const ConstrainedHamiltonianSystem& sys = problem.system;
  const int n_steps = static_cast<int>(trajectory.states.size()) - 1;
  const std::vector<ReferencePoint> reference =
      problem.reference.sample(trajectory.config, n_steps, 1);

  ErrorReport report;
  report.h = trajectory.config.h;
  report.n_steps = n_steps;

  const double energy0 =
      hamiltonian(sys, trajectory.states.front().q, trajectory.states.front().p);
  for (int n = 0; n <= n_steps; ++n) {
    const State& state = trajectory.states[n];
    const Eigen::VectorXd dq = (state.q - reference[n].q).cwiseAbs();
    const Eigen::VectorXd dp = (state.p - reference[n].p).cwiseAbs();
    report.solution = std::max(
        report.solution, problem.solution_norm == SolutionNorm::component_sum
                             ? dq.sum() + dp.sum()
                             : std::max(dq.maxCoeff(), dp.maxCoeff()));
    report.energy = std::max(report.energy,
                             std::abs(hamiltonian(sys, state.q, state.p) - energy0));
    if (sys.constraint_count > 0) {
      report.constraint =
          std::max(report.constraint, sys.constraint(state.q).cwiseAbs().maxCoeff());
      report.hidden =
          std::max(report.hidden, (sys.constraint_jacobian(state.q).transpose() *
                                   sys.mass_inverse(state.p))
                                      .cwiseAbs()
                                      .maxCoeff());
    }
  }

  if (sys.constraint_count > 0 && !reference.empty() &&
      reference.front().multiplier.size() == sys.constraint_count) {
    double error = 0.0;
    for (size_t n = 0; n < trajectory.steps.size(); ++n)
      error = std::max(error, (trajectory.steps[n].multiplier - reference[n].multiplier)
                                  .cwiseAbs()
                                  .maxCoeff());
    report.multiplier = error;
  }
  return report;
}

double estimate_rate(double e_coarse, double e_fine, double h_coarse, double h_fine) {
  if (!(e_coarse > 0.0) || !(e_fine > 0.0))
    throw std::invalid_argument("estimate_rate: errors must be positive");
  if (!(h_fine < h_coarse) || !(h_fine > 0.0))
    throw std::invalid_argument("estimate_rate: need 0 < h_fine < h_coarse");
  return std::log(e_coarse / e_fine) / std::log(h_coarse / h_fine);
}

namespace {

std::optional<double> pair_rate(std::optional<double> coarse, std::optional<double> fine,
                                double h_coarse, double h_fine) {
  if (!coarse || !fine || !(*coarse > 0.0) || !(*fine > 0.0)) return std::nullopt;
  return estimate_rate(*coarse, *fine, h_coarse, h_fine);
}

}  // namespace

ConvergenceTable run_ladder(const BenchmarkProblem& problem, int node_count,
                            int basis_size, const std::vector<LadderLevel>& levels,
                            const LadderOptions& options) {
  if (levels.empty()) throw std::invalid_argument("run_ladder: empty schedule");
  for (size_t i = 1; i < levels.size(); ++i)
    if (!(levels[i].h < levels[i - 1].h))
      throw std::invalid_argument("run_ladder: stepsizes must strictly decrease");

  ConvergenceTable table;
  table.problem = problem.name;
  table.basis_size = basis_size;
  table.node_count = node_count;

  const BasisTables tables = build_tables(basis_size, node_count);
  for (size_t i = 0; i < levels.size(); ++i) {
    ConvergenceRow row;
    row.level = levels[i];

    Config config;
    config.basis_size = basis_size;
    config.node_count = node_count;
    config.h = levels[i].h;
    config.fp_tol = options.fp_tol;
    config.fp_max_iters = options.fp_max_iters;

    const Trajectory trajectory = integrate(problem.system, config, tables,
                                            problem.initial.q, problem.initial.p,
                                            levels[i].n_steps);
    if (trajectory.failure) {
      row.failure = "step " + std::to_string(trajectory.failure->step_index) + ": " +
                    trajectory.failure->message;
      table.rows.push_back(std::move(row));
      break;
    }
    row.errors = compute_errors(trajectory, problem);

    if (i > 0 && !table.rows.back().failure) {
      const ErrorReport& coarse = table.rows.back().errors;
      const double h_coarse = levels[i - 1].h;
      row.rate_solution =
          pair_rate(coarse.solution, row.errors.solution, h_coarse, levels[i].h);
      row.rate_multiplier =
          pair_rate(coarse.multiplier, row.errors.multiplier, h_coarse, levels[i].h);
      row.rate_hidden = pair_rate(coarse.hidden, row.errors.hidden, h_coarse, levels[i].h);
      row.rates_reliable = coarse.solution > kRateFloor && row.errors.solution > kRateFloor;
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace hbvm
