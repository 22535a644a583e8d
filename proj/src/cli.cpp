#include "hbvm/cli.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <ostream>

#include "hbvm/analysis.hpp"
#include "hbvm/problems.hpp"
#include "hbvm/report.hpp"

namespace hbvm {

namespace {

const char* kind_name(ReferenceSolution::Kind kind) {
  switch (kind) {
    case ReferenceSolution::Kind::analytic: return "analytic";
    case ReferenceSolution::Kind::auxiliary_ode: return "auxiliary_ode";
    case ReferenceSolution::Kind::self_refined: return "self_refined";
  }
  return "?";
}

struct ResolvedRun {
  double h = 0.0;
  int n_steps = 0;
};

// integrate: exactly two of {h, steps, periods}.
ResolvedRun resolve_run(const RunSpec& spec, const BenchmarkProblem& problem) {
  const int given = (spec.h ? 1 : 0) + (spec.steps ? 1 : 0) + (spec.periods ? 1 : 0);
  if (given != 2)
    throw std::invalid_argument("integrate needs exactly two of --h, --steps, --periods");
  if (spec.periods && !problem.period)
    throw std::invalid_argument("problem '" + problem.name + "' has no period");

  ResolvedRun run;
  if (spec.h && spec.steps) {
    run.h = *spec.h;
    run.n_steps = *spec.steps;
  } else if (spec.h && spec.periods) {
    run.h = *spec.h;
    run.n_steps = static_cast<int>(std::lround(*spec.periods * *problem.period / run.h));
  } else {
    run.n_steps = *spec.steps;
    run.h = *spec.periods * *problem.period / run.n_steps;
  }
  if (!(run.h != 0.0) || run.n_steps < 0)
    throw std::invalid_argument("invalid stepsize/steps combination");
  return run;
}

std::vector<LadderLevel> resolve_ladder(const RunSpec& spec,
                                        const BenchmarkProblem& problem) {
  if (!spec.levels || *spec.levels < 1)
    throw std::invalid_argument("converge needs --levels >= 1");
  if (!spec.steps || *spec.steps < 1)
    throw std::invalid_argument("converge needs --steps (count at the coarsest level)");
  if (spec.h0 && spec.periods)
    throw std::invalid_argument("converge takes --h0 or --periods, not both");

  std::vector<LadderLevel> levels;
  if (spec.h0) {
    for (int n = 0; n < *spec.levels; ++n)
      levels.push_back({std::to_string(n), *spec.h0 / std::pow(2.0, n),
                        *spec.steps * (1 << n)});
  } else if (spec.periods) {
    if (!problem.period)
      throw std::invalid_argument("problem '" + problem.name + "' has no period");
    for (int n = 0; n < *spec.levels; ++n) {
      const int per_period = *spec.steps * (n + 1);
      levels.push_back({std::to_string(per_period), *problem.period / per_period,
                        static_cast<int>(std::lround(*spec.periods * per_period))});
    }
  } else {
    throw std::invalid_argument("converge needs a ladder policy: --h0 or --periods");
  }
  return levels;
}

int with_output(const std::string& path, std::ostream& fallback, std::ostream& err,
                const std::function<int(std::ostream&)>& body) {
  if (path.empty()) return body(fallback);
  std::ofstream file(path, std::ios::binary);  // binary: LF endings everywhere
  if (!file) {
    err << "error: cannot open '" << path << "' for writing\n";
    return kExitUsage;
  }
  return body(file);
}

}  // namespace

int cmd_list_problems(std::ostream& out) {
  for (const BenchmarkProblem& problem : benchmark_problems()) {
    out << problem.name << "  dim=" << problem.system.dim
        << "  constraints=" << problem.system.constraint_count
        << "  reference=" << kind_name(problem.reference.kind);
    if (problem.period)
      out << "  period=" << format_scientific(*problem.period, 17);
    out << '\n';
  }
  return kExitOk;
}

int cmd_integrate(const RunSpec& spec, std::ostream& out, std::ostream& err) {
  try {
    const BenchmarkProblem& problem = find_problem(spec.problem);
    const ResolvedRun run = resolve_run(spec, problem);

    Config config;
    config.basis_size = spec.basis_size;
    config.node_count = spec.node_count;
    config.h = run.h;
    config.fp_tol = spec.fp_tol;
    config.fp_max_iters = spec.fp_max_iters;
    const BasisTables tables = build_tables(config.basis_size, config.node_count);

    const Trajectory trajectory = integrate(problem.system, config, tables,
                                            problem.initial.q, problem.initial.p,
                                            run.n_steps);
    return with_output(spec.out_path, out, err, [&](std::ostream& sink) {
      write_trajectory_csv(sink, trajectory, problem.system,
                           report_digits(spec.full_precision));
      sink.flush();
      if (trajectory.failure) {
        err << "error: step " << trajectory.failure->step_index
            << " failed: " << trajectory.failure->message << '\n';
        return kExitNumerical;
      }
      return kExitOk;
    });
  } catch (const std::invalid_argument& error) {
    err << "error: " << error.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& error) {
    err << "error: " << error.what() << '\n';
    return kExitNumerical;
  }
}

int cmd_converge(const RunSpec& spec, std::ostream& out, std::ostream& err) {
  try {
    const BenchmarkProblem& problem = find_problem(spec.problem);
    const std::vector<LadderLevel> levels = resolve_ladder(spec, problem);

    LadderOptions options;
    options.fp_tol = spec.fp_tol;
    options.fp_max_iters = spec.fp_max_iters;
    const ConvergenceTable table =
        run_ladder(problem, spec.node_count, spec.basis_size, levels, options);

    const int digits = report_digits(spec.full_precision);
    write_convergence_text(out, table, digits);
    if (!spec.out_path.empty()) {
      const int status = with_output(spec.out_path, out, err, [&](std::ostream& sink) {
        write_convergence_csv(sink, table, digits);
        return kExitOk;
      });
      if (status != kExitOk) return status;
    }

    for (const ConvergenceRow& row : table.rows)
      if (row.failure) {
        err << "error: level " << row.level.label << " " << *row.failure << '\n';
        return kExitNumerical;
      }
    return kExitOk;
  } catch (const std::invalid_argument& error) {
    err << "error: " << error.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& error) {
    err << "error: " << error.what() << '\n';
    return kExitNumerical;
  }
}

}  // namespace hbvm
