#pragma once

#include <iosfwd>
#include <optional>
#include <string>

namespace hbvm {

/// Exit codes shared by all subcommands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitNumerical = 2;

/// A resolved command-line request. Stepsize/horizon combinations:
///  - integrate: two of {h, steps, periods} (periods requires a periodic
///    problem; steps+periods means h = periods * T / steps);
///  - converge with h0: levels halving ladder h0 * 2^-n, `steps` counted at
///    the coarsest level and doubled per level;
///  - converge with periods: levels with h = T / (steps * (n+1)) over
///    `periods` periods, i.e. `steps` steps per period at the coarsest level.
struct RunSpec {
  std::string problem;
  int basis_size = 1;  // --s
  int node_count = 1;  // --k
  std::optional<double> h;
  std::optional<int> steps;
  std::optional<double> periods;
  std::optional<int> levels;
  std::optional<double> h0;
  std::string out_path;  // empty: stdout
  double fp_tol = 1e-14;
  int fp_max_iters = 200;
  bool full_precision = false;
};

/// Prints the registry: name, dimension, constraint count, reference kind,
/// period when one exists.
int cmd_list_problems(std::ostream& out);

/// Integrates one run and writes the trajectory CSV to spec.out_path (stdout
/// when empty). Partial output is flushed on failure.
int cmd_integrate(const RunSpec& spec, std::ostream& out, std::ostream& err);

/// Runs a stepsize ladder, prints the formatted table to `out`, and writes
/// the CSV to spec.out_path when given.
int cmd_converge(const RunSpec& spec, std::ostream& out, std::ostream& err);

}  // namespace hbvm
