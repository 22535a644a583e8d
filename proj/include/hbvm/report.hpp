#pragma once

#include <iosfwd>
#include <string>

#include "hbvm/analysis.hpp"
#include "hbvm/integrator.hpp"
#include "hbvm/problems.hpp"

namespace hbvm {

/// Scientific notation with `significant_digits` digits, e.g. 2.5700e-02.
std::string format_scientific(double value, int significant_digits);

/// Significant digits used by the reports: 5 normally, 17 with
/// full_precision (round-trippable doubles).
int report_digits(bool full_precision);

/// One CSV row per mesh point: t, positions, momenta, multiplier components,
/// |H - H_0|, per-constraint |g_i|, hidden-constraint norm, sweep count.
/// The final mesh point starts no step, so its multiplier/iteration cells are
/// empty. Comma separated, '.' decimal, LF line endings, header row first.
void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory,
                          const ConstrainedHamiltonianSystem& sys, int significant_digits);

/// Convergence table as CSV: n, e_s, rate_s, e_lambda, rate_lambda, e_H, e_g,
/// e_hc, rate_hc. Failed levels carry an error column instead of values.
void write_convergence_csv(std::ostream& out, const ConvergenceTable& table,
                           int significant_digits);

/// The same table as column-aligned plain text.
void write_convergence_text(std::ostream& out, const ConvergenceTable& table,
                            int significant_digits);

}  // namespace hbvm
