#include "hbvm/report.hpp"

#include <algorithm>
#include <cstdio>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <vector>

namespace hbvm {

std::string format_scientific(double value, int significant_digits) {
  const int digits = std::clamp(significant_digits, 1, 17);
  char buffer[48];
  std::snprintf(buffer, sizeof(buffer), "%.*e", digits - 1, value);
  return buffer;
}

int report_digits(bool full_precision) { return full_precision ? 17 : 5; }

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory,
                          const ConstrainedHamiltonianSystem& sys, int significant_digits) {
  const int dim = sys.dim;
  const int nu = sys.constraint_count;

  out << "t";
  for (int i = 1; i <= dim; ++i) out << ",q" << i;
  for (int i = 1; i <= dim; ++i) out << ",p" << i;
  for (int i = 1; i <= nu; ++i) out << ",lambda" << i;
  out << ",energy_error";
  for (int i = 1; i <= nu; ++i) out << ",constraint" << i;
  out << ",hidden_constraint,iterations\n";

  if (trajectory.states.empty()) return;
  const double energy0 =
      hamiltonian(sys, trajectory.states.front().q, trajectory.states.front().p);

  for (size_t n = 0; n < trajectory.states.size(); ++n) {
    const State& state = trajectory.states[n];
    const bool has_step = n < trajectory.steps.size();

    out << format_scientific(state.t, significant_digits);
    for (int i = 0; i < dim; ++i)
      out << ',' << format_scientific(state.q[i], significant_digits);
    for (int i = 0; i < dim; ++i)
      out << ',' << format_scientific(state.p[i], significant_digits);
    for (int i = 0; i < nu; ++i) {
      out << ',';
      if (has_step)
        out << format_scientific(trajectory.steps[n].multiplier[i], significant_digits);
    }
    out << ','
        << format_scientific(std::abs(hamiltonian(sys, state.q, state.p) - energy0),
                             significant_digits);
    if (nu > 0) {
      const Eigen::VectorXd g = sys.constraint(state.q);
      for (int i = 0; i < nu; ++i)
        out << ',' << format_scientific(std::abs(g[i]), significant_digits);
      const double hidden = (sys.constraint_jacobian(state.q).transpose() *
                             sys.mass_inverse(state.p))
                                .cwiseAbs()
                                .maxCoeff();
      out << ',' << format_scientific(hidden, significant_digits);
    } else {
      out << ',' << format_scientific(0.0, significant_digits);
    }
    out << ',';
    if (has_step) out << trajectory.steps[n].iterations;
    out << '\n';
  }
}

namespace {

std::string rate_cell(const std::optional<double>& rate) {
  if (!rate) return "";
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.2f", *rate);
  return buffer;
}

std::string optional_cell(const std::optional<double>& value, int digits) {
  return value ? format_scientific(*value, digits) : std::string();
}

std::vector<std::vector<std::string>> table_cells(const ConvergenceTable& table,
                                                  int digits) {
  std::vector<std::vector<std::string>> rows;
  for (const ConvergenceRow& row : table.rows) {
    if (row.failure) {
      rows.push_back({row.level.label, "failed: " + *row.failure, "", "", "", "", "", "", ""});
      continue;
    }
    rows.push_back({row.level.label,
                    format_scientific(row.errors.solution, digits),
                    rate_cell(row.rate_solution),
                    optional_cell(row.errors.multiplier, digits),
                    rate_cell(row.rate_multiplier),
                    format_scientific(row.errors.energy, digits),
                    format_scientific(row.errors.constraint, digits),
                    format_scientific(row.errors.hidden, digits),
                    rate_cell(row.rate_hidden)});
  }
  return rows;
}

const char* kHeader[9] = {"n",   "e_s", "rate_s", "e_lambda", "rate_lambda",
                          "e_H", "e_g", "e_hc",   "rate_hc"};

}  // namespace

void write_convergence_csv(std::ostream& out, const ConvergenceTable& table,
                           int significant_digits) {
  for (int c = 0; c < 9; ++c) out << (c ? "," : "") << kHeader[c];
  out << '\n';
  for (const auto& cells : table_cells(table, significant_digits)) {
    for (size_t c = 0; c < cells.size(); ++c) out << (c ? "," : "") << cells[c];
    out << '\n';
  }
}

void write_convergence_text(std::ostream& out, const ConvergenceTable& table,
                            int significant_digits) {
  out << table.problem << ", " << table.node_count << " nodes, " << table.basis_size
      << " polynomials\n";
  const auto rows = table_cells(table, significant_digits);
  std::vector<size_t> widths(9);
  for (int c = 0; c < 9; ++c) widths[c] = std::string(kHeader[c]).size();
  for (const auto& cells : rows)
    for (size_t c = 0; c < cells.size() && c < 9; ++c)
      widths[c] = std::max(widths[c], cells[c].size());

  auto emit = [&](const std::vector<std::string>& cells) {
    for (size_t c = 0; c < 9; ++c)
      out << (c ? "  " : "") << std::setw(static_cast<int>(widths[c]))
          << (c < cells.size() ? cells[c] : std::string("--"));
    out << '\n';
  };
  std::vector<std::string> header(kHeader, kHeader + 9);
  emit(header);
  for (auto cells : rows) {
    for (auto& cell : cells)
      if (cell.empty()) cell = "--";
    emit(cells);
  }
}

}  // namespace hbvm
