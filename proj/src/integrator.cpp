#include "hbvm/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace hbvm {

namespace {

Eigen::MatrixXd apply_mass_inverse(const ConstrainedHamiltonianSystem& sys,
                                   const Eigen::MatrixXd& columns) {
  Eigen::MatrixXd out(columns.rows(), columns.cols());
  for (int j = 0; j < columns.cols(); ++j) out.col(j) = sys.mass_inverse(columns.col(j));
  return out;
}

void validate(const ConstrainedHamiltonianSystem& sys, const Config& config,
              const BasisTables& tables) {
  if (config.basis_size != tables.basis_size || config.node_count != tables.node_count)
    throw std::invalid_argument("step: tables do not match the configuration");
  if (config.basis_size < 1 || config.node_count < config.basis_size)
    throw std::invalid_argument("step: need 1 <= basis_size <= node_count");
  if (config.h == 0.0) throw std::invalid_argument("step: stepsize must be nonzero");
  if (!(config.fp_tol > 0.0) || config.fp_max_iters < 1)
    throw std::invalid_argument("step: invalid fixed-point parameters");
  if (sys.dim < 1 || sys.constraint_count < 0 || sys.constraint_count >= sys.dim)
    throw std::invalid_argument("step: invalid system dimensions");
}

double block_max_norm(const Eigen::MatrixXd& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

}  // namespace

ConvergenceError::ConvergenceError(double increment, int iters)
    : std::runtime_error("fixed-point iteration stalled at increment " +
                         std::to_string(increment) + " after " + std::to_string(iters) +
                         " sweeps"),
      last_increment(increment),
      iterations(iters) {}

StageValues stage_values(const Eigen::VectorXd& q0, const Eigen::VectorXd& p0,
                         const SpectralCoefficients& coeffs, const BasisTables& tables,
                         double h) {
  const int s = tables.basis_size;
  const int k = tables.node_count;

  Eigen::MatrixXd momentum_forcing = coeffs.potential_gradient;  // dim x s
  if (coeffs.multiplier.size() > 0)
    for (int j = 0; j < s; ++j)
      momentum_forcing.col(j) += coeffs.constraint_gradient[j] * coeffs.multiplier;

  StageValues stages;
  stages.positions = q0.replicate(1, k) +
                     h * (coeffs.velocity * tables.basis_integral_at_nodes.transpose());
  stages.momenta = p0.replicate(1, k) -
                   h * (momentum_forcing * tables.basis_integral_at_nodes.transpose());
  return stages;
}

SpectralCoefficients compute_coefficients(const ConstrainedHamiltonianSystem& sys,
                                          const StageValues& stages,
                                          const BasisTables& tables) {
  const int s = tables.basis_size;
  const int k = tables.node_count;
  const int nu = sys.constraint_count;

  // weighted(l, j) = b_l P_j(c_l): one projection matrix serves all three blocks.
  const Eigen::MatrixXd weighted = tables.weights.asDiagonal() * tables.basis_at_nodes;

  SpectralCoefficients coeffs;
  coeffs.velocity = apply_mass_inverse(sys, stages.momenta * weighted);

  Eigen::MatrixXd gradients(sys.dim, k);
  for (int l = 0; l < k; ++l) gradients.col(l) = sys.potential_gradient(stages.positions.col(l));
  coeffs.potential_gradient = gradients * weighted;

  coeffs.constraint_gradient.assign(s, Eigen::MatrixXd::Zero(sys.dim, nu));
  if (nu > 0) {
    for (int l = 0; l < k; ++l) {
      const Eigen::MatrixXd jacobian = sys.constraint_jacobian(stages.positions.col(l));
      for (int j = 0; j < s; ++j) coeffs.constraint_gradient[j] += weighted(l, j) * jacobian;
    }
  }
  return coeffs;
}

Eigen::VectorXd solve_multiplier(const ConstrainedHamiltonianSystem& sys,
                                 const SpectralCoefficients& coeffs,
                                 const Eigen::VectorXd& p0, const BasisTables& tables,
                                 double h) {
  const int s = tables.basis_size;
  const auto& rho = coeffs.constraint_gradient;

  std::vector<Eigen::MatrixXd> minv_rho(s);
  for (int j = 0; j < s; ++j) minv_rho[j] = apply_mass_inverse(sys, rho[j]);
  const Eigen::MatrixXd minv_psi = apply_mass_inverse(sys, coeffs.potential_gradient);

  const double xi0 = integration_coeff(0);
  Eigen::MatrixXd matrix = xi0 * rho[0].transpose() * minv_rho[0];
  Eigen::VectorXd rhs =
      rho[0].transpose() * (sys.mass_inverse(p0) - h * xi0 * minv_psi.col(0));
  for (int j = 1; j < s; ++j) {
    const double xi = integration_coeff(j);
    matrix += xi * (rho[j].transpose() * minv_rho[j - 1] -
                    rho[j - 1].transpose() * minv_rho[j]);
    rhs -= h * xi * (rho[j].transpose() * minv_psi.col(j - 1) -
                     rho[j - 1].transpose() * minv_psi.col(j));
  }
  matrix *= h;
  return solve_checked(matrix, rhs, "solve_multiplier");
}

StepResult step(const ConstrainedHamiltonianSystem& sys, const Config& config,
                const BasisTables& tables, const State& from,
                const std::optional<Eigen::VectorXd>& multiplier_guess) {
  validate(sys, config, tables);
  const int s = config.basis_size;
  const int nu = sys.constraint_count;
  const double h = config.h;

  SpectralCoefficients coeffs;
  coeffs.velocity = Eigen::MatrixXd::Zero(sys.dim, s);
  coeffs.velocity.col(0) = sys.mass_inverse(from.p);
  coeffs.potential_gradient = Eigen::MatrixXd::Zero(sys.dim, s);
  coeffs.constraint_gradient.assign(s, Eigen::MatrixXd::Zero(sys.dim, nu));
  coeffs.multiplier =
      multiplier_guess ? *multiplier_guess : Eigen::VectorXd::Zero(nu);

  double increment = 0.0;
  for (int sweep = 1; sweep <= config.fp_max_iters; ++sweep) {
    const StageValues stages = stage_values(from.q, from.p, coeffs, tables, h);
    SpectralCoefficients next = compute_coefficients(sys, stages, tables);
    next.multiplier = nu > 0 ? solve_multiplier(sys, next, from.p, tables, h)
                             : Eigen::VectorXd(0);

    // The sweep updates the blocks in sequence, so the velocity block can
    // stall for one sweep while the gradient blocks still move; the increment
    // must cover every block or the iteration stops early.
    increment = std::max(block_max_norm(next.velocity - coeffs.velocity),
                         block_max_norm(next.potential_gradient -
                                        coeffs.potential_gradient));
    for (int j = 0; j < s; ++j)
      increment = std::max(increment, block_max_norm(next.constraint_gradient[j] -
                                                     coeffs.constraint_gradient[j]));
    if (nu > 0)
      increment = std::max(increment,
                           (next.multiplier - coeffs.multiplier).cwiseAbs().maxCoeff());

    coeffs.velocity = std::move(next.velocity);
    coeffs.potential_gradient = std::move(next.potential_gradient);
    coeffs.constraint_gradient = std::move(next.constraint_gradient);
    coeffs.multiplier = std::move(next.multiplier);
    coeffs.iterations = sweep;

    double scale = 1.0 + std::max(block_max_norm(coeffs.velocity),
                                  block_max_norm(coeffs.potential_gradient));
    for (int j = 0; j < s; ++j)
      scale = std::max(scale, 1.0 + block_max_norm(coeffs.constraint_gradient[j]));
    if (nu > 0) scale = std::max(scale, 1.0 + coeffs.multiplier.cwiseAbs().maxCoeff());
    if (increment <= config.fp_tol * scale) {
      coeffs.converged = true;
      break;
    }
  }
  if (!coeffs.converged) throw ConvergenceError(increment, coeffs.iterations);

  StepResult result;
  result.state.t = from.t + h;
  result.state.q = from.q + h * coeffs.velocity.col(0);
  Eigen::VectorXd momentum_forcing = coeffs.potential_gradient.col(0);
  if (nu > 0) momentum_forcing += coeffs.constraint_gradient[0] * coeffs.multiplier;
  result.state.p = from.p - h * momentum_forcing;
  result.coefficients = std::move(coeffs);
  return result;
}

double roundtrip_residual(const ConstrainedHamiltonianSystem& sys, const Config& config,
                          const BasisTables& tables, const State& from) {
  const StepResult forward = step(sys, config, tables, from);
  Config reversed = config;
  reversed.h = -config.h;
  const StepResult back =
      step(sys, reversed, tables, forward.state, forward.coefficients.multiplier);
  return std::max((back.state.q - from.q).cwiseAbs().maxCoeff(),
                  (back.state.p - from.p).cwiseAbs().maxCoeff());
}

Trajectory integrate(const ConstrainedHamiltonianSystem& sys, const Config& config,
                     const BasisTables& tables, const Eigen::VectorXd& q0,
                     const Eigen::VectorXd& p0, int n_steps) {
  if (n_steps < 0) throw std::invalid_argument("integrate: n_steps must be nonnegative");
  if (sys.constraint_count > 0) {
    const ConsistencyReport report = check_consistency(sys, q0, p0);
    if (!report.ok)
      throw std::invalid_argument(
          "integrate: initial data violates the constraints (|g| = " +
          std::to_string(report.constraint_norm) +
          ", |grad(g)^T M^{-1} p| = " + std::to_string(report.hidden_norm) + ")");
  }

  Trajectory trajectory;
  trajectory.config = config;
  trajectory.states.push_back({0.0, q0, p0});
  trajectory.states.reserve(n_steps + 1);
  trajectory.steps.reserve(n_steps);

  std::optional<Eigen::VectorXd> warm_start;
  for (int n = 0; n < n_steps; ++n) {
    try {
      StepResult result = step(sys, config, tables, trajectory.states.back(), warm_start);
      warm_start = result.coefficients.multiplier;
      trajectory.steps.push_back(
          {std::move(result.coefficients.multiplier), result.coefficients.iterations});
      trajectory.states.push_back(std::move(result.state));
    } catch (const std::runtime_error& error) {
      trajectory.failure = Trajectory::Failure{n, error.what()};
      break;
    }
  }
  return trajectory;
}

}  // namespace hbvm
