#pragma once

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

#include "hbvm/legendre.hpp"
#include "hbvm/system.hpp"

namespace hbvm {

/// One method configuration: HBVM(node_count, basis_size) with stepsize h.
/// The multiplier equation is solved exactly when the system has constraints;
/// for unconstrained systems the scheme degenerates to the basis_size-stage
/// Gauss collocation method when node_count == basis_size.
struct Config {
  int basis_size = 1;  // s
  int node_count = 1;  // k >= s
  double h = 0.01;

  double fp_tol = 1e-14;   // fixed-point increment tolerance (relative to 1 + iterate)
  int fp_max_iters = 200;  // sweeps before the step is declared failed
};

/// Unknowns of one step: columns of `velocity` / `potential_gradient` and the
/// entries of `constraint_gradient` are the Legendre-basis coefficients of
/// M^{-1} v(ch), grad U(u(ch)), grad g(u(ch)) respectively; `multiplier` is
/// the step's constant multiplier.
struct SpectralCoefficients {
  Eigen::MatrixXd velocity;                          // dim x s
  Eigen::MatrixXd potential_gradient;                // dim x s
  std::vector<Eigen::MatrixXd> constraint_gradient;  // s entries, dim x nu
  Eigen::VectorXd multiplier;                        // nu

  int iterations = 0;
  bool converged = false;
};

/// Internal stage values at the quadrature nodes (one column per node).
struct StageValues {
  Eigen::MatrixXd positions;  // dim x k
  Eigen::MatrixXd momenta;    // dim x k
};

/// Fixed-point sweep, part (a): polynomial positions/momenta at the nodes
/// from the current coefficients.
StageValues stage_values(const Eigen::VectorXd& q0, const Eigen::VectorXd& p0,
                         const SpectralCoefficients& coeffs, const BasisTables& tables,
                         double h);

/// Fixed-point sweep, part (b): quadrature projections of the stage data onto
/// the basis. The returned coefficients carry an empty multiplier.
SpectralCoefficients compute_coefficients(const ConstrainedHamiltonianSystem& sys,
                                          const StageValues& stages,
                                          const BasisTables& tables);

/// Fixed-point sweep, part (c): the nu x nu linear system for the step's
/// constant multiplier. Throws RegularityError when singular.
Eigen::VectorXd solve_multiplier(const ConstrainedHamiltonianSystem& sys,
                                 const SpectralCoefficients& coeffs,
                                 const Eigen::VectorXd& p0, const BasisTables& tables,
                                 double h);

/// The fixed-point iteration did not reach fp_tol within fp_max_iters sweeps.
struct ConvergenceError : std::runtime_error {
  ConvergenceError(double increment, int iterations);
  double last_increment;
  int iterations;
};

struct StepResult {
  State state;
  SpectralCoefficients coefficients;
};

/// Advances one step of size config.h from `from`. `multiplier_guess` warm
/// starts the multiplier (zero if absent). Throws ConvergenceError or
/// RegularityError on failure; never returns an unconverged result.
StepResult step(const ConstrainedHamiltonianSystem& sys, const Config& config,
                const BasisTables& tables, const State& from,
                const std::optional<Eigen::VectorXd>& multiplier_guess = std::nullopt);

/// Steps forward by +h then backward by -h and returns the max-norm distance
/// from the original (q, p). Symmetry of the scheme keeps this at the
/// fixed-point tolerance level.
double roundtrip_residual(const ConstrainedHamiltonianSystem& sys, const Config& config,
                          const BasisTables& tables, const State& from);

struct Trajectory {
  struct StepRecord {
    Eigen::VectorXd multiplier;  // constant on [t_n, t_{n+1}]
    int iterations = 0;
  };
  struct Failure {
    int step_index = 0;
    std::string message;
  };

  Config config;
  std::vector<State> states;      // n_steps + 1 entries on the uniform mesh
  std::vector<StepRecord> steps;  // one entry per completed step
  std::optional<Failure> failure; // set when integration aborted early
};

/// Integrates n_steps uniform steps from (q0, p0) at t = 0. Initial data must
/// be consistent (1e-12) when the system is constrained. On step failure the
/// partial trajectory is returned with `failure` set.
Trajectory integrate(const ConstrainedHamiltonianSystem& sys, const Config& config,
                     const BasisTables& tables, const Eigen::VectorXd& q0,
                     const Eigen::VectorXd& p0, int n_steps);

}  // namespace hbvm
