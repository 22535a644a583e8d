#pragma once

#include <Eigen/Dense>

#include <functional>
#include <stdexcept>

namespace hbvm {

/// Separable Hamiltonian H(q,p) = p^T M^{-1} p / 2 + U(q) restricted to the
/// manifold g(q) = 0 with nu < dim independent constraints. The inverse mass
/// is supplied as an action so no factorization API is imposed; derivatives
/// are user-supplied (no automatic differentiation).
struct ConstrainedHamiltonianSystem {
  int dim = 0;               // q, p in R^dim
  int constraint_count = 0;  // nu; 0 means unconstrained

  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> mass_inverse;  // v -> M^{-1} v
  std::function<double(const Eigen::VectorXd&)> potential;              // U(q)
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> potential_gradient;

  // Unused (may be empty) when constraint_count == 0.
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> constraint;            // g(q), R^nu
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> constraint_jacobian;   // dim x nu

  // (q, w) -> second derivative of g at q along (w, w). Optional: only
  // exact_multiplier needs it; the integrator never evaluates second
  // derivatives of the constraints.
  std::function<Eigen::VectorXd(const Eigen::VectorXd&, const Eigen::VectorXd&)>
      constraint_curvature;
};

struct State {
  double t = 0.0;
  Eigen::VectorXd q;
  Eigen::VectorXd p;
};

/// The nu x nu multiplier matrix grad(g)^T M^{-1} grad(g) is singular (or
/// numerically so) at the evaluation point.
struct RegularityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

double hamiltonian(const ConstrainedHamiltonianSystem& sys, const Eigen::VectorXd& q,
                   const Eigen::VectorXd& p);

/// H(q,p) + multiplier^T g(q).
double augmented_hamiltonian(const ConstrainedHamiltonianSystem& sys,
                             const Eigen::VectorXd& q, const Eigen::VectorXd& p,
                             const Eigen::VectorXd& multiplier);

struct ConsistencyReport {
  double constraint_norm = 0.0;  // ||g(q)||_inf
  double hidden_norm = 0.0;      // ||grad(g)^T M^{-1} p||_inf
  bool ok = false;
};

/// Checks that (q, p) lies on the constraint manifold and its tangent space
/// within `tol`. Always ok for unconstrained systems.
ConsistencyReport check_consistency(const ConstrainedHamiltonianSystem& sys,
                                    const Eigen::VectorXd& q, const Eigen::VectorXd& p,
                                    double tol = 1e-12);

/// The multiplier of the continuous flow at (q, p): solves
///   [grad(g)^T M^{-1} grad(g)] lambda = g''(M^{-1}p, M^{-1}p) - grad(g)^T M^{-1} grad(U).
/// Requires constraint_curvature. Throws RegularityError on a singular system.
Eigen::VectorXd exact_multiplier(const ConstrainedHamiltonianSystem& sys,
                                 const Eigen::VectorXd& q, const Eigen::VectorXd& p);

/// Solves A x = b by dense LU with partial pivoting, throwing RegularityError
/// when the smallest pivot falls below 1e-13 times the matrix max-norm.
Eigen::VectorXd solve_checked(const Eigen::MatrixXd& matrix, const Eigen::VectorXd& rhs,
                              const char* context);

}  // namespace hbvm
