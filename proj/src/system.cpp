#include "hbvm/system.hpp"

#include <string>

namespace hbvm {

double hamiltonian(const ConstrainedHamiltonianSystem& sys, const Eigen::VectorXd& q,
                   const Eigen::VectorXd& p) {
  return 0.5 * p.dot(sys.mass_inverse(p)) + sys.potential(q);
}

double augmented_hamiltonian(const ConstrainedHamiltonianSystem& sys,
                             const Eigen::VectorXd& q, const Eigen::VectorXd& p,
                             const Eigen::VectorXd& multiplier) {
  double value = hamiltonian(sys, q, p);
  if (sys.constraint_count > 0) value += multiplier.dot(sys.constraint(q));
  return value;
}

ConsistencyReport check_consistency(const ConstrainedHamiltonianSystem& sys,
                                    const Eigen::VectorXd& q, const Eigen::VectorXd& p,
                                    double tol) {
  ConsistencyReport report;
  if (sys.constraint_count == 0) {
    report.ok = true;
    return report;
  }
  report.constraint_norm = sys.constraint(q).cwiseAbs().maxCoeff();
  report.hidden_norm =
      (sys.constraint_jacobian(q).transpose() * sys.mass_inverse(p)).cwiseAbs().maxCoeff();
  report.ok = report.constraint_norm <= tol && report.hidden_norm <= tol;
  return report;
}

Eigen::VectorXd solve_checked(const Eigen::MatrixXd& matrix, const Eigen::VectorXd& rhs,
                              const char* context) {
  const double scale = matrix.cwiseAbs().maxCoeff();
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(matrix);
  const double min_pivot = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
  if (!(min_pivot > 1e-13 * scale))
    throw RegularityError(std::string(context) + ": multiplier system singular");
  return lu.solve(rhs);
}

Eigen::VectorXd exact_multiplier(const ConstrainedHamiltonianSystem& sys,
                                 const Eigen::VectorXd& q, const Eigen::VectorXd& p) {
  if (sys.constraint_count == 0) return Eigen::VectorXd(0);
  if (!sys.constraint_curvature)
    throw std::logic_error("exact_multiplier: constraint_curvature not provided");

  const Eigen::MatrixXd jacobian = sys.constraint_jacobian(q);
  Eigen::MatrixXd minv_jacobian(jacobian.rows(), jacobian.cols());
  for (int j = 0; j < jacobian.cols(); ++j)
    minv_jacobian.col(j) = sys.mass_inverse(jacobian.col(j));

  const Eigen::VectorXd velocity = sys.mass_inverse(p);
  const Eigen::VectorXd rhs = sys.constraint_curvature(q, velocity) -
                              jacobian.transpose() * sys.mass_inverse(sys.potential_gradient(q));
  return solve_checked(jacobian.transpose() * minv_jacobian, rhs, "exact_multiplier");
}

}  // namespace hbvm
