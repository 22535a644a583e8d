#pragma once

#include <Eigen/Dense>

namespace hbvm {

/// Largest supported basis size / node count. Larger requests are rejected.
inline constexpr int kMaxBasisSize = 30;

/// Value of the degree-`degree` polynomial of the Legendre basis that is
/// orthonormal on [0,1]: int_0^1 P_i(x) P_j(x) dx = delta_ij, P_0 = 1.
double shifted_legendre(int degree, double x);

/// Derivative d/dx of shifted_legendre.
double shifted_legendre_derivative(int degree, double x);

/// int_0^x P_degree(t) dt, evaluated through the closed-form expression in
/// the neighbouring basis polynomials (no quadrature).
double shifted_legendre_integral(int degree, double x);

/// Recurrence coefficient 1 / (2 sqrt(|4 j^2 - 1|)) appearing in the
/// integration matrix and the multiplier equation.
double integration_coeff(int j);

struct QuadratureRule {
  Eigen::VectorXd nodes;    // ascending, strictly inside (0,1)
  Eigen::VectorXd weights;  // positive, summing to 1
};

/// Gauss-Legendre rule with `node_count` points on [0,1]; integrates
/// polynomials of degree <= 2*node_count - 1 exactly. Nodes are found by
/// Newton iteration and verified post hoc by monomial exactness.
QuadratureRule gauss_legendre(int node_count);

/// Precomputed basis/quadrature data shared by every step of one method
/// configuration. Immutable after construction, safe to share across threads.
struct BasisTables {
  int basis_size = 0;  // s: polynomials of degree 0 .. s-1
  int node_count = 0;  // k >= s quadrature points

  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
  Eigen::MatrixXd basis_at_nodes;           // k x s, (i,j) = P_j(nodes[i])
  Eigen::MatrixXd basis_integral_at_nodes;  // k x s, (i,j) = int_0^{nodes[i]} P_j
  Eigen::MatrixXd integration_matrix;       // s x s lower-bidiagonal-plus-superdiagonal
};

/// Assembles the tables for `basis_size` polynomials and `node_count` nodes.
/// Requires 1 <= basis_size <= node_count <= kMaxBasisSize.
BasisTables build_tables(int basis_size, int node_count);

}  // namespace hbvm
