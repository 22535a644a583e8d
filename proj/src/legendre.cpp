#include "hbvm/legendre.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace hbvm {

namespace {

// Classical Legendre value and derivative on [-1,1] by the three-term
// recurrence; the shifted orthonormal basis is obtained from these via the
// affine map x -> 2x-1 and the sqrt(2j+1) normalization.
void classical_legendre(int degree, double t, double& value, double& derivative) {
  double p_prev = 1.0, d_prev = 0.0;  // L_0
  if (degree == 0) {
    value = p_prev;
    derivative = d_prev;
    return;
  }
  double p = t, d = 1.0;  // L_1
  for (int n = 2; n <= degree; ++n) {
    const double p_next = ((2 * n - 1) * t * p - (n - 1) * p_prev) / n;
    const double d_next = ((2 * n - 1) * (p + t * d) - (n - 1) * d_prev) / n;
    p_prev = p;
    d_prev = d;
    p = p_next;
    d = d_next;
  }
  value = p;
  derivative = d;
}

void require_degree(int degree) {
  if (degree < 0) throw std::invalid_argument("legendre: degree must be nonnegative");
}

}  // namespace

double shifted_legendre(int degree, double x) {
  require_degree(degree);
  double value, derivative;
  classical_legendre(degree, 2.0 * x - 1.0, value, derivative);
  return std::sqrt(2.0 * degree + 1.0) * value;
}

double shifted_legendre_derivative(int degree, double x) {
  require_degree(degree);
  double value, derivative;
  classical_legendre(degree, 2.0 * x - 1.0, value, derivative);
  return 2.0 * std::sqrt(2.0 * degree + 1.0) * derivative;
}

double shifted_legendre_integral(int degree, double x) {
  require_degree(degree);
  if (degree == 0) return x;
  // int_0^x P_j = xi_{j+1} P_{j+1}(x) - xi_j P_{j-1}(x); both boundary terms
  // vanish at x = 0 and the whole expression vanishes at x = 1 for j >= 1.
  return integration_coeff(degree + 1) * shifted_legendre(degree + 1, x) -
         integration_coeff(degree) * shifted_legendre(degree - 1, x);
}

double integration_coeff(int j) {
  if (j < 0) throw std::invalid_argument("integration_coeff: index must be nonnegative");
  return 0.5 / std::sqrt(std::abs(4.0 * j * j - 1.0));
}

QuadratureRule gauss_legendre(int node_count) {
  if (node_count < 1 || node_count > kMaxBasisSize)
    throw std::invalid_argument("gauss_legendre: node_count must be in [1, " +
                                std::to_string(kMaxBasisSize) + "]");
  const int k = node_count;
  QuadratureRule rule;
  rule.nodes.resize(k);
  rule.weights.resize(k);

  constexpr double tol = 1e-15;
  constexpr int max_iters = 100;
  for (int i = 0; i < k; ++i) {
    // Chebyshev initial guess, mapped so nodes come out ascending in [0,1].
    double t = -std::cos(M_PI * (2.0 * i + 1.0) / (2.0 * k));
    double value = 0.0, derivative = 1.0;
    bool converged = false;
    for (int iter = 0; iter < max_iters; ++iter) {
      classical_legendre(k, t, value, derivative);
      const double delta = value / derivative;
      t -= delta;
      if (std::abs(delta) <= 2.0 * tol) {  // |delta c| = |delta t| / 2
        converged = true;
        break;
      }
    }
    if (!converged)
      throw std::runtime_error("gauss_legendre: Newton iteration failed for k=" +
                               std::to_string(k));
    classical_legendre(k, t, value, derivative);
    rule.nodes[i] = 0.5 * (1.0 + t);
    rule.weights[i] = 1.0 / ((1.0 - t * t) * derivative * derivative);
  }

  // Pin the node/weight symmetry about 1/2 at round-off.
  for (int i = 0; i < k / 2; ++i) {
    const int j = k - 1 - i;
    const double c = 0.5 * (rule.nodes[i] + (1.0 - rule.nodes[j]));
    rule.nodes[i] = c;
    rule.nodes[j] = 1.0 - c;
    const double w = 0.5 * (rule.weights[i] + rule.weights[j]);
    rule.weights[i] = w;
    rule.weights[j] = w;
  }
  if (k % 2 == 1) rule.nodes[k / 2] = 0.5;

  // Defining property: the rule must reproduce monomial integrals through
  // degree 2k-1. Fail loudly rather than return a defective rule.
  for (int d = 0; d < 2 * k; ++d) {
    double sum = 0.0;
    for (int i = 0; i < k; ++i) sum += rule.weights[i] * std::pow(rule.nodes[i], d);
    if (std::abs(sum - 1.0 / (d + 1)) > 1e-13)
      throw std::runtime_error("gauss_legendre: exactness check failed for k=" +
                               std::to_string(k) + ", degree " + std::to_string(d));
  }
  return rule;
}

BasisTables build_tables(int basis_size, int node_count) {
  if (basis_size < 1 || node_count < basis_size || node_count > kMaxBasisSize)
    throw std::invalid_argument(
        "build_tables: need 1 <= basis_size <= node_count <= " +
        std::to_string(kMaxBasisSize));

  BasisTables tables;
  tables.basis_size = basis_size;
  tables.node_count = node_count;
  QuadratureRule rule = gauss_legendre(node_count);
  tables.nodes = std::move(rule.nodes);
  tables.weights = std::move(rule.weights);

  tables.basis_at_nodes.resize(node_count, basis_size);
  tables.basis_integral_at_nodes.resize(node_count, basis_size);
  for (int i = 0; i < node_count; ++i) {
    for (int j = 0; j < basis_size; ++j) {
      tables.basis_at_nodes(i, j) = shifted_legendre(j, tables.nodes[i]);
      tables.basis_integral_at_nodes(i, j) = shifted_legendre_integral(j, tables.nodes[i]);
    }
  }

  tables.integration_matrix = Eigen::MatrixXd::Zero(basis_size, basis_size);
  tables.integration_matrix(0, 0) = integration_coeff(0);
  for (int j = 1; j < basis_size; ++j) {
    tables.integration_matrix(j, j - 1) = integration_coeff(j);
    tables.integration_matrix(j - 1, j) = -integration_coeff(j);
  }
  return tables;
}

}  // namespace hbvm
