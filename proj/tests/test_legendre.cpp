#include <doctest.h>

#include <cmath>

#include "hbvm/legendre.hpp"
#include "oracles.hpp"

using namespace hbvm;

TEST_CASE("basis values against the orthonormalization oracle") {
  CHECK(shifted_legendre(0, 0.37) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(shifted_legendre(1, 0.5) == doctest::Approx(0.0).epsilon(1e-15));

  // Tolerance reflects the oracle: the monomial moment matrix has condition
  // number ~1e7 at size 6, so the orthonormalized coefficients carry ~1e-10.
  const auto basis = oracles::gram_schmidt_basis(6);
  for (const double x : {0.0, 0.13, 0.5, 0.77, 1.0})
    for (int j = 0; j < 6; ++j)
      CHECK(shifted_legendre(j, x) ==
            doctest::Approx(oracles::eval_poly(basis[j], x)).epsilon(1e-9));

  CHECK(shifted_legendre(1, 1.0) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-15));
  CHECK(shifted_legendre(2, 0.0) == doctest::Approx(std::sqrt(5.0)).epsilon(1e-15));
}

TEST_CASE("basis derivative by central differences") {
  const double delta = 1e-6;
  for (int j = 0; j <= 8; ++j)
    for (const double x : {0.1, 0.42, 0.9}) {
      const double numeric =
          (shifted_legendre(j, x + delta) - shifted_legendre(j, x - delta)) / (2 * delta);
      CHECK(shifted_legendre_derivative(j, x) ==
            doctest::Approx(numeric).epsilon(1e-7).scale(1.0 + std::abs(numeric)));
    }
}

TEST_CASE("basis integral closed form") {
  for (const double x : {0.0, 0.2, 0.6, 1.0})
    CHECK(shifted_legendre_integral(0, x) == doctest::Approx(x).epsilon(1e-15));

  for (int j = 1; j <= 12; ++j)
    CHECK(shifted_legendre_integral(j, 1.0) == doctest::Approx(0.0).epsilon(1e-14));

  CHECK(shifted_legendre_integral(1, 0.5) ==
        doctest::Approx(-std::sqrt(3.0) / 4.0).epsilon(1e-15));

  for (int j = 0; j <= 10; ++j)
    for (const double x : {0.21, 0.5, 0.83, 1.0}) {
      const double numeric = oracles::adaptive_simpson(
          [j](double t) { return shifted_legendre(j, t); }, 0.0, x, 1e-14);
      CHECK(shifted_legendre_integral(j, x) == doctest::Approx(numeric).epsilon(1e-12));
    }
}

TEST_CASE("one- and two-point Gauss rules in closed form") {
  const QuadratureRule one = gauss_legendre(1);
  CHECK(one.nodes[0] == doctest::Approx(0.5).epsilon(1e-16));
  CHECK(one.weights[0] == doctest::Approx(1.0).epsilon(1e-16));

  const QuadratureRule two = gauss_legendre(2);
  CHECK(two.nodes[0] == doctest::Approx((3.0 - std::sqrt(3.0)) / 6.0).epsilon(1e-15));
  CHECK(two.nodes[1] == doctest::Approx((3.0 + std::sqrt(3.0)) / 6.0).epsilon(1e-15));
  CHECK(two.weights[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(two.weights[1] == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("quadrature exactness, positivity, symmetry up to the size cap") {
  for (int k = 1; k <= kMaxBasisSize; ++k) {
    const QuadratureRule rule = gauss_legendre(k);
    double weight_sum = 0.0;
    for (int i = 0; i < k; ++i) {
      CHECK(rule.weights[i] > 0.0);
      weight_sum += rule.weights[i];
      if (i > 0) CHECK(rule.nodes[i] > rule.nodes[i - 1]);
      CHECK(std::abs(rule.nodes[i] + rule.nodes[k - 1 - i] - 1.0) <= 1e-14);
      CHECK(std::abs(rule.weights[i] - rule.weights[k - 1 - i]) <= 1e-14);
    }
    CHECK(std::abs(weight_sum - 1.0) <= 1e-14);

    for (int d = 0; d < 2 * k; ++d) {
      double sum = 0.0;
      for (int i = 0; i < k; ++i) sum += rule.weights[i] * std::pow(rule.nodes[i], d);
      CHECK(std::abs(sum - 1.0 / (d + 1)) <= 1e-14);
    }
  }
}

TEST_CASE("integration matrix entries for small sizes") {
  const BasisTables one = build_tables(1, 1);
  CHECK(one.integration_matrix(0, 0) == doctest::Approx(0.5).epsilon(1e-16));

  const BasisTables two = build_tables(2, 2);
  const double xi1 = 0.5 / std::sqrt(3.0);
  CHECK(two.integration_matrix(0, 0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(two.integration_matrix(0, 1) == doctest::Approx(-xi1).epsilon(1e-15));
  CHECK(two.integration_matrix(1, 0) == doctest::Approx(xi1).epsilon(1e-15));
  CHECK(two.integration_matrix(1, 1) == doctest::Approx(0.0).epsilon(1e-16));
}

TEST_CASE("integration matrix structure at larger sizes") {
  const BasisTables tables = build_tables(7, 9);
  const Eigen::MatrixXd& x = tables.integration_matrix;
  for (int i = 0; i < 7; ++i)
    for (int j = 0; j < 7; ++j) {
      if (i == 0 && j == 0)
        CHECK(x(i, j) == doctest::Approx(integration_coeff(0)));
      else if (i == j + 1)
        CHECK(x(i, j) == doctest::Approx(integration_coeff(i)));
      else if (j == i + 1)
        CHECK(x(i, j) == doctest::Approx(-integration_coeff(j)));
      else
        CHECK(x(i, j) == 0.0);
    }
}

TEST_CASE("discrete orthonormality and the integration identity") {
  for (int s = 1; s <= 12; ++s)
    for (int k = s; k <= 12; ++k) {
      const BasisTables tables = build_tables(s, k);
      const Eigen::MatrixXd weighted =
          tables.basis_at_nodes.transpose() * tables.weights.asDiagonal();
      const Eigen::MatrixXd gram = weighted * tables.basis_at_nodes;
      CHECK((gram - Eigen::MatrixXd::Identity(s, s)).cwiseAbs().maxCoeff() <= 1e-13);

      const Eigen::MatrixXd integral = weighted * tables.basis_integral_at_nodes;
      CHECK((integral - tables.integration_matrix).cwiseAbs().maxCoeff() <= 1e-13);
    }
}

TEST_CASE("table construction rejects bad sizes") {
  CHECK_THROWS_AS(build_tables(2, 1), std::invalid_argument);
  CHECK_THROWS_AS(build_tables(0, 1), std::invalid_argument);
  CHECK_THROWS_AS(build_tables(1, kMaxBasisSize + 1), std::invalid_argument);
  CHECK_THROWS_AS(gauss_legendre(0), std::invalid_argument);
}
