#include <doctest.h>

#include <cmath>
#include <random>

#include "hbvm/problems.hpp"
#include "hbvm/system.hpp"
#include "oracles.hpp"

using namespace hbvm;

TEST_CASE("hamiltonian values by hand") {
  const BenchmarkProblem pendulum = planar_pendulum();
  CHECK(hamiltonian(pendulum.system, pendulum.initial.q, pendulum.initial.p) ==
        doctest::Approx(-0.5).epsilon(1e-15));

  const BenchmarkProblem conical = conical_pendulum();
  CHECK(hamiltonian(conical.system, conical.initial.q, conical.initial.p) ==
        doctest::Approx(-std::pow(2.0, -1.5)).epsilon(1e-15));

  // Kinetic term vanishes with p = 0.
  const Eigen::Vector2d q(0.3, -0.7);
  CHECK(hamiltonian(pendulum.system, q, Eigen::Vector2d::Zero()) ==
        doctest::Approx(pendulum.system.potential(q)).epsilon(1e-15));
}

TEST_CASE("augmented hamiltonian") {
  const BenchmarkProblem pendulum = planar_pendulum();
  const auto& sys = pendulum.system;

  Eigen::VectorXd zero_multiplier = Eigen::VectorXd::Zero(1);
  CHECK(augmented_hamiltonian(sys, pendulum.initial.q, pendulum.initial.p,
                              zero_multiplier) ==
        doctest::Approx(hamiltonian(sys, pendulum.initial.q, pendulum.initial.p)));

  // On the manifold the constraint term vanishes for any multiplier.
  Eigen::VectorXd multiplier(1);
  multiplier << 4.2;
  CHECK(augmented_hamiltonian(sys, pendulum.initial.q, pendulum.initial.p, multiplier) ==
        doctest::Approx(hamiltonian(sys, pendulum.initial.q, pendulum.initial.p))
            .epsilon(1e-14));

  const Eigen::Vector2d off_manifold(0.0, -2.0);
  multiplier << 1.0;
  CHECK(augmented_hamiltonian(sys, off_manifold, Eigen::Vector2d::Zero(), multiplier) ==
        doctest::Approx(1.0).epsilon(1e-14));

  std::mt19937 rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    const State state = oracles::random_consistent_state(sys, "pendulum", rng);
    const double difference =
        augmented_hamiltonian(sys, state.q, state.p, multiplier) -
        hamiltonian(sys, state.q, state.p);
    const double expected = multiplier.dot(sys.constraint(state.q));
    CHECK(difference == doctest::Approx(expected).epsilon(1e-14).scale(1.0));
  }
}

TEST_CASE("consistency checks") {
  const BenchmarkProblem pendulum = planar_pendulum();
  CHECK(check_consistency(pendulum.system, pendulum.initial.q, pendulum.initial.p).ok);

  const BenchmarkProblem tethered = tethered_satellites();
  CHECK(check_consistency(tethered.system, tethered.initial.q, tethered.initial.p).ok);

  const ConsistencyReport bad = check_consistency(
      pendulum.system, Eigen::Vector2d(0.0, -1.0), Eigen::Vector2d(0.0, 1.0));
  CHECK(!bad.ok);
  CHECK(bad.hidden_norm == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(bad.constraint_norm <= 1e-15);
}

TEST_CASE("exact multiplier") {
  const BenchmarkProblem pendulum = planar_pendulum();
  const Eigen::VectorXd at_initial =
      exact_multiplier(pendulum.system, pendulum.initial.q, pendulum.initial.p);
  CHECK(at_initial[0] == doctest::Approx(1.0).epsilon(1e-14));

  const BenchmarkProblem conical = conical_pendulum();
  for (const double t : {0.0, 0.7, 2.9}) {
    const ReferencePoint point = conical.reference.evaluate(t);
    const Eigen::VectorXd tension = exact_multiplier(conical.system, point.q, point.p);
    CHECK(tension[0] == doctest::Approx(std::pow(2.0, -0.5)).epsilon(1e-13));
  }

  // Flat potential and resting momentum make the right-hand side vanish.
  ConstrainedHamiltonianSystem flat = pendulum.system;
  flat.potential = [](const Eigen::VectorXd&) { return 0.0; };
  flat.potential_gradient = [](const Eigen::VectorXd&) {
    return Eigen::VectorXd(Eigen::Vector2d(0.0, 0.0));
  };
  const Eigen::VectorXd rest =
      exact_multiplier(flat, pendulum.initial.q, Eigen::Vector2d::Zero());
  CHECK(rest[0] == doctest::Approx(0.0).epsilon(1e-15));

  ConstrainedHamiltonianSystem no_curvature = pendulum.system;
  no_curvature.constraint_curvature = nullptr;
  CHECK_THROWS_AS(
      exact_multiplier(no_curvature, pendulum.initial.q, pendulum.initial.p),
      std::logic_error);
}

TEST_CASE("constraint rescaling shifts the multiplier by the inverse factor") {
  // Scaling g by c scales the constraint force gradient by c, so the
  // multiplier scales by 1/c and the force grad(g) * multiplier is unchanged.
  const BenchmarkProblem pendulum = planar_pendulum();
  const double factor = 3.0;

  ConstrainedHamiltonianSystem scaled = pendulum.system;
  scaled.constraint = [factor](const Eigen::VectorXd& q) {
    return Eigen::VectorXd(factor * (q.squaredNorm() - 1.0) * Eigen::VectorXd::Ones(1));
  };
  scaled.constraint_jacobian = [factor](const Eigen::VectorXd& q) {
    return Eigen::MatrixXd(factor * 2.0 * q);
  };
  scaled.constraint_curvature = [factor](const Eigen::VectorXd&, const Eigen::VectorXd& w) {
    Eigen::VectorXd out(1);
    out[0] = factor * 2.0 * w.squaredNorm();
    return out;
  };

  std::mt19937 rng(11);
  for (int trial = 0; trial < 5; ++trial) {
    const State state = oracles::random_consistent_state(pendulum.system, "pendulum", rng);
    const Eigen::VectorXd base = exact_multiplier(pendulum.system, state.q, state.p);
    const Eigen::VectorXd rescaled = exact_multiplier(scaled, state.q, state.p);
    CHECK(factor * rescaled[0] == doctest::Approx(base[0]).epsilon(1e-12));
    const Eigen::VectorXd force_base = pendulum.system.constraint_jacobian(state.q) * base;
    const Eigen::VectorXd force_scaled = scaled.constraint_jacobian(state.q) * rescaled;
    CHECK((force_base - force_scaled).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("inverse mass action is positive definite") {
  std::mt19937 rng(41);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (const BenchmarkProblem& problem : benchmark_problems()) {
    for (int trial = 0; trial < 5; ++trial) {
      Eigen::VectorXd v(problem.system.dim);
      for (int i = 0; i < v.size(); ++i) v[i] = normal(rng);
      CHECK(v.dot(problem.system.mass_inverse(v)) > 0.0);
    }
  }
}

TEST_CASE("supplied derivatives match finite differences") {
  std::mt19937 rng(23);
  for (const BenchmarkProblem& problem : benchmark_problems()) {
    const auto& sys = problem.system;
    const double delta = 1e-5;
    for (int trial = 0; trial < 10; ++trial) {
      const State state = oracles::random_consistent_state(sys, problem.name, rng);
      Eigen::VectorXd direction(sys.dim);
      std::normal_distribution<double> normal(0.0, 1.0);
      for (int i = 0; i < sys.dim; ++i) direction[i] = normal(rng);
      direction.normalize();

      const Eigen::VectorXd g_plus = sys.constraint(state.q + delta * direction);
      const Eigen::VectorXd g_minus = sys.constraint(state.q - delta * direction);
      const Eigen::VectorXd fd_constraint = (g_plus - g_minus) / (2.0 * delta);
      const Eigen::VectorXd analytic_constraint =
          sys.constraint_jacobian(state.q).transpose() * direction;
      CHECK((fd_constraint - analytic_constraint).cwiseAbs().maxCoeff() <= 1e-6);

      const double u_plus = sys.potential(state.q + delta * direction);
      const double u_minus = sys.potential(state.q - delta * direction);
      const double fd_potential = (u_plus - u_minus) / (2.0 * delta);
      CHECK(std::abs(fd_potential - sys.potential_gradient(state.q).dot(direction)) <=
            1e-6);
    }
  }
}

TEST_CASE("singular multiplier matrix is surfaced") {
  // Two identical constraints give a rank-one multiplier matrix.
  ConstrainedHamiltonianSystem sys;
  sys.dim = 3;
  sys.constraint_count = 2;
  sys.mass_inverse = [](const Eigen::VectorXd& v) { return v; };
  sys.potential = [](const Eigen::VectorXd&) { return 0.0; };
  sys.potential_gradient = [](const Eigen::VectorXd&) {
    return Eigen::VectorXd(Eigen::Vector3d(0.0, 0.0, 1.0));
  };
  sys.constraint = [](const Eigen::VectorXd& q) {
    Eigen::VectorXd g(2);
    g[0] = q.squaredNorm() - 1.0;
    g[1] = g[0];
    return g;
  };
  sys.constraint_jacobian = [](const Eigen::VectorXd& q) {
    Eigen::MatrixXd jac(3, 2);
    jac.col(0) = 2.0 * q;
    jac.col(1) = 2.0 * q;
    return jac;
  };
  sys.constraint_curvature = [](const Eigen::VectorXd&, const Eigen::VectorXd& w) {
    Eigen::VectorXd out(2);
    out[0] = 2.0 * w.squaredNorm();
    out[1] = out[0];
    return out;
  };
  CHECK_THROWS_AS(
      exact_multiplier(sys, Eigen::Vector3d(1.0, 0.0, 0.0), Eigen::Vector3d::Zero()),
      RegularityError);
}
