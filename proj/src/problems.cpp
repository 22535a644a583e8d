#include "hbvm/problems.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hbvm {

namespace {

Eigen::VectorXd identity_mass(const Eigen::VectorXd& v) { return v; }

Eigen::Vector2d make2(double a, double b) { return Eigen::Vector2d(a, b); }
Eigen::Vector3d make3(double a, double b, double c) { return Eigen::Vector3d(a, b, c); }

Eigen::VectorXd scalar1(double v) {
  Eigen::VectorXd out(1);
  out[0] = v;
  return out;
}

// Runs a refined integration and keeps every `refine`-th mesh point.
std::vector<ReferencePoint> refined_samples(
    const ConstrainedHamiltonianSystem& sys, Config config, int n_steps, int refine,
    const Eigen::VectorXd& q0, const Eigen::VectorXd& p0,
    const std::function<ReferencePoint(const State&)>& convert) {
  config.h /= refine;
  const BasisTables tables = build_tables(config.basis_size, config.node_count);
  const Trajectory fine = integrate(sys, config, tables, q0, p0, n_steps * refine);
  if (fine.failure)
    throw std::runtime_error("reference integration failed at step " +
                             std::to_string(fine.failure->step_index) + ": " +
                             fine.failure->message);
  std::vector<ReferencePoint> points;
  points.reserve(n_steps + 1);
  for (int n = 0; n <= n_steps; ++n) points.push_back(convert(fine.states[n * refine]));
  return points;
}

ReferenceSolution analytic_reference(std::function<ReferencePoint(double)> evaluate) {
  ReferenceSolution ref;
  ref.kind = ReferenceSolution::Kind::analytic;
  ref.evaluate = evaluate;
  ref.sample = [evaluate](const Config& run, int n_steps, int) {
    std::vector<ReferencePoint> points;
    points.reserve(n_steps + 1);
    for (int n = 0; n <= n_steps; ++n) points.push_back(evaluate(n * run.h));
    return points;
  };
  return ref;
}

// Companion run of the same method at half the stepsize: states are compared
// at common mesh times and the refined run's step multipliers serve as the
// multiplier reference.
ReferenceSolution self_refined_reference(const ConstrainedHamiltonianSystem& sys,
                                         const Eigen::VectorXd& q0,
                                         const Eigen::VectorXd& p0) {
  ReferenceSolution ref;
  ref.kind = ReferenceSolution::Kind::self_refined;
  ref.sample = [sys, q0, p0](const Config& run, int n_steps, int refine_scale) {
    const int refine = 2 * refine_scale;
    Config fine_config = run;
    fine_config.h = run.h / refine;
    const BasisTables tables = build_tables(run.basis_size, run.node_count);
    const Trajectory fine =
        integrate(sys, fine_config, tables, q0, p0, n_steps * refine);
    if (fine.failure)
      throw std::runtime_error("reference integration failed at step " +
                               std::to_string(fine.failure->step_index) + ": " +
                               fine.failure->message);
    std::vector<ReferencePoint> points;
    points.reserve(n_steps + 1);
    for (int n = 0; n <= n_steps; ++n) {
      ReferencePoint point;
      point.q = fine.states[n * refine].q;
      point.p = fine.states[n * refine].p;
      if (!fine.steps.empty())
        point.multiplier =
            fine.steps[std::min<size_t>(n * refine, fine.steps.size() - 1)].multiplier;
      points.push_back(std::move(point));
    }
    return points;
  };
  return ref;
}

}  // namespace

BenchmarkProblem planar_pendulum() {
  BenchmarkProblem problem;
  problem.name = "pendulum";

  ConstrainedHamiltonianSystem sys;
  sys.dim = 2;
  sys.constraint_count = 1;
  sys.mass_inverse = identity_mass;
  sys.potential = [](const Eigen::VectorXd& q) { return q[1]; };
  sys.potential_gradient = [](const Eigen::VectorXd&) {
    return Eigen::VectorXd(make2(0.0, 1.0));
  };
  sys.constraint = [](const Eigen::VectorXd& q) { return scalar1(q.squaredNorm() - 1.0); };
  sys.constraint_jacobian = [](const Eigen::VectorXd& q) {
    return Eigen::MatrixXd(2.0 * q);
  };
  sys.constraint_curvature = [](const Eigen::VectorXd&, const Eigen::VectorXd& w) {
    return scalar1(2.0 * w.squaredNorm());
  };
  problem.system = sys;
  problem.initial = {0.0, make2(0.0, -1.0), make2(1.0, 0.0)};

  // Polar-angle formulation: angle = 0 at the rest position, x = sin(angle),
  // y = -cos(angle); the rod tension is (angular_rate^2 + cos(angle)) / 2.
  ConstrainedHamiltonianSystem polar;
  polar.dim = 1;
  polar.constraint_count = 0;
  polar.mass_inverse = identity_mass;
  polar.potential = [](const Eigen::VectorXd& q) { return -std::cos(q[0]); };
  polar.potential_gradient = [](const Eigen::VectorXd& q) {
    return Eigen::VectorXd(scalar1(std::sin(q[0])));
  };

  ReferenceSolution ref;
  ref.kind = ReferenceSolution::Kind::auxiliary_ode;
  ref.sample = [polar](const Config& run, int n_steps, int refine_scale) {
    Config aux = run;
    aux.basis_size = 6;
    aux.node_count = 12;
    return refined_samples(polar, aux, n_steps, 10 * refine_scale, scalar1(0.0),
                           scalar1(1.0), [](const State& state) {
                             const double angle = state.q[0];
                             const double rate = state.p[0];
                             ReferencePoint point;
                             point.q = make2(std::sin(angle), -std::cos(angle));
                             point.p = make2(rate * std::cos(angle), rate * std::sin(angle));
                             point.multiplier =
                                 scalar1(0.5 * (rate * rate + std::cos(angle)));
                             return point;
                           });
  };
  problem.reference = ref;
  problem.solution_norm = SolutionNorm::component_sum;
  return problem;
}

BenchmarkProblem conical_pendulum() {
  BenchmarkProblem problem;
  problem.name = "conical";

  ConstrainedHamiltonianSystem sys;
  sys.dim = 3;
  sys.constraint_count = 1;
  sys.mass_inverse = identity_mass;
  sys.potential = [](const Eigen::VectorXd& q) { return q[2]; };
  sys.potential_gradient = [](const Eigen::VectorXd&) {
    return Eigen::VectorXd(make3(0.0, 0.0, 1.0));
  };
  sys.constraint = [](const Eigen::VectorXd& q) { return scalar1(q.squaredNorm() - 1.0); };
  sys.constraint_jacobian = [](const Eigen::VectorXd& q) {
    return Eigen::MatrixXd(2.0 * q);
  };
  sys.constraint_curvature = [](const Eigen::VectorXd&, const Eigen::VectorXd& w) {
    return scalar1(2.0 * w.squaredNorm());
  };
  problem.system = sys;

  const double radius = std::pow(2.0, -0.5);
  const double height = -radius;
  const double angular_rate = std::pow(2.0, 0.25);  // 2 pi / period
  problem.initial = {0.0, make3(radius, 0.0, height),
                     make3(0.0, radius * angular_rate, 0.0)};
  problem.period = std::pow(2.0, 0.75) * M_PI;

  problem.reference = analytic_reference([=](double t) {
    ReferencePoint point;
    point.q = make3(radius * std::cos(angular_rate * t),
                    radius * std::sin(angular_rate * t), height);
    point.p = make3(-radius * angular_rate * std::sin(angular_rate * t),
                    radius * angular_rate * std::cos(angular_rate * t), 0.0);
    point.multiplier = scalar1(radius);  // rod tension 2^{-1/2}
    return point;
  });
  return problem;
}

BenchmarkProblem modified_pendulum() {
  BenchmarkProblem problem;
  problem.name = "modified";

  ConstrainedHamiltonianSystem sys;
  sys.dim = 3;
  sys.constraint_count = 1;
  sys.mass_inverse = identity_mass;
  sys.potential = [](const Eigen::VectorXd& q) { return std::pow(q[2], 4); };
  sys.potential_gradient = [](const Eigen::VectorXd& q) {
    return Eigen::VectorXd(make3(0.0, 0.0, 4.0 * std::pow(q[2], 3)));
  };
  // Constraint surface x^6 + y^4 + z^2 = 0.625.
  sys.constraint = [](const Eigen::VectorXd& q) {
    return scalar1(std::pow(q[0], 6) + std::pow(q[1], 4) + q[2] * q[2] - 0.625);
  };
  sys.constraint_jacobian = [](const Eigen::VectorXd& q) {
    return Eigen::MatrixXd(
        make3(6.0 * std::pow(q[0], 5), 4.0 * std::pow(q[1], 3), 2.0 * q[2]));
  };
  sys.constraint_curvature = [](const Eigen::VectorXd& q, const Eigen::VectorXd& w) {
    return scalar1(30.0 * std::pow(q[0], 4) * w[0] * w[0] +
                   12.0 * q[1] * q[1] * w[1] * w[1] + 2.0 * w[2] * w[2]);
  };
  problem.system = sys;

  const double half_sqrt2 = std::pow(2.0, -0.5);
  problem.initial = {0.0, make3(half_sqrt2, 0.0, -half_sqrt2),
                     make3(0.0, std::pow(2.0, -0.25), 0.0)};
  problem.reference = self_refined_reference(sys, problem.initial.q, problem.initial.p);
  return problem;
}

BenchmarkProblem tethered_satellites() {
  BenchmarkProblem problem;
  problem.name = "tethered";

  ConstrainedHamiltonianSystem sys;
  sys.dim = 9;
  sys.constraint_count = 3;
  sys.mass_inverse = identity_mass;
  sys.potential = [](const Eigen::VectorXd& q) {
    double value = 0.0;
    for (int i = 0; i < 3; ++i) value -= 1.0 / q.segment<3>(3 * i).norm();
    return value;
  };
  sys.potential_gradient = [](const Eigen::VectorXd& q) {
    Eigen::VectorXd grad(9);
    for (int i = 0; i < 3; ++i) {
      const Eigen::Vector3d body = q.segment<3>(3 * i);
      grad.segment<3>(3 * i) = body / std::pow(body.norm(), 3);
    }
    return grad;
  };
  // Unit tether lengths between the pairs (1,2), (2,3), (3,1).
  sys.constraint = [](const Eigen::VectorXd& q) {
    Eigen::VectorXd g(3);
    for (int i = 0; i < 3; ++i) {
      const int j = (i + 1) % 3;
      g[i] = (q.segment<3>(3 * i) - q.segment<3>(3 * j)).squaredNorm() - 1.0;
    }
    return g;
  };
  sys.constraint_jacobian = [](const Eigen::VectorXd& q) {
    Eigen::MatrixXd jacobian = Eigen::MatrixXd::Zero(9, 3);
    for (int i = 0; i < 3; ++i) {
      const int j = (i + 1) % 3;
      const Eigen::Vector3d difference = q.segment<3>(3 * i) - q.segment<3>(3 * j);
      jacobian.block<3, 1>(3 * i, i) = 2.0 * difference;
      jacobian.block<3, 1>(3 * j, i) = -2.0 * difference;
    }
    return jacobian;
  };
  sys.constraint_curvature = [](const Eigen::VectorXd&, const Eigen::VectorXd& w) {
    Eigen::VectorXd curvature(3);
    for (int i = 0; i < 3; ++i) {
      const int j = (i + 1) % 3;
      curvature[i] = 2.0 * (w.segment<3>(3 * i) - w.segment<3>(3 * j)).squaredNorm();
    }
    return curvature;
  };
  problem.system = sys;

  const double z0 = 20.0;
  const double apex = z0 - std::sqrt(3.0) / 2.0;
  Eigen::VectorXd q0(9);
  q0 << 0.0, 0.5, z0, 0.0, -0.5, z0, 0.0, 0.0, apex;
  // Launch speed chosen so the initial Hamiltonian vanishes.
  const double v0 = std::sqrt(2.0 * (2.0 / std::sqrt(z0 * z0 + 0.25) + 1.0 / apex));
  Eigen::VectorXd p0 = Eigen::VectorXd::Zero(9);
  p0[6] = v0;
  problem.initial = {0.0, q0, p0};
  problem.reference = self_refined_reference(sys, q0, p0);
  return problem;
}

const std::vector<BenchmarkProblem>& benchmark_problems() {
  static const std::vector<BenchmarkProblem> problems = {
      planar_pendulum(), conical_pendulum(), modified_pendulum(), tethered_satellites()};
  return problems;
}

const BenchmarkProblem& find_problem(const std::string& name) {
  for (const BenchmarkProblem& problem : benchmark_problems())
    if (problem.name == name) return problem;
  throw std::invalid_argument("unknown problem '" + name +
                              "' (expected pendulum, conical, modified, or tethered)");
}

}  // namespace hbvm
