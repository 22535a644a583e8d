#pragma once

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hbvm/integrator.hpp"
#include "hbvm/system.hpp"

namespace hbvm {

struct ReferencePoint {
  Eigen::VectorXd q;
  Eigen::VectorXd p;
  Eigen::VectorXd multiplier;  // sized 0 when no multiplier reference exists
};

/// Exact or companion solution of a benchmark, sampled on a run's mesh.
///  - analytic:      closed-form (q, p, multiplier) at any time;
///  - auxiliary_ode: a transformed unconstrained problem integrated at one
///                   tenth of the run stepsize with a high-order method;
///  - self_refined:  the run's own method at half the stepsize, compared at
///                   common mesh times; its per-step multipliers serve as the
///                   multiplier reference.
/// `refine_scale` multiplies the refinement factor; analytic references
/// ignore it.
struct ReferenceSolution {
  enum class Kind { analytic, auxiliary_ode, self_refined };
  Kind kind = Kind::analytic;

  // Pointwise evaluation; only available for analytic references.
  std::function<ReferencePoint(double t)> evaluate;

  // Values at t_n = n h for n = 0..n_steps of a run with `run_config`.
  std::function<std::vector<ReferencePoint>(const Config& run_config, int n_steps,
                                            int refine_scale)>
      sample;
};

/// Vector norm applied per mesh point when measuring the solution error;
/// each benchmark uses the norm its published error tables were built with.
enum class SolutionNorm { max_component, component_sum };

struct BenchmarkProblem {
  std::string name;
  ConstrainedHamiltonianSystem system;
  State initial;
  ReferenceSolution reference;
  std::optional<double> period;
  SolutionNorm solution_norm = SolutionNorm::max_component;
};

/// Planar pendulum in Cartesian coordinates: unit rod on the circle, gravity
/// along -y. Reference via the polar-angle equation integrated with the
/// unconstrained 12-node, 6-polynomial method at one tenth of the stepsize.
BenchmarkProblem planar_pendulum();

/// Spherical pendulum started on its horizontal circular orbit; the rod
/// tension (multiplier) is constant and the solution is known in closed form.
BenchmarkProblem conical_pendulum();

/// Pendulum variant with quartic potential and a degree-6 constraint surface;
/// both invariants are conserved exactly by methods with node_count = 3 s.
BenchmarkProblem modified_pendulum();

/// Three unit-mass satellites joined by unit tethers in a rotating triangle
/// around a central body; three quadratic constraints, Kepler potential.
BenchmarkProblem tethered_satellites();

/// Registry in CLI order: pendulum, conical, modified, tethered.
const std::vector<BenchmarkProblem>& benchmark_problems();

/// Lookup by CLI name; throws std::invalid_argument for unknown names.
const BenchmarkProblem& find_problem(const std::string& name);

}  // namespace hbvm
