#pragma once

#include <array>
#include <vector>

#include <episcale/deterministic.hpp>
#include <episcale/model.hpp>
#include <episcale/quasipotential.hpp>

namespace episcale {

struct InfeasibleVelocity : DomainError {
  using DomainError::DomainError;
};

// Entropy cost of running a channel at rate nu when its natural rate is
// omega: g(nu, omega) = nu log(nu/omega) - nu + omega, with the
// conventions g(0, omega) = omega (so g(0, 0) = 0) and g(nu > 0, 0) =
// +infinity. Throws on negative input.
double g_cost(double nu, double omega);

struct OptimalRates {
  std::array<double, 4> c{};  // optimal channel rates
  double cost = 0.0;          // sum_j g(c_j, beta_j(z))
  Vec theta;                  // tilting dual variable
  double kkt_residual = 0.0;  // || sum_j c_j h_j - v ||_inf
  bool feasible = true;
};

// Pointwise inner problem of the path rate function: minimize
// sum_j g(c_j, beta_j(z)) over c >= 0 with sum_j c_j h_j = v and c_j = 0
// wherever beta_j(z) = 0. Solved through the exponential-tilting dual
// c_j = beta_j(z) exp(<theta, h_j>) with damped Newton on the constraint
// equations. Infeasible v (outside the cone of the active jump
// directions) comes back with feasible = false and cost = +infinity.
OptimalRates optimal_rates_or_infeasible(const ReactionModel& model,
                                         const Vec& z, const Vec& v);

// Same, but throws InfeasibleVelocity instead of returning a sentinel.
OptimalRates optimal_rates(const ReactionModel& model, const Vec& z,
                           const Vec& v);

struct RateProfile {
  std::vector<double> times;
  std::vector<std::array<double, 4>> rates;  // per node, right-segment solve
};

struct PathAction {
  double value = 0.0;
  RateProfile profile;
  bool converged = true;          // every inner solve met tolerance
  double max_kkt_residual = 0.0;
};

// Action of a piecewise-linear path: per-segment trapezoid of the
// pointwise optimal cost, evaluated at both segment endpoints with the
// segment velocity. Any infeasible grid point makes the value +infinity.
// Duplicate grid times are rejected.
PathAction path_action(const ReactionModel& model, const Trajectory& phi);

// Closed-form SIS quasi-potential for full extinction (endemic
// equilibrium down to i = 0): log(lambda/gamma) - 1 + gamma/lambda.
QuasiPotential quasipotential_ld_sis(const ModelParams& params);

struct PathTarget {
  enum class Kind { point, hyperplane };
  Kind kind = Kind::point;
  Vec point;
  int component = 0;
  double level = 0.0;

  static PathTarget at(const Vec& p) {
    PathTarget t;
    t.kind = Kind::point;
    t.point = p;
    return t;
  }
  static PathTarget plane(int component, double level) {
    PathTarget t;
    t.kind = Kind::hyperplane;
    t.component = component;
    t.level = level;
    return t;
  }
};

struct MinimizeOptions {
  std::vector<double> t_grid;     // empty: log-spaced default in [1, 100]
  int interior_nodes = 200;
  double eps_start = 1e-4;        // offset used to seed the reversed flow
  double boundary_margin = 1e-6;  // stand-off from rate-degenerate targets
  int max_iterations = 800;
  double grad_tolerance = 1e-8;
};

// Minimizes path_action over piecewise-linear paths with fixed endpoints
// for each horizon T in the grid and returns the best (value, T, path).
// Initial guesses come from the time-reversed LLN flow. Targets sitting
// on a boundary where every incident channel rate vanishes (extinction,
// i = 0) are pulled inside by boundary_margin and the remaining
// connection cost is estimated from the local cost density and added.
QuasiPotential minimize_action_ld(const ReactionModel& model,
                                  const Vec& z_from, const PathTarget& target,
                                  const MinimizeOptions& opts = {});

}  // namespace episcale
