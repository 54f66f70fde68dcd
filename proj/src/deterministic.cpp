#include <episcale/deterministic.hpp>

#include <cmath>

namespace episcale {

Trajectory solve_lln(const ReactionModel& model, const Vec& z0, double t_end,
                     double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (model.domain_excess(z0) > 1e-6)
    throw StepTooLarge("initial state outside admissible domain");

  Trajectory traj;
  const auto n_steps = static_cast<std::size_t>(std::ceil(t_end / dt));
  traj.times.reserve(n_steps + 1);
  traj.states.reserve(n_steps + 1);
  traj.times.push_back(0.0);
  traj.states.push_back(z0);

  Vec z = z0;
  double t = 0.0;
  while (t < t_end) {
    const double h = std::min(dt, t_end - t);
    const Vec k1 = drift(model, z);
    const Vec k2 = drift(model, z + 0.5 * h * k1);
    const Vec k3 = drift(model, z + 0.5 * h * k2);
    const Vec k4 = drift(model, z + h * k3);
    z += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    t += h;
    if (model.domain_excess(z) > 1e-6)
      throw StepTooLarge("RK4 step left the admissible domain; reduce dt");
    traj.times.push_back(t);
    traj.states.push_back(z);
  }
  return traj;
}

Trajectory solve_linearized(const ReactionModel& model, const Vec& dz0,
                            double t_end, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  const Equilibrium eq = endemic_equilibrium(model);
  const Mat b = jacobian(model, eq.z_star);

  Trajectory traj;
  const auto n_steps = static_cast<std::size_t>(std::ceil(t_end / dt));
  traj.times.reserve(n_steps + 1);
  traj.states.reserve(n_steps + 1);
  double t = 0.0;
  for (std::size_t i = 0;; ++i) {
    traj.times.push_back(t);
    traj.states.push_back(expm(b, t) * dz0);
    if (t >= t_end) break;
    t = std::min(t_end, static_cast<double>(i + 1) * dt);
  }
  return traj;
}

}  // namespace episcale
