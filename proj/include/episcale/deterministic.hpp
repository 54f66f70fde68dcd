#pragma once

#include <vector>

#include <episcale/model.hpp>

namespace episcale {

// Shared by ODE solutions, simulated paths and optimization paths.
struct Trajectory {
  std::vector<double> times;
  std::vector<Vec> states;

  std::size_t size() const { return times.size(); }
  const Vec& back() const { return states.back(); }
};

struct StepTooLarge : DomainError {
  using DomainError::DomainError;
};

// Fixed-step RK4 integration of the limit ODE dz/dt = b(z). Throws
// StepTooLarge if an accepted state leaves the admissible domain by more
// than 1e-6.
Trajectory solve_lln(const ReactionModel& model, const Vec& z0, double t_end,
                     double dt = 1e-3);

// Flow of the linearization around the endemic equilibrium: returns
// zbar(t) = exp(grad b(z*) t) dz0 on the grid. dz0 is a deviation from
// z*, i.e. coordinates translated so the equilibrium sits at the origin.
Trajectory solve_linearized(const ReactionModel& model, const Vec& dz0,
                            double t_end, double dt = 1e-3);

}  // namespace episcale
