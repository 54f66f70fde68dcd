#pragma once

#include <cstdint>

#include <episcale/deterministic.hpp>
#include <episcale/model.hpp>

namespace episcale {

struct NonHurwitz : DomainError {
  using DomainError::DomainError;
};

// Gaussian limit of the sqrt(N)-scale fluctuations around the endemic
// equilibrium: dU = B U dt + sum_j h_j sqrt(beta_j(z*)) dB_j.
struct OUSpec {
  Mat drift;           // B = grad b(z*)
  Mat diffusion;       // A = sum_j beta_j(z*) h_j h_j^T
  Mat stationary_cov;  // P solving B P + P B^T + A = 0
  double lyapunov_residual = 0.0;
};

// Throws NonHurwitz outside the endemic regime.
OUSpec ou_spec(const ReactionModel& model);

// Same, linearized at an explicit point instead of the endemic
// equilibrium (the point must still make B Hurwitz).
OUSpec ou_spec_at(const ReactionModel& model, const Vec& point);

// Chernoff-style Gaussian bound exp(-a^2 / (2 P11)) on an upward
// deviation of the first (infective) component. For SIS with variance
// gamma/lambda this is exp(-lambda a^2 / (2 gamma)).
double clt_tail_bound(const ReactionModel& model, double a);

// Euler-Maruyama discretization of the OU process, used as a simulation
// cross-check of the Lyapunov solve.
Trajectory simulate_ou(const OUSpec& spec, double t_end, double dt,
                       std::uint64_t seed);

}  // namespace episcale
