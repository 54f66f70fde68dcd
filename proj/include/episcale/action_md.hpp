#pragma once

#include <episcale/deterministic.hpp>
#include <episcale/model.hpp>
#include <episcale/quasipotential.hpp>

namespace episcale {

struct SingularNoise : DomainError {
  using DomainError::DomainError;
};

struct AlphaOutOfRange : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Equilibrium noise covariance A0 = sum_j beta_j(z*) h_j h_j^T and its
// inverse; the quadratic moderate-deviation rate is built on it.
struct NoiseQuadratic {
  Mat a0;
  Mat a0_inv;
  double det_a0 = 0.0;
};

NoiseQuadratic noise_quadratic(const ReactionModel& model);

// Pointwise quadratic rate (1/2) psi_dot^T A0^{-1} psi_dot. For SIS this
// is psi_dot^2 / (2 sigma^2(z*)); for SIRS / SIR-with-demography it
// matches the (a/2A, b/2A, c/2A) coefficient form with a, b, c the
// equilibrium channel rates and A = ab + ac + bc.
double md_rate_density(const ReactionModel& model, const Vec& psi_dot);
double md_rate_density(const NoiseQuadratic& nq, const Vec& psi_dot);

// Path rate of the moderate-deviation principle on the grid of phi:
// (1/2) integral of (phi' - B phi)^T A0^{-1} (phi' - B phi) dt with
// B = grad b(z*), in translated coordinates (phi measures deviation from
// z*). Returns +infinity when phi(0) != z (within 1e-12).
double md_path_rate(const ReactionModel& model, const Vec& z,
                    const Trajectory& phi);

struct GramianOptions {
  double t_min = 0.1;
  double t_max = 1000.0;
  int t_count = 25;                  // log grid
  double quad_rel_tol = 1e-10;       // adaptive Simpson tolerance
  double stationarity_rel_tol = 1e-6;
};

// Minimal quadratic control energy to push the linearized system from
// the equilibrium to the hyperplane {x_1 = -a}: for each horizon T the
// controllability Gramian G_T = integral of e^{Bs} A0 e^{B^T s} ds gives
// the cost as a constrained quadratic minimum over the hyperplane, then
// the infimum over the T grid is taken. Warns when the value has not
// flattened at the edge of the grid.
QuasiPotential quasipotential_md_gramian(const ReactionModel& model, double a,
                                         const GramianOptions& opts = {});

// Moderate-deviation quasi-potential V_a for exit level a > 0 below the
// endemic infective proportion: the SIS closed form lambda a^2 / (2 gamma)
// when available, the Gramian route otherwise.
QuasiPotential quasipotential_md(const ReactionModel& model, double a);

// Predicted log E(T) of hitting the exit level: N^{1-2alpha} * V_a,
// alpha in (0, 1/2] (alpha = 1/2 is the CLT edge, N-independent).
double md_extinction_exponent(const ReactionModel& model, double pop_size,
                              double alpha, double a);

}  // namespace episcale
