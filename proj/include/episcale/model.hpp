#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <episcale/linalg.hpp>

namespace episcale {

// Errors that the CLI reports with exit code 2.
struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NoEndemicEquilibrium : DomainError {
  using DomainError::DomainError;
};

enum class ModelKind { sis, sirs, sir_demography, custom };

std::string to_string(ModelKind kind);

struct ModelParams {
  double lambda = 0.0;  // infection rate (1/time)
  double gamma = 0.0;   // recovery rate (1/time)
  double rho = 0.0;     // loss of immunity (1/time, SIRS)
  double mu = 0.0;      // birth/death rate (1/time, SIR with demography)
};

// One reaction channel: jump direction h_j (integer-valued entries) and
// rate function beta_j per unit time per unit population. Rates are
// clamped at zero from below so a lattice boundary point evaluating to
// -1e-17 cannot produce a negative propensity.
struct Reaction {
  Vec jump;
  std::function<double(const Vec&)> rate;
  std::function<Vec(const Vec&)> rate_grad;  // analytic gradient; may be empty
};

// Immutable after construction; safe to share across threads. All
// operations on it are pure.
struct ReactionModel {
  ModelKind kind = ModelKind::custom;
  int dim = 1;
  std::vector<Reaction> reactions;
  ModelParams params{};
  double pop_cap = 2.0;  // admissible box for SIR with demography

  int reaction_count() const { return static_cast<int>(reactions.size()); }

  // How far z lies outside the admissible domain (0 inside).
  double domain_excess(const Vec& z) const;
};

// The three reduced encodings:
//   SIS              d=1, k=2:  h=(+1,-1),      beta=(lambda z(1-z), gamma z)
//   SIRS             d=2, k=3:  h1=(1,-1), h2=(-1,0), h3=(0,1),
//                               beta=(lambda z1 z2, gamma z1, rho(1-z1-z2))
//   SIR w/demography d=2, k=4:  h4=(0,-1),
//                               beta=(lambda z1 z2, (gamma+mu) z1, mu, mu z2)
// State component 1 is the infective proportion throughout.
ReactionModel build_model(ModelKind kind, const ModelParams& params,
                          double pop_cap = 2.0);

// b(z) = sum_j beta_j(z) h_j
Vec drift(const ReactionModel& model, const Vec& z);

// Analytic Jacobian of the drift (finite differences for custom models
// that carry no rate gradients).
Mat jacobian(const ReactionModel& model, const Vec& z);

struct Equilibrium {
  Vec z_star;
  bool stable = false;
};

// Closed-form endemic equilibrium; throws NoEndemicEquilibrium when the
// endemic-regime parameter condition fails (lambda <= gamma, resp.
// lambda <= gamma + mu).
Equilibrium endemic_equilibrium(const ReactionModel& model);

struct R0Epsilon {
  double r0;              // lambda / (gamma + mu)
  double epsilon;         // mu / (gamma + mu)
  double r0_approx;       // lambda / gamma
  double epsilon_approx;  // mu / gamma
};

// Basic reproduction number and expected relative lifetime spent
// infected, for SIR-with-demography parameters.
R0Epsilon r0_and_epsilon(const ModelParams& params);

}  // namespace episcale
