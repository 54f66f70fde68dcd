#include <episcale/model.hpp>

#include <algorithm>
#include <cmath>

namespace episcale {

namespace {

double clamped(double x) { return x > 0.0 ? x : 0.0; }

void require_positive(double x, const char* name) {
  if (!(x > 0.0)) {
    throw std::invalid_argument(std::string("parameter ") + name +
                                " must be positive");
  }
}

void require_nonnegative(double x, const char* name) {
  if (!(x >= 0.0)) {
    throw std::invalid_argument(std::string("parameter ") + name +
                                " must be nonnegative");
  }
}

}  // namespace

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::sis:
      return "sis";
    case ModelKind::sirs:
      return "sirs";
    case ModelKind::sir_demography:
      return "sir-demography";
    case ModelKind::custom:
      return "custom";
  }
  return "?";
}

double ReactionModel::domain_excess(const Vec& z) const {
  double e = 0.0;
  switch (kind) {
    case ModelKind::sis:
      e = std::max(e, -z[0]);
      e = std::max(e, z[0] - 1.0);
      break;
    case ModelKind::sirs:
      e = std::max(e, -z[0]);
      e = std::max(e, -z[1]);
      e = std::max(e, z[0] + z[1] - 1.0);
      break;
    case ModelKind::sir_demography:
      for (int i = 0; i < 2; ++i) {
        e = std::max(e, -z[i]);
        e = std::max(e, z[i] - pop_cap);
      }
      break;
    case ModelKind::custom:
      break;  // unconstrained unless the caller wraps it
  }
  return e;
}

ReactionModel build_model(ModelKind kind, const ModelParams& params,
                          double pop_cap) {
  // lambda = 0 is allowed (degenerate pure-recovery dynamics); the
  // endemic-regime checks live in the operations that need them.
  require_nonnegative(params.lambda, "lambda");
  require_positive(params.gamma, "gamma");

  ReactionModel m;
  m.kind = kind;
  m.params = params;
  m.pop_cap = pop_cap;
  const double lambda = params.lambda;
  const double gamma = params.gamma;

  switch (kind) {
    case ModelKind::sis: {
      m.dim = 1;
      m.reactions.push_back(
          {Vec(1.0), [lambda](const Vec& z) { return clamped(lambda * z[0] * (1.0 - z[0])); },
           [lambda](const Vec& z) { return Vec(lambda * (1.0 - 2.0 * z[0])); }});
      m.reactions.push_back(
          {Vec(-1.0), [gamma](const Vec& z) { return clamped(gamma * z[0]); },
           [gamma](const Vec&) { return Vec(gamma); }});
      break;
    }
    case ModelKind::sirs: {
      require_positive(params.rho, "rho");
      const double rho = params.rho;
      m.dim = 2;
      m.reactions.push_back(
          {Vec(1.0, -1.0),
           [lambda](const Vec& z) { return clamped(lambda * z[0] * z[1]); },
           [lambda](const Vec& z) { return Vec(lambda * z[1], lambda * z[0]); }});
      m.reactions.push_back(
          {Vec(-1.0, 0.0), [gamma](const Vec& z) { return clamped(gamma * z[0]); },
           [gamma](const Vec&) { return Vec(gamma, 0.0); }});
      m.reactions.push_back(
          {Vec(0.0, 1.0),
           [rho](const Vec& z) { return clamped(rho * (1.0 - z[0] - z[1])); },
           [rho](const Vec&) { return Vec(-rho, -rho); }});
      break;
    }
    case ModelKind::sir_demography: {
      require_positive(params.mu, "mu");
      const double mu = params.mu;
      m.dim = 2;
      m.reactions.push_back(
          {Vec(1.0, -1.0),
           [lambda](const Vec& z) { return clamped(lambda * z[0] * z[1]); },
           [lambda](const Vec& z) { return Vec(lambda * z[1], lambda * z[0]); }});
      m.reactions.push_back(
          {Vec(-1.0, 0.0),
           [gamma, mu](const Vec& z) { return clamped((gamma + mu) * z[0]); },
           [gamma, mu](const Vec&) { return Vec(gamma + mu, 0.0); }});
      m.reactions.push_back({Vec(0.0, 1.0), [mu](const Vec&) { return mu; },
                             [](const Vec&) { return Vec(0.0, 0.0); }});
      m.reactions.push_back(
          {Vec(0.0, -1.0), [mu](const Vec& z) { return clamped(mu * z[1]); },
           [mu](const Vec&) { return Vec(0.0, mu); }});
      break;
    }
    case ModelKind::custom:
      throw std::invalid_argument(
          "custom models are built by filling ReactionModel directly");
  }
  return m;
}

Vec drift(const ReactionModel& model, const Vec& z) {
  Vec b = Vec::zero(model.dim);
  for (const auto& r : model.reactions) {
    const double beta = r.rate(z);
    for (int i = 0; i < model.dim; ++i) b[i] += beta * r.jump[i];
  }
  return b;
}

Mat jacobian(const ReactionModel& model, const Vec& z) {
  Mat j = Mat::zero(model.dim);
  bool analytic = true;
  for (const auto& r : model.reactions) {
    if (!r.rate_grad) {
      analytic = false;
      break;
    }
  }
  if (analytic) {
    for (const auto& r : model.reactions) {
      const Vec g = r.rate_grad(z);
      for (int i = 0; i < model.dim; ++i)
        for (int c = 0; c < model.dim; ++c) j(i, c) += r.jump[i] * g[c];
    }
    return j;
  }
  // Central differences for programmatically built models.
  const double h = 1e-6;
  for (int c = 0; c < model.dim; ++c) {
    Vec zp = z, zm = z;
    zp[c] += h;
    zm[c] -= h;
    const Vec bp = drift(model, zp);
    const Vec bm = drift(model, zm);
    for (int i = 0; i < model.dim; ++i) j(i, c) = (bp[i] - bm[i]) / (2.0 * h);
  }
  return j;
}

Equilibrium endemic_equilibrium(const ReactionModel& model) {
  const double lambda = model.params.lambda;
  const double gamma = model.params.gamma;
  Vec z;
  switch (model.kind) {
    case ModelKind::sis: {
      if (!(lambda > gamma))
        throw NoEndemicEquilibrium("SIS needs lambda > gamma");
      z = Vec(1.0 - gamma / lambda);
      break;
    }
    case ModelKind::sirs: {
      if (!(lambda > gamma))
        throw NoEndemicEquilibrium("SIRS needs lambda > gamma");
      const double rho = model.params.rho;
      z = Vec(rho / (gamma + rho) * (1.0 - gamma / lambda), gamma / lambda);
      break;
    }
    case ModelKind::sir_demography: {
      const double mu = model.params.mu;
      if (!(lambda > gamma + mu))
        throw NoEndemicEquilibrium(
            "SIR with demography needs lambda > gamma + mu");
      z = Vec(mu / (gamma + mu) - mu / lambda, (gamma + mu) / lambda);
      break;
    }
    case ModelKind::custom:
      throw NoEndemicEquilibrium(
          "no closed-form equilibrium for custom models");
  }
  Equilibrium eq;
  eq.z_star = z;
  eq.stable = max_real_eigenvalue(jacobian(model, z)) < -1e-10;
  return eq;
}

R0Epsilon r0_and_epsilon(const ModelParams& params) {
  require_positive(params.gamma, "gamma");
  require_nonnegative(params.mu, "mu");
  R0Epsilon r;
  r.r0 = params.lambda / (params.gamma + params.mu);
  r.epsilon = params.mu / (params.gamma + params.mu);
  r.r0_approx = params.lambda / params.gamma;
  r.epsilon_approx = params.mu / params.gamma;
  return r;
}

}  // namespace episcale
