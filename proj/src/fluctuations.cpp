#include <episcale/fluctuations.hpp>

#include <cmath>

#include <episcale/rng.hpp>

namespace episcale {

OUSpec ou_spec_at(const ReactionModel& model, const Vec& point) {
  OUSpec spec;
  spec.drift = jacobian(model, point);
  if (max_real_eigenvalue(spec.drift) >= -1e-10)
    throw NonHurwitz("drift Jacobian is not Hurwitz at the given point");

  spec.diffusion = Mat::zero(model.dim);
  for (const auto& r : model.reactions) {
    const double beta = r.rate(point);
    for (int i = 0; i < model.dim; ++i)
      for (int j = 0; j < model.dim; ++j)
        spec.diffusion(i, j) += beta * r.jump[i] * r.jump[j];
  }

  spec.stationary_cov = lyapunov_stationary(spec.drift, spec.diffusion);
  const Mat res = spec.drift * spec.stationary_cov +
                  spec.stationary_cov * spec.drift.transpose() +
                  spec.diffusion;
  spec.lyapunov_residual = res.norm_inf();
  return spec;
}

OUSpec ou_spec(const ReactionModel& model) {
  return ou_spec_at(model, endemic_equilibrium(model).z_star);
}

double clt_tail_bound(const ReactionModel& model, double a) {
  if (!(a >= 0.0)) throw std::invalid_argument("deviation a must be >= 0");
  const OUSpec spec = ou_spec(model);
  const double variance = spec.stationary_cov(0, 0);
  return std::exp(-a * a / (2.0 * variance));
}

Trajectory simulate_ou(const OUSpec& spec, double t_end, double dt,
                       std::uint64_t seed) {
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  const int d = spec.drift.d;
  const Mat noise = cholesky_psd(spec.diffusion);
  const double sqdt = std::sqrt(dt);
  CounterRng rng(seed, 0);

  Trajectory traj;
  const auto n_steps = static_cast<std::size_t>(std::ceil(t_end / dt));
  traj.times.reserve(n_steps + 1);
  traj.states.reserve(n_steps + 1);
  Vec u = Vec::zero(d);
  double t = 0.0;
  traj.times.push_back(t);
  traj.states.push_back(u);
  while (t < t_end) {
    const double h = std::min(dt, t_end - t);
    Vec xi = Vec::zero(d);
    for (int i = 0; i < d; ++i) xi[i] = rng.normal();
    u += h * (spec.drift * u) + (h == dt ? sqdt : std::sqrt(h)) * (noise * xi);
    t += h;
    traj.times.push_back(t);
    traj.states.push_back(u);
  }
  return traj;
}

}  // namespace episcale
