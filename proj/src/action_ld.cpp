#include <episcale/action_ld.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <span>

namespace episcale {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kKktTol = 1e-10;

double cap_exp(double x) { return std::exp(std::min(x, 700.0)); }

struct ActiveChannels {
  int idx[4];
  double beta[4];
  Vec jump[4];
  int count = 0;
};

ActiveChannels active_channels(const ReactionModel& model, const Vec& z) {
  ActiveChannels a;
  for (int j = 0; j < model.reaction_count(); ++j) {
    const double b = model.reactions[j].rate(z);
    if (b > 0.0) {
      a.idx[a.count] = j;
      a.beta[a.count] = b;
      a.jump[a.count] = model.reactions[j].jump;
      ++a.count;
    }
  }
  return a;
}

double cross2(const Vec& a, const Vec& b) { return a[0] * b[1] - a[1] * b[0]; }

// Is v in the convex cone spanned by the active jump directions?
// Caratheodory in dimension <= 2: a single ray or a pair of generators
// suffices.
bool in_cone(const ActiveChannels& act, const Vec& v, int d) {
  const double vn = v.norm_inf();
  if (vn <= 1e-14) return true;
  if (act.count == 0) return false;
  if (d == 1) {
    for (int i = 0; i < act.count; ++i) {
      if (v[0] > 0.0 && act.jump[i][0] > 0.0) return true;
      if (v[0] < 0.0 && act.jump[i][0] < 0.0) return true;
    }
    return false;
  }
  const double tol = 1e-12 * std::max(1.0, vn);
  for (int i = 0; i < act.count; ++i) {
    const Vec& g = act.jump[i];
    if (std::abs(cross2(g, v)) <= tol * g.norm_inf() && g.dot(v) > 0.0)
      return true;
  }
  for (int i = 0; i < act.count; ++i) {
    for (int j = i + 1; j < act.count; ++j) {
      const Vec& gi = act.jump[i];
      const Vec& gj = act.jump[j];
      const double det = cross2(gi, gj);
      if (std::abs(det) < 1e-14) continue;
      const double ci = cross2(v, gj) / det;
      const double cj = cross2(gi, v) / det;
      if (ci >= -tol && cj >= -tol) return true;
    }
  }
  return false;
}

// Dual objective sum_j beta_j (e^{<theta,h_j>} - 1) - <theta, v>; its
// gradient is the constraint residual.
double dual_value(const ActiveChannels& act, const Vec& theta, const Vec& v) {
  double phi = -theta.dot(v);
  for (int i = 0; i < act.count; ++i)
    phi += act.beta[i] * (cap_exp(theta.dot(act.jump[i])) - 1.0);
  return phi;
}

OptimalRates solve_dual(const ReactionModel& model, const ActiveChannels& act,
                        const Vec& z, const Vec& v) {
  const int d = model.dim;
  OptimalRates out;
  out.theta = Vec::zero(d);

  // Rank of the active span decides whether Newton runs in the full
  // space or along a single direction (boundary states).
  bool rank_one = (d == 2);
  if (d == 2) {
    for (int i = 0; i < act.count && rank_one; ++i)
      for (int j = i + 1; j < act.count; ++j)
        if (std::abs(cross2(act.jump[i], act.jump[j])) > 1e-12) {
          rank_one = false;
          break;
        }
  }
  Vec u = Vec::zero(d);  // span direction for the rank-one case
  if (d == 1) {
    u[0] = 1.0;
    rank_one = true;
  } else if (rank_one) {
    u = act.jump[0];
    u *= 1.0 / u.norm();
  }

  const double scale = std::max({1.0, v.norm_inf()});
  const double tol_stop = 1e-12 * scale;
  Vec theta = Vec::zero(d);

  for (int it = 0; it < 100; ++it) {
    Vec f = Vec::zero(d);
    f -= v;
    Mat h = Mat::zero(d);
    for (int i = 0; i < act.count; ++i) {
      const double w = act.beta[i] * cap_exp(theta.dot(act.jump[i]));
      for (int r = 0; r < d; ++r) {
        f[r] += w * act.jump[i][r];
        for (int c = 0; c < d; ++c) h(r, c) += w * act.jump[i][r] * act.jump[i][c];
      }
    }
    out.kkt_residual = f.norm_inf();
    if (out.kkt_residual <= tol_stop) break;

    Vec step = Vec::zero(d);
    if (rank_one) {
      const double fu = f.dot(u);
      double hu = 0.0;
      for (int i = 0; i < act.count; ++i)
        hu += act.beta[i] * cap_exp(theta.dot(act.jump[i])) *
              act.jump[i].dot(u) * act.jump[i].dot(u);
      if (hu <= 0.0) break;
      step = (-fu / hu) * u;
    } else {
      const double det = h.det();
      if (std::abs(det) < 1e-300) break;
      step = Mat(h(1, 1) / det, -h(0, 1) / det, -h(1, 0) / det, h(0, 0) / det) *
             ((-1.0) * f);
    }

    // Armijo backtracking on the dual, halving the step.
    const double phi0 = dual_value(act, theta, v);
    const double slope = f.dot(step);
    double s = 1.0;
    while (s > 1e-10 &&
           dual_value(act, theta + s * step, v) > phi0 + 1e-4 * s * slope)
      s *= 0.5;
    theta += s * step;
  }

  out.theta = theta;
  Vec achieved = Vec::zero(d);
  achieved -= v;
  out.cost = 0.0;
  for (int i = 0; i < act.count; ++i) {
    const double c = act.beta[i] * cap_exp(theta.dot(act.jump[i]));
    out.c[act.idx[i]] = c;
    out.cost += g_cost(c, act.beta[i]);
    for (int r = 0; r < d; ++r) achieved[r] += c * act.jump[i][r];
  }
  out.kkt_residual = achieved.norm_inf();
  return out;
}

}  // namespace

double g_cost(double nu, double omega) {
  if (nu < 0.0 || omega < 0.0)
    throw std::invalid_argument("g(nu, omega) needs nonnegative arguments");
  if (nu == 0.0) return omega;
  if (omega == 0.0) return kInf;
  return nu * std::log(nu / omega) - nu + omega;
}

OptimalRates optimal_rates_or_infeasible(const ReactionModel& model,
                                         const Vec& z, const Vec& v) {
  const ActiveChannels act = active_channels(model, z);
  if (!in_cone(act, v, model.dim)) {
    OptimalRates out;
    out.theta = Vec::zero(model.dim);
    out.feasible = false;
    out.cost = kInf;
    out.kkt_residual = v.norm_inf();
    return out;
  }
  if (act.count == 0) {  // fully silent state, v == 0 is the only option
    OptimalRates out;
    out.theta = Vec::zero(model.dim);
    return out;
  }
  return solve_dual(model, act, z, v);
}

OptimalRates optimal_rates(const ReactionModel& model, const Vec& z,
                           const Vec& v) {
  OptimalRates out = optimal_rates_or_infeasible(model, z, v);
  if (!out.feasible)
    throw InfeasibleVelocity(
        "velocity is outside the cone of the active jump directions");
  return out;
}

PathAction path_action(const ReactionModel& model, const Trajectory& phi) {
  const std::size_t n = phi.size();
  if (n == 0 || phi.states.size() != n)
    throw std::invalid_argument("empty or inconsistent trajectory");
  PathAction pa;
  pa.profile.times = phi.times;
  pa.profile.rates.assign(n, {});
  if (n == 1) return pa;

  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double dt = phi.times[i + 1] - phi.times[i];
    if (!(dt > 0.0))
      throw DomainError("trajectory times must be strictly increasing");
    Vec v = phi.states[i + 1] - phi.states[i];
    v *= 1.0 / dt;
    const OptimalRates a = optimal_rates_or_infeasible(model, phi.states[i], v);
    const OptimalRates b =
        optimal_rates_or_infeasible(model, phi.states[i + 1], v);
    pa.profile.rates[i] = a.c;
    if (i + 2 == n) pa.profile.rates[i + 1] = b.c;
    if (!a.feasible || !b.feasible) {
      pa.value = kInf;
      continue;
    }
    pa.max_kkt_residual =
        std::max({pa.max_kkt_residual, a.kkt_residual, b.kkt_residual});
    if (a.kkt_residual > kKktTol || b.kkt_residual > kKktTol)
      pa.converged = false;
    pa.value += 0.5 * dt * (a.cost + b.cost);
  }
  return pa;
}

QuasiPotential quasipotential_ld_sis(const ModelParams& params) {
  if (!(params.lambda > params.gamma))
    throw NoEndemicEquilibrium("SIS needs lambda > gamma");
  QuasiPotential q;
  q.value = std::log(params.lambda / params.gamma) - 1.0 +
            params.gamma / params.lambda;
  q.closed_form = true;
  q.method = "pontryagin-closed-form";
  return q;
}

// ---------------------------------------------------------------------------
// Path minimization
// ---------------------------------------------------------------------------

namespace {

Vec rate_grad_or_fd(const ReactionModel& model, int j, const Vec& z) {
  if (model.reactions[j].rate_grad) return model.reactions[j].rate_grad(z);
  Vec g = Vec::zero(model.dim);
  const double h = 1e-7;
  for (int c = 0; c < model.dim; ++c) {
    Vec zp = z, zm = z;
    zp[c] += h;
    zm[c] -= h;
    g[c] = (model.reactions[j].rate(zp) - model.reactions[j].rate(zm)) /
           (2.0 * h);
  }
  return g;
}

// Envelope derivative of the pointwise cost with respect to the state:
// sum over active channels of (1 - e^{<theta,h_j>}) grad beta_j.
Vec cost_state_grad(const ReactionModel& model, const Vec& z,
                    const OptimalRates& r) {
  Vec g = Vec::zero(model.dim);
  for (int j = 0; j < model.reaction_count(); ++j) {
    const double beta = model.reactions[j].rate(z);
    if (beta <= 0.0) continue;
    const double tilt = r.c[j] / beta;
    const Vec db = rate_grad_or_fd(model, j, z);
    for (int i = 0; i < model.dim; ++i) g[i] += (1.0 - tilt) * db[i];
  }
  return g;
}

struct PathProblem {
  const ReactionModel* model;
  Vec z_from;
  bool plane = false;
  int pinned_component = 0;
  double pinned_level = 0.0;
  Vec target_point;  // used when !plane
  double horizon = 1.0;
  int interior = 200;

  int dim() const { return model->dim; }
  int n_vars() const { return interior * dim() + (plane ? dim() - 1 : 0); }

  Vec node(std::span<const double> x, int i) const {
    const int d = dim();
    const int last = interior + 1;
    if (i == 0) return z_from;
    if (i == last) {
      if (!plane) return target_point;
      Vec zf = Vec::zero(d);
      zf[pinned_component] = pinned_level;
      int pos = interior * d;
      for (int c = 0; c < d; ++c)
        if (c != pinned_component) zf[c] = x[pos++];
      return zf;
    }
    Vec z = Vec::zero(d);
    for (int c = 0; c < d; ++c) z[c] = x[(i - 1) * d + c];
    return z;
  }

  Trajectory build(std::span<const double> x) const {
    Trajectory traj;
    const int last = interior + 1;
    const double dt = horizon / last;
    traj.times.reserve(last + 1);
    traj.states.reserve(last + 1);
    for (int i = 0; i <= last; ++i) {
      traj.times.push_back(dt * i);
      traj.states.push_back(node(x, i));
    }
    return traj;
  }

  // Action value; fills the gradient when grad != nullptr. Infeasible
  // configurations report +inf (the line search backs away from them).
  double eval(std::span<const double> x, std::vector<double>* grad) const {
    const int d = dim();
    const int last = interior + 1;
    const double dt = horizon / last;
    if (grad) std::fill(grad->begin(), grad->end(), 0.0);

    double total = 0.0;
    Vec z_i = node(x, 0);
    for (int i = 0; i < last; ++i) {
      const Vec z_n = node(x, i + 1);
      Vec v = z_n - z_i;
      v *= 1.0 / dt;
      const OptimalRates a = optimal_rates_or_infeasible(*model, z_i, v);
      if (!a.feasible || !std::isfinite(a.cost)) return kInf;
      const OptimalRates b = optimal_rates_or_infeasible(*model, z_n, v);
      if (!b.feasible || !std::isfinite(b.cost)) return kInf;
      total += 0.5 * dt * (a.cost + b.cost);

      if (grad) {
        const Vec ga = cost_state_grad(*model, z_i, a);
        const Vec gb = cost_state_grad(*model, z_n, b);
        const Vec th = 0.5 * (a.theta + b.theta);
        // left node i, right node i+1
        add_node_grad(*grad, i, 0.5 * dt * ga - th);
        add_node_grad(*grad, i + 1, 0.5 * dt * gb + th);
      }
      z_i = z_n;
    }
    return total;
  }

  void add_node_grad(std::vector<double>& grad, int i, const Vec& g) const {
    const int d = dim();
    const int last = interior + 1;
    if (i == 0) return;
    if (i == last) {
      if (!plane) return;
      int pos = interior * d;
      for (int c = 0; c < d; ++c)
        if (c != pinned_component) grad[pos++] += g[c];
      return;
    }
    for (int c = 0; c < d; ++c) grad[(i - 1) * d + c] += g[c];
  }
};

struct LbfgsOutcome {
  double value = kInf;
  bool converged = false;
  int iterations = 0;
};

LbfgsOutcome lbfgs_minimize(
    const std::function<double(std::span<const double>, std::vector<double>*)>&
        eval,
    std::vector<double>& x, int max_iterations, double grad_tolerance) {
  const std::size_t n = x.size();
  constexpr int kHistory = 8;
  std::vector<std::vector<double>> s_hist, y_hist;
  std::vector<double> rho_hist;

  std::vector<double> grad(n), grad_new(n), dir(n), x_new(n);
  LbfgsOutcome out;
  double f = eval(x, &grad);
  if (!std::isfinite(f)) return out;

  for (int it = 0; it < max_iterations; ++it) {
    out.iterations = it;
    double gmax = 0.0;
    for (double g : grad) gmax = std::max(gmax, std::abs(g));
    if (gmax <= grad_tolerance) {
      out.converged = true;
      break;
    }

    // two-loop recursion
    dir = grad;
    std::vector<double> alpha(s_hist.size());
    for (int h = static_cast<int>(s_hist.size()) - 1; h >= 0; --h) {
      double sd = 0.0;
      for (std::size_t i = 0; i < n; ++i) sd += s_hist[h][i] * dir[i];
      alpha[h] = rho_hist[h] * sd;
      for (std::size_t i = 0; i < n; ++i) dir[i] -= alpha[h] * y_hist[h][i];
    }
    if (!s_hist.empty()) {
      double yy = 0.0, sy = 0.0;
      const auto& sb = s_hist.back();
      const auto& yb = y_hist.back();
      for (std::size_t i = 0; i < n; ++i) {
        yy += yb[i] * yb[i];
        sy += sb[i] * yb[i];
      }
      const double h0 = sy / std::max(yy, 1e-300);
      for (auto& dv : dir) dv *= h0;
    }
    for (std::size_t h = 0; h < s_hist.size(); ++h) {
      double yd = 0.0;
      for (std::size_t i = 0; i < n; ++i) yd += y_hist[h][i] * dir[i];
      const double beta = rho_hist[h] * yd;
      for (std::size_t i = 0; i < n; ++i)
        dir[i] += (alpha[h] - beta) * s_hist[h][i];
    }
    for (auto& dv : dir) dv = -dv;

    double slope = 0.0;
    for (std::size_t i = 0; i < n; ++i) slope += grad[i] * dir[i];
    if (!(slope < 0.0)) {  // reset to steepest descent
      for (std::size_t i = 0; i < n; ++i) dir[i] = -grad[i];
      slope = 0.0;
      for (std::size_t i = 0; i < n; ++i) slope += grad[i] * dir[i];
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
    }

    double step = 1.0;
    double f_new = kInf;
    for (int ls = 0; ls < 60; ++ls) {
      for (std::size_t i = 0; i < n; ++i) x_new[i] = x[i] + step * dir[i];
      f_new = eval(x_new, nullptr);
      if (std::isfinite(f_new) && f_new <= f + 1e-4 * step * slope) break;
      step *= 0.5;
    }
    if (!std::isfinite(f_new) || f_new > f) break;  // stuck

    eval(x_new, &grad_new);

    std::vector<double> s(n), y(n);
    double sy = 0.0, ss = 0.0, yy2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = x_new[i] - x[i];
      y[i] = grad_new[i] - grad[i];
      sy += s[i] * y[i];
      ss += s[i] * s[i];
      yy2 += y[i] * y[i];
    }
    if (sy > 1e-12 * std::sqrt(ss * yy2)) {
      s_hist.push_back(std::move(s));
      y_hist.push_back(std::move(y));
      rho_hist.push_back(1.0 / sy);
      if (s_hist.size() > kHistory) {
        s_hist.erase(s_hist.begin());
        y_hist.erase(y_hist.begin());
        rho_hist.erase(rho_hist.begin());
      }
    }

    const double f_drop = f - f_new;
    x = x_new;
    f = f_new;
    grad.swap(grad_new);
    if (f_drop <= 1e-15 * std::max(1.0, std::abs(f))) {
      // flat to machine precision; call it converged if the gradient is
      // already small on the scale of the problem
      double g2 = 0.0;
      for (double g : grad) g2 = std::max(g2, std::abs(g));
      out.converged = g2 <= 100.0 * grad_tolerance;
      break;
    }
  }
  out.value = f;
  return out;
}

// Integrate dz/dt = -b(z) and record the states; used to seed the path
// optimizer (the optimal escape hugs the time-reversed LLN flow).
std::vector<Vec> reversed_flow(const ReactionModel& model, const Vec& start,
                               const PathTarget& tgt, double level_shifted) {
  std::vector<Vec> pts;
  pts.push_back(start);
  Vec z = start;
  const double dt = 1e-3;
  double best = kInf;
  std::size_t best_idx = 0;
  const std::size_t max_steps = 2000000;
  for (std::size_t k = 0; k < max_steps; ++k) {
    const Vec k1 = (-1.0) * drift(model, z);
    const Vec k2 = (-1.0) * drift(model, z + 0.5 * dt * k1);
    const Vec k3 = (-1.0) * drift(model, z + 0.5 * dt * k2);
    const Vec k4 = (-1.0) * drift(model, z + dt * k3);
    z += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    pts.push_back(z);
    if (tgt.kind == PathTarget::Kind::point) {
      const double dist = (z - tgt.point).norm();
      if (dist < best) {
        best = dist;
        best_idx = pts.size() - 1;
      } else if (dist > 4.0 * best + 1e-9 && best_idx > 0) {
        break;  // moving away again
      }
      if (dist <= 1e-9) break;
    } else {
      const double gap_start = start[tgt.component] - level_shifted;
      const double gap = z[tgt.component] - level_shifted;
      if (gap * gap_start <= 0.0) {  // crossed the plane
        best_idx = pts.size() - 1;
        break;
      }
      best_idx = pts.size() - 1;
      best = std::abs(gap);
    }
    if (model.domain_excess(z) > 1e-6) break;
  }
  pts.resize(best_idx + 1);
  return pts;
}

}  // namespace

QuasiPotential minimize_action_ld(const ReactionModel& model,
                                  const Vec& z_from, const PathTarget& target,
                                  const MinimizeOptions& opts) {
  QuasiPotential q;
  q.method = "path-minimization";

  // Degenerate request: already there.
  if (target.kind == PathTarget::Kind::point &&
      (target.point - z_from).norm_inf() <= 1e-14) {
    q.horizon = 0.0;
    return q;
  }
  if (target.kind == PathTarget::Kind::hyperplane &&
      std::abs(z_from[target.component] - target.level) <= 1e-14) {
    q.horizon = 0.0;
    return q;
  }

  // Approach direction, and the stand-off margin for targets sitting on
  // a face where every incident channel is silent (extinction).
  Vec approach = Vec::zero(model.dim);
  if (target.kind == PathTarget::Kind::point) {
    approach = target.point - z_from;
    approach *= 1.0 / approach.norm();
  } else {
    approach[target.component] =
        target.level > z_from[target.component] ? 1.0 : -1.0;
  }

  PathTarget resolved = target;
  bool shifted = false;
  if (target.kind == PathTarget::Kind::point) {
    if (!optimal_rates_or_infeasible(model, target.point, approach).feasible) {
      resolved.point = target.point - opts.boundary_margin * approach;
      shifted = true;
    }
  } else {
    Vec probe = z_from;
    probe[target.component] = target.level;
    if (!optimal_rates_or_infeasible(model, probe, approach).feasible) {
      resolved.level =
          target.level - opts.boundary_margin * approach[target.component];
      shifted = true;
    }
  }

  // Seed from the time-reversed flow. Starting exactly at an equilibrium
  // stalls the flow, so nudge off by eps_start first.
  Vec seed_start = z_from;
  if (drift(model, z_from).norm_inf() < 1e-9)
    seed_start = z_from + opts.eps_start * approach;
  const std::vector<Vec> rev =
      reversed_flow(model, seed_start, resolved,
                    resolved.kind == PathTarget::Kind::hyperplane
                        ? resolved.level
                        : 0.0);

  std::vector<double> t_grid = opts.t_grid;
  if (t_grid.empty()) {
    const int n_t = 8;
    for (int i = 0; i < n_t; ++i)
      t_grid.push_back(std::pow(10.0, 0.0 + 2.0 * i / (n_t - 1)));
  }

  PathProblem prob;
  prob.model = &model;
  prob.z_from = z_from;
  prob.interior = opts.interior_nodes;
  if (resolved.kind == PathTarget::Kind::hyperplane) {
    prob.plane = true;
    prob.pinned_component = resolved.component;
    prob.pinned_level = resolved.level;
  } else {
    prob.target_point = resolved.point;
  }

  const int d = model.dim;
  const int last = prob.interior + 1;

  // Resolved endpoint used for seeding (plane targets: walk the reversed
  // flow's crossing point).
  Vec seed_end;
  if (resolved.kind == PathTarget::Kind::point) {
    seed_end = resolved.point;
  } else {
    seed_end = rev.back();
    seed_end[resolved.component] = resolved.level;
  }
  const bool seed_ok =
      resolved.kind == PathTarget::Kind::hyperplane ||
      (rev.back() - resolved.point).norm() <=
          0.05 * (resolved.point - z_from).norm() + 10.0 * opts.boundary_margin;

  double best_value = kInf;
  double best_t = t_grid.front();
  bool best_converged = false;
  Trajectory best_path;

  for (const double t_horizon : t_grid) {
    prob.horizon = t_horizon;
    std::vector<double> x(static_cast<std::size_t>(prob.n_vars()), 0.0);
    for (int i = 1; i <= last; ++i) {
      Vec zi;
      if (seed_ok && rev.size() >= 2) {
        const double frac = static_cast<double>(i) / last;
        const double pos = frac * static_cast<double>(rev.size() - 1);
        const auto lo = static_cast<std::size_t>(pos);
        const std::size_t hi = std::min(lo + 1, rev.size() - 1);
        const double w = pos - static_cast<double>(lo);
        zi = (1.0 - w) * rev[lo] + w * rev[hi];
      } else {
        const double frac = static_cast<double>(i) / last;
        zi = (1.0 - frac) * z_from + frac * seed_end;
      }
      if (i == last) zi = seed_end;
      if (i < last) {
        for (int c = 0; c < d; ++c) x[(i - 1) * d + c] = zi[c];
      } else if (prob.plane) {
        int pos = prob.interior * d;
        for (int c = 0; c < d; ++c)
          if (c != prob.pinned_component) x[pos++] = zi[c];
      }
    }

    const auto eval_fn = [&prob](std::span<const double> xs,
                                 std::vector<double>* grad) {
      return prob.eval(xs, grad);
    };
    LbfgsOutcome res =
        lbfgs_minimize(eval_fn, x, opts.max_iterations, opts.grad_tolerance);
    if (res.value < best_value) {
      best_value = res.value;
      best_t = t_horizon;
      best_converged = res.converged;
      best_path = prob.build(x);
    }
  }

  q.value = best_value;
  q.horizon = best_t;
  q.converged = best_converged;
  q.path = best_path;
  if (prob.plane && !best_path.states.empty())
    q.hyperplane_argmin = best_path.states.back();

  // Estimated cost of the margin segment that was cut off a degenerate
  // boundary target: local cost per unit length along the reversed flow.
  if (shifted && std::isfinite(best_value) && !best_path.states.empty()) {
    const Vec z_end = best_path.states.back();
    const Vec v_rev = (-1.0) * drift(model, z_end);
    const double speed = v_rev.norm();
    if (speed > 0.0) {
      const OptimalRates r = optimal_rates_or_infeasible(model, z_end, v_rev);
      if (r.feasible && std::isfinite(r.cost)) {
        q.connection_cost = opts.boundary_margin * r.cost / speed;
        q.value += q.connection_cost;
      }
    }
  }
  if (!std::isfinite(best_value)) {
    q.converged = false;
    q.warning = "no finite-action path found on the T grid";
  }
  return q;
}

}  // namespace episcale
