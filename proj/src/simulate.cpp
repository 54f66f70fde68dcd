#include <episcale/simulate.hpp>

#include <algorithm>
#include <array>
#include <cmath>

#include <episcale/rng.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace episcale {

namespace {

struct LatticeState {
  std::array<std::int64_t, kMaxDim> counts{};
  std::int64_t n = 1;
  int dim = 1;

  Vec proportions() const {
    Vec z = Vec::zero(dim);
    for (int i = 0; i < dim; ++i)
      z[i] = static_cast<double>(counts[i]) / static_cast<double>(n);
    return z;
  }
};

LatticeState make_lattice(const ReactionModel& model, const Vec& z0,
                          std::int64_t pop_size) {
  if (pop_size < 1) throw std::invalid_argument("pop_size must be >= 1");
  LatticeState s;
  s.n = pop_size;
  s.dim = model.dim;
  for (int i = 0; i < model.dim; ++i)
    s.counts[i] =
        static_cast<std::int64_t>(std::floor(static_cast<double>(pop_size) * z0[i]));
  return s;
}

// One Gillespie step. Returns the reaction index, or -1 when the total
// rate vanishes (absorption). Advances t past t_max without firing if the
// waiting time overshoots the horizon.
int step(const ReactionModel& model, LatticeState& s, double& t, double t_max,
         CounterRng& rng) {
  const Vec z = s.proportions();
  const int k = model.reaction_count();
  std::array<double, 4> rates{};
  double total = 0.0;
  for (int j = 0; j < k; ++j) {
    rates[j] = model.reactions[j].rate(z);
    total += rates[j];
  }
  if (total <= 0.0) return -1;
  t += rng.exponential(static_cast<double>(s.n) * total);
  if (t > t_max) return -2;
  double u = rng.uniform01() * total;
  int j = 0;
  for (; j < k - 1; ++j) {
    u -= rates[j];
    if (u <= 0.0) break;
  }
  for (int i = 0; i < s.dim; ++i)
    s.counts[i] += static_cast<std::int64_t>(model.reactions[j].jump[i]);
  return j;
}

}  // namespace

Vec lattice_round(const Vec& z, std::int64_t pop_size) {
  Vec r = z;
  for (int i = 0; i < z.d; ++i)
    r[i] = std::floor(static_cast<double>(pop_size) * z[i]) /
           static_cast<double>(pop_size);
  return r;
}

JumpPath gillespie_path(const ReactionModel& model, const SimConfig& cfg) {
  LatticeState s = make_lattice(model, cfg.z0, cfg.pop_size);
  CounterRng rng(cfg.seed, cfg.replicate_index);

  JumpPath path;
  path.initial_state = s.proportions();
  double t = 0.0;
  for (;;) {
    const int j = step(model, s, t, cfg.t_max, rng);
    if (j == -1) {
      path.absorbed = true;
      path.final_time = t;
      break;
    }
    if (j == -2) {
      path.final_time = cfg.t_max;
      break;
    }
    path.times.push_back(t);
    path.reactions.push_back(j);
    path.states.push_back(s.proportions());
    if (model.domain_excess(s.proportions()) > 0.0) {
      path.capped = true;
      path.final_time = t;
      break;
    }
  }
  return path;
}

FirstPassage extinction_time(const ReactionModel& model, const SimConfig& cfg) {
  LatticeState s = make_lattice(model, cfg.z0, cfg.pop_size);
  if (s.counts[0] == 0) return {0.0, false};
  CounterRng rng(cfg.seed, cfg.replicate_index);
  double t = 0.0;
  for (;;) {
    const int j = step(model, s, t, cfg.t_max, rng);
    if (j == -2 || (j == -1 && s.counts[0] > 0)) return {cfg.t_max, true};
    if (s.counts[0] == 0) return {t, false};
  }
}

namespace {

ExtinctionStats aggregate(std::vector<double> times, std::vector<bool> censored,
                          std::uint64_t seed) {
  ExtinctionStats st;
  st.replicates = static_cast<std::int64_t>(times.size());
  st.seed = seed;
  std::vector<double> uncensored;
  uncensored.reserve(times.size());
  for (std::size_t r = 0; r < times.size(); ++r) {
    if (censored[r])
      ++st.censored_count;
    else
      uncensored.push_back(times[r]);
  }
  st.times = std::move(times);
  st.censored = std::move(censored);
  if (uncensored.empty())
    throw AllCensored("every replicate hit the censoring horizon");

  const auto n = static_cast<double>(uncensored.size());
  st.mean = pairwise_sum(uncensored) / n;
  st.log_mean = std::log(st.mean);
  if (uncensored.size() >= 2) {
    std::vector<double> sq(uncensored.size());
    for (std::size_t i = 0; i < uncensored.size(); ++i) {
      const double dlt = uncensored[i] - st.mean;
      sq[i] = dlt * dlt;
    }
    const double var = pairwise_sum(sq) / (n - 1.0);
    // delta method: sd(log mean) ~= sd(mean) / mean
    st.ci_log_halfwidth = 1.959963984540054 * std::sqrt(var / n) / st.mean;
    st.ci_defined = true;
  }
  return st;
}

}  // namespace

ExtinctionStats mc_extinction(const ReactionModel& model, std::int64_t pop_size,
                              const Vec& z0, std::int64_t reps, double t_max,
                              std::uint64_t seed, int workers) {
  if (reps < 1) throw std::invalid_argument("reps must be >= 1");
  if (pop_size < 1) throw std::invalid_argument("pop_size must be >= 1");
  std::vector<double> times(static_cast<std::size_t>(reps));
  std::vector<bool> censored(static_cast<std::size_t>(reps));

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) \
    num_threads(workers > 0 ? workers : omp_get_max_threads())
#endif
  for (std::int64_t r = 0; r < reps; ++r) {
    SimConfig cfg;
    cfg.pop_size = pop_size;
    cfg.z0 = z0;
    cfg.t_max = t_max;
    cfg.seed = seed;
    cfg.replicate_index = static_cast<std::uint64_t>(r);
    const FirstPassage fp = extinction_time(model, cfg);
    times[static_cast<std::size_t>(r)] = fp.time;
    censored[static_cast<std::size_t>(r)] = fp.censored;
  }
  return aggregate(std::move(times), std::move(censored), seed);
}

ExtinctionStats mc_extinction_serial(const ReactionModel& model,
                                     std::int64_t pop_size, const Vec& z0,
                                     std::int64_t reps, double t_max,
                                     std::uint64_t seed) {
  if (reps < 1) throw std::invalid_argument("reps must be >= 1");
  std::vector<double> times(static_cast<std::size_t>(reps));
  std::vector<bool> censored(static_cast<std::size_t>(reps));
  for (std::int64_t r = 0; r < reps; ++r) {
    SimConfig cfg;
    cfg.pop_size = pop_size;
    cfg.z0 = z0;
    cfg.t_max = t_max;
    cfg.seed = seed;
    cfg.replicate_index = static_cast<std::uint64_t>(r);
    const FirstPassage fp = extinction_time(model, cfg);
    times[static_cast<std::size_t>(r)] = fp.time;
    censored[static_cast<std::size_t>(r)] = fp.censored;
  }
  return aggregate(std::move(times), std::move(censored), seed);
}

FluctuationStats stationary_fluctuations(const ReactionModel& model,
                                         std::int64_t pop_size, double burn_in,
                                         double t_end, std::uint64_t seed) {
  if (!(burn_in >= 0.0) || !(t_end > burn_in))
    throw std::invalid_argument("need 0 <= burn_in < t_end");
  const Equilibrium eq = endemic_equilibrium(model);
  LatticeState s = make_lattice(model, eq.z_star, pop_size);
  CounterRng rng(seed, 0);

  FluctuationStats out;
  out.variance = Vec::zero(model.dim);
  Vec acc = Vec::zero(model.dim);  // integral of (z - z*)^2 dt over the window
  double t = 0.0;
  for (;;) {
    const Vec z = s.proportions();
    double t_prev = t;
    const int j = step(model, s, t, t_end, rng);
    const double t_next = (j == -2) ? t_end : t;
    // the state was z on [t_prev, t_next)
    const double lo = std::max(t_prev, burn_in);
    if (t_next > lo) {
      for (int i = 0; i < model.dim; ++i) {
        const double dev = z[i] - eq.z_star[i];
        acc[i] += dev * dev * (t_next - lo);
      }
    }
    if (j == -2) {
      out.window = t_end - burn_in;
      break;
    }
    if (j == -1 || s.counts[0] == 0) {
      out.premature_extinction = true;
      out.window = std::max(0.0, t_next - burn_in);
      break;
    }
  }
  if (out.window > 0.0) {
    for (int i = 0; i < model.dim; ++i)
      out.variance[i] = static_cast<double>(pop_size) * acc[i] / out.window;
  }
  return out;
}

}  // namespace episcale
