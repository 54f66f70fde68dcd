#pragma once

#include <cstdint>
#include <vector>

#include <episcale/deterministic.hpp>
#include <episcale/model.hpp>

namespace episcale {

struct AllCensored : DomainError {
  using DomainError::DomainError;
};

struct SimConfig {
  std::int64_t pop_size = 100;  // N
  Vec z0;                       // initial proportions, lattice-rounded to [Nz]/N
  double t_max = 1e6;           // censoring horizon
  std::uint64_t seed = 0;
  std::uint64_t replicate_index = 0;
};

// Exact jump-chain realization. States are reported as proportions but
// tracked internally as integer counts, so every state lies exactly on
// the 1/N lattice.
struct JumpPath {
  Vec initial_state;
  std::vector<double> times;     // event times, increasing
  std::vector<int> reactions;    // which channel fired
  std::vector<Vec> states;       // post-event states
  bool absorbed = false;         // total rate reached zero before t_max
  bool capped = false;           // left the admissible domain (population cap)
  double final_time = 0.0;
};

JumpPath gillespie_path(const ReactionModel& model, const SimConfig& cfg);

struct FirstPassage {
  double time = 0.0;
  bool censored = false;
};

// First time the infective component hits exactly zero on the lattice.
FirstPassage extinction_time(const ReactionModel& model, const SimConfig& cfg);

struct ExtinctionStats {
  std::vector<double> times;      // per replicate; censored slots hold t_max
  std::vector<bool> censored;
  std::int64_t replicates = 0;
  std::int64_t censored_count = 0;
  double mean = 0.0;              // over uncensored replicates
  double log_mean = 0.0;
  double ci_log_halfwidth = 0.0;  // 95%, delta method on log(mean)
  bool ci_defined = false;
  std::uint64_t seed = 0;
};

// Replicate r draws from the counter-based stream (seed, r), so the
// result is bit-identical for any worker count. workers <= 0 picks the
// OpenMP default.
ExtinctionStats mc_extinction(const ReactionModel& model, std::int64_t pop_size,
                              const Vec& z0, std::int64_t reps, double t_max,
                              std::uint64_t seed, int workers);

// Serial reference implementation, kept for testing and benchmarking the
// parallel path against.
ExtinctionStats mc_extinction_serial(const ReactionModel& model,
                                     std::int64_t pop_size, const Vec& z0,
                                     std::int64_t reps, double t_max,
                                     std::uint64_t seed);

struct FluctuationStats {
  Vec variance;  // per-component time-average of N (Z - z*)^2
  bool premature_extinction = false;
  double window = 0.0;  // effective averaging window actually used
};

// Time-averaged stationary variance of sqrt(N)(Z - z*) over
// [burn_in, t_end], started at the lattice-rounded endemic equilibrium.
// Extinction before t_end flags the result and keeps the partial window.
FluctuationStats stationary_fluctuations(const ReactionModel& model,
                                         std::int64_t pop_size, double burn_in,
                                         double t_end, std::uint64_t seed);

// Round proportions to the nearest-below lattice point [Nz]/N.
Vec lattice_round(const Vec& z, std::int64_t pop_size);

}  // namespace episcale
