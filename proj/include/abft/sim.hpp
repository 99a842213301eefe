#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "abft/domain.hpp"

// Discrete-time Monte Carlo simulator of the A-BFT contention protocol:
// one contention round per BI, collision counting, retry-limit backoff,
// and replication-based confidence intervals.
namespace abft::sim {

struct SlotOutcome {
  std::vector<int> claimants;  // station ids; 0 = idle, 1 = success, >1 = collision
};

struct BiOutcome {
  std::vector<SlotOutcome> slots;  // size M

  int successes() const;
  int collided_slots() const;
  int idle_slots() const;
  int attempts() const;  // total claimants across slots
};

struct RunMetrics {
  double p_hat_s = 0.0;          // successes / (N * measured BIs)
  double s = 0.0;                // successes / (M * measured BIs)
  double d = 0.0;                // mean completed-episode latency [s]
  double collisions_per_bi = 0.0;
  double p_cond = 0.0;           // station-level collisions / attempts
  std::int64_t episodes = 0;
};

struct SimReport {
  double p_hat_s_emp = 0.0;
  double s_emp = 0.0;
  double d_emp = 0.0;
  double collisions_per_bi = 0.0;
  double p_cond_emp = 0.0;
  // 95% CI half-widths across runs.
  double ci_p_hat_s = 0.0;
  double ci_s = 0.0;
  double ci_d = 0.0;
  double ci_collisions_per_bi = 0.0;
  double ci_p_cond = 0.0;
  std::vector<RunMetrics> per_run;
};

// Seed splitting: run_seed = splitmix64(splitmix64(master ^ point_index) + run_index).
// Every replication of every sweep point gets an independent, reproducible stream.
std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t point_index,
                          std::uint64_t run_index);

// Advances every station by one BI. Stations with backoff > 0 decrement and
// stay silent; stations with backoff = 0 each draw a slot. Draws are consumed
// in station-index order (slot draws first, then backoff draws for stations
// that hit or sit at the retry limit), so a fixed seed fixes the trajectory.
// Does not touch episode_start_bi; episode accounting lives in run().
BiOutcome step_bi(std::vector<StationState>& stations,
                  const ProtocolParams& params, std::mt19937_64& rng);

// Executes run_count replications of bi_count BIs (warmup discarded) and
// aggregates metrics with 95% CIs. Replications may execute on `threads`
// workers; per-run seeds make the result independent of scheduling.
SimReport run(const ProtocolParams& params, const NetworkConfig& net,
              std::uint64_t point_index = 0, int threads = 1);

struct SweepPoint {
  ProtocolParams params;
  int n = 1;
};

// One SimReport per grid point, in grid order. Point i uses point_index = i
// in the seed-splitting rule.
std::vector<std::pair<SweepPoint, SimReport>> sweep(
    const std::vector<SweepPoint>& points, const NetworkConfig& net,
    int threads = 1);

// Worker-count default: ABFT_THREADS if set, else hardware concurrency.
int default_threads();

}  // namespace abft::sim
