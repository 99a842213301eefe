#pragma once

#include <vector>

#include "abft/domain.hpp"

// Exact joint Markov chain over all N stations for tiny instances.
// Certifies the simulator's rule implementation and quantifies the
// mean-field decoupling error of the per-STA model.
namespace abft::oracle {

// Per-STA state encoding: index s in [0, R+W).
//   s <  R : active state (s, 0)
//   s >= R : state (R, s - R); active iff s == R
// Joint states are N-digit numbers in base R+W, station 0 least significant.
struct JointChain {
  int n = 0;
  int per_sta = 0;     // R + W
  int state_count = 0; // (R+W)^N
  std::vector<std::vector<double>> transitions;  // row-stochastic
  std::vector<double> expected_successes;        // per joint state
};

// Enumerates every slot assignment of the active stations (M^A equiprobable)
// and every backoff draw, exactly reproducing step_bi's consequences.
// Throws std::invalid_argument if (R+W)^N exceeds state_cap.
JointChain build(const ProtocolParams& params, int n, int state_cap = 4096);

// Stationary distribution by damped power iteration: the lazy chain
// (T + I)/2 has the same stationary vector and is aperiodic, which keeps
// deterministic backoff countdowns from cycling the iteration.
std::vector<double> stationary(const JointChain& chain, double tol = 1e-13,
                               int max_iter = 2000000);

struct ExactMetrics {
  double successes_per_bi = 0.0;
  double p_hat_s = 0.0;  // successes per STA per BI
  double s = 0.0;        // successes per slot per BI
};

ExactMetrics exact_metrics(const JointChain& chain,
                           const ProtocolParams& params);

// Decodes joint state index -> per-STA state indices (for tests).
std::vector<int> decode(const JointChain& chain, int joint_index);

}  // namespace abft::oracle
