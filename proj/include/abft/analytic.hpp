#pragma once

#include <utility>
#include <vector>

#include "abft/domain.hpp"

// Closed-form per-STA chain model: stationary distribution, fixed-point
// collision probability, success probability, training efficiency and
// latency, plus the dense-user approximations.
namespace abft::analytic {

// Stationary distribution of the per-STA chain at a given conditional
// collision probability p. Active states (r,0) for r in [0,R-1] come
// first; backoff states (R,w) for w in [0,W-1] follow.
struct SteadyState {
  std::vector<double> pi_active;   // pi_{r,0}, r in [0, R-1]
  std::vector<double> pi_backoff;  // pi_{R,w}, w in [0, W-1]
  double p = 0.0;                  // collision probability used to build it
};

struct AnalyticReport {
  int n = 0;
  double p = 0.0;        // conditional collision probability (fixed point)
  double tau = 0.0;      // probability an STA is active
  double p_s = 0.0;      // conditional success probability
  double p_hat_s = 0.0;  // unconditional successful-training probability
  double s = 0.0;        // training efficiency
  double s_hat = 0.0;    // dense-user approximation of s
  double d = 0.0;        // average training latency [s]
};

// tau = 1 / (p^R (W-1)/2 + 1)
double activity_probability(const ProtocolParams& params, double p);

// Root of (1 - tau(p)/M)^(N-1) + p - 1 = 0, found by bisection on [0,1].
// The function is strictly increasing with a sign change on the bracket,
// so the root is unique. N=1 returns 0 without iterating.
double solve_collision_probability(const ProtocolParams& params, int n,
                                   double tol = 1e-12, int max_iter = 200);

SteadyState steady_state(const ProtocolParams& params, double p);

// Returns {p_s, p_hat_s}: conditional success probability given active,
// and the unconditional successful-training probability (1-p)*tau.
std::pair<double, double> success_probability(const ProtocolParams& params,
                                              int n, double p);

// S = p_hat_s * N / M, the expected fraction of slots successfully used.
double efficiency(const ProtocolParams& params, int n, double p);

// Returns {exp(-N*tau/M), (tau*N/M) * exp(-tau*N/M)}, the large-N forms.
std::pair<double, double> approx_efficiency(const ProtocolParams& params,
                                            int n, double p);

// Closed-form mean training latency [s] at collision probability p.
double latency(const ProtocolParams& params, double p);

// Partial sum of the latency series sum_i (1-p) p^i E[D_i]; converges to
// latency() as terms grows. Used as the independent route for testing the
// closed form.
double latency_series(const ProtocolParams& params, double p, int terms);

// Solves the fixed point once and fills every field from that single p.
AnalyticReport report(const ProtocolParams& params, int n, double tol = 1e-12);

}  // namespace abft::analytic
