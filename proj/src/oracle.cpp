#include "abft/oracle.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace abft::oracle {

namespace {

// Distribution over a station's next per-STA state.
struct NextDist {
  // Either a single deterministic target, or a uniform spread over the
  // W backoff states starting at index R.
  int target = 0;
  bool uniform_backoff = false;
};

}  // namespace

JointChain build(const ProtocolParams& params, int n, int state_cap) {
  JointChain chain;
  chain.n = n;
  chain.per_sta = params.r + params.w;
  double size = std::pow(static_cast<double>(chain.per_sta), n);
  if (size > static_cast<double>(state_cap)) {
    throw std::invalid_argument("joint state space exceeds cap");
  }
  chain.state_count = static_cast<int>(std::lround(size));
  chain.transitions.assign(chain.state_count,
                           std::vector<double>(chain.state_count, 0.0));
  chain.expected_successes.assign(chain.state_count, 0.0);

  const int r_limit = params.r;
  const int w_size = params.w;
  const int m = params.m;

  std::vector<int> sta(n);
  for (int state = 0; state < chain.state_count; ++state) {
    int rem = state;
    for (int i = 0; i < n; ++i) {
      sta[i] = rem % chain.per_sta;
      rem /= chain.per_sta;
    }
    std::vector<int> active;
    for (int i = 0; i < n; ++i) {
      if (sta[i] <= r_limit) active.push_back(i);
    }
    const int a = static_cast<int>(active.size());
    std::int64_t assignments = 1;
    for (int k = 0; k < a; ++k) assignments *= m;
    const double p_assign = 1.0 / static_cast<double>(assignments);

    std::vector<int> slot_of(a, 0);
    std::vector<int> slot_count(m, 0);
    std::vector<NextDist> next(n);
    for (std::int64_t code = 0; code < assignments; ++code) {
      std::int64_t c = code;
      std::fill(slot_count.begin(), slot_count.end(), 0);
      for (int k = 0; k < a; ++k) {
        slot_of[k] = static_cast<int>(c % m);
        c /= m;
        ++slot_count[slot_of[k]];
      }
      int singles = 0;
      for (int s = 0; s < m; ++s) singles += slot_count[s] == 1;
      chain.expected_successes[state] += p_assign * singles;

      for (int i = 0; i < n; ++i) {
        next[i].uniform_backoff = false;
        if (sta[i] > r_limit) {
          next[i].target = sta[i] - 1;  // backoff countdown
        }
      }
      for (int k = 0; k < a; ++k) {
        int i = active[k];
        if (slot_count[slot_of[k]] == 1) {
          next[i].target = 0;  // success clears the counter
        } else if (sta[i] < r_limit - 1) {
          next[i].target = sta[i] + 1;
        } else {
          next[i].uniform_backoff = true;  // hit or sat at the retry limit
        }
      }

      // Fold the per-station product distribution into this row.
      std::vector<std::pair<int, double>> partial{{0, p_assign}};
      std::vector<std::pair<int, double>> scratch;
      int radix = 1;
      for (int i = 0; i < n; ++i) {
        scratch.clear();
        for (const auto& [idx, prob] : partial) {
          if (next[i].uniform_backoff) {
            double q = prob / w_size;
            for (int w = 0; w < w_size; ++w) {
              scratch.emplace_back(idx + (r_limit + w) * radix, q);
            }
          } else {
            scratch.emplace_back(idx + next[i].target * radix, prob);
          }
        }
        partial.swap(scratch);
        radix *= chain.per_sta;
      }
      for (const auto& [idx, prob] : partial) {
        chain.transitions[state][idx] += prob;
      }
    }
  }
  return chain;
}

std::vector<double> stationary(const JointChain& chain, double tol,
                               int max_iter) {
  const int s = chain.state_count;
  std::vector<double> pi(s, 1.0 / s);
  std::vector<double> next(s, 0.0);
  for (int iter = 0; iter < max_iter; ++iter) {
    std::fill(next.begin(), next.end(), 0.0);
    for (int i = 0; i < s; ++i) {
      const double pi_i = pi[i];
      if (pi_i == 0.0) continue;
      const auto& row = chain.transitions[i];
      for (int j = 0; j < s; ++j) next[j] += pi_i * row[j];
    }
    double resid = 0.0;
    for (int j = 0; j < s; ++j) {
      next[j] = 0.5 * (next[j] + pi[j]);  // lazy chain, same stationary vector
      resid = std::max(resid, std::abs(next[j] - pi[j]));
    }
    pi.swap(next);
    if (resid <= tol) return pi;
  }
  throw std::runtime_error("power iteration did not converge");
}

ExactMetrics exact_metrics(const JointChain& chain,
                           const ProtocolParams& params) {
  std::vector<double> pi = stationary(chain);
  ExactMetrics out;
  for (int i = 0; i < chain.state_count; ++i) {
    out.successes_per_bi += pi[i] * chain.expected_successes[i];
  }
  out.p_hat_s = out.successes_per_bi / chain.n;
  out.s = out.successes_per_bi / params.m;
  return out;
}

std::vector<int> decode(const JointChain& chain, int joint_index) {
  std::vector<int> sta(chain.n);
  for (int i = 0; i < chain.n; ++i) {
    sta[i] = joint_index % chain.per_sta;
    joint_index /= chain.per_sta;
  }
  return sta;
}

}  // namespace abft::oracle
