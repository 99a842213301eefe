#include "abft/validation.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "abft/analytic.hpp"
#include "abft/oracle.hpp"
#include "abft/sim.hpp"

namespace abft::validation {

std::vector<std::vector<double>> transition_matrix(
    const ProtocolParams& params, double p) {
  const int r_limit = params.r;
  const int w_size = params.w;
  const int dim = r_limit + w_size;
  std::vector<std::vector<double>> mat(dim, std::vector<double>(dim, 0.0));
  auto active = [](int r) { return r; };           // (r,0) -> index r
  auto backoff = [&](int w) { return r_limit + w; };  // (R,w) -> index R+w

  // Collision bumps the counter while below the limit.
  for (int r = 0; r <= r_limit - 2; ++r) {
    mat[active(r + 1)][active(r)] = p;
  }
  // Success from any active state clears the counter.
  for (int r = 0; r <= r_limit; ++r) {
    int col = r < r_limit ? active(r) : backoff(0);
    mat[active(0)][col] += 1.0 - p;
  }
  // Hitting the limit draws a uniform backoff.
  for (int w = 0; w < w_size; ++w) {
    mat[backoff(w)][active(r_limit - 1)] += p / w_size;
  }
  // Countdown.
  for (int w = 1; w < w_size; ++w) {
    mat[backoff(w - 1)][backoff(w)] = 1.0;
  }
  // Collision at the limit redraws the backoff.
  for (int w = 0; w < w_size; ++w) {
    mat[backoff(w)][backoff(0)] += p / w_size;
  }
  return mat;
}

std::vector<std::pair<ProtocolParams, int>> oracle_instances() {
  std::vector<std::pair<ProtocolParams, int>> out;
  auto add = [&](int n, int m, int r, int w) {
    ProtocolParams p;
    p.m = m;
    p.r = r;
    p.w = w;
    out.emplace_back(p, n);
  };
  add(2, 2, 1, 2);
  add(2, 1, 1, 2);
  add(2, 2, 2, 2);
  add(2, 2, 1, 1);
  add(2, 3, 2, 2);
  add(3, 2, 1, 2);
  add(3, 2, 2, 2);
  add(3, 3, 2, 2);
  add(3, 3, 1, 1);
  return out;
}

SuiteResult oracle_suite(const ValidateOptions& opt) {
  SuiteResult result{"oracle"};
  for (const auto& [params, n] : oracle_instances()) {
    ++result.checks;
    auto chain = oracle::build(params, n);
    auto exact = oracle::exact_metrics(chain, params);

    NetworkConfig net;
    net.n = n;
    net.bi_count = opt.bi_count;
    net.run_count = opt.runs;
    net.warmup_bi = opt.warmup_bi;
    net.seed = opt.seed;
    auto report = sim::run(params, net, /*point_index=*/result.checks,
                           opt.threads);
    double half = report.ci_p_hat_s / 1.96 * opt.ci_z;
    if (std::abs(report.p_hat_s_emp - exact.p_hat_s) > half) {
      std::ostringstream msg;
      msg << "N=" << n << " M=" << params.m << " R=" << params.r
          << " W=" << params.w << ": sim p_hat_s " << report.p_hat_s_emp
          << " outside CI " << half << " of exact " << exact.p_hat_s;
      result.failures.push_back(msg.str());
    }
  }
  result.passed = result.failures.empty();
  return result;
}

SuiteResult balance_suite(const ValidateOptions& opt) {
  SuiteResult result{"balance"};
  std::mt19937_64 rng(sim::splitmix64(opt.seed ^ 0xba1a9ceULL));
  std::uniform_real_distribution<double> p_draw(0.0, 0.99);
  std::uniform_int_distribution<int> r_draw(1, 12);
  std::uniform_int_distribution<int> w_draw(1, 12);
  for (int c = 0; c < opt.balance_cases; ++c) {
    ++result.checks;
    ProtocolParams params;
    params.r = r_draw(rng);
    params.w = w_draw(rng);
    double p = p_draw(rng);

    auto ss = analytic::steady_state(params, p);
    std::vector<double> pi = ss.pi_active;
    pi.insert(pi.end(), ss.pi_backoff.begin(), ss.pi_backoff.end());

    double sum = 0.0;
    for (double v : pi) sum += v;
    if (std::abs(sum - 1.0) > opt.sum_tol) {
      std::ostringstream msg;
      msg << "case " << c << " (p=" << p << ", R=" << params.r
          << ", W=" << params.w << "): sum " << sum << " != 1";
      result.failures.push_back(msg.str());
      continue;
    }

    auto mat = transition_matrix(params, p);
    const int dim = static_cast<int>(pi.size());
    double worst = 0.0;
    for (int i = 0; i < dim; ++i) {
      double acc = 0.0;
      for (int j = 0; j < dim; ++j) acc += mat[i][j] * pi[j];
      worst = std::max(worst, std::abs(acc - pi[i]));
    }
    if (worst > opt.balance_tol) {
      std::ostringstream msg;
      msg << "case " << c << " (p=" << p << ", R=" << params.r
          << ", W=" << params.w << "): balance residual " << worst;
      result.failures.push_back(msg.str());
    }
  }
  result.passed = result.failures.empty();
  return result;
}

SuiteResult latency_series_suite(const ValidateOptions& opt) {
  SuiteResult result{"latency_series"};
  ProtocolParams params;  // default R, W, alpha
  for (int i = 1; i <= 9; ++i) {
    ++result.checks;
    double p = i / 10.0;
    double closed = analytic::latency(params, p);
    double series = analytic::latency_series(params, p, opt.series_terms);
    double rel = std::abs(series - closed) / closed;
    if (rel > opt.series_rel_tol) {
      std::ostringstream msg;
      msg << "p=" << p << ": relative gap " << rel;
      result.failures.push_back(msg.str());
    }
  }
  result.passed = result.failures.empty();
  return result;
}

std::vector<SuiteResult> run_all(const ValidateOptions& opt) {
  return {balance_suite(opt), latency_series_suite(opt), oracle_suite(opt)};
}

}  // namespace abft::validation
