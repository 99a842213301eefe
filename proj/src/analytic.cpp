#include "abft/analytic.hpp"

#include <cmath>
#include <stdexcept>

namespace abft::analytic {

namespace {

// p^R for integer R >= 1, via logs to keep large-R underflow graceful.
double pow_pr(double p, int r) {
  if (p <= 0.0) return 0.0;
  return std::exp(static_cast<double>(r) * std::log(p));
}

double fixed_point_residual(const ProtocolParams& params, int n, double p) {
  double tau = activity_probability(params, p);
  return std::pow(1.0 - tau / params.m, n - 1) + p - 1.0;
}

}  // namespace

double activity_probability(const ProtocolParams& params, double p) {
  return 1.0 / (pow_pr(p, params.r) * (params.w - 1) / 2.0 + 1.0);
}

double solve_collision_probability(const ProtocolParams& params, int n,
                                   double tol, int max_iter) {
  if (n == 1) return 0.0;  // residual reduces to f(p) = p
  double lo = 0.0, hi = 1.0;
  double mid = 0.5;
  for (int i = 0; i < max_iter; ++i) {
    mid = 0.5 * (lo + hi);
    double f = fixed_point_residual(params, n, mid);
    if (std::abs(f) <= tol) return mid;
    if (f > 0.0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  if (std::abs(fixed_point_residual(params, n, mid)) > tol) {
    throw std::runtime_error(
        "collision-probability bisection failed to reach tolerance");
  }
  return mid;
}

SteadyState steady_state(const ProtocolParams& params, double p) {
  SteadyState ss;
  ss.p = p;
  int r_limit = params.r;
  int w_size = params.w;
  double pr = pow_pr(p, r_limit);
  double norm = pr * (w_size - 1) / 2.0 + 1.0;
  ss.pi_active.resize(r_limit);
  for (int r = 0; r < r_limit; ++r) {
    ss.pi_active[r] = pow_pr(p, r) * (1.0 - p) / norm;
  }
  ss.pi_active[0] = (1.0 - p) / norm;  // p^0 = 1 even at p = 0
  ss.pi_backoff.resize(w_size);
  for (int w = 0; w < w_size; ++w) {
    ss.pi_backoff[w] = (w_size - w) * pr / (w_size * norm);
  }
  return ss;
}

std::pair<double, double> success_probability(const ProtocolParams& params,
                                              int n, double p) {
  double tau = activity_probability(params, p);
  double p_s = std::pow(1.0 - tau / params.m, n - 1);
  return {p_s, (1.0 - p) * tau};
}

double efficiency(const ProtocolParams& params, int n, double p) {
  auto [p_s, p_hat_s] = success_probability(params, n, p);
  (void)p_s;
  return p_hat_s * n / params.m;
}

std::pair<double, double> approx_efficiency(const ProtocolParams& params,
                                            int n, double p) {
  double tau = activity_probability(params, p);
  double x = tau * n / params.m;
  return {std::exp(-x), x * std::exp(-x)};
}

double latency(const ProtocolParams& params, double p) {
  double pr = pow_pr(p, params.r);
  return params.t_bi *
         ((pr * (params.w - 1) / 2.0 + p) / (1.0 - p) + params.alpha());
}

double latency_series(const ProtocolParams& params, double p, int terms) {
  double alpha = params.alpha();
  double mean_backoff = (params.w - 1) / 2.0;
  double sum = 0.0;
  double p_pow = 1.0;  // p^i
  for (int i = 0; i <= terms; ++i) {
    double expected_bis;
    if (i < params.r) {
      expected_bis = i + alpha;
    } else {
      expected_bis = (i - params.r + 1) * (mean_backoff + 1.0) + params.r -
                     1.0 + alpha;
    }
    sum += (1.0 - p) * p_pow * expected_bis;
    p_pow *= p;
  }
  return params.t_bi * sum;
}

AnalyticReport report(const ProtocolParams& params, int n, double tol) {
  AnalyticReport rep;
  rep.n = n;
  rep.p = solve_collision_probability(params, n, tol);
  rep.tau = activity_probability(params, rep.p);
  auto [p_s, p_hat_s] = success_probability(params, n, rep.p);
  rep.p_s = p_s;
  rep.p_hat_s = p_hat_s;
  rep.s = efficiency(params, n, rep.p);
  rep.s_hat = approx_efficiency(params, n, rep.p).second;
  rep.d = latency(params, rep.p);
  return rep;
}

}  // namespace abft::analytic
