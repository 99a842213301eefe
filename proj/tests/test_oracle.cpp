#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "abft/oracle.hpp"
#include "abft/sim.hpp"

using namespace abft;
using namespace abft::oracle;

namespace {

ProtocolParams tiny(int m, int r, int w) {
  ProtocolParams p;
  p.m = m;
  p.r = r;
  p.w = w;
  return p;
}

// Regularized upper incomplete gamma Q(a, x), series + continued fraction.
double gamma_q(double a, double x) {
  if (x < a + 1.0) {
    double ap = a, sum = 1.0 / a, del = sum;
    for (int i = 0; i < 500; ++i) {
      ap += 1.0;
      del *= x / ap;
      sum += del;
      if (std::abs(del) < std::abs(sum) * 1e-14) break;
    }
    return 1.0 - sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
  }
  double b = x + 1.0 - a, c = 1e300, d = 1.0 / b, h = d;
  for (int i = 1; i < 500; ++i) {
    double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < 1e-300) d = 1e-300;
    c = b + an / c;
    if (std::abs(c) < 1e-300) c = 1e-300;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-14) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

double chi_square_p_value(double stat, int dof) {
  return gamma_q(dof / 2.0, stat / 2.0);
}

}  // namespace

TEST_CASE("rows are stochastic") {
  for (auto [m, r, w, n] : {std::array<int, 4>{2, 1, 2, 2},
                            std::array<int, 4>{3, 2, 2, 3},
                            std::array<int, 4>{2, 2, 2, 2},
                            std::array<int, 4>{1, 1, 2, 2}}) {
    auto chain = build(tiny(m, r, w), n);
    for (const auto& row : chain.transitions) {
      double sum = std::accumulate(row.begin(), row.end(), 0.0);
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("single station chain rests at the origin") {
  auto chain = build(ProtocolParams{}, 1);
  auto pi = stationary(chain);
  CHECK(pi[0] == doctest::Approx(1.0).epsilon(1e-12));
  auto metrics = exact_metrics(chain, ProtocolParams{});
  CHECK(metrics.p_hat_s == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(metrics.s == doctest::Approx(1.0 / 8.0).epsilon(1e-10));
}

TEST_CASE("two stations on one slot always collide while both active") {
  auto params = tiny(1, 1, 2);
  auto chain = build(params, 2);
  // Joint state (0,0): both active on a single slot -> zero successes.
  CHECK(chain.expected_successes[0] == 0.0);
  auto metrics = exact_metrics(chain, params);
  CHECK(metrics.p_hat_s > 0.0);  // backoff desynchronizes them eventually
  CHECK(metrics.p_hat_s == doctest::Approx(0.142857142857).epsilon(1e-9));
}

TEST_CASE("exact fixtures for tiny instances") {
  // Frozen from an independent enumeration of the joint chain.
  struct Fixture {
    int n, m, r, w;
    double p_hat_s;
  };
  const Fixture fixtures[] = {
      {2, 2, 1, 2, 0.454545454545},
      {2, 2, 2, 2, 0.480000000000},
      {2, 2, 1, 1, 0.500000000000},
      {2, 3, 2, 2, 0.643776824034},
      {3, 2, 1, 2, 0.286821705426},
      {3, 2, 2, 2, 0.284968066658},
      {3, 3, 2, 2, 0.438693599226},
      {3, 3, 1, 1, 0.444444444444},
  };
  for (const auto& fx : fixtures) {
    auto params = tiny(fx.m, fx.r, fx.w);
    auto chain = build(params, fx.n);
    auto metrics = exact_metrics(chain, params);
    CAPTURE(fx.n);
    CAPTURE(fx.m);
    CHECK(metrics.p_hat_s == doctest::Approx(fx.p_hat_s).epsilon(1e-9));
    CHECK(metrics.s ==
          doctest::Approx(fx.p_hat_s * fx.n / fx.m).epsilon(1e-9));
  }
}

TEST_CASE("stationary distribution is permutation symmetric") {
  auto params = tiny(2, 2, 2);
  auto chain = build(params, 3);
  auto pi = stationary(chain);
  // Swapping station identities maps joint index digits; mass must match.
  for (int idx = 0; idx < chain.state_count; ++idx) {
    auto digits = decode(chain, idx);
    std::swap(digits[0], digits[2]);
    int swapped = 0, radix = 1;
    for (int i = 0; i < chain.n; ++i) {
      swapped += digits[i] * radix;
      radix *= chain.per_sta;
    }
    CHECK(pi[idx] == doctest::Approx(pi[swapped]).epsilon(1e-8));
  }
}

TEST_CASE("state-space cap is enforced") {
  ProtocolParams params;  // R+W = 16 per station
  CHECK_THROWS_AS(build(params, 4), std::invalid_argument);
  CHECK_NOTHROW(build(params, 3));  // 16^3 = 4096 exactly
}

TEST_CASE("simulator visits joint states with the stationary frequencies") {
  auto params = tiny(2, 1, 2);
  const int n = 2;
  auto chain = build(params, n);
  auto pi = stationary(chain);

  std::vector<StationState> stations(n);
  std::mt19937_64 rng(20240817);
  std::vector<std::int64_t> counts(chain.state_count, 0);
  // Consecutive BIs are correlated; sampling every stride-th BI keeps the
  // chi-square statistic close to its nominal distribution.
  const int warmup = 2000;
  const int stride = 25;
  const int tallies = 40000;
  std::int64_t samples = 0;
  for (int bi = 0; bi < warmup + stride * tallies; ++bi) {
    if (bi >= warmup && (bi - warmup) % stride == 0) {
      ++samples;
      int idx = 0, radix = 1;
      for (int i = 0; i < n; ++i) {
        int s = stations[i].collisions < params.r
                    ? stations[i].collisions
                    : params.r + stations[i].backoff;
        idx += s * radix;
        radix *= chain.per_sta;
      }
      ++counts[idx];
    }
    sim::step_bi(stations, params, rng);
  }

  double stat = 0.0;
  int dof = -1;
  for (int idx = 0; idx < chain.state_count; ++idx) {
    double expected = pi[idx] * samples;
    if (expected < 5.0) continue;  // standard small-cell exclusion
    double diff = counts[idx] - expected;
    stat += diff * diff / expected;
    ++dof;
  }
  REQUIRE(dof >= 1);
  CHECK(chi_square_p_value(stat, dof) > 0.01);
}
