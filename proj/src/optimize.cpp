#include "abft/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "abft/analytic.hpp"

namespace abft::optimize {

namespace {

double approx_s_at(const ProtocolParams& base, int n, int m) {
  ProtocolParams params = base;
  params.m = m;
  double p = analytic::solve_collision_probability(params, n);
  return analytic::approx_efficiency(params, n, p).second;
}

}  // namespace

SlotCountResult optimal_slot_count(const ProtocolParams& params, int n) {
  SlotCountResult out;
  double p_opt = 1.0 - std::exp(-1.0);  // fixed point at the optimum
  double denom =
      std::pow(p_opt, params.r) * (params.w - 1) / 2.0 + 1.0;
  out.m_star_real = n / denom;

  int lo = std::max(1, static_cast<int>(std::floor(out.m_star_real)));
  int hi = std::max(1, static_cast<int>(std::ceil(out.m_star_real)));
  double s_lo = approx_s_at(params, n, lo);
  double s_hi = lo == hi ? s_lo : approx_s_at(params, n, hi);
  if (s_hi > s_lo) {
    out.m_star_int = hi;
    out.s_at_opt = s_hi;
  } else {
    out.m_star_int = lo;
    out.s_at_opt = s_lo;
  }
  return out;
}

TuneResult tune(const ProtocolParams& params, int n, int m, int threads) {
  TuneResult out;
  const int r_max = params.r_max;
  const int w_max = params.w_max;
  out.grid.resize(static_cast<std::size_t>(r_max) * w_max);

  auto eval = [&](int flat) {
    int r = flat / w_max + 1;
    int w = flat % w_max + 1;
    ProtocolParams cand = params;
    cand.m = m;
    cand.r = r;
    cand.w = w;
    GridCell cell;
    cell.r = r;
    cell.w = w;
    cell.p = analytic::solve_collision_probability(cand, n);
    cell.s = analytic::efficiency(cand, n, cell.p);
    cell.d = analytic::latency(cand, cell.p);
    out.grid[flat] = cell;
  };

  const int total = r_max * w_max;
  threads = std::max(1, std::min(threads, total));
  if (threads == 1) {
    for (int flat = 0; flat < total; ++flat) eval(flat);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        for (int flat = t; flat < total; flat += threads) eval(flat);
      });
    }
    for (auto& th : pool) th.join();
  }

  // Fixed scan order implements the tie-break: smaller R, then smaller W.
  const GridCell* best = &out.grid.front();
  for (const auto& cell : out.grid) {
    if (cell.s > best->s + 1e-12) best = &cell;
  }
  out.r_star = best->r;
  out.w_star = best->w;
  out.s_star = best->s;
  out.d_star = best->d;
  return out;
}

int optimal_retry_limit(const ProtocolParams& params, int n, int m) {
  int best_r = 1;
  double best_s = -1.0;
  for (int r = 1; r <= params.r_max; ++r) {
    ProtocolParams cand = params;
    cand.m = m;
    cand.r = r;
    double p = analytic::solve_collision_probability(cand, n);
    double s = analytic::efficiency(cand, n, p);
    if (s > best_s + 1e-12) {
      best_s = s;
      best_r = r;
    }
  }
  return best_r;
}

TuningTable build_table(const ProtocolParams& params,
                        const std::vector<int>& n_grid,
                        const std::vector<int>& m_grid, int threads) {
  TuningTable table;
  for (int m : m_grid) {
    int prev_r_star = -1;
    for (int n : n_grid) {
      TuneResult res = tune(params, n, m, threads);
      table.rows.push_back(
          {n, m, res.r_star, res.w_star, res.s_star, res.d_star});
      if (prev_r_star >= 0 && res.r_star > prev_r_star) {
        table.warnings.push_back(
            "r_star not non-increasing at N=" + std::to_string(n) +
            ", M=" + std::to_string(m));
      }
      prev_r_star = res.r_star;
    }
  }
  return table;
}

}  // namespace abft::optimize
