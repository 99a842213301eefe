#include "abft/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <thread>

namespace abft::sim {

int BiOutcome::successes() const {
  int c = 0;
  for (const auto& s : slots) c += s.claimants.size() == 1;
  return c;
}

int BiOutcome::collided_slots() const {
  int c = 0;
  for (const auto& s : slots) c += s.claimants.size() >= 2;
  return c;
}

int BiOutcome::idle_slots() const {
  int c = 0;
  for (const auto& s : slots) c += s.claimants.empty();
  return c;
}

int BiOutcome::attempts() const {
  int c = 0;
  for (const auto& s : slots) c += static_cast<int>(s.claimants.size());
  return c;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t point_index,
                          std::uint64_t run_index) {
  return splitmix64(splitmix64(master ^ point_index) + run_index);
}

BiOutcome step_bi(std::vector<StationState>& stations,
                  const ProtocolParams& params, std::mt19937_64& rng) {
  BiOutcome out;
  out.slots.resize(params.m);
  std::uniform_int_distribution<int> slot_draw(0, params.m - 1);
  std::uniform_int_distribution<int> backoff_draw(0, params.w - 1);

  for (int i = 0; i < static_cast<int>(stations.size()); ++i) {
    StationState& st = stations[i];
    if (st.backoff > 0) {
      --st.backoff;
      continue;
    }
    out.slots[slot_draw(rng)].claimants.push_back(i);
  }

  // Resolve in station-index order so backoff draws are reproducible.
  std::vector<signed char> collided(stations.size(), 0);
  for (const auto& slot : out.slots) {
    if (slot.claimants.size() == 1) {
      stations[slot.claimants.front()].collisions = 0;
    } else {
      for (int id : slot.claimants) collided[id] = 1;
    }
  }
  for (int i = 0; i < static_cast<int>(stations.size()); ++i) {
    if (!collided[i]) continue;
    StationState& st = stations[i];
    if (st.collisions < params.r - 1) {
      ++st.collisions;
    } else {
      // Counter saturates at R; every collision at the limit draws a
      // fresh backoff. A draw of 0 means active again next BI.
      st.collisions = params.r;
      st.backoff = backoff_draw(rng);
    }
  }
  return out;
}

namespace {

RunMetrics simulate_run(const ProtocolParams& params, const NetworkConfig& net,
                        std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<StationState> stations(net.n);
  std::int64_t successes = 0;
  std::int64_t collided_slots = 0;
  std::int64_t attempts = 0;
  std::int64_t station_collisions = 0;
  std::int64_t episodes = 0;
  double latency_sum = 0.0;
  const std::int64_t measured = net.bi_count - net.warmup_bi;

  for (int bi = 0; bi < net.bi_count; ++bi) {
    if (bi == net.warmup_bi) {
      for (auto& st : stations) st.episode_start_bi = bi;
    }
    BiOutcome out = step_bi(stations, params, rng);
    bool measure = bi >= net.warmup_bi;
    if (measure) {
      successes += out.successes();
      collided_slots += out.collided_slots();
      attempts += out.attempts();
    }
    for (const auto& slot : out.slots) {
      if (slot.claimants.size() == 1) {
        int id = slot.claimants.front();
        if (measure) {
          latency_sum += (bi - stations[id].episode_start_bi) * params.t_bi +
                         params.train_time();
          ++episodes;
        }
        stations[id].episode_start_bi = bi + 1;
      } else if (measure) {
        station_collisions += static_cast<std::int64_t>(slot.claimants.size());
      }
    }
  }

  RunMetrics m;
  m.p_hat_s = static_cast<double>(successes) / (net.n * measured);
  m.s = static_cast<double>(successes) / (params.m * measured);
  m.d = episodes > 0 ? latency_sum / episodes : 0.0;
  m.collisions_per_bi = static_cast<double>(collided_slots) / measured;
  m.p_cond = attempts > 0
                 ? static_cast<double>(station_collisions) / attempts
                 : 0.0;
  m.episodes = episodes;
  return m;
}

double mean_of(const std::vector<RunMetrics>& runs,
               double RunMetrics::* field) {
  double sum = 0.0;
  for (const auto& r : runs) sum += r.*field;
  return sum / runs.size();
}

double ci_half_width(const std::vector<RunMetrics>& runs,
                     double RunMetrics::* field, double mean) {
  if (runs.size() < 2) return 0.0;
  double ss = 0.0;
  for (const auto& r : runs) {
    double d = r.*field - mean;
    ss += d * d;
  }
  double sd = std::sqrt(ss / (runs.size() - 1));
  return 1.96 * sd / std::sqrt(static_cast<double>(runs.size()));
}

}  // namespace

SimReport run(const ProtocolParams& params, const NetworkConfig& net,
              std::uint64_t point_index, int threads) {
  SimReport report;
  report.per_run.resize(net.run_count);
  threads = std::max(1, std::min(threads, net.run_count));
  auto work = [&](int first, int stride) {
    for (int r = first; r < net.run_count; r += stride) {
      report.per_run[r] =
          simulate_run(params, net, derive_seed(net.seed, point_index, r));
    }
  };
  if (threads == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) pool.emplace_back(work, t, threads);
    for (auto& th : pool) th.join();
  }

  report.p_hat_s_emp = mean_of(report.per_run, &RunMetrics::p_hat_s);
  report.s_emp = mean_of(report.per_run, &RunMetrics::s);
  report.d_emp = mean_of(report.per_run, &RunMetrics::d);
  report.collisions_per_bi =
      mean_of(report.per_run, &RunMetrics::collisions_per_bi);
  report.p_cond_emp = mean_of(report.per_run, &RunMetrics::p_cond);
  report.ci_p_hat_s =
      ci_half_width(report.per_run, &RunMetrics::p_hat_s, report.p_hat_s_emp);
  report.ci_s = ci_half_width(report.per_run, &RunMetrics::s, report.s_emp);
  report.ci_d = ci_half_width(report.per_run, &RunMetrics::d, report.d_emp);
  report.ci_collisions_per_bi = ci_half_width(
      report.per_run, &RunMetrics::collisions_per_bi, report.collisions_per_bi);
  report.ci_p_cond =
      ci_half_width(report.per_run, &RunMetrics::p_cond, report.p_cond_emp);
  return report;
}

std::vector<std::pair<SweepPoint, SimReport>> sweep(
    const std::vector<SweepPoint>& points, const NetworkConfig& net,
    int threads) {
  std::vector<std::pair<SweepPoint, SimReport>> results;
  results.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    NetworkConfig point_net = net;
    point_net.n = points[i].n;
    results.emplace_back(points[i],
                         run(points[i].params, point_net, i, threads));
  }
  return results;
}

int default_threads() {
  if (const char* env = std::getenv("ABFT_THREADS")) {
    int v = std::atoi(env);
    if (v >= 1) return v;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace abft::sim
