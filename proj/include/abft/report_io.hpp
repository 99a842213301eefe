#pragma once

#include <string>
#include <utility>
#include <vector>

#include "abft/analytic.hpp"
#include "abft/optimize.hpp"
#include "abft/sim.hpp"

// Plot-ready CSV and JSON emission. CSV headers are part of the stable
// output contract; values carry 6 significant digits.
namespace abft::io {

inline constexpr const char* kAnalyticCsvHeader =
    "n,m,r,w,p,tau,p_s,p_hat_s,s,s_hat,d";
inline constexpr const char* kSimCsvHeader =
    "n,m,r,w,metric,value,ci_half_width";
inline constexpr const char* kSweepCsvHeader =
    "n,m,r,w,source,metric,value,ci_half_width";
inline constexpr const char* kTableCsvHeader =
    "n,m,r_star,w_star,s_star,d_star";
inline constexpr const char* kCompareCsvHeader = "n,m,scheme,r,w,s,d";

std::string format_value(double v);  // 6 significant digits

struct AnalyticRow {
  ProtocolParams params;
  analytic::AnalyticReport report;
};

using SimRow = std::pair<sim::SweepPoint, sim::SimReport>;

struct CompareRow {
  int n = 0;
  int m = 0;
  std::string scheme;  // "default" | "tuned" | "tuned_fixed_w"
  int r = 0;
  int w = 0;
  double s = 0.0;
  double d = 0.0;
};

std::string analytic_csv(const std::vector<AnalyticRow>& rows);
std::string sim_csv(const std::vector<SimRow>& rows);
// Combined analytic + empirical rows in one long-format file.
std::string sweep_csv(const std::vector<AnalyticRow>& analytic_rows,
                      const std::vector<SimRow>& sim_rows);
std::string table_csv(const optimize::TuningTable& table);
std::string compare_csv(const std::vector<CompareRow>& rows);

std::string analytic_json(const std::vector<AnalyticRow>& rows);
std::string sim_json(const std::vector<SimRow>& rows);
std::string sweep_json(const std::vector<AnalyticRow>& analytic_rows,
                       const std::vector<SimRow>& sim_rows);
std::string table_json(const optimize::TuningTable& table);
std::string compare_json(const std::vector<CompareRow>& rows);

}  // namespace abft::io
