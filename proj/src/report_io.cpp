#include "abft/report_io.hpp"

#include <cstdio>
#include <sstream>

#include <json.hpp>

namespace abft::io {

std::string format_value(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

namespace {

using nlohmann::json;

void append_sim_rows(std::ostringstream& out, const SimRow& row,
                     const char* source) {
  const auto& [point, rep] = row;
  const struct {
    const char* name;
    double value;
    double ci;
  } metrics[] = {
      {"p_hat_s", rep.p_hat_s_emp, rep.ci_p_hat_s},
      {"s", rep.s_emp, rep.ci_s},
      {"d", rep.d_emp, rep.ci_d},
      {"collisions_per_bi", rep.collisions_per_bi, rep.ci_collisions_per_bi},
      {"p_cond", rep.p_cond_emp, rep.ci_p_cond},
  };
  for (const auto& m : metrics) {
    out << point.n << ',' << point.params.m << ',' << point.params.r << ','
        << point.params.w << ',';
    if (source) out << source << ',';
    out << m.name << ',' << format_value(m.value) << ','
        << format_value(m.ci) << '\n';
  }
}

void append_analytic_long_rows(std::ostringstream& out,
                               const AnalyticRow& row) {
  const struct {
    const char* name;
    double value;
  } metrics[] = {
      {"p_hat_s", row.report.p_hat_s}, {"s", row.report.s},
      {"d", row.report.d},             {"p", row.report.p},
      {"tau", row.report.tau},         {"s_hat", row.report.s_hat},
  };
  for (const auto& m : metrics) {
    out << row.report.n << ',' << row.params.m << ',' << row.params.r << ','
        << row.params.w << ",analytic," << m.name << ','
        << format_value(m.value) << ",0\n";
  }
}

json analytic_row_json(const AnalyticRow& row) {
  return json{{"n", row.report.n},
              {"m", row.params.m},
              {"r", row.params.r},
              {"w", row.params.w},
              {"p", row.report.p},
              {"tau", row.report.tau},
              {"p_s", row.report.p_s},
              {"p_hat_s", row.report.p_hat_s},
              {"s", row.report.s},
              {"s_hat", row.report.s_hat},
              {"d", row.report.d}};
}

json sim_row_json(const SimRow& row) {
  const auto& [point, rep] = row;
  json runs = json::array();
  for (const auto& r : rep.per_run) {
    runs.push_back({{"p_hat_s", r.p_hat_s},
                    {"s", r.s},
                    {"d", r.d},
                    {"collisions_per_bi", r.collisions_per_bi},
                    {"p_cond", r.p_cond},
                    {"episodes", r.episodes}});
  }
  return json{{"n", point.n},
              {"m", point.params.m},
              {"r", point.params.r},
              {"w", point.params.w},
              {"p_hat_s", rep.p_hat_s_emp},
              {"s", rep.s_emp},
              {"d", rep.d_emp},
              {"collisions_per_bi", rep.collisions_per_bi},
              {"p_cond", rep.p_cond_emp},
              {"ci", {{"p_hat_s", rep.ci_p_hat_s},
                      {"s", rep.ci_s},
                      {"d", rep.ci_d},
                      {"collisions_per_bi", rep.ci_collisions_per_bi},
                      {"p_cond", rep.ci_p_cond}}},
              {"per_run", runs}};
}

}  // namespace

std::string analytic_csv(const std::vector<AnalyticRow>& rows) {
  std::ostringstream out;
  out << kAnalyticCsvHeader << '\n';
  for (const auto& row : rows) {
    out << row.report.n << ',' << row.params.m << ',' << row.params.r << ','
        << row.params.w << ',' << format_value(row.report.p) << ','
        << format_value(row.report.tau) << ',' << format_value(row.report.p_s)
        << ',' << format_value(row.report.p_hat_s) << ','
        << format_value(row.report.s) << ',' << format_value(row.report.s_hat)
        << ',' << format_value(row.report.d) << '\n';
  }
  return out.str();
}

std::string sim_csv(const std::vector<SimRow>& rows) {
  std::ostringstream out;
  out << kSimCsvHeader << '\n';
  for (const auto& row : rows) append_sim_rows(out, row, nullptr);
  return out.str();
}

std::string sweep_csv(const std::vector<AnalyticRow>& analytic_rows,
                      const std::vector<SimRow>& sim_rows) {
  std::ostringstream out;
  out << kSweepCsvHeader << '\n';
  for (const auto& row : analytic_rows) append_analytic_long_rows(out, row);
  for (const auto& row : sim_rows) append_sim_rows(out, row, "sim");
  return out.str();
}

std::string table_csv(const optimize::TuningTable& table) {
  std::ostringstream out;
  out << kTableCsvHeader << '\n';
  for (const auto& row : table.rows) {
    out << row.n << ',' << row.m << ',' << row.r_star << ',' << row.w_star
        << ',' << format_value(row.s_star) << ',' << format_value(row.d_star)
        << '\n';
  }
  return out.str();
}

std::string compare_csv(const std::vector<CompareRow>& rows) {
  std::ostringstream out;
  out << kCompareCsvHeader << '\n';
  for (const auto& row : rows) {
    out << row.n << ',' << row.m << ',' << row.scheme << ',' << row.r << ','
        << row.w << ',' << format_value(row.s) << ',' << format_value(row.d)
        << '\n';
  }
  return out.str();
}

std::string analytic_json(const std::vector<AnalyticRow>& rows) {
  json arr = json::array();
  for (const auto& row : rows) arr.push_back(analytic_row_json(row));
  return arr.dump(2) + "\n";
}

std::string sim_json(const std::vector<SimRow>& rows) {
  json arr = json::array();
  for (const auto& row : rows) arr.push_back(sim_row_json(row));
  return arr.dump(2) + "\n";
}

std::string sweep_json(const std::vector<AnalyticRow>& analytic_rows,
                       const std::vector<SimRow>& sim_rows) {
  json analytic_arr = json::array();
  for (const auto& row : analytic_rows)
    analytic_arr.push_back(analytic_row_json(row));
  json sim_arr = json::array();
  for (const auto& row : sim_rows) sim_arr.push_back(sim_row_json(row));
  return json{{"analytic", analytic_arr}, {"sim", sim_arr}}.dump(2) + "\n";
}

std::string table_json(const optimize::TuningTable& table) {
  json rows = json::array();
  for (const auto& row : table.rows) {
    rows.push_back({{"n", row.n},
                    {"m", row.m},
                    {"r_star", row.r_star},
                    {"w_star", row.w_star},
                    {"s_star", row.s_star},
                    {"d_star", row.d_star}});
  }
  return json{{"rows", rows}, {"warnings", table.warnings}}.dump(2) + "\n";
}

std::string compare_json(const std::vector<CompareRow>& rows) {
  json arr = json::array();
  for (const auto& row : rows) {
    arr.push_back({{"n", row.n},
                   {"m", row.m},
                   {"scheme", row.scheme},
                   {"r", row.r},
                   {"w", row.w},
                   {"s", row.s},
                   {"d", row.d}});
  }
  return arr.dump(2) + "\n";
}

}  // namespace abft::io
