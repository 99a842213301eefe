#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "abft/analytic.hpp"
#include "abft/domain.hpp"
#include "abft/optimize.hpp"
#include "abft/report_io.hpp"
#include "abft/sim.hpp"
#include "abft/validation.hpp"

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitIo = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitValidate = 4;

struct ExperimentSpec {
  std::string mode = "analytic";
  std::string config_path;
  std::string out_path;  // empty = stdout
  std::string format = "csv";
  std::string preset;
  std::vector<std::string> overrides;
  bool seed_set = false;
  std::uint64_t seed = 0;
};

struct Grids {
  std::vector<int> n, m, r, w;
};

std::vector<int> parse_int_list(const std::string& value) {
  std::vector<int> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t pos = 0;
    int v = std::stoi(item, &pos);
    if (pos != item.size()) throw std::invalid_argument("bad list item");
    out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument("empty list");
  return out;
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::ios_base::failure("cannot open " + path);
  out << content;
  if (!out) throw std::ios_base::failure("write failed for " + path);
}

std::string companion_path(const std::string& path, const std::string& tag) {
  auto dot = path.find_last_of('.');
  auto slash = path.find_last_of('/');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) {
    return path + "." + tag;
  }
  return path.substr(0, dot) + "." + tag + path.substr(dot);
}

// Grid points in fixed order: M outer, then R, W, N innermost.
std::vector<abft::sim::SweepPoint> grid_points(const abft::Config& config,
                                               const Grids& grids) {
  std::vector<abft::sim::SweepPoint> points;
  for (int m : grids.m) {
    for (int r : grids.r) {
      for (int w : grids.w) {
        for (int n : grids.n) {
          abft::sim::SweepPoint pt;
          pt.params = config.protocol;
          pt.params.m = m;
          pt.params.r = r;
          pt.params.w = w;
          pt.n = n;
          abft::NetworkConfig net = config.network;
          net.n = n;
          auto errors = abft::validate(pt.params, net);
          if (!errors.empty()) {
            throw abft::ConfigParseError("invalid sweep point", errors);
          }
          points.push_back(pt);
        }
      }
    }
  }
  return points;
}

std::vector<abft::io::AnalyticRow> analytic_rows(
    const std::vector<abft::sim::SweepPoint>& points) {
  std::vector<abft::io::AnalyticRow> rows;
  rows.reserve(points.size());
  for (const auto& pt : points) {
    rows.push_back({pt.params, abft::analytic::report(pt.params, pt.n)});
  }
  return rows;
}

int cmd_analytic(const abft::Config& config, const Grids& grids,
                 const ExperimentSpec& spec) {
  auto rows = analytic_rows(grid_points(config, grids));
  write_output(spec.out_path, spec.format == "json"
                                  ? abft::io::analytic_json(rows)
                                  : abft::io::analytic_csv(rows));
  return 0;
}

int cmd_simulate(const abft::Config& config, const Grids& grids,
                 const ExperimentSpec& spec) {
  auto points = grid_points(config, grids);
  auto results =
      abft::sim::sweep(points, config.network, abft::sim::default_threads());
  write_output(spec.out_path, spec.format == "json"
                                  ? abft::io::sim_json(results)
                                  : abft::io::sim_csv(results));
  return 0;
}

int cmd_sweep(const abft::Config& config, const Grids& grids,
              const ExperimentSpec& spec) {
  auto points = grid_points(config, grids);
  auto a_rows = analytic_rows(points);
  auto s_rows =
      abft::sim::sweep(points, config.network, abft::sim::default_threads());
  write_output(spec.out_path, spec.format == "json"
                                  ? abft::io::sweep_json(a_rows, s_rows)
                                  : abft::io::sweep_csv(a_rows, s_rows));
  return 0;
}

int cmd_optimize(const abft::Config& config, const Grids& grids,
                 const ExperimentSpec& spec) {
  int threads = abft::sim::default_threads();
  auto table = abft::optimize::build_table(config.protocol, grids.n, grids.m,
                                           threads);
  for (const auto& warning : table.warnings) {
    std::cerr << "warning: " << warning << "\n";
  }

  std::vector<abft::io::CompareRow> compare;
  for (int m : grids.m) {
    for (int n : grids.n) {
      abft::ProtocolParams def = config.protocol;
      def.m = m;
      auto def_rep = abft::analytic::report(def, n);
      compare.push_back({n, m, "default", def.r, def.w, def_rep.s, def_rep.d});

      auto tuned = abft::optimize::tune(config.protocol, n, m, threads);
      compare.push_back(
          {n, m, "tuned", tuned.r_star, tuned.w_star, tuned.s_star,
           tuned.d_star});

      // Retry-limit-only tuning at the default window, the curve the
      // evaluation reports as "optimal retry limit".
      int r_fixed = abft::optimize::optimal_retry_limit(config.protocol, n, m);
      abft::ProtocolParams fixed = config.protocol;
      fixed.m = m;
      fixed.r = r_fixed;
      auto fixed_rep = abft::analytic::report(fixed, n);
      compare.push_back({n, m, "tuned_fixed_w", r_fixed, fixed.w, fixed_rep.s,
                         fixed_rep.d});
    }
  }

  if (spec.format == "json") {
    nlohmann::json doc;
    doc["table"] = nlohmann::json::parse(abft::io::table_json(table));
    doc["compare"] = nlohmann::json::parse(abft::io::compare_json(compare));
    write_output(spec.out_path, doc.dump(2) + "\n");
    return 0;
  }
  if (spec.out_path.empty() || spec.out_path == "-") {
    std::cout << abft::io::table_csv(table) << "\n"
              << abft::io::compare_csv(compare);
  } else {
    write_output(spec.out_path, abft::io::table_csv(table));
    write_output(companion_path(spec.out_path, "compare"),
                 abft::io::compare_csv(compare));
  }
  return 0;
}

int cmd_validate(const abft::Config& config, const ExperimentSpec& spec) {
  abft::validation::ValidateOptions opt;
  opt.seed = config.network.seed;
  opt.threads = abft::sim::default_threads();
  auto suites = abft::validation::run_all(opt);

  bool all_passed = true;
  if (spec.format == "json") {
    nlohmann::json doc = nlohmann::json::array();
    for (const auto& suite : suites) {
      all_passed &= suite.passed;
      doc.push_back({{"suite", suite.name},
                     {"passed", suite.passed},
                     {"checks", suite.checks},
                     {"failures", suite.failures}});
    }
    write_output(spec.out_path, doc.dump(2) + "\n");
  } else {
    std::ostringstream out;
    for (const auto& suite : suites) {
      all_passed &= suite.passed;
      out << (suite.passed ? "PASS" : "FAIL") << " " << suite.name << " ("
          << suite.checks << " checks)\n";
      for (const auto& failure : suite.failures) {
        out << "  " << failure << "\n";
      }
    }
    write_output(spec.out_path, out.str());
  }
  return all_passed ? 0 : kExitValidate;
}

}  // namespace

int main(int argc, char** argv) {
  ExperimentSpec spec;
  CLI::App app{"802.11ad A-BFT contention protocol toolkit"};
  app.add_option("--mode", spec.mode, "analytic|simulate|validate|optimize|sweep")
      ->check(CLI::IsMember({"analytic", "simulate", "validate", "optimize",
                             "sweep"}));
  app.add_option("--config", spec.config_path, "configuration file path");
  app.add_option("--set", spec.overrides,
                 "override, e.g. protocol.r=2 or sweep.n=8,16,24,32")
      ->take_all();
  app.add_option("--seed", spec.seed, "master RNG seed")
      ->each([&](const std::string&) { spec.seed_set = true; });
  app.add_option("--out", spec.out_path, "output path (default stdout)");
  app.add_option("--format", spec.format, "csv|json")
      ->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--preset", spec.preset,
                 "paper (10000 BIs x 1000 runs) or desk (2000 BIs x 100 runs)")
      ->check(CLI::IsMember({"paper", "desk"}));
  CLI11_PARSE(app, argc, argv);

  try {
    abft::Config config;
    if (!spec.config_path.empty()) {
      config = abft::load_config(spec.config_path);
    }
    if (spec.preset == "paper") {
      config.network.bi_count = 10000;
      config.network.run_count = 1000;
      config.network.warmup_bi = 500;
    } else if (spec.preset == "desk") {
      config.network.bi_count = 2000;
      config.network.run_count = 100;
      config.network.warmup_bi = 500;
    }

    Grids grids;
    for (const auto& override_kv : spec.overrides) {
      auto eq = override_kv.find('=');
      if (eq == std::string::npos) {
        throw abft::ConfigParseError(
            "override must be key=value: " + override_kv,
            {{"bad_override", override_kv}});
      }
      std::string key = override_kv.substr(0, eq);
      std::string value = override_kv.substr(eq + 1);
      if (key.rfind("sweep.", 0) == 0) {
        std::string axis = key.substr(6);
        std::vector<int>* target = axis == "n"   ? &grids.n
                                   : axis == "m" ? &grids.m
                                   : axis == "r" ? &grids.r
                                   : axis == "w" ? &grids.w
                                                 : nullptr;
        if (!target) {
          throw abft::ConfigParseError("unknown sweep axis '" + key + "'",
                                       {{"unknown_key", key}});
        }
        try {
          *target = parse_int_list(value);
        } catch (const std::exception&) {
          throw abft::ConfigParseError("bad sweep list for '" + key + "'",
                                       {{"bad_value", key + "=" + value}});
        }
      } else {
        abft::apply_override(config, key, value);
      }
    }
    if (spec.seed_set) config.network.seed = spec.seed;

    auto errors = abft::validate(config.protocol, config.network);
    if (!errors.empty()) {
      throw abft::ConfigParseError("invalid configuration", errors);
    }
    if (grids.n.empty()) grids.n = {config.network.n};
    if (grids.m.empty()) grids.m = {config.protocol.m};
    if (grids.r.empty()) grids.r = {config.protocol.r};
    if (grids.w.empty()) grids.w = {config.protocol.w};

    if (spec.mode == "analytic") return cmd_analytic(config, grids, spec);
    if (spec.mode == "simulate") return cmd_simulate(config, grids, spec);
    if (spec.mode == "sweep") return cmd_sweep(config, grids, spec);
    if (spec.mode == "optimize") return cmd_optimize(config, grids, spec);
    return cmd_validate(config, spec);
  } catch (const abft::ConfigParseError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    for (const auto& err : e.errors) {
      std::cerr << "  [" << err.code << "] " << err.message << "\n";
    }
    return kExitConfig;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return kExitNumeric;
  }
}
