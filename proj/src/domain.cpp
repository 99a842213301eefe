#include "abft/domain.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace abft {

namespace {

void check(std::vector<ConfigError>& out, bool ok, const std::string& code,
           const std::string& message) {
  if (!ok) out.push_back({code, message});
}

}  // namespace

std::vector<ConfigError> validate(const ProtocolParams& p,
                                  const NetworkConfig& net) {
  std::vector<ConfigError> errors;
  check(errors, p.m >= 1, "m_min", "M must be >= 1");
  check(errors, p.r >= 1, "r_min", "R must be >= 1");
  check(errors, p.w >= 1, "w_min", "W must be >= 1");
  check(errors, p.f >= 1, "f_min", "F must be >= 1");
  check(errors, p.t_bi > 0.0, "t_bi_positive", "T_BI must be > 0");
  check(errors, p.t_ssw > 0.0, "t_ssw_positive", "T_SSW must be > 0");
  if (p.t_bi > 0.0 && p.t_ssw > 0.0 && p.f >= 1) {
    check(errors, static_cast<double>(p.f) * p.t_ssw < p.t_bi, "train_fits_bi",
          "F*T_SSW must be smaller than T_BI");
  }
  check(errors, p.r_max >= 1, "r_max_min", "R_max must be >= 1");
  check(errors, p.w_max >= 1, "w_max_min", "W_max must be >= 1");
  check(errors, p.r <= p.r_max, "r_exceeds_r_max", "R exceeds R_max");
  check(errors, p.w <= p.w_max, "w_exceeds_w_max", "W exceeds W_max");

  check(errors, net.n >= 1, "n_min", "N must be >= 1");
  check(errors, net.bi_count >= 1, "bi_count_min", "bi_count must be >= 1");
  check(errors, net.run_count >= 1, "run_count_min", "run_count must be >= 1");
  check(errors, net.warmup_bi >= 0, "warmup_min", "warmup_bi must be >= 0");
  check(errors, net.warmup_bi < net.bi_count, "warmup_range",
        "warmup_bi must be smaller than bi_count");
  return errors;
}

namespace {

struct Field {
  enum Kind { Int, Real, U64 } kind;
  void* ptr;
};

std::map<std::string, Field> field_map(Config& c) {
  return {
      {"protocol.m", {Field::Int, &c.protocol.m}},
      {"protocol.r", {Field::Int, &c.protocol.r}},
      {"protocol.w", {Field::Int, &c.protocol.w}},
      {"protocol.f", {Field::Int, &c.protocol.f}},
      {"protocol.t_bi", {Field::Real, &c.protocol.t_bi}},
      {"protocol.t_ssw", {Field::Real, &c.protocol.t_ssw}},
      {"protocol.r_max", {Field::Int, &c.protocol.r_max}},
      {"protocol.w_max", {Field::Int, &c.protocol.w_max}},
      {"network.n", {Field::Int, &c.network.n}},
      {"network.bi_count", {Field::Int, &c.network.bi_count}},
      {"network.run_count", {Field::Int, &c.network.run_count}},
      {"network.seed", {Field::U64, &c.network.seed}},
      {"network.warmup_bi", {Field::Int, &c.network.warmup_bi}},
  };
}

bool assign_field(const Field& field, const std::string& value) {
  try {
    std::size_t pos = 0;
    switch (field.kind) {
      case Field::Int: {
        long v = std::stol(value, &pos);
        if (pos != value.size()) return false;
        *static_cast<int*>(field.ptr) = static_cast<int>(v);
        return true;
      }
      case Field::Real: {
        double v = std::stod(value, &pos);
        if (pos != value.size()) return false;
        *static_cast<double*>(field.ptr) = v;
        return true;
      }
      case Field::U64: {
        unsigned long long v = std::stoull(value, &pos);
        if (pos != value.size()) return false;
        *static_cast<std::uint64_t*>(field.ptr) = v;
        return true;
      }
    }
  } catch (const std::exception&) {
  }
  return false;
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

Config parse_config(std::istream& in, const std::string& origin) {
  Config config;
  auto fields = field_map(config);
  std::vector<ConfigError> errors;
  std::string line;
  std::string section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        errors.push_back({"bad_section", origin + ":" + std::to_string(line_no) +
                                             ": malformed section header"});
        continue;
      }
      section = trim(line.substr(1, line.size() - 2));
      if (section != "protocol" && section != "network") {
        errors.push_back({"unknown_section",
                          origin + ":" + std::to_string(line_no) +
                              ": unknown section [" + section + "]"});
      }
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      errors.push_back({"bad_line", origin + ":" + std::to_string(line_no) +
                                        ": expected key = value"});
      continue;
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    std::string full = section + "." + key;
    auto it = fields.find(full);
    if (it == fields.end()) {
      errors.push_back({"unknown_key", origin + ":" + std::to_string(line_no) +
                                           ": unknown key '" + full + "'"});
      continue;
    }
    if (!assign_field(it->second, value)) {
      errors.push_back({"bad_value", origin + ":" + std::to_string(line_no) +
                                         ": bad value for '" + full + "'"});
    }
  }
  if (!errors.empty()) {
    throw ConfigParseError("invalid configuration in " + origin, errors);
  }
  auto violations = validate(config.protocol, config.network);
  if (!violations.empty()) {
    throw ConfigParseError("configuration violates invariants (" + origin + ")",
                           violations);
  }
  return config;
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigParseError("cannot open config file " + path,
                           {{"io", "cannot open " + path}});
  }
  return parse_config(in, path);
}

std::string dump_config(const Config& c) {
  std::ostringstream out;
  out.precision(17);
  out << "[protocol]\n"
      << "m = " << c.protocol.m << "\n"
      << "r = " << c.protocol.r << "\n"
      << "w = " << c.protocol.w << "\n"
      << "f = " << c.protocol.f << "\n"
      << "t_bi = " << c.protocol.t_bi << "\n"
      << "t_ssw = " << c.protocol.t_ssw << "\n"
      << "r_max = " << c.protocol.r_max << "\n"
      << "w_max = " << c.protocol.w_max << "\n\n"
      << "[network]\n"
      << "n = " << c.network.n << "\n"
      << "bi_count = " << c.network.bi_count << "\n"
      << "run_count = " << c.network.run_count << "\n"
      << "seed = " << c.network.seed << "\n"
      << "warmup_bi = " << c.network.warmup_bi << "\n";
  return out.str();
}

void apply_override(Config& config, const std::string& key,
                    const std::string& value) {
  auto fields = field_map(config);
  auto it = fields.find(key);
  if (it == fields.end()) {
    throw ConfigParseError("unknown override key '" + key + "'",
                           {{"unknown_key", "unknown key '" + key + "'"}});
  }
  if (!assign_field(it->second, value)) {
    throw ConfigParseError("bad override value for '" + key + "'",
                           {{"bad_value", "bad value for '" + key + "'"}});
  }
}

}  // namespace abft
