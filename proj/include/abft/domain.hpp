#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace abft {

// Tunable knobs of the A-BFT contention protocol. Defaults follow the
// 802.11ad standard configuration (8 slots, retry limit 8, window 8,
// 16 SSW frames per slot, 100 ms beacon interval).
struct ProtocolParams {
  int m = 8;               // number of A-BFT slots per BI
  int r = 8;               // retry limit (dot11RSSRetryLimit)
  int w = 8;               // contention window size (dot11RSSBackoff)
  int f = 16;              // SSW frames per A-BFT slot (FSS)
  double t_bi = 0.1;       // beacon interval duration [s]
  double t_ssw = 15.8e-6;  // SSW frame duration [s]
  int r_max = 20;          // upper bound for retry-limit tuning
  int w_max = 20;          // upper bound for contention-window tuning

  // Fraction of a BI spent on one successful training exchange.
  // Computed on demand so it can never drift out of sync with f/t_ssw/t_bi.
  double alpha() const { return static_cast<double>(f) * t_ssw / t_bi; }
  // Duration of one successful training exchange [s].
  double train_time() const { return static_cast<double>(f) * t_ssw; }

  bool operator==(const ProtocolParams&) const = default;
};

struct NetworkConfig {
  int n = 16;               // number of contending STAs
  int bi_count = 2000;      // BIs per simulation run
  int run_count = 100;      // independent replications
  std::uint64_t seed = 1;   // master RNG seed
  int warmup_bi = 500;      // BIs discarded before measurement

  bool operator==(const NetworkConfig&) const = default;
};

// Per-STA state of the contention chain. Backoff can only be nonzero once
// the consecutive-collision counter has reached the retry limit.
struct StationState {
  int collisions = 0;                // consecutive-collision counter, in [0, r]
  int backoff = 0;                   // remaining frozen BIs, in [0, w-1]
  std::int64_t episode_start_bi = 0; // BI index of the current training episode's start
};

struct ConfigError {
  std::string code;     // stable machine-readable identifier
  std::string message;  // human-readable detail
};

// Checks every invariant and returns the full list of violations,
// not just the first one.
std::vector<ConfigError> validate(const ProtocolParams& params,
                                  const NetworkConfig& net);

struct Config {
  ProtocolParams protocol;
  NetworkConfig network;

  bool operator==(const Config&) const = default;
};

class ConfigParseError : public std::runtime_error {
 public:
  ConfigParseError(const std::string& what, std::vector<ConfigError> errors)
      : std::runtime_error(what), errors(std::move(errors)) {}
  std::vector<ConfigError> errors;
};

// Key-value configuration file with [protocol] and [network] sections.
// Unknown keys or sections are a hard error so that typos in sweep
// scripts cannot silently fall back to defaults.
Config parse_config(std::istream& in, const std::string& origin);
Config load_config(const std::string& path);
std::string dump_config(const Config& config);

// Applies one "section.key=value" override (the CLI's --set flag).
// Throws ConfigParseError on unknown keys or malformed values.
void apply_override(Config& config, const std::string& key,
                    const std::string& value);

}  // namespace abft
