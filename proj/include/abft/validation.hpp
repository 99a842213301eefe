#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "abft/domain.hpp"

// Self-check suites behind `abft validate`: simulator-vs-exact-chain
// agreement on tiny instances, balance-equation verification of the
// closed-form stationary distribution, and series-vs-closed-form latency.
namespace abft::validation {

struct SuiteResult {
  std::string name;
  bool passed = true;
  int checks = 0;
  std::vector<std::string> failures;
};

struct ValidateOptions {
  std::uint64_t seed = 1;
  // oracle suite
  int runs = 200;
  int bi_count = 5000;
  int warmup_bi = 500;
  double ci_z = 2.576;  // 99% CI
  // balance suite
  int balance_cases = 100;
  double balance_tol = 1e-10;
  double sum_tol = 1e-12;
  // latency suite
  int series_terms = 500;
  double series_rel_tol = 1e-6;
  int threads = 1;
};

// Transition matrix of the per-STA chain assembled directly from the
// one-step rules (column-stochastic: entry [next][prev]). Kept independent
// of the closed-form stationary solution so the two routes cross-check.
// State order: (0,0)..(R-1,0), (R,0)..(R,W-1).
std::vector<std::vector<double>> transition_matrix(
    const ProtocolParams& params, double p);

// Tiny instances small enough for the exact joint chain.
std::vector<std::pair<ProtocolParams, int>> oracle_instances();

SuiteResult oracle_suite(const ValidateOptions& opt);
SuiteResult balance_suite(const ValidateOptions& opt);
SuiteResult latency_series_suite(const ValidateOptions& opt);
std::vector<SuiteResult> run_all(const ValidateOptions& opt);

}  // namespace abft::validation
