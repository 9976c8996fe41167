#pragma once

// Verification suites behind `verify <suite>`. Each returns a JSON report
// {schema_version, suite, pass, checks: [{name, pass, measured, tolerance, ...}]}.

#include <random>
#include <string>
#include <vector>

#include "config.hpp"
#include "whittaker/kirillov.hpp"

namespace wh::cli {

const std::vector<std::string>& suite_names();

/// Throws ConfigError for an unknown suite; library errors propagate.
json run_suite(const std::string& suite, const RunConfig& cfg);

json ladder_suite(const RunConfig& cfg);
json theorem_a_suite(const RunConfig& cfg);
json theorem_b_suite(const RunConfig& cfg);
json theorem_c_suite(const RunConfig& cfg);
json cfunction_suite(const RunConfig& cfg);
json unitarity_suite(const RunConfig& cfg);
json quad_selftest_suite();

/// Random n = 3 test data for the unitarity suite: log-Gaussian bumps with a
/// complex linear profile in k', and mirabolic h with block I + N(0, 0.3^2)
/// entries (|det| >= 0.3) and translation uniform in [-1, 1]^2.
struct UnitarityPair {
  KirillovFunction W;
  MirabolicElement h;
  json description;
};
std::vector<UnitarityPair> random_unitarity_pairs(unsigned seed, int count);

json check(const std::string& name, bool pass, double measured, double tolerance);
json finish(const std::string& suite, json checks);

}  // namespace wh::cli
