#pragma once

// Randomized verification suites. Each trial draws its instance from its own
// seed (derived from the suite seed and the trial index), so reports do not
// depend on the number of worker threads.

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace interp_lab::cli {

struct SuiteOptions {
  std::size_t trials = 100;
  std::uint64_t seed = 1;
  std::size_t jobs = 1;
};

const std::vector<std::string>& suite_names();

/// Report keys: suite, trials, seed, pass, vacuous, bound, worst_ratio,
/// worst_trial, witness, failures, ratios. Throws std::invalid_argument on an
/// unknown suite name.
nlohmann::json run_suite(const std::string& name, const SuiteOptions& options);

std::uint64_t trial_seed(std::uint64_t seed, std::size_t trial);

}  // namespace interp_lab::cli
