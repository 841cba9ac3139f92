#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mixdet/budget.hpp"

namespace mixdet::cli {

struct SuiteResult {
  std::string name;
  bool pass = false;
  double max_deviation = 0.0;  ///< or the worst signed margin, per suite
  double tolerance = 0.0;
  std::size_t instances = 0;
};

struct VerifyConfig {
  std::uint64_t seed = 1;
  EnumerationBudget budget;
  unsigned threads = 1;
};

const std::vector<std::string>& suite_names();

/// Runs one named suite; nullopt for an unknown name.
std::optional<SuiteResult> run_suite(const std::string& name, const VerifyConfig& config);

}  // namespace mixdet::cli
