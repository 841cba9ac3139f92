#pragma once

#include <cstdint>
#include <string_view>

namespace mixdet {

/// Cap on the number of terms any single exhaustive enumeration may visit.
struct EnumerationBudget {
  static constexpr std::uint64_t kDefaultMaxTerms = std::uint64_t{1} << 24;

  std::uint64_t max_terms = kDefaultMaxTerms;

  /// Throws BudgetExceeded when `terms` > max_terms. `what` names the
  /// enumeration in the message.
  void require(std::uint64_t terms, std::string_view what) const;

  /// base^exponent, saturating at UINT64_MAX.
  static std::uint64_t power(std::uint64_t base, std::uint64_t exponent);
  /// a*b and a+b, saturating.
  static std::uint64_t mul(std::uint64_t a, std::uint64_t b);
  static std::uint64_t add(std::uint64_t a, std::uint64_t b);
};

}  // namespace mixdet
