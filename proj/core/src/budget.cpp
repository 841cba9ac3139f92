#include "mixdet/budget.hpp"

#include <limits>
#include <string>

#include "mixdet/error.hpp"

namespace mixdet {

namespace {
constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
}

void EnumerationBudget::require(std::uint64_t terms, std::string_view what) const {
  if (terms > max_terms) {
    throw BudgetExceeded(std::string(what) + ": " + std::to_string(terms) +
                         " terms exceed the enumeration budget of " + std::to_string(max_terms));
  }
}

std::uint64_t EnumerationBudget::mul(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) return 0;
  if (a > kMax / b) return kMax;
  return a * b;
}

std::uint64_t EnumerationBudget::add(std::uint64_t a, std::uint64_t b) {
  return a > kMax - b ? kMax : a + b;
}

std::uint64_t EnumerationBudget::power(std::uint64_t base, std::uint64_t exponent) {
  std::uint64_t result = 1;
  for (std::uint64_t i = 0; i < exponent; ++i) {
    result = mul(result, base);
    if (result == kMax || result == 0) break;
  }
  return result;
}

}  // namespace mixdet
