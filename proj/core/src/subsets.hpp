#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "mixdet/error.hpp"
#include "mixdet/linalg.hpp"

namespace mixdet::detail {

/// Subsets of a ground set of size m are bitmasks; the ground set itself is
/// a list of parent indices so that bit b stands for ground[b].
inline constexpr std::size_t kMaxMaskBits = 40;

inline void require_mask_width(std::size_t m, const char* what) {
  if (m > kMaxMaskBits) throw BudgetExceeded(std::string(what) + ": ground set too large");
}

/// Sparse subset lists only need each mask to fit in 64 bits.
inline void require_sparse_mask_width(std::size_t m, const char* what) {
  if (m > 64) throw BudgetExceeded(std::string(what) + ": ground set exceeds 64 elements");
}

inline IndexSet mask_to_indices(std::uint64_t mask, const IndexSet& ground) {
  IndexSet out;
  for (std::size_t b = 0; b < ground.size(); ++b)
    if (mask >> b & 1U) out.push_back(ground[b]);
  return out;
}

inline std::uint64_t full_mask(std::size_t m) {
  return m == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << m) - 1;
}

/// Dense polynomial as ascending coefficients of exact length deg + 1.
using Coeffs = std::vector<double>;

inline void add_product(Coeffs& acc, const Coeffs& a, const Coeffs& b) {
  if (acc.size() < a.size() + b.size() - 1) acc.resize(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double ai = a[i];
    if (ai == 0.0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) acc[i + j] += ai * b[j];
  }
}

}  // namespace mixdet::detail

#include <algorithm>
#include <exception>
#include <thread>

namespace mixdet::detail {

/// Runs fn(i) for i in [0, count) on up to `threads` workers. The first
/// exception thrown by any call is rethrown on the calling thread.
template <class Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
  const std::size_t workers = std::min<std::size_t>(std::max(1U, threads), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < count; i += workers) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace mixdet::detail
