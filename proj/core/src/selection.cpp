#include "mixdet/selection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "mixdet/error.hpp"
#include "subsets.hpp"

namespace mixdet {

using detail::Coeffs;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Ties between greedy scores are decided within this relative window.
constexpr double kTieWindow = 1e-12;

std::uint64_t binomial(std::size_t n, std::size_t j) {
  if (j > n) return 0;
  std::uint64_t c = 1;
  for (std::size_t t = 0; t < j; ++t) {
    c = EnumerationBudget::mul(c, n - t);
    c /= t + 1;
  }
  return c;
}

/// c(S) = sum_{T ⊆ S} a(T) b(S \ T) for every mask S over m bits.
std::vector<Coeffs> subset_convolve(const std::vector<Coeffs>& a, const std::vector<Coeffs>& b) {
  std::vector<Coeffs> out(a.size());
  for (std::uint64_t s = 0; s < a.size(); ++s)
    for (std::uint64_t t = s;; t = (t - 1) & s) {
      detail::add_product(out[s], a[t], b[s & ~t]);
      if (t == 0) break;
    }
  return out;
}

/// Monic polynomial of degree `keep` whose descending coefficients are
/// ratio_j * c_j: the (size - keep)-th derivative, normalized, of the
/// degree-`size` polynomial with top coefficients c_0 = 1, ..., c_keep.
RealPolynomial differentiated_top(const std::vector<double>& top, std::size_t size, std::size_t keep) {
  std::vector<double> asc(keep + 1);
  double ratio = 1.0;
  for (std::size_t j = 0; j <= keep; ++j) {
    if (j > 0) ratio *= static_cast<double>(keep - j + 1) / static_cast<double>(size - j + 1);
    asc[keep - j] = ratio * top[j];
  }
  return RealPolynomial(std::move(asc));
}

double node_root(const std::vector<double>& top, std::size_t size, std::size_t keep) {
  return largest_root(differentiated_top(top, size, keep));
}

/// Subset weights (-1)^j k^{-j} D[A(U)] for all U ⊆ [n] with |U| <= keep.
struct WeightedSubset {
  std::uint64_t mask;
  std::uint32_t size;
  double weight;
};

std::vector<WeightedSubset> subset_weights(const HermitianTuple& tuple, const IndexSet& ground,
                                           std::size_t keep) {
  std::vector<WeightedSubset> out;
  const std::size_t n = ground.size();
  const double kk = static_cast<double>(tuple.k());
  std::vector<std::size_t> pick;
  std::vector<ComplexMatrix> sub(tuple.k());
  const EnumerationBudget unlimited{~std::uint64_t{0}};
  // Depth-first over increasing index lists.
  auto visit = [&](auto&& self, std::size_t start) -> void {
    const std::size_t j = pick.size();
    std::uint64_t mask = 0;
    IndexSet idx;
    for (std::size_t b : pick) {
      mask |= std::uint64_t{1} << b;
      idx.push_back(ground[b]);
    }
    double w = 1.0;
    if (j > 0) {
      for (std::size_t i = 0; i < tuple.k(); ++i) sub[i] = principal_submatrix(tuple[i], idx);
      const Complex d = mixed_determinant(sub, unlimited);
      w = ((j % 2 == 0) ? 1.0 : -1.0) * std::pow(kk, -static_cast<double>(j)) * d.real();
    }
    out.push_back({mask, static_cast<std::uint32_t>(j), w});
    if (j == keep) return;
    for (std::size_t b = start; b < n; ++b) {
      pick.push_back(b);
      self(self, b + 1);
      pick.pop_back();
    }
  };
  visit(visit, 0);
  return out;
}

std::uint64_t weight_terms(std::size_t n, std::size_t k, std::size_t count) {
  std::uint64_t total = 0;
  for (std::size_t j = 0; j <= count; ++j)
    total = EnumerationBudget::add(total,
                                   EnumerationBudget::mul(binomial(n, j), EnumerationBudget::power(k, j)));
  return total;
}

std::vector<double> top_from_char_poly(const ComplexMatrix& a, std::size_t count) {
  const RealPolynomial p = char_poly(a);
  const std::size_t d = a.rows();
  std::vector<double> top(count + 1, 0.0);
  for (std::size_t j = 0; j <= count && j <= d; ++j) top[j] = p.coeff(d - j);
  return top;
}

double lambda_max_or_neg_inf(const ComplexMatrix& a) {
  return a.rows() == 0 ? -kInf : lambda_max(a);
}

/// Index of the smallest score; ties within kTieWindow go to the largest
/// index when prefer_last is set, the smallest otherwise.
std::size_t pick_min(const std::vector<double>& scores, const std::vector<bool>& valid, bool prefer_last) {
  double best = kInf;
  for (std::size_t i = 0; i < scores.size(); ++i)
    if (valid[i]) best = std::min(best, scores[i]);
  const double window = best + kTieWindow * (1.0 + std::abs(best));
  std::size_t chosen = scores.size();
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!valid[i] || scores[i] > window) continue;
    if (chosen == scores.size() || prefer_last) chosen = i;
    if (!prefer_last) break;
  }
  return chosen;
}

/// Accepts `child` against `parent` at the strict tolerance, else at the
/// relaxed one (recording it), else throws.
void require_no_increase(double child, double parent, const SelectionOptions& options, bool& relaxed,
                         const char* what) {
  if (child <= parent + options.root_tol) return;
  if (child <= parent + options.relaxed_root_tol) {
    relaxed = true;
    return;
  }
  throw BoundViolation(std::string(what) + ": no child with largest root <= parent (" +
                       std::to_string(child) + " > " + std::to_string(parent) + ")");
}

void require_epsilon(double epsilon, bool below_one) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw ValidationError("epsilon must be positive");
  if (below_one && !(epsilon < 1.0)) throw ValidationError("epsilon must be < 1");
}

}  // namespace

IdentityCheck derivative_identity_check(const HermitianTuple& tuple, std::size_t m,
                                        const EnumerationBudget& budget) {
  const std::size_t n = tuple.n();
  if (m > n) throw ValidationError("derivative_identity_check: m > n");
  budget.require(EnumerationBudget::mul(binomial(n, m), EnumerationBudget::power(tuple.k(), n - m)),
                 "derivative_identity_check");
  IdentityCheck out;
  std::vector<std::size_t> pick;
  RealPolynomial sum;
  auto visit = [&](auto&& self, std::size_t start) -> void {
    if (pick.size() == m) {
      sum += mdp_delete(tuple, pick, budget);
      return;
    }
    for (std::size_t b = start; b < n; ++b) {
      pick.push_back(b);
      self(self, b + 1);
      pick.pop_back();
    }
  };
  visit(visit, 0);
  double fact = 1.0;
  for (std::size_t t = 2; t <= m; ++t) fact *= static_cast<double>(t);
  out.lhs = sum * fact;
  out.rhs = derivative(mdp(tuple, budget), m);
  out.deviation = max_coefficient_deviation(out.lhs, out.rhs);
  return out;
}

std::vector<double> restricted_top_coefficients(const HermitianTuple& tuple, const IndexSet& kept,
                                                std::size_t count, const EnumerationBudget& budget) {
  validate_index_set(kept, tuple.n());
  count = std::min(count, kept.size());
  if (tuple.k() == 1) {
    budget.require(kept.size(), "restricted_top_coefficients");
    return top_from_char_poly(principal_submatrix(tuple[0], kept), count);
  }
  budget.require(weight_terms(kept.size(), tuple.k(), count), "restricted_top_coefficients");
  detail::require_sparse_mask_width(kept.size(), "restricted_top_coefficients");
  std::vector<double> top(count + 1, 0.0);
  for (const auto& w : subset_weights(tuple, kept, count)) top[w.size] += w.weight;
  return top;
}

SelectionReport greedy_restricted(const HermitianTuple& tuple, std::size_t keep,
                                  const SelectionOptions& options) {
  const std::size_t n = tuple.n();
  const std::size_t k = tuple.k();
  if (keep > n) throw ValidationError("greedy_restricted: keep > n");
  SelectionReport report;
  report.n = n;
  report.k = k;
  report.keep = keep;
  report.c = n == 0 ? 0.0 : static_cast<double>(keep) / static_cast<double>(n);
  double tr = 0.0;
  for (const auto& a : tuple.matrices()) tr += std::pow(a.frobenius_norm(), 2);
  report.alpha = n == 0 ? 0.0 : tr / (static_cast<double>(n) * static_cast<double>(k * k));

  if (keep == 0) {
    report.degenerate = true;
    report.certified_root_bound = -kInf;
    report.final_root = -kInf;
    report.per_matrix_lambda_max.assign(k, -kInf);
    report.deletion_order = full_index_set(n);
    return report;
  }

  // Top keep+1 coefficients of mdp(A(K)) for the current K and for every
  // K \ {i}: by characteristic polynomials when k = 1, by subset weights
  // otherwise.
  std::vector<WeightedSubset> weights;
  if (k == 1) {
    std::uint64_t terms = 0;
    for (std::size_t size = keep + 1; size <= n; ++size) terms = EnumerationBudget::add(terms, size);
    options.budget.require(terms, "greedy_restricted");
  } else {
    options.budget.require(weight_terms(n, k, keep), "greedy_restricted");
    detail::require_sparse_mask_width(n, "greedy_restricted");
    weights = subset_weights(tuple, full_index_set(n), keep);
  }

  IndexSet current = full_index_set(n);
  std::uint64_t current_mask = n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;

  auto tops_for = [&](const IndexSet& set, std::vector<std::vector<double>>& child_tops) {
    std::vector<double> top(keep + 1, 0.0);
    child_tops.assign(set.size(), std::vector<double>(keep + 1, 0.0));
    if (k == 1) {
      top = top_from_char_poly(principal_submatrix(tuple[0], set), keep);
      detail::parallel_for(set.size(), options.threads, [&](std::size_t c) {
        IndexSet child = set;
        child.erase(child.begin() + static_cast<std::ptrdiff_t>(c));
        child_tops[c] = top_from_char_poly(principal_submatrix(tuple[0], child), keep);
      });
      return top;
    }
    std::vector<std::size_t> position(n, 0);
    for (std::size_t c = 0; c < set.size(); ++c) position[set[c]] = c;
    std::vector<std::vector<double>> with(set.size(), std::vector<double>(keep + 1, 0.0));
    for (const auto& w : weights) {
      if ((w.mask & ~current_mask) != 0) continue;
      top[w.size] += w.weight;
      for (std::uint64_t m = w.mask; m != 0; m &= m - 1) {
        with[position[static_cast<std::size_t>(__builtin_ctzll(m))]][w.size] += w.weight;
      }
    }
    for (std::size_t c = 0; c < set.size(); ++c)
      for (std::size_t j = 0; j <= keep; ++j) child_tops[c][j] = top[j] - with[c][j];
    return top;
  };

  std::vector<std::vector<double>> child_tops;
  std::vector<double> top = tops_for(current, child_tops);
  double parent = node_root(top, current.size(), keep);
  report.certified_root_bound = parent;
  report.root_trace.push_back(parent);

  while (current.size() > keep) {
    if (current.size() != n) top = tops_for(current, child_tops);
    std::vector<double> scores(current.size(), kInf);
    std::vector<bool> valid(current.size(), true);
    detail::parallel_for(current.size(), options.threads, [&](std::size_t c) {
      scores[c] = node_root(child_tops[c], current.size() - 1, keep);
    });
    // Ties go to the largest index, keeping the lexicographically smallest set.
    const std::size_t c = pick_min(scores, valid, true);
    require_no_increase(scores[c], parent, options, report.tolerance_relaxed, "greedy_restricted");
    parent = scores[c];
    report.root_trace.push_back(parent);
    report.deletion_order.push_back(current[c]);
    current_mask &= ~(std::uint64_t{1} << current[c]);
    current.erase(current.begin() + static_cast<std::ptrdiff_t>(c));
  }

  report.kept = current;
  for (const auto& a : tuple.matrices())
    report.per_matrix_lambda_max.push_back(lambda_max(principal_submatrix(a, report.kept)));
  report.final_root = largest_root(mdp_keep(tuple, report.kept, options.budget));
  return report;
}

double root_shrink_bound(double c, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ValidationError("root_shrink_bound: alpha out of [0, 1]");
  if (!(c >= 0.0 && c <= 1.0 / (1.0 + alpha) + 1e-15)) {
    throw ValidationError("root_shrink_bound: c out of [0, 1/(1+alpha)]");
  }
  return c * (1.0 - alpha) + 2.0 * std::sqrt(c * (1.0 - c) * alpha);
}

SelectionReport joint_restricted_invertibility(const HermitianTuple& tuple, double epsilon,
                                               const SelectionOptions& options) {
  require_epsilon(epsilon, true);
  tuple.require_zero_diagonal_contractions();
  const double k = static_cast<double>(tuple.k());
  const auto keep = static_cast<std::size_t>(
      std::floor(static_cast<double>(tuple.n()) * epsilon * epsilon / (6.0 * k) + 1e-9));
  SelectionReport report = greedy_restricted(tuple, keep, options);
  report.theorem_bound = epsilon;
  if (report.degenerate) return report;
  if (report.alpha <= 1.0 && report.c <= 1.0 / (1.0 + report.alpha)) {
    report.shrink_bound = root_shrink_bound(report.c, report.alpha);
    if (report.certified_root_bound > *report.shrink_bound + 1e-9) {
      throw BoundViolation("joint_restricted_invertibility: derivative root exceeds the shrink bound");
    }
  }
  if (report.final_root > report.certified_root_bound + options.relaxed_root_tol) {
    throw BoundViolation("joint_restricted_invertibility: selected root exceeds the certified bound");
  }
  for (std::size_t j = 0; j < tuple.k(); ++j) {
    const double lam = report.per_matrix_lambda_max[j];
    if (lam > k * report.final_root + 1e-8) {
      throw BoundViolation("joint_restricted_invertibility: lambda_max(A(sigma)) exceeds k times the MDP root");
    }
    if (!(lam < epsilon)) {
      throw BoundViolation("joint_restricted_invertibility: lambda_max(A^(" + std::to_string(j + 1) +
                           ")(sigma)) = " + std::to_string(lam) + " is not below epsilon");
    }
  }
  return report;
}

PavingEvaluator::PavingEvaluator(const HermitianTuple& tuple, std::size_t r, const EnumerationBudget& budget)
    : n_(tuple.n()), k_(tuple.k()), r_(r) {
  if (r_ == 0) throw ValidationError("PavingEvaluator: r must be positive");
  budget.require(EnumerationBudget::power(r_ * k_, n_), "PavingEvaluator");
  if (n_ > 20) throw BudgetExceeded("PavingEvaluator: n > 20 cannot be tabulated");
  const std::size_t count = std::size_t{1} << n_;
  const IndexSet ground = full_index_set(n_);
  std::vector<std::vector<Coeffs>> table(k_, std::vector<Coeffs>(count));
  for (std::size_t j = 0; j < k_; ++j)
    for (std::uint64_t s = 0; s < count; ++s)
      table[j][s] = char_poly(principal_submatrix(tuple[j], detail::mask_to_indices(s, ground))).coeffs();
  std::vector<Coeffs> h = table[k_ - 1];
  for (std::size_t j = k_ - 1; j-- > 0;) h = subset_convolve(table[j], h);
  block_mdp_.resize(count);
  const double kk = static_cast<double>(k_);
  for (std::uint64_t s = 0; s < count; ++s) {
    RealPolynomial p(std::move(h[s]));
    p *= std::pow(kk, -static_cast<double>(__builtin_popcountll(s)));
    block_mdp_[s] = std::move(p);
  }
}

RealPolynomial PavingEvaluator::q(const PartialAssignment& t) const {
  if (t.n() != n_ || t.r() != r_) throw ValidationError("PavingEvaluator::q: shape mismatch");
  const std::size_t m = t.m();
  std::vector<std::uint64_t> fixed(r_, 0);
  for (std::size_t e = 0; e < m; ++e) fixed[t.prefix()[e]] |= std::uint64_t{1} << e;
  const std::size_t free = n_ - m;
  const std::size_t count = std::size_t{1} << free;
  // Part i receives a subset G of the free elements {m, ..., n-1}.
  std::vector<std::vector<Coeffs>> table(r_, std::vector<Coeffs>(count));
  for (std::size_t i = 0; i < r_; ++i)
    for (std::uint64_t g = 0; g < count; ++g) table[i][g] = block_mdp_[fixed[i] | (g << m)].coeffs();
  std::vector<Coeffs> acc = table[r_ - 1];
  for (std::size_t i = r_ - 1; i-- > 0;) {
    if (i == 0) {
      Coeffs total;
      const std::uint64_t full = count - 1;
      for (std::uint64_t s = full;; s = (s - 1) & full) {
        detail::add_product(total, table[0][s], acc[full & ~s]);
        if (s == 0) break;
      }
      acc.assign(count, Coeffs{});
      acc[full] = std::move(total);
      break;
    }
    acc = subset_convolve(table[i], acc);
  }
  RealPolynomial out(std::move(acc[count - 1]));
  out *= std::pow(static_cast<double>(r_), -static_cast<double>(free));
  return out;
}

RealPolynomial q_polynomial(const HermitianTuple& tuple, const PartialAssignment& t,
                            const EnumerationBudget& budget) {
  if (t.n() != tuple.n()) throw ValidationError("q_polynomial: prefix is for a different n");
  budget.require(EnumerationBudget::mul(EnumerationBudget::power(t.r(), tuple.n() - t.m()),
                                        EnumerationBudget::power(tuple.k(), tuple.n())),
                 "q_polynomial");
  const PavingEvaluator evaluator(tuple, t.r(), EnumerationBudget{~std::uint64_t{0}});
  return evaluator.q(t);
}

double interlacing_average_check(const HermitianTuple& tuple, const PartialAssignment& t,
                                 const EnumerationBudget& budget) {
  if (t.complete()) throw ValidationError("interlacing_average_check: prefix is complete");
  const PavingEvaluator evaluator(tuple, t.r(), budget);
  RealPolynomial avg;
  for (std::size_t i = 0; i < t.r(); ++i) avg += evaluator.q(t.extended(i));
  avg *= 1.0 / static_cast<double>(t.r());
  return max_coefficient_deviation(avg, evaluator.q(t));
}

PavingReport greedy_paving(const HermitianTuple& tuple, std::size_t r, const SelectionOptions& options) {
  const std::size_t n = tuple.n();
  const PavingEvaluator evaluator(tuple, r, options.budget);
  PavingReport report;
  report.n = n;
  report.k = tuple.k();
  report.r = r;

  PartialAssignment t = PartialAssignment::empty(n, r);
  double parent = largest_root(evaluator.q(t));
  report.expected_poly_root = parent;
  report.greedy_root_trace.push_back(parent);

  while (!t.complete()) {
    // Empty parts are interchangeable; only the first one is scored.
    std::vector<bool> used(r, false);
    for (std::size_t p : t.prefix()) used[p] = true;
    std::vector<bool> valid(r, false);
    bool seen_empty = false;
    for (std::size_t i = 0; i < r; ++i) {
      if (used[i]) {
        valid[i] = true;
      } else if (!seen_empty) {
        valid[i] = true;
        seen_empty = true;
      }
    }
    std::vector<double> scores(r, kInf);
    detail::parallel_for(r, options.threads, [&](std::size_t i) {
      if (valid[i]) scores[i] = largest_root(evaluator.q(t.extended(i)));
    });
    const std::size_t i = pick_min(scores, valid, false);
    require_no_increase(scores[i], parent, options, report.tolerance_relaxed, "greedy_paving");
    parent = scores[i];
    report.greedy_root_trace.push_back(parent);
    t = t.extended(i);
  }

  report.paving = t.to_assignment();
  report.greedy_root = parent;
  const auto blocks = report.paving.blocks();
  for (const auto& block : blocks) {
    std::vector<double> row;
    for (const auto& a : tuple.matrices()) row.push_back(lambda_max_or_neg_inf(principal_submatrix(a, block)));
    report.per_block_per_matrix_lambda_max.push_back(std::move(row));
    std::uint64_t mask = 0;
    for (std::size_t e : block) mask |= std::uint64_t{1} << e;
    report.block_mdp_roots.push_back(block.empty() ? -kInf : largest_root(evaluator.block_mdp(mask)));
  }
  if (r * tuple.k() >= 2) report.rootbound = rootbound_value(r * tuple.k());
  return report;
}

double rootbound_value(std::size_t k) {
  if (k < 2) throw ValidationError("rootbound_value: k must be at least 2");
  return 3.0 * std::sqrt(2.0) / std::sqrt(static_cast<double>(k));
}

std::size_t multipave_block_count(std::size_t k, double epsilon) {
  require_epsilon(epsilon, false);
  const double x = 18.0 * static_cast<double>(k) / (epsilon * epsilon);
  return static_cast<std::size_t>(std::ceil(x * (1.0 - 1e-12)));
}

namespace {

/// The chain greedy <= expected < 3 sqrt(2)/sqrt(rk), and for every block
/// lambda_max(A^(j)(X_i)) <= k * block root and < epsilon.
void verify_paving_chain(const PavingReport& report, double epsilon, const SelectionOptions& options) {
  if (report.greedy_root > report.expected_poly_root + options.relaxed_root_tol) {
    throw BoundViolation("paving: greedy root exceeds the expected polynomial root");
  }
  if (report.rootbound && report.expected_poly_root >= *report.rootbound + 1e-8) {
    throw BoundViolation("paving: expected polynomial root is not below 3 sqrt(2)/sqrt(rk)");
  }
  const double k = static_cast<double>(report.k);
  for (std::size_t i = 0; i < report.per_block_per_matrix_lambda_max.size(); ++i) {
    for (double lam : report.per_block_per_matrix_lambda_max[i]) {
      if (lam == -kInf) continue;
      if (lam > k * report.block_mdp_roots[i] + 1e-8) {
        throw BoundViolation("paving: block lambda_max exceeds k times the block MDP root");
      }
      if (!(lam < epsilon)) {
        throw BoundViolation("paving: block " + std::to_string(i + 1) + " has lambda_max " +
                             std::to_string(lam) + " not below " + std::to_string(epsilon));
      }
    }
  }
}

}  // namespace

PavingReport multipave(const HermitianTuple& tuple, double epsilon, const SelectionOptions& options) {
  require_epsilon(epsilon, false);
  tuple.require_zero_diagonal_contractions();
  const std::size_t r = multipave_block_count(tuple.k(), epsilon);
  const std::uint64_t terms = EnumerationBudget::power(r * tuple.k(), tuple.n());
  if (terms > options.budget.max_terms) {
    throw BudgetExceeded("multipave: r = " + std::to_string(r) + " needs (rk)^n = " + std::to_string(terms) +
                         " terms, above the budget; rerun with an explicit r");
  }
  PavingReport report = greedy_paving(tuple, r, options);
  report.epsilon = epsilon;
  report.analytic = 3.0 * std::sqrt(2.0) * std::sqrt(static_cast<double>(tuple.k()) / static_cast<double>(r));
  verify_paving_chain(report, epsilon, options);
  return report;
}

PavingReport multipave_with_blocks(const HermitianTuple& tuple, std::size_t r, const SelectionOptions& options) {
  tuple.require_zero_diagonal_contractions();
  if (r == 0) throw ValidationError("multipave: r must be positive");
  PavingReport report = greedy_paving(tuple, r, options);
  const double bound = 3.0 * std::sqrt(2.0) * std::sqrt(static_cast<double>(tuple.k()) / static_cast<double>(r));
  report.analytic = bound;
  report.epsilon = bound;
  verify_paving_chain(report, bound, options);
  return report;
}

namespace {

ComplexMatrix real_part(const ComplexMatrix& a) { return (a + a.adjoint()) * Complex(0.5); }
ComplexMatrix imag_part(const ComplexMatrix& a) { return (a - a.adjoint()) * Complex(0.0, -0.5); }

void require_zero_diagonal_contraction(const ComplexMatrix& a, const char* what) {
  a.dim();
  if (!a.all_finite()) throw ValidationError(std::string(what) + ": non-finite entry");
  if (!has_zero_diagonal(a)) throw ValidationError(std::string(what) + ": matrix must have zero diagonal");
  if (operator_norm(a) > 1.0 + 1e-10) throw ValidationError(std::string(what) + ": matrix must be a contraction");
}

}  // namespace

PavingReport two_sided_pave(const ComplexMatrix& a, std::size_t r, const SelectionOptions& options) {
  require_zero_diagonal_contraction(a, "two_sided_pave");
  if (r == 0) throw ValidationError("two_sided_pave: r must be positive");
  const ComplexMatrix re = real_part(a);
  const ComplexMatrix im = imag_part(a);
  const HermitianTuple tuple(std::vector<ComplexMatrix>{re, -re, im, -im});
  PavingReport report = greedy_paving(tuple, r, options);
  const double bound = 12.0 * std::sqrt(2.0) / std::sqrt(static_cast<double>(r));
  report.analytic = bound;
  report.epsilon = bound;
  verify_paving_chain(report, bound / 2.0, options);
  for (const auto& block : report.paving.blocks()) {
    const double norm = operator_norm(principal_submatrix(a, block));
    report.block_norms.push_back(norm);
    if (norm > bound + 1e-9) throw BoundViolation("two_sided_pave: block norm exceeds 12 sqrt(2)/sqrt(r)");
  }
  return report;
}

Assignment balance_blocks(const Assignment& paving, std::size_t r, std::size_t m) {
  if (paving.n() != m) throw ValidationError("balance_blocks: paving is not over [m]");
  if (r == 0) throw ValidationError("balance_blocks: r must be positive");
  const std::size_t cap = std::max<std::size_t>(1, m / r);
  const auto blocks = paving.blocks();
  if (std::all_of(blocks.begin(), blocks.end(), [&](const IndexSet& b) { return b.size() <= cap; })) {
    return paving;
  }
  std::vector<IndexSet> chunks;
  for (const auto& block : blocks)
    for (std::size_t s = 0; s < block.size(); s += cap)
      chunks.emplace_back(block.begin() + static_cast<std::ptrdiff_t>(s),
                          block.begin() + static_cast<std::ptrdiff_t>(std::min(block.size(), s + cap)));
  if (chunks.size() > 2 * std::max(r, paving.r())) {
    throw BoundViolation("balance_blocks: more than 2r blocks produced");
  }
  return Assignment::from_blocks(chunks, m);
}

std::vector<ComplexMatrix> vectorial_hermitian_pieces(const ComplexMatrix& block_matrix, std::size_t k) {
  const std::size_t dim = block_matrix.dim();
  if (k == 0 || dim % k != 0) throw ValidationError("vectorial pave: dimension is not a multiple of k");
  const std::size_t n = dim / k;
  std::vector<ComplexMatrix> pieces;
  auto add = [&](const ComplexMatrix& p) {
    if (p.max_abs() <= 1e-14) return;
    if (std::find(pieces.begin(), pieces.end(), p) != pieces.end()) return;
    pieces.push_back(p);
  };
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      ComplexMatrix b(n);
      for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y) b(x, y) = block_matrix(i * n + x, j * n + y);
      if (!has_zero_diagonal(b)) {
        throw ValidationError("vectorial pave: block (" + std::to_string(i + 1) + ", " +
                              std::to_string(j + 1) + ") must have zero diagonal");
      }
      const ComplexMatrix re = real_part(b);
      const ComplexMatrix im = imag_part(b);
      add(re);
      add(-re);
      add(im);
      add(-im);
    }
  return pieces;
}

namespace {

IndexSet lifted(const IndexSet& block, std::size_t k, std::size_t n) {
  IndexSet out;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t x : block) out.push_back(i * n + x);
  return out;
}

}  // namespace

PavingReport vectorial_pave(const ComplexMatrix& block_matrix, std::size_t k, std::size_t r,
                            const SelectionOptions& options) {
  if (r == 0) throw ValidationError("vectorial pave: r must be positive");
  if (k == 1) return two_sided_pave(block_matrix, r, options);
  const std::size_t n = block_matrix.dim() / std::max<std::size_t>(k, 1);
  auto pieces = vectorial_hermitian_pieces(block_matrix, k);
  if (operator_norm(block_matrix) > 1.0 + 1e-10) throw ValidationError("vectorial pave: matrix must be a contraction");
  if (pieces.empty()) pieces.push_back(ComplexMatrix(n));
  const HermitianTuple tuple(pieces);
  PavingReport report = greedy_paving(tuple, r, options);
  const double kk = static_cast<double>(k);
  const double piece_bound = 3.0 * std::sqrt(2.0) * std::sqrt(static_cast<double>(pieces.size()) / static_cast<double>(r));
  const double bound = 2.0 * kk * piece_bound;
  report.analytic = bound;
  if (!report.epsilon) report.epsilon = bound;
  verify_paving_chain(report, piece_bound + 1e-12, options);
  for (const auto& block : report.paving.blocks()) {
    const double norm = operator_norm(principal_submatrix(block_matrix, lifted(block, k, n)));
    report.block_norms.push_back(norm);
    if (!(norm < *report.epsilon)) {
      throw BoundViolation("vectorial pave: compression norm " + std::to_string(norm) + " not below epsilon");
    }
  }
  return report;
}

PavingReport vectorial_pave_epsilon(const ComplexMatrix& block_matrix, std::size_t k, double epsilon,
                                    const SelectionOptions& options) {
  require_epsilon(epsilon, false);
  const auto pieces = vectorial_hermitian_pieces(block_matrix, k);
  const double count = static_cast<double>(std::max<std::size_t>(pieces.size(), 1));
  const double kk = static_cast<double>(k);
  const double x = 18.0 * count * 4.0 * kk * kk / (epsilon * epsilon);
  const auto r = static_cast<std::size_t>(std::ceil(x * (1.0 - 1e-12)));
  PavingReport report = vectorial_pave(block_matrix, k, r, options);
  report.epsilon = epsilon;
  return report;
}

}  // namespace mixdet
