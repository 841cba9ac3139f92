#include "mixdet/mdp.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <utility>

#include "mixdet/error.hpp"
#include "subsets.hpp"

namespace mixdet {

using detail::Coeffs;

Assignment::Assignment(std::size_t r, std::vector<std::size_t> parts) : r_(r), parts_(std::move(parts)) {
  if (r_ == 0) throw ValidationError("Assignment: r must be positive");
  for (std::size_t p : parts_)
    if (p >= r_) throw ValidationError("Assignment: part index out of range");
}

std::vector<IndexSet> Assignment::blocks() const {
  std::vector<IndexSet> out(r_);
  for (std::size_t e = 0; e < parts_.size(); ++e) out[parts_[e]].push_back(e);
  return out;
}

Assignment Assignment::from_blocks(const std::vector<IndexSet>& blocks, std::size_t n) {
  std::vector<std::size_t> parts(n, blocks.size());
  for (std::size_t i = 0; i < blocks.size(); ++i)
    for (std::size_t e : blocks[i]) {
      if (e >= n) throw ValidationError("Assignment::from_blocks: index out of range");
      if (parts[e] != blocks.size()) throw ValidationError("Assignment::from_blocks: blocks overlap");
      parts[e] = i;
    }
  for (std::size_t p : parts)
    if (p == blocks.size()) throw ValidationError("Assignment::from_blocks: blocks do not cover [n]");
  return Assignment(blocks.size(), std::move(parts));
}

PartialAssignment::PartialAssignment(std::size_t n, std::size_t r, std::vector<std::size_t> prefix)
    : n_(n), r_(r), prefix_(std::move(prefix)) {
  if (r_ == 0) throw ValidationError("PartialAssignment: r must be positive");
  if (prefix_.size() > n_) throw ValidationError("PartialAssignment: prefix longer than n");
  for (std::size_t p : prefix_)
    if (p >= r_) throw ValidationError("PartialAssignment: part index out of range");
}

PartialAssignment PartialAssignment::extended(std::size_t part) const {
  if (complete()) throw ValidationError("PartialAssignment: already complete");
  std::vector<std::size_t> next = prefix_;
  next.push_back(part);
  return PartialAssignment(n_, r_, std::move(next));
}

Assignment PartialAssignment::to_assignment() const {
  if (!complete()) throw ValidationError("PartialAssignment: not complete");
  return Assignment(r_, prefix_);
}

namespace {

/// Sum over ordered k-partitions (S_0, ..., S_{k-1}) of a ground set of size
/// m of prod_j f(j, S_j), by the recursion g_j(M) = sum_{T ⊆ M} f(j, T)
/// g_{j+1}(M \ T).
template <class Value, class Table, class Combine>
Value partition_sum(std::size_t k, std::size_t m, const Table& table, Combine combine,
                    const Value& zero) {
  const std::uint64_t full = detail::full_mask(m);
  const std::size_t count = std::size_t{1} << m;
  if (k == 1) return table[0][full];
  std::vector<Value> g = table[k - 1];
  for (std::size_t j = k - 1; j-- > 0;) {
    if (j == 0) {
      Value acc = zero;
      for (std::uint64_t t = full;; t = (t - 1) & full) {
        combine(acc, table[0][t], g[full & ~t]);
        if (t == 0) break;
      }
      return acc;
    }
    std::vector<Value> next(count, zero);
    for (std::uint64_t mm = 0; mm < count; ++mm)
      for (std::uint64_t t = mm;; t = (t - 1) & mm) {
        combine(next[mm], table[j][t], g[mm & ~t]);
        if (t == 0) break;
      }
    g = std::move(next);
  }
  return zero;
}

/// f(j, S) = char_poly(A^(j)(ground[S])) for every j and every subset S.
std::vector<std::vector<Coeffs>> char_poly_table(std::span<const ComplexMatrix> tuple,
                                                 const IndexSet& ground) {
  const std::size_t m = ground.size();
  std::vector<std::vector<Coeffs>> table(tuple.size(), std::vector<Coeffs>(std::size_t{1} << m));
  for (std::size_t j = 0; j < tuple.size(); ++j)
    for (std::uint64_t s = 0; s < (std::uint64_t{1} << m); ++s) {
      const auto idx = detail::mask_to_indices(s, ground);
      table[j][s] = char_poly(principal_submatrix(tuple[j], idx)).coeffs();
    }
  return table;
}

std::size_t common_dimension(std::span<const ComplexMatrix> tuple) {
  if (tuple.empty()) throw ValidationError("tuple must be non-empty");
  const std::size_t n = tuple.front().dim();
  for (const auto& a : tuple)
    if (a.dim() != n) throw ValidationError("tuple members differ in dimension");
  return n;
}

RealPolynomial mdp_on_ground(std::span<const ComplexMatrix> tuple, const IndexSet& ground,
                             const EnumerationBudget& budget, const char* what) {
  const std::size_t k = tuple.size();
  const std::size_t m = ground.size();
  budget.require(EnumerationBudget::power(k, m), what);
  if (k == 1) return char_poly(principal_submatrix(tuple[0], ground));
  detail::require_mask_width(m, what);
  const auto table = char_poly_table(tuple, ground);
  Coeffs sum = partition_sum<Coeffs>(
      k, m, table, [](Coeffs& acc, const Coeffs& a, const Coeffs& b) { detail::add_product(acc, a, b); },
      Coeffs{});
  RealPolynomial out(std::move(sum));
  out *= std::pow(static_cast<double>(k), -static_cast<double>(m));
  return out;
}

}  // namespace

Complex mixed_determinant(std::span<const ComplexMatrix> tuple, const EnumerationBudget& budget) {
  const std::size_t n = common_dimension(tuple);
  const std::size_t k = tuple.size();
  budget.require(EnumerationBudget::power(k, n), "mixed_determinant");
  detail::require_mask_width(n, "mixed_determinant");
  const IndexSet ground = full_index_set(n);
  std::vector<std::vector<Complex>> table(k, std::vector<Complex>(std::size_t{1} << n));
  for (std::size_t j = 0; j < k; ++j)
    for (std::uint64_t s = 0; s < (std::uint64_t{1} << n); ++s)
      table[j][s] = determinant(principal_submatrix(tuple[j], detail::mask_to_indices(s, ground)));
  return partition_sum<Complex>(
      k, n, table, [](Complex& acc, const Complex& a, const Complex& b) { acc += a * b; },
      Complex(0.0));
}

RealPolynomial mdp(std::span<const ComplexMatrix> tuple, const EnumerationBudget& budget) {
  const std::size_t n = common_dimension(tuple);
  return mdp_on_ground(tuple, full_index_set(n), budget, "mdp");
}

RealPolynomial mdp(const HermitianTuple& tuple, const EnumerationBudget& budget) {
  return mdp(std::span<const ComplexMatrix>(tuple.matrices()), budget);
}

RealPolynomial mdp_delete(const HermitianTuple& tuple, const IndexSet& s,
                          const EnumerationBudget& budget) {
  return mdp_on_ground(tuple.matrices(), complement(s, tuple.n()), budget, "mdp_delete");
}

RealPolynomial mdp_keep(const HermitianTuple& tuple, const IndexSet& s,
                        const EnumerationBudget& budget) {
  validate_index_set(s, tuple.n());
  return mdp_on_ground(tuple.matrices(), s, budget, "mdp_keep");
}

RealPolynomial paving_polynomial(const HermitianTuple& tuple, const Assignment& paving,
                                 const EnumerationBudget& budget) {
  if (paving.n() != tuple.n()) throw ValidationError("paving_polynomial: paving size differs from n");
  budget.require(EnumerationBudget::power(tuple.k(), tuple.n()), "paving_polynomial");
  RealPolynomial out = RealPolynomial::constant(1.0);
  for (const auto& block : paving.blocks()) out = out * mdp_keep(tuple, block, budget);
  return out;
}

IdentityCheck single_matrix_identity_check(const HermitianMatrix& a, std::size_t k,
                                           const EnumerationBudget& budget) {
  if (k == 0) throw ValidationError("single_matrix_identity_check: k must be positive");
  std::vector<ComplexMatrix> tuple(k, ComplexMatrix::zeros(a.dim()));
  tuple[0] = a.matrix();
  IdentityCheck out;
  out.lhs = mdp(std::span<const ComplexMatrix>(tuple), budget);
  out.rhs = scale_argument(char_poly(a.matrix()), static_cast<double>(k), true);
  out.deviation = max_coefficient_deviation(out.lhs, out.rhs);
  return out;
}

std::vector<double> monotonicity_experiment(const HermitianTuple& tuple_a, const HermitianMatrix& b,
                                            std::span<const double> t_grid,
                                            const EnumerationBudget& budget) {
  if (b.dim() != tuple_a.n()) throw ValidationError("monotonicity_experiment: dimension mismatch");
  if (!has_zero_diagonal(b.matrix())) {
    throw ValidationError("monotonicity_experiment: B must have zero diagonal");
  }
  budget.require(EnumerationBudget::power(tuple_a.k() + 1, tuple_a.n()), "monotonicity_experiment");
  std::vector<double> out;
  out.reserve(t_grid.size());
  for (double t : t_grid) {
    const HermitianTuple extended = tuple_a.appended(scale_first_index(b.matrix(), t));
    out.push_back(largest_root(mdp(extended, budget)));
  }
  return out;
}

RealPolynomial mixed_char_poly_rank_mixture(const std::vector<std::vector<ComplexVector>>& families,
                                            const EnumerationBudget& budget) {
  const std::size_t k = families.size();
  if (k == 0) throw ValidationError("rank mixture: no vector families");
  const std::size_t n = families.front().size();
  std::size_t d = 0;
  bool have_dim = false;
  for (const auto& fam : families) {
    if (fam.size() != n) throw ValidationError("rank mixture: families differ in length");
    for (const auto& v : fam) {
      if (!have_dim) {
        d = v.size();
        have_dim = true;
      } else if (v.size() != d) {
        throw ValidationError("rank mixture: vectors differ in dimension");
      }
    }
  }
  budget.require(EnumerationBudget::power(k, n), "mixed_char_poly_rank_mixture");
  detail::require_mask_width(n, "mixed_char_poly_rank_mixture");
  // The outcome matrix is block diagonal over the k summands of (C^d)^k;
  // block i is k * sum_{j in S_i} v^i_j v^i_j^*.
  const double kk = static_cast<double>(k);
  std::vector<std::vector<Coeffs>> table(k, std::vector<Coeffs>(std::size_t{1} << n));
  for (std::size_t i = 0; i < k; ++i)
    for (std::uint64_t s = 0; s < (std::uint64_t{1} << n); ++s) {
      ComplexMatrix block(d);
      for (std::size_t j = 0; j < n; ++j) {
        if (!(s >> j & 1U)) continue;
        const auto& v = families[i][j];
        for (std::size_t a = 0; a < d; ++a)
          for (std::size_t b = 0; b < d; ++b) block(a, b) += kk * v[a] * std::conj(v[b]);
      }
      table[i][s] = char_poly(block).coeffs();
    }
  Coeffs sum = partition_sum<Coeffs>(
      k, n, table, [](Coeffs& acc, const Coeffs& a, const Coeffs& b) { detail::add_product(acc, a, b); },
      Coeffs{});
  RealPolynomial out(std::move(sum));
  out *= std::pow(kk, -static_cast<double>(n));
  return out;
}

std::vector<ComplexVector> gram_vectors(const HermitianMatrix& psd) {
  const std::size_t n = psd.dim();
  const HermitianEigensystem es = hermitian_eigensystem(psd);
  std::vector<double> roots(n);
  for (std::size_t l = 0; l < n; ++l) {
    double lam = es.values[l];
    if (lam < -1e-10) throw ValidationError("gram_vectors: matrix is not positive semidefinite");
    roots[l] = std::sqrt(std::max(lam, 0.0));
  }
  // V = diag(sqrt(lambda)) U^*, so V^* V = U diag(lambda) U^*.
  std::vector<ComplexVector> out(n, ComplexVector(n));
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t l = 0; l < n; ++l) out[j][l] = roots[l] * std::conj(es.vectors(j, l));
  return out;
}

IdentityCheck mdp_mcp_bridge_check(std::span<const HermitianMatrix> psd_tuple,
                                   const EnumerationBudget& budget) {
  if (psd_tuple.empty()) throw ValidationError("bridge check: empty tuple");
  const std::size_t k = psd_tuple.size();
  const std::size_t n = psd_tuple.front().dim();
  std::vector<ComplexMatrix> scaled;
  std::vector<std::vector<ComplexVector>> families;
  for (const auto& b : psd_tuple) {
    if (b.dim() != n) throw ValidationError("bridge check: dimension mismatch");
    families.push_back(gram_vectors(b));
    scaled.push_back(b.matrix() * Complex(static_cast<double>(k)));
  }
  IdentityCheck out;
  out.lhs = mdp(std::span<const ComplexMatrix>(scaled), budget).shifted_up((k - 1) * n);
  out.rhs = mixed_char_poly_rank_mixture(families, budget);
  out.deviation = max_coefficient_deviation(out.lhs, out.rhs);
  return out;
}

}  // namespace mixdet
