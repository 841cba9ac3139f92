#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mixdet/budget.hpp"
#include "mixdet/linalg.hpp"
#include "mixdet/polynomial.hpp"

namespace mixdet {

/// Map [n] -> [r]: element e belongs to part parts[e]. Encodes an ordered
/// r-partition of [n] whose parts may be empty. Values are 0-based.
class Assignment {
 public:
  Assignment() = default;
  /// Throws ValidationError if any value is >= r or r == 0.
  Assignment(std::size_t r, std::vector<std::size_t> parts);

  std::size_t n() const { return parts_.size(); }
  std::size_t r() const { return r_; }
  const std::vector<std::size_t>& parts() const { return parts_; }
  std::size_t operator[](std::size_t e) const { return parts_[e]; }

  /// The r parts as index sets (possibly empty).
  std::vector<IndexSet> blocks() const;
  /// Builds the assignment of a partition given as blocks over [n].
  static Assignment from_blocks(const std::vector<IndexSet>& blocks, std::size_t n);

  bool operator==(const Assignment&) const = default;

 private:
  std::size_t r_ = 1;
  std::vector<std::size_t> parts_;
};

/// Assignment of the prefix [m] of [n] into r parts.
class PartialAssignment {
 public:
  PartialAssignment() = default;
  PartialAssignment(std::size_t n, std::size_t r, std::vector<std::size_t> prefix);
  /// The empty prefix.
  static PartialAssignment empty(std::size_t n, std::size_t r) { return {n, r, {}}; }

  std::size_t n() const { return n_; }
  std::size_t r() const { return r_; }
  std::size_t m() const { return prefix_.size(); }
  const std::vector<std::size_t>& prefix() const { return prefix_; }
  bool complete() const { return prefix_.size() == n_; }

  /// T ∪ e^i_{m+1}: the next element placed in part i.
  PartialAssignment extended(std::size_t part) const;
  /// Requires complete().
  Assignment to_assignment() const;

 private:
  std::size_t n_ = 0;
  std::size_t r_ = 1;
  std::vector<std::size_t> prefix_;
};

/// Sum over ordered k-partitions of [n] of prod det(A^(i)(S_i)), with the
/// empty minor equal to 1. Budget: k^n terms.
Complex mixed_determinant(std::span<const ComplexMatrix> tuple,
                          const EnumerationBudget& budget = {});

/// Mixed determinantal polynomial: the average over all k^n ordered
/// k-partitions of prod char_poly(A^(i)(S_i)). Matrices must have real
/// characteristic polynomials (Hermitian). Budget: k^n terms.
RealPolynomial mdp(std::span<const ComplexMatrix> tuple, const EnumerationBudget& budget = {});
RealPolynomial mdp(const HermitianTuple& tuple, const EnumerationBudget& budget = {});

/// MDP of the tuple with rows and columns in S removed. Evaluated on the
/// parent's index space, not by materializing the deleted matrices.
RealPolynomial mdp_delete(const HermitianTuple& tuple, const IndexSet& s,
                          const EnumerationBudget& budget = {});
/// MDP of the principal submatrices A^(i)(S).
RealPolynomial mdp_keep(const HermitianTuple& tuple, const IndexSet& s,
                        const EnumerationBudget& budget = {});

/// prod over blocks of mdp_keep(tuple, S_i). Budget: k^n terms in total.
RealPolynomial paving_polynomial(const HermitianTuple& tuple, const Assignment& paving,
                                 const EnumerationBudget& budget = {});

/// Two polynomials that an identity says are equal, and how far apart the
/// computed ones are.
struct IdentityCheck {
  RealPolynomial lhs;
  RealPolynomial rhs;
  double deviation = 0.0;  ///< max coefficient difference
};

/// lhs = mdp(A, 0, ..., 0) with k entries, rhs = k^{-n} char_poly(A)(kx).
IdentityCheck single_matrix_identity_check(const HermitianMatrix& a, std::size_t k,
                                           const EnumerationBudget& budget = {});

/// f(t) = largest_root(mdp(tupleA ++ D_t B D_t)) for each t in t_grid.
/// B must be zero-diagonal Hermitian.
std::vector<double> monotonicity_experiment(const HermitianTuple& tuple_a,
                                            const HermitianMatrix& b,
                                            std::span<const double> t_grid,
                                            const EnumerationBudget& budget = {});

using ComplexVector = std::vector<Complex>;

/// Expected characteristic polynomial of sum_j r_j r_j^*, where r_j equals
/// sqrt(k) v^i_j placed in the i-th summand of (C^d)^k with probability 1/k.
/// families[i][j] is v^i_j; all vectors share a dimension d and every family
/// has the same length n. Exact enumeration over the k^n outcomes; the
/// result has degree k*d.
RealPolynomial mixed_char_poly_rank_mixture(const std::vector<std::vector<ComplexVector>>& families,
                                            const EnumerationBudget& budget = {});

/// Columns v_j of V with V^* V = B, from the eigendecomposition; eigenvalues
/// in [-1e-10, 0) are clamped to 0, anything below throws ValidationError.
std::vector<ComplexVector> gram_vectors(const HermitianMatrix& psd);

/// lhs = x^{(k-1)n} mdp(kB^(1), ..., kB^(k)), rhs = the rank-mixture mixed
/// characteristic polynomial of Gram vectors of the B^(i).
IdentityCheck mdp_mcp_bridge_check(std::span<const HermitianMatrix> psd_tuple,
                                   const EnumerationBudget& budget = {});

}  // namespace mixdet
