#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "mixdet/budget.hpp"
#include "mixdet/linalg.hpp"
#include "mixdet/mdp.hpp"
#include "mixdet/polynomial.hpp"

namespace mixdet {

struct SelectionOptions {
  EnumerationBudget budget;
  /// Slack allowed when comparing a child's largest root with its parent's.
  double root_tol = 1e-9;
  /// One retry at this slack before giving up.
  double relaxed_root_tol = 1e-7;
  /// Worker threads for independent child evaluations (1 = inline).
  unsigned threads = 1;
};

// ---------------------------------------------------------------------------
// Joint restricted invertibility

/// m! * sum_{|S|=m} mdp(A_S) versus the m-th derivative of mdp(A).
IdentityCheck derivative_identity_check(const HermitianTuple& tuple, std::size_t m,
                                        const EnumerationBudget& budget = {});

struct SelectionReport {
  std::size_t n = 0;
  std::size_t k = 0;
  std::size_t keep = 0;
  IndexSet kept;                       ///< sigma, ascending
  IndexSet deletion_order;             ///< indices in the order they were removed
  std::vector<double> per_matrix_lambda_max;  ///< lambda_max(A^(j)(sigma)) by eigensolve
  double certified_root_bound = 0.0;   ///< largest root of the (n-keep)-th derivative of mdp(A)
  std::vector<double> root_trace;      ///< node roots, starting at certified_root_bound
  double final_root = 0.0;             ///< largest root of mdp(A(sigma))
  std::optional<double> theorem_bound; ///< epsilon, when run as the theorem pipeline
  double c = 0.0;                      ///< keep / n
  double alpha = 0.0;                  ///< Tr(A^2) / (n k^2)
  std::optional<double> shrink_bound;  ///< root_shrink_bound(c, alpha) when admissible
  bool degenerate = false;             ///< keep == 0
  bool tolerance_relaxed = false;      ///< some step needed relaxed_root_tol
};

/// Deletes n - keep indices one at a time. At each node every candidate
/// deletion is scored by the largest root of its further-differentiated
/// restricted MDP (all of degree keep); the smallest score is taken, with
/// ties resolved toward the lexicographically smallest kept set. Each score
/// must not exceed the parent's root.
SelectionReport greedy_restricted(const HermitianTuple& tuple, std::size_t keep,
                                  const SelectionOptions& options = {});

/// c(1 - alpha) + 2 sqrt(c (1 - c) alpha). Requires 0 <= alpha <= 1 and
/// 0 <= c <= 1 / (1 + alpha).
double root_shrink_bound(double c, double alpha);

/// keep = floor(n eps^2 / 6k), then greedy_restricted; every
/// lambda_max(A^(j)(sigma)) must be < eps (BoundViolation otherwise).
/// Requires zero-diagonal Hermitian contractions and 0 < eps < 1.
SelectionReport joint_restricted_invertibility(const HermitianTuple& tuple, double epsilon,
                                               const SelectionOptions& options = {});

/// Top `count + 1` coefficients c_0 = 1, c_1, ..., c_count of mdp(A(K)) in
/// descending order (mdp(A(K)) = sum_j c_j x^{|K| - j}). Uses the
/// characteristic polynomial for k = 1 and weights on subsets of size
/// <= count otherwise.
std::vector<double> restricted_top_coefficients(const HermitianTuple& tuple, const IndexSet& kept,
                                                std::size_t count,
                                                const EnumerationBudget& budget = {});

// ---------------------------------------------------------------------------
// Joint paving

/// Evaluates the conditional expectation polynomials q(T) of a fixed tuple
/// and part count r. Block MDPs of all 2^n subsets are tabulated once by
/// subset convolution; q(T) is then a subset convolution over the free
/// elements.
class PavingEvaluator {
 public:
  /// Budget: (rk)^n terms.
  PavingEvaluator(const HermitianTuple& tuple, std::size_t r, const EnumerationBudget& budget = {});

  std::size_t n() const { return n_; }
  std::size_t k() const { return k_; }
  std::size_t r() const { return r_; }

  /// mdp(A(X)) for the subset with bitmask `mask`.
  const RealPolynomial& block_mdp(std::uint64_t mask) const { return block_mdp_[mask]; }
  /// r^{m-n} times the sum over completions of the paving polynomial.
  RealPolynomial q(const PartialAssignment& t) const;

 private:
  std::size_t n_;
  std::size_t k_;
  std::size_t r_;
  std::vector<RealPolynomial> block_mdp_;
};

/// q(T) by tabulation. Budget: r^{n-m} k^n terms.
RealPolynomial q_polynomial(const HermitianTuple& tuple, const PartialAssignment& t,
                            const EnumerationBudget& budget = {});

struct PavingReport {
  Assignment paving;
  std::size_t n = 0;
  std::size_t k = 0;
  std::size_t r = 0;
  /// [i][j] = lambda_max(A^(j)(X_i)) by eigensolve; -inf for an empty block.
  std::vector<std::vector<double>> per_block_per_matrix_lambda_max;
  /// lambda_max(mdp(A(X_i))); -inf for an empty block.
  std::vector<double> block_mdp_roots;
  /// Largest root of q at each visited node, from q(empty) to the paving.
  std::vector<double> greedy_root_trace;
  double expected_poly_root = 0.0;   ///< trace front: root of mdp of the r-fold repeat
  double greedy_root = 0.0;          ///< trace back: root of the paving polynomial
  std::optional<double> rootbound;   ///< 3 sqrt(2) / sqrt(rk), when rk >= 2
  std::optional<double> analytic;    ///< bound the pipeline certifies per block
  std::optional<double> epsilon;     ///< requested accuracy
  /// Operator norms of block compressions (two-sided and vectorial pavings).
  std::vector<double> block_norms;
  bool tolerance_relaxed = false;
};

/// Walks the interlacing tree over prefixes of [n]. At depth m the next
/// element goes to the part whose child q has the smallest largest root
/// (ties: smallest part). Each child's root must not exceed the parent's.
/// Budget: (rk)^n terms.
PavingReport greedy_paving(const HermitianTuple& tuple, std::size_t r,
                           const SelectionOptions& options = {});

/// max coefficient deviation between the average of the r children of T and
/// q(T).
double interlacing_average_check(const HermitianTuple& tuple, const PartialAssignment& t,
                                 const EnumerationBudget& budget = {});

/// 3 sqrt(2) / sqrt(k) for k >= 2.
double rootbound_value(std::size_t k);

/// ceil(18 k / eps^2).
std::size_t multipave_block_count(std::size_t k, double epsilon);

/// Joint one-sided paving with r = ceil(18k/eps^2). Requires zero-diagonal
/// Hermitian contractions; asserts lambda_max(A^(j)(X_i)) < eps.
PavingReport multipave(const HermitianTuple& tuple, double epsilon,
                       const SelectionOptions& options = {});

/// Verification mode at an explicit r: the certified per-block bound is
/// 3 sqrt(2) sqrt(k/r) (reported as epsilon and analytic).
PavingReport multipave_with_blocks(const HermitianTuple& tuple, std::size_t r,
                                   const SelectionOptions& options = {});

/// Two-sided paving of a zero-diagonal contraction through the tuple
/// (Re A, -Re A, Im A, -Im A). Asserts ||A(X_i)|| <= 12 sqrt(2) / sqrt(r).
PavingReport two_sided_pave(const ComplexMatrix& a, std::size_t r,
                            const SelectionOptions& options = {});

/// Splits every block larger than max(1, floor(m/r)) into chunks of that
/// size plus at most one smaller remainder. Returns the input unchanged when
/// no block is oversized; otherwise the non-empty chunks, numbered in block
/// order. At most 2r blocks result.
Assignment balance_blocks(const Assignment& paving, std::size_t r, std::size_t m);

/// Paving of a k x k block matrix (blocks n x n, each with zero diagonal)
/// by projections I (x) P_X. Every block is reduced to Hermitian pieces
/// +-Re, +-Im (zero pieces and duplicates dropped) which are jointly paved.
/// k = 1 is two_sided_pave.
PavingReport vectorial_pave(const ComplexMatrix& block_matrix, std::size_t k, std::size_t r,
                            const SelectionOptions& options = {});

/// Epsilon mode: r chosen so the certified bound is at most epsilon.
PavingReport vectorial_pave_epsilon(const ComplexMatrix& block_matrix, std::size_t k,
                                    double epsilon, const SelectionOptions& options = {});

/// Hermitian pieces used by vectorial_pave.
std::vector<ComplexMatrix> vectorial_hermitian_pieces(const ComplexMatrix& block_matrix,
                                                      std::size_t k);

}  // namespace mixdet
