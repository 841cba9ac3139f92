#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "mixdet/budget.hpp"
#include "mixdet/linalg.hpp"
#include "mixdet/polynomial.hpp"

namespace mixdet {

/// F_m(i, j) = m^{-1/2} w^{ij} with w = e^{2 pi i / m} (0-based indices).
ComplexMatrix fourier_matrix(std::size_t m);

/// Permutation U with U e_j = e_{j-1 mod k}.
ComplexMatrix cyclic_shift(std::size_t k);

/// Symmetric Paley conference matrix of order m = q + 1 for a prime
/// q = 1 (mod 4). Throws ValidationError for any other m.
ComplexMatrix paley_conference_matrix(std::size_t m);

struct TightnessTuple {
  std::size_t k = 0;
  std::size_t m = 0;  ///< floor(eps^-2)
  /// U^j (x) F_m for j = 1..k-1, then (I (x) C_m) / sqrt(m - 1).
  std::vector<ComplexMatrix> matrices;
};

TightnessTuple tightness_tuple(std::size_t k, double epsilon);

struct SingletonNecessity {
  bool holds = false;
  /// A pair {s, t} whose compressions all have norm < eps, when !holds.
  std::optional<std::pair<std::size_t, std::size_t>> witness;
  /// min over pairs of max over j of the 2x2 compression norm.
  double min_pair_norm = 0.0;
};

/// True iff every pair {s, t} has some member whose compression to {s, t}
/// has norm >= eps, so any joint eps-paving uses singletons only.
SingletonNecessity verify_singleton_necessity(const std::vector<ComplexMatrix>& tuple,
                                              double epsilon);

class SimpleGraph {
 public:
  SimpleGraph() = default;
  /// Edges are 0-based unordered pairs; throws ValidationError on loops,
  /// duplicates or out-of-range endpoints.
  SimpleGraph(std::size_t vertices, std::vector<std::pair<std::size_t, std::size_t>> edges);

  static SimpleGraph cycle(std::size_t n);
  static SimpleGraph path(std::size_t n);

  std::size_t vertices() const { return vertices_; }
  const std::vector<std::pair<std::size_t, std::size_t>>& edges() const { return edges_; }
  /// Degree d when every vertex has degree d.
  std::optional<std::size_t> regular_degree() const;
  /// Adjacency with edge e weighted by signs[e] (all +1 when empty).
  ComplexMatrix signed_adjacency(const std::vector<int>& signs = {}) const;

 private:
  std::size_t vertices_ = 0;
  std::vector<std::pair<std::size_t, std::size_t>> edges_;
};

/// sum_j (-1)^j (#j-matchings) x^{n-2j}, by edge deletion/contraction.
RealPolynomial matching_polynomial(const SimpleGraph& g);

struct SignedIdentityReport {
  RealPolynomial lhs;      ///< average over signings of mdp(A_s, -A_s)
  RealPolynomial rhs;      ///< m_G(sqrt(2) x) / 2^{n/2}
  double deviation = 0.0;
  double normalization = 1.0;  ///< 2^{n/2}, the leading coefficient of m_G(sqrt(2) x)
  /// For d-regular G: min over signings of max(lambda_max, -lambda_min) and
  /// the bound 2 sqrt(2) sqrt(d - 1).
  std::optional<double> best_signing_spread;
  std::optional<double> spread_bound;
};

/// Budget: 2^{|E|} 2^n terms.
SignedIdentityReport signed_mdp_identity_check(const SimpleGraph& g,
                                               const EnumerationBudget& budget = {});

}  // namespace mixdet
