#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "mixdet/budget.hpp"
#include "mixdet/linalg.hpp"

namespace mixdet {

/// Axis-aligned square in the complex plane. The root square has center 0
/// and half side 1.
struct SpectralSquare {
  Complex center{0.0, 0.0};
  double half_side = 1.0;

  static SpectralSquare root() { return {}; }
  bool contains(Complex z, double tol = 0.0) const;
  /// Distance from z (assumed inside) to the boundary.
  double margin(Complex z) const;
};

/// Tile `index` (row-major) of the side x side tiling of the root square.
SpectralSquare tile_of_root_square(std::size_t index, std::size_t side);

struct ZeroDiagonalization {
  ComplexMatrix unitary;   ///< U
  ComplexMatrix conjugated;  ///< U^* A U, zero diagonal
};

/// Unitary conjugation of a zero-trace matrix to zero diagonal, one
/// deflation step per index. Throws ValidationError on nonzero trace.
ZeroDiagonalization zero_diagonal_conjugation(const ComplexMatrix& a);

/// Unique X with S X - X T = A (A is rows(S) x rows(T)), solved as a dense
/// Kronecker system. Throws ValidationError on shape mismatch and
/// NumericalError on (near) spectral collision or a failed residual check.
ComplexMatrix sylvester_solve(const ComplexMatrix& s, const ComplexMatrix& t,
                              const ComplexMatrix& a);

struct Placement {
  std::vector<Complex> diagonal;  ///< scale * b + shift
  Complex shift;
  double scale = 0.0;
};

/// Places a diagonal spectrum from the root square into tile `square` of a
/// tiling with `tiles` tiles: scale 1/(2 sqrt(tiles)), shift square.center.
/// The result keeps distance >= 1/(2 sqrt(tiles)) from the tile boundary.
Placement place_spectrum(const std::vector<Complex>& diagonal, const SpectralSquare& square,
                         std::size_t tiles);

/// One recursion level of the decomposition.
struct CommutatorLevel {
  std::size_t depth = 0;
  std::size_t m = 0;
  std::size_t r = 0;       ///< paving parameter
  std::size_t tiles = 0;   ///< 2r, a perfect square
  std::string mode;        ///< "base", "singleton", "paved" or "fallback"
  std::vector<std::size_t> block_sizes;
  std::vector<double> block_norms;   ///< ||A(X_i)|| of the normalized input
  std::vector<SpectralSquare> squares;
  double min_margin = 0.0;           ///< smallest spectrum-to-tile-boundary distance
  double norm_c = 0.0;               ///< ||C|| produced at this level
};

struct CommutatorResult {
  ComplexMatrix b;                   ///< U diag(b_spectrum) U^*
  ComplexMatrix c;
  std::vector<Complex> b_spectrum;   ///< diagonal of B in the zero-diagonal frame
  ComplexMatrix unitary;             ///< U from zero_diagonal_conjugation
  double residual = 0.0;             ///< ||A - (BC - CB)||
  double norm_a = 0.0;
  double norm_b = 0.0;
  double norm_c = 0.0;
  std::vector<CommutatorLevel> trace;
};

/// Direct solution for a zero-diagonal A: B has m distinct equispaced
/// entries from 1 down to -1 and C_ij = A_ij / (b_i - b_j).
CommutatorResult base_case_commutator(const ComplexMatrix& a);

struct CommutatorOptions {
  std::size_t base_threshold = 6;
  /// Replaces the e^{sqrt(8/3) sqrt(log m)} schedule when set (must make 2r
  /// a perfect square).
  std::optional<std::size_t> fixed_r;
  EnumerationBudget budget;
};

/// Smallest r >= e^{sqrt(8/3) sqrt(ln m)} with 2r a perfect square.
std::size_t commutator_block_parameter(std::size_t m);

/// A = [B, C] for a zero-trace A by recursive two-sided paving, spectral
/// tiling of the root square and Sylvester solves for off-diagonal blocks.
CommutatorResult recursive_commutator(const ComplexMatrix& a, const CommutatorOptions& options = {});

struct CommutatorNormReport {
  double product_norm = 0.0;  ///< ||B|| ||C||
  double paper_bound = 0.0;   ///< 300 e^{9 sqrt(ln m)}
};

CommutatorNormReport commutator_norm_report(const CommutatorResult& result, std::size_t m);

}  // namespace mixdet
