#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace mixdet {

class RealPolynomial;

using Complex = std::complex<double>;

/// Sorted, duplicate-free list of 0-based indices.
using IndexSet = std::vector<std::size_t>;

/// Dense row-major complex matrix. Most operations expect a square matrix;
/// rectangular shapes exist for off-diagonal blocks and Sylvester solves.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  explicit ComplexMatrix(std::size_t n) : ComplexMatrix(n, n) {}
  ComplexMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}
  ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix zeros(std::size_t n) { return ComplexMatrix(n); }
  static ComplexMatrix diagonal(std::span<const Complex> entries);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }
  /// Dimension of a square matrix; throws ValidationError otherwise.
  std::size_t dim() const;

  Complex& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }
  std::span<const Complex> data() const { return data_; }

  ComplexMatrix adjoint() const;
  Complex trace() const;
  /// max |a_ij| over all entries (0 for an empty matrix).
  double max_abs() const;
  double frobenius_norm() const;
  bool all_finite() const;

  ComplexMatrix& operator+=(const ComplexMatrix& other);
  ComplexMatrix& operator-=(const ComplexMatrix& other);
  ComplexMatrix& operator*=(Complex scalar);

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }
  friend ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }
  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
  ComplexMatrix operator-() const { return *this * Complex(-1.0); }

  bool operator==(const ComplexMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

/// Kronecker product a ⊗ b (row index of a is the outer index).
ComplexMatrix kronecker(const ComplexMatrix& a, const ComplexMatrix& b);

/// True when a is square and a(i,j) = conj(a(j,i)) to within
/// rel_tol * max(1, max|a_ij|).
bool is_hermitian(const ComplexMatrix& a, double rel_tol = 1e-12);
/// True when every diagonal entry has |a_ii| <= tol.
bool has_zero_diagonal(const ComplexMatrix& a, double tol = 1e-12);

/// A square matrix that has been checked to be Hermitian. The stored
/// matrix is exactly symmetrized (upper triangle mirrored, real diagonal).
class HermitianMatrix {
 public:
  HermitianMatrix() = default;
  /// Throws ValidationError when `a` is not Hermitian within 1e-12 relative.
  explicit HermitianMatrix(const ComplexMatrix& a);

  const ComplexMatrix& matrix() const { return matrix_; }
  std::size_t dim() const { return matrix_.rows(); }

 private:
  ComplexMatrix matrix_;
};

/// Ordered k-tuple of Hermitian matrices sharing a dimension n.
class HermitianTuple {
 public:
  HermitianTuple() = default;
  /// Validates Hermiticity and common dimension; computes the flags.
  explicit HermitianTuple(std::vector<ComplexMatrix> matrices);
  explicit HermitianTuple(const std::vector<HermitianMatrix>& matrices);

  std::size_t k() const { return matrices_.size(); }
  std::size_t n() const { return n_; }
  const std::vector<ComplexMatrix>& matrices() const { return matrices_; }
  const ComplexMatrix& operator[](std::size_t i) const { return matrices_[i]; }

  /// All diagonal entries have modulus <= 1e-12.
  bool zero_diagonal() const { return zero_diagonal_; }
  /// Every member has operator norm <= 1 + 1e-10.
  bool contraction() const { return contraction_; }

  /// Throws ValidationError unless both flags hold.
  void require_zero_diagonal_contractions() const;

  /// The tuple concatenated with itself r times (A,...,A, A,...,A).
  HermitianTuple repeated(std::size_t r) const;
  /// The tuple with `extra` appended.
  HermitianTuple appended(const ComplexMatrix& extra) const;

 private:
  std::size_t n_ = 0;
  std::vector<ComplexMatrix> matrices_;
  bool zero_diagonal_ = true;
  bool contraction_ = true;
};

/// Checks that S is strictly increasing with every entry < n.
void validate_index_set(const IndexSet& s, std::size_t n);
/// [n] \ S in increasing order.
IndexSet complement(const IndexSet& s, std::size_t n);
/// {0, ..., n-1}.
IndexSet full_index_set(std::size_t n);

/// A(S): rows and columns in S kept, ascending order.
ComplexMatrix principal_submatrix(const ComplexMatrix& a, const IndexSet& s);
/// A(R, C) for arbitrary (sorted) row and column sets.
ComplexMatrix submatrix(const ComplexMatrix& a, const IndexSet& rows, const IndexSet& cols);
/// A_S: rows and columns in S removed.
ComplexMatrix delete_submatrix(const ComplexMatrix& a, const IndexSet& s);
/// B_(S): same shape, every entry in a row or column of S set to zero.
ComplexMatrix zero_out_rows_cols(const ComplexMatrix& b, const IndexSet& s);
/// D_t B D_t with D_t = diag(sqrt(t), 1, ..., 1). Throws on t < 0.
ComplexMatrix scale_first_index(const ComplexMatrix& b, double t);

struct HermitianEigensystem {
  std::vector<double> values;  ///< ascending
  ComplexMatrix vectors;       ///< column j is the eigenvector of values[j]
};

/// Cyclic complex Jacobi eigensolver.
HermitianEigensystem hermitian_eigensystem(const HermitianMatrix& a);
/// Eigenvalues in ascending order.
std::vector<double> hermitian_eigenvalues(const HermitianMatrix& a);
/// Largest eigenvalue of a Hermitian matrix; 0 for a 0x0 matrix.
double lambda_max(const ComplexMatrix& hermitian);

/// Largest singular value, from the spectrum of [[0, A], [A*, 0]].
double operator_norm(const ComplexMatrix& a);

/// det(A) by LU with partial pivoting; 1 for a 0x0 matrix.
Complex determinant(const ComplexMatrix& a);

/// Monic det(xI - A). Faddeev-LeVerrier in extended precision up to
/// dimension 16; Householder tridiagonalization for larger Hermitian input.
/// Throws NumericalError when a coefficient has imaginary part > 1e-9
/// (relative), which signals a non-Hermitian argument.
RealPolynomial char_poly(const ComplexMatrix& a);

/// Solves M x = b by LU with partial pivoting. Throws NumericalError if M is
/// numerically singular (pivot <= singular_tol * max|M|).
std::vector<Complex> solve_linear(ComplexMatrix m, std::vector<Complex> b,
                                  double singular_tol = 1e-13);

}  // namespace mixdet
