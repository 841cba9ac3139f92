#include "mixdet/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "mixdet/error.hpp"
#include "mixdet/polynomial.hpp"

namespace mixdet {

namespace {

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ValidationError(std::string(op) + ": shape mismatch");
  }
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& row : rows) {
    if (row.size() != cols_) throw ValidationError("ComplexMatrix: ragged initializer");
    data_.insert(data_.end(), row.begin(), row.end());
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const Complex> entries) {
  ComplexMatrix m(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) m(i, i) = entries[i];
  return m;
}

std::size_t ComplexMatrix::dim() const {
  if (!is_square()) throw ValidationError("matrix is not square");
  return rows_;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
  return out;
}

Complex ComplexMatrix::trace() const {
  Complex t = 0.0;
  for (std::size_t i = 0; i < dim(); ++i) t += (*this)(i, i);
  return t;
}

double ComplexMatrix::max_abs() const {
  double m = 0.0;
  for (const auto& z : data_) m = std::max(m, std::abs(z));
  return m;
}

double ComplexMatrix::frobenius_norm() const {
  double s = 0.0;
  for (const auto& z : data_) s += std::norm(z);
  return std::sqrt(s);
}

bool ComplexMatrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](const Complex& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
  });
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
  require_same_shape(*this, other, "operator+");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
  require_same_shape(*this, other, "operator-");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex scalar) {
  for (auto& z : data_) z *= scalar;
  return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) throw ValidationError("matrix product: shape mismatch");
  ComplexMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t l = 0; l < a.cols(); ++l) {
      const Complex ail = a(i, l);
      if (ail == Complex(0.0)) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += ail * b(l, j);
    }
  return out;
}

ComplexMatrix kronecker(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      for (std::size_t p = 0; p < b.rows(); ++p)
        for (std::size_t q = 0; q < b.cols(); ++q)
          out(i * b.rows() + p, j * b.cols() + q) = a(i, j) * b(p, q);
  return out;
}

bool is_hermitian(const ComplexMatrix& a, double rel_tol) {
  if (!a.is_square() || !a.all_finite()) return false;
  const double tol = rel_tol * std::max(1.0, a.max_abs());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = i; j < a.cols(); ++j)
      if (std::abs(a(i, j) - std::conj(a(j, i))) > tol) return false;
  return true;
}

bool has_zero_diagonal(const ComplexMatrix& a, double tol) {
  for (std::size_t i = 0; i < std::min(a.rows(), a.cols()); ++i)
    if (std::abs(a(i, i)) > tol) return false;
  return true;
}

HermitianMatrix::HermitianMatrix(const ComplexMatrix& a) {
  if (!a.is_square()) throw ValidationError("HermitianMatrix: matrix is not square");
  if (!a.all_finite()) throw ValidationError("HermitianMatrix: non-finite entry");
  if (!is_hermitian(a)) throw ValidationError("HermitianMatrix: matrix is not Hermitian");
  matrix_ = a;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    matrix_(i, i) = a(i, i).real();
    for (std::size_t j = i + 1; j < a.cols(); ++j) matrix_(j, i) = std::conj(a(i, j));
  }
}

HermitianTuple::HermitianTuple(std::vector<ComplexMatrix> matrices) {
  std::vector<HermitianMatrix> checked;
  checked.reserve(matrices.size());
  for (const auto& m : matrices) checked.emplace_back(m);
  *this = HermitianTuple(checked);
}

HermitianTuple::HermitianTuple(const std::vector<HermitianMatrix>& matrices) {
  if (matrices.empty()) throw ValidationError("HermitianTuple: k must be positive");
  n_ = matrices.front().dim();
  for (const auto& m : matrices) {
    if (m.dim() != n_) throw ValidationError("HermitianTuple: members differ in dimension");
    matrices_.push_back(m.matrix());
    zero_diagonal_ = zero_diagonal_ && has_zero_diagonal(m.matrix(), 1e-12);
    contraction_ = contraction_ && operator_norm(m.matrix()) <= 1.0 + 1e-10;
  }
}

void HermitianTuple::require_zero_diagonal_contractions() const {
  if (!zero_diagonal_) throw ValidationError("tuple members must have zero diagonal");
  if (!contraction_) throw ValidationError("tuple members must be contractions");
}

HermitianTuple HermitianTuple::repeated(std::size_t r) const {
  if (r == 0) throw ValidationError("repeated: r must be positive");
  HermitianTuple out = *this;
  out.matrices_.clear();
  for (std::size_t i = 0; i < r; ++i)
    out.matrices_.insert(out.matrices_.end(), matrices_.begin(), matrices_.end());
  return out;
}

HermitianTuple HermitianTuple::appended(const ComplexMatrix& extra) const {
  HermitianMatrix h(extra);
  if (h.dim() != n_) throw ValidationError("appended: dimension mismatch");
  HermitianTuple out = *this;
  out.matrices_.push_back(h.matrix());
  out.zero_diagonal_ = zero_diagonal_ && has_zero_diagonal(h.matrix(), 1e-12);
  out.contraction_ = contraction_ && operator_norm(h.matrix()) <= 1.0 + 1e-10;
  return out;
}

void validate_index_set(const IndexSet& s, std::size_t n) {
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] >= n) {
      throw ValidationError("index " + std::to_string(s[i] + 1) + " out of range [1, " +
                            std::to_string(n) + "]");
    }
    if (i > 0 && s[i] <= s[i - 1]) throw ValidationError("index set must be strictly increasing");
  }
}

IndexSet complement(const IndexSet& s, std::size_t n) {
  validate_index_set(s, n);
  IndexSet out;
  std::size_t p = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (p < s.size() && s[p] == i) {
      ++p;
    } else {
      out.push_back(i);
    }
  }
  return out;
}

IndexSet full_index_set(std::size_t n) {
  IndexSet out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = i;
  return out;
}

ComplexMatrix submatrix(const ComplexMatrix& a, const IndexSet& rows, const IndexSet& cols) {
  validate_index_set(rows, a.rows());
  validate_index_set(cols, a.cols());
  ComplexMatrix out(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) out(i, j) = a(rows[i], cols[j]);
  return out;
}

ComplexMatrix principal_submatrix(const ComplexMatrix& a, const IndexSet& s) {
  a.dim();
  return submatrix(a, s, s);
}

ComplexMatrix delete_submatrix(const ComplexMatrix& a, const IndexSet& s) {
  return principal_submatrix(a, complement(s, a.dim()));
}

ComplexMatrix zero_out_rows_cols(const ComplexMatrix& b, const IndexSet& s) {
  const std::size_t n = b.dim();
  validate_index_set(s, n);
  ComplexMatrix out = b;
  for (std::size_t idx : s)
    for (std::size_t j = 0; j < n; ++j) {
      out(idx, j) = 0.0;
      out(j, idx) = 0.0;
    }
  return out;
}

ComplexMatrix scale_first_index(const ComplexMatrix& b, double t) {
  if (!(t >= 0.0)) throw ValidationError("scale_first_index: t must be nonnegative");
  const std::size_t n = b.dim();
  ComplexMatrix out = b;
  if (n == 0) return out;
  const double s = std::sqrt(t);
  for (std::size_t j = 0; j < n; ++j) {
    out(0, j) *= s;
    out(j, 0) *= s;
  }
  return out;
}

HermitianEigensystem hermitian_eigensystem(const HermitianMatrix& h) {
  const std::size_t n = h.dim();
  ComplexMatrix a = h.matrix();
  ComplexMatrix v = ComplexMatrix::identity(n);
  const double scale = std::max(a.frobenius_norm(), 1e-300);

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += std::norm(a(p, q));
    if (std::sqrt(off) <= 1e-17 * scale) break;

    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = std::abs(a(p, q));
        if (apq <= 1e-300) continue;
        const Complex w = a(p, q) / apq;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double zeta = (aqq - app) / (2.0 * apq);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        // G = [[c, s], [-s conj(w), c conj(w)]] on coordinates (p, q).
        const Complex g_qp = -s * std::conj(w);
        const Complex g_qq = c * std::conj(w);
        for (std::size_t i = 0; i < n; ++i) {
          const Complex aip = a(i, p);
          const Complex aiq = a(i, q);
          a(i, p) = c * aip + g_qp * aiq;
          a(i, q) = s * aip + g_qq * aiq;
          const Complex vip = v(i, p);
          const Complex viq = v(i, q);
          v(i, p) = c * vip + g_qp * viq;
          v(i, q) = s * vip + g_qq * viq;
        }
        for (std::size_t j = 0; j < n; ++j) {
          const Complex apj = a(p, j);
          const Complex aqj = a(q, j);
          a(p, j) = c * apj + std::conj(g_qp) * aqj;
          a(q, j) = s * apj + std::conj(g_qq) * aqj;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
      }
    }
  }

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t x, std::size_t y) { return a(x, x).real() < a(y, y).real(); });
  HermitianEigensystem out;
  out.values.resize(n);
  out.vectors = ComplexMatrix(n);
  for (std::size_t j = 0; j < n; ++j) {
    out.values[j] = a(order[j], order[j]).real();
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, j) = v(i, order[j]);
  }
  return out;
}

std::vector<double> hermitian_eigenvalues(const HermitianMatrix& a) {
  return hermitian_eigensystem(a).values;
}

double lambda_max(const ComplexMatrix& hermitian) {
  if (hermitian.rows() == 0) return 0.0;
  return hermitian_eigenvalues(HermitianMatrix(hermitian)).back();
}

double operator_norm(const ComplexMatrix& a) {
  const std::size_t r = a.rows();
  const std::size_t c = a.cols();
  if (r == 0 || c == 0) return 0.0;
  ComplexMatrix dilation(r + c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) {
      dilation(i, r + j) = a(i, j);
      dilation(r + j, i) = std::conj(a(i, j));
    }
  return std::max(0.0, hermitian_eigenvalues(HermitianMatrix(dilation)).back());
}

Complex determinant(const ComplexMatrix& m) {
  const std::size_t n = m.dim();
  ComplexMatrix a = m;
  Complex det = 1.0;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t i = col + 1; i < n; ++i)
      if (std::abs(a(i, col)) > std::abs(a(piv, col))) piv = i;
    if (a(piv, col) == Complex(0.0)) return 0.0;
    if (piv != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(piv, j), a(col, j));
      det = -det;
    }
    det *= a(col, col);
    for (std::size_t i = col + 1; i < n; ++i) {
      const Complex f = a(i, col) / a(col, col);
      if (f == Complex(0.0)) continue;
      for (std::size_t j = col + 1; j < n; ++j) a(i, j) -= f * a(col, j);
    }
  }
  return det;
}

std::vector<Complex> solve_linear(ComplexMatrix a, std::vector<Complex> b, double singular_tol) {
  const std::size_t n = a.dim();
  if (b.size() != n) throw ValidationError("solve_linear: right-hand side length mismatch");
  const double threshold = singular_tol * std::max(a.max_abs(), 1e-300);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t i = col + 1; i < n; ++i)
      if (std::abs(a(i, col)) > std::abs(a(piv, col))) piv = i;
    if (std::abs(a(piv, col)) <= threshold) {
      throw NumericalError("solve_linear: matrix is numerically singular");
    }
    if (piv != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(piv, j), a(col, j));
      std::swap(b[piv], b[col]);
    }
    for (std::size_t i = col + 1; i < n; ++i) {
      const Complex f = a(i, col) / a(col, col);
      if (f == Complex(0.0)) continue;
      for (std::size_t j = col + 1; j < n; ++j) a(i, j) -= f * a(col, j);
      b[i] -= f * b[col];
    }
  }
  std::vector<Complex> x(n);
  for (std::size_t i = n; i-- > 0;) {
    Complex s = b[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= a(i, j) * x[j];
    x[i] = s / a(i, i);
  }
  return x;
}

namespace {

using LComplex = std::complex<long double>;

RealPolynomial finish_char_poly(const std::vector<LComplex>& ascending, double scale) {
  std::vector<double> coeffs(ascending.size());
  for (std::size_t i = 0; i < ascending.size(); ++i) {
    const std::size_t power = ascending.size() - 1 - i;  // coefficient of x^i pairs with scale^power
    const double bound = 1e-9 * std::pow(std::max(1.0, scale), static_cast<double>(power));
    if (std::abs(static_cast<double>(ascending[i].imag())) > bound) {
      throw NumericalError("char_poly: complex coefficient; input is not Hermitian");
    }
    coeffs[i] = static_cast<double>(ascending[i].real());
  }
  return RealPolynomial(std::move(coeffs));
}

// Faddeev-LeVerrier: M_0 = 0, M_k = A M_{k-1} + c_{n-k+1} I, c_{n-k} = -tr(A M_k) / k.
RealPolynomial faddeev_leverrier(const ComplexMatrix& a) {
  const std::size_t n = a.rows();
  std::vector<LComplex> al(n * n);
  for (std::size_t i = 0; i < n * n; ++i) al[i] = LComplex(a.data()[i].real(), a.data()[i].imag());
  std::vector<LComplex> c(n + 1);
  c[n] = 1.0L;
  std::vector<LComplex> m(n * n, 0.0L);
  std::vector<LComplex> next(n * n);
  for (std::size_t k = 1; k <= n; ++k) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        LComplex s = 0.0L;
        for (std::size_t l = 0; l < n; ++l) s += al[i * n + l] * m[l * n + j];
        next[i * n + j] = s;
      }
    for (std::size_t i = 0; i < n; ++i) next[i * n + i] += c[n - k + 1];
    m.swap(next);
    LComplex tr = 0.0L;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t l = 0; l < n; ++l) tr += al[i * n + l] * m[l * n + i];
    c[n - k] = -tr / static_cast<long double>(k);
  }
  return finish_char_poly(c, a.max_abs() * static_cast<double>(n));
}

// Householder reduction to Hermitian tridiagonal form, then the three-term
// recurrence p_i = (x - d_i) p_{i-1} - |e_{i-1}|^2 p_{i-2}.
RealPolynomial tridiagonal_char_poly(const ComplexMatrix& input) {
  const std::size_t n = input.rows();
  ComplexMatrix a = HermitianMatrix(input).matrix();
  for (std::size_t j = 0; j + 2 < n; ++j) {
    double xnorm = 0.0;
    for (std::size_t i = j + 1; i < n; ++i) xnorm += std::norm(a(i, j));
    xnorm = std::sqrt(xnorm);
    if (xnorm == 0.0) continue;
    const Complex x0 = a(j + 1, j);
    const Complex phase = std::abs(x0) > 0.0 ? x0 / std::abs(x0) : Complex(1.0);
    std::vector<Complex> v(n, 0.0);
    for (std::size_t i = j + 1; i < n; ++i) v[i] = a(i, j);
    v[j + 1] += phase * xnorm;
    double vnorm = 0.0;
    for (std::size_t i = j + 1; i < n; ++i) vnorm += std::norm(v[i]);
    vnorm = std::sqrt(vnorm);
    for (std::size_t i = j + 1; i < n; ++i) v[i] /= vnorm;
    // A <- H A H with H = I - 2 v v^*.
    for (std::size_t col = 0; col < n; ++col) {
      Complex s = 0.0;
      for (std::size_t i = j + 1; i < n; ++i) s += std::conj(v[i]) * a(i, col);
      for (std::size_t i = j + 1; i < n; ++i) a(i, col) -= 2.0 * v[i] * s;
    }
    for (std::size_t row = 0; row < n; ++row) {
      Complex s = 0.0;
      for (std::size_t i = j + 1; i < n; ++i) s += a(row, i) * v[i];
      for (std::size_t i = j + 1; i < n; ++i) a(row, i) -= 2.0 * s * std::conj(v[i]);
    }
  }
  std::vector<long double> prev2{1.0L};
  std::vector<long double> prev1{-static_cast<long double>(a(0, 0).real()), 1.0L};
  for (std::size_t i = 1; i < n; ++i) {
    const long double d = a(i, i).real();
    const long double e2 = std::norm(a(i, i - 1));
    std::vector<long double> cur(i + 2, 0.0L);
    for (std::size_t t = 0; t < prev1.size(); ++t) {
      cur[t + 1] += prev1[t];
      cur[t] -= d * prev1[t];
    }
    for (std::size_t t = 0; t < prev2.size(); ++t) cur[t] -= e2 * prev2[t];
    prev2 = std::move(prev1);
    prev1 = std::move(cur);
  }
  std::vector<double> coeffs(prev1.begin(), prev1.end());
  return RealPolynomial(std::move(coeffs));
}

}  // namespace

RealPolynomial char_poly(const ComplexMatrix& a) {
  const std::size_t n = a.dim();
  if (n == 0) return RealPolynomial::constant(1.0);
  if (!a.all_finite()) throw ValidationError("char_poly: non-finite entry");
  if (n > 16 && is_hermitian(a)) return tridiagonal_char_poly(a);
  return faddeev_leverrier(a);
}

}  // namespace mixdet
