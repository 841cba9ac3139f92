#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace mixdet {

/// Real univariate polynomial, coefficients in ascending degree order.
/// Trailing exact zeros are trimmed; the zero polynomial has no coefficients.
class RealPolynomial {
 public:
  RealPolynomial() = default;
  explicit RealPolynomial(std::vector<double> ascending);
  RealPolynomial(std::initializer_list<double> ascending)
      : RealPolynomial(std::vector<double>(ascending)) {}

  static RealPolynomial constant(double c);
  /// x^d.
  static RealPolynomial monomial(std::size_t d);
  /// prod (x - r_i).
  static RealPolynomial from_roots(std::span<const double> roots);

  bool is_zero() const { return coeffs_.empty(); }
  /// Degree; 0 for constants including the zero polynomial.
  std::size_t degree() const { return coeffs_.empty() ? 0 : coeffs_.size() - 1; }
  const std::vector<double>& coeffs() const { return coeffs_; }
  /// Coefficient of x^i (0 beyond the degree).
  double coeff(std::size_t i) const { return i < coeffs_.size() ? coeffs_[i] : 0.0; }
  double leading() const { return coeffs_.empty() ? 0.0 : coeffs_.back(); }

  double operator()(double x) const;
  /// Largest |coefficient|.
  double max_abs_coeff() const;
  bool all_finite() const;

  /// Divided by the leading coefficient. The zero polynomial is returned as is.
  RealPolynomial monic() const;
  /// p(x) * x^d.
  RealPolynomial shifted_up(std::size_t d) const;

  RealPolynomial& operator+=(const RealPolynomial& other);
  RealPolynomial& operator-=(const RealPolynomial& other);
  RealPolynomial& operator*=(double s);

  friend RealPolynomial operator+(RealPolynomial a, const RealPolynomial& b) { return a += b; }
  friend RealPolynomial operator-(RealPolynomial a, const RealPolynomial& b) { return a -= b; }
  friend RealPolynomial operator*(RealPolynomial a, double s) { return a *= s; }
  friend RealPolynomial operator*(double s, RealPolynomial a) { return a *= s; }
  friend RealPolynomial operator*(const RealPolynomial& a, const RealPolynomial& b);

  bool operator==(const RealPolynomial&) const = default;

 private:
  void trim();
  std::vector<double> coeffs_;
};

struct PolynomialDivision {
  RealPolynomial quotient;
  RealPolynomial remainder;
};

/// Euclidean division. Throws ValidationError on a zero divisor.
PolynomialDivision divide(const RealPolynomial& dividend, const RealPolynomial& divisor);

/// max_i |a_i - b_i| over coefficient arrays.
double max_coefficient_deviation(const RealPolynomial& a, const RealPolynomial& b);

/// 1 + max |c_i / c_deg|; every root has modulus below it.
double cauchy_bound(const RealPolynomial& p);

/// m-th derivative; the zero polynomial when m > deg p.
RealPolynomial derivative(const RealPolynomial& p, std::size_t m);

/// Sturm sequence p, p', -rem(...), ... with coefficients treated as zero
/// below zero_tol relative to the dividend. The last member is gcd(p, p').
class SturmChain {
 public:
  SturmChain(const RealPolynomial& p, double zero_tol);

  /// Sign changes of the chain evaluated at x.
  int sign_changes(double x) const;
  /// Sign changes at +infinity (positive = true) or -infinity.
  int sign_changes_at_infinity(bool positive) const;
  /// Number of distinct real roots of p.
  int distinct_real_roots() const;
  /// Distinct real roots in (a, b].
  int roots_in(double a, double b) const { return sign_changes(a) - sign_changes(b); }
  /// Greatest common divisor of p and p' (normalized to max |coeff| = 1).
  const RealPolynomial& gcd() const { return chain_.back(); }
  const std::vector<RealPolynomial>& members() const { return chain_; }

 private:
  std::vector<RealPolynomial> chain_;
};

/// Largest real root. Right of the largest critical point p is monotone, so
/// Newton from the Cauchy bound is run inside that bracket with a bisection
/// safeguard. Throws ValidationError for degree 0 and NotRealRooted when p
/// stays positive past its largest critical point by more than a rounding
/// perturbation.
double largest_root(const RealPolynomial& p);

/// All roots with multiplicity, ascending. Each interval between consecutive
/// critical points holds one root, bracketed and polished by Newton; an
/// interval without a sign change contributes its endpoint (repeated root).
/// Throws NotRealRooted when p has non-real roots.
std::vector<double> all_real_roots(const RealPolynomial& p);

/// True when every root of p is real up to an imaginary part of about
/// tol * (1 + |root|), estimated from the Taylor expansion at the critical
/// points where p fails to change sign.
bool is_real_rooted(const RealPolynomial& p, double tol);

/// Default number of convex-combination samples per pair.
inline constexpr std::size_t kDefaultInterlacerSamples = 32;

/// Necessary-condition sampler for a common interlacer (Fell's criterion):
/// every member and `samples` random convex combinations of every pair must
/// be real-rooted at tolerance 1e-7. Throws ValidationError on a degree
/// mismatch.
bool common_interlacer_check(std::span<const RealPolynomial> ps,
                             std::size_t samples = kDefaultInterlacerSamples,
                             std::uint64_t seed = 0x5eed);

/// q(x) = p(kx), optionally divided by its leading coefficient.
RealPolynomial scale_argument(const RealPolynomial& p, double k, bool normalize_monic);

struct RootStatistics {
  double mean = 0.0;
  double mean_square = 0.0;
};

/// Mean and mean square of the roots, read from the top three coefficients.
RootStatistics root_statistics(const RealPolynomial& p);

}  // namespace mixdet
