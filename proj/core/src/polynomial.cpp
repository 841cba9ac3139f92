#include "mixdet/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <utility>

#include "mixdet/error.hpp"

namespace mixdet {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

/// Roots with |p(e)| below this many rounding units are treated as exact.
constexpr double kNoiseUnits = 64.0;

/// Imaginary-part ratio above which root extraction refuses the input.
constexpr double kExtractionImagTol = 1e-6;

/// Sum |c_i| |x|^i, the scale of the rounding error of p(x).
double evaluation_scale(const std::vector<double>& c, double x) {
  double s = 0.0;
  const double ax = std::abs(x);
  for (std::size_t i = c.size(); i-- > 0;) s = s * ax + std::abs(c[i]);
  return s;
}

double horner(const std::vector<double>& c, double x) {
  double s = 0.0;
  for (std::size_t i = c.size(); i-- > 0;) s = s * x + c[i];
  return s;
}

/// Bisection on [a, b] with f(a) and f(b) of opposite signs.
double bisect(const std::vector<double>& c, double a, double b, double fa) {
  for (int it = 0; it < 2000; ++it) {
    const double mid = 0.5 * (a + b);
    if (mid <= a || mid >= b) break;
    const double fm = horner(c, mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (fa < 0.0)) {
      a = mid;
      fa = fm;
    } else {
      b = mid;
    }
  }
  return 0.5 * (a + b);
}

/// Newton from the right endpoint b, kept inside the bracket [a, b] where p
/// is monotone and changes sign; bisection whenever Newton leaves it.
double bracketed_newton(const std::vector<double>& c, const std::vector<double>& dc, double a,
                        double b, double fa) {
  double x = b;
  for (int it = 0; it < 200; ++it) {
    const double fx = horner(c, x);
    if (fx == 0.0) return x;
    if ((fx < 0.0) == (fa < 0.0)) {
      a = x;
      fa = fx;
    } else {
      b = x;
    }
    if (b - a <= 2.0 * kEps * std::max(std::abs(a), std::abs(b))) return 0.5 * (a + b);
    const double dfx = horner(dc, x);
    double next = dfx != 0.0 ? x - fx / dfx : a;
    if (!(next > a && next < b)) next = 0.5 * (a + b);
    if (next == x) return x;
    x = next;
  }
  return bisect(c, a, b, fa);
}

/// Estimated distance of the nearest root pair to e when p does not change
/// sign across e: min over m >= 2 of (|p(e)| / |p^{(m)}(e)/m!|)^{1/m}.
double imaginary_estimate(const std::vector<double>& c, double e) {
  const double scale = evaluation_scale(c, e);
  // Taylor coefficients at e by repeated synthetic division.
  std::vector<double> work = c;
  std::vector<double> taylor;
  taylor.reserve(c.size());
  for (std::size_t m = 0; m < c.size(); ++m) {
    double acc = 0.0;
    for (std::size_t i = work.size(); i-- > m;) {
      acc = acc * e + work[i];
      work[i] = acc;
    }
    taylor.push_back(work[m]);
  }
  const double p0 = std::abs(taylor[0]);
  if (p0 <= kNoiseUnits * kEps * scale) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t m = 2; m < taylor.size(); ++m) {
    if (taylor[m] == 0.0) continue;
    best = std::min(best, std::pow(p0 / std::abs(taylor[m]), 1.0 / static_cast<double>(m)));
  }
  return best;
}

struct RootScan {
  std::vector<double> roots;  ///< ascending, with multiplicity
  double imag_ratio = 0.0;    ///< largest estimate of |Im root| / (1 + |root|)
};

/// Roots of p from the roots of p': p is monotone between consecutive
/// critical points, so each of the deg p intervals holds exactly one root
/// when p is real-rooted. An interval without a sign change signals either a
/// repeated root at an endpoint or a nearby complex pair, told apart by
/// imaginary_estimate.
RootScan scan_roots(const RealPolynomial& p) {
  const std::size_t d = p.degree();
  RootScan out;
  if (d == 0) return out;
  const RealPolynomial mp = p.monic();
  const auto& c = mp.coeffs();
  if (d == 1) {
    out.roots.push_back(-c[0]);
    return out;
  }
  const RealPolynomial dp = derivative(mp, 1);
  RootScan critical = scan_roots(dp);
  out.imag_ratio = critical.imag_ratio;
  const double bound = cauchy_bound(mp);

  std::vector<double> edges;
  edges.reserve(d + 1);
  edges.push_back(-bound);
  for (double r : critical.roots) edges.push_back(std::clamp(r, -bound, bound));
  edges.push_back(bound);

  const auto& dc = dp.coeffs();
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    const double a = edges[i];
    const double b = edges[i + 1];
    const double fa = horner(c, a);
    const double fb = horner(c, b);
    if (fa == 0.0) {
      out.roots.push_back(a);
    } else if (fb == 0.0) {
      out.roots.push_back(b);
    } else if ((fa < 0.0) != (fb < 0.0)) {
      out.roots.push_back(bracketed_newton(c, dc, a, b, fa));
    } else {
      const double e = std::abs(fa) <= std::abs(fb) ? a : b;
      out.roots.push_back(e);
      out.imag_ratio = std::max(out.imag_ratio, imaginary_estimate(c, e) / (1.0 + std::abs(e)));
    }
  }
  std::sort(out.roots.begin(), out.roots.end());
  return out;
}

}  // namespace

RealPolynomial::RealPolynomial(std::vector<double> ascending) : coeffs_(std::move(ascending)) {
  trim();
}

void RealPolynomial::trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0.0) coeffs_.pop_back();
}

RealPolynomial RealPolynomial::constant(double c) { return RealPolynomial(std::vector<double>{c}); }

RealPolynomial RealPolynomial::monomial(std::size_t d) {
  std::vector<double> c(d + 1, 0.0);
  c[d] = 1.0;
  return RealPolynomial(std::move(c));
}

RealPolynomial RealPolynomial::from_roots(std::span<const double> roots) {
  std::vector<double> c{1.0};
  for (double r : roots) {
    std::vector<double> next(c.size() + 1, 0.0);
    for (std::size_t i = 0; i < c.size(); ++i) {
      next[i + 1] += c[i];
      next[i] -= r * c[i];
    }
    c = std::move(next);
  }
  return RealPolynomial(std::move(c));
}

double RealPolynomial::operator()(double x) const { return horner(coeffs_, x); }

double RealPolynomial::max_abs_coeff() const {
  double m = 0.0;
  for (double v : coeffs_) m = std::max(m, std::abs(v));
  return m;
}

bool RealPolynomial::all_finite() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](double v) { return std::isfinite(v); });
}

RealPolynomial RealPolynomial::monic() const {
  if (is_zero()) return *this;
  RealPolynomial out = *this;
  const double lead = leading();
  for (double& v : out.coeffs_) v /= lead;
  out.coeffs_.back() = 1.0;
  return out;
}

RealPolynomial RealPolynomial::shifted_up(std::size_t d) const {
  if (is_zero()) return *this;
  std::vector<double> c(d, 0.0);
  c.insert(c.end(), coeffs_.begin(), coeffs_.end());
  return RealPolynomial(std::move(c));
}

RealPolynomial& RealPolynomial::operator+=(const RealPolynomial& other) {
  if (other.coeffs_.size() > coeffs_.size()) coeffs_.resize(other.coeffs_.size(), 0.0);
  for (std::size_t i = 0; i < other.coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  trim();
  return *this;
}

RealPolynomial& RealPolynomial::operator-=(const RealPolynomial& other) {
  if (other.coeffs_.size() > coeffs_.size()) coeffs_.resize(other.coeffs_.size(), 0.0);
  for (std::size_t i = 0; i < other.coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
  trim();
  return *this;
}

RealPolynomial& RealPolynomial::operator*=(double s) {
  for (double& v : coeffs_) v *= s;
  trim();
  return *this;
}

RealPolynomial operator*(const RealPolynomial& a, const RealPolynomial& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<double> c(a.coeffs_.size() + b.coeffs_.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
  return RealPolynomial(std::move(c));
}

PolynomialDivision divide(const RealPolynomial& dividend, const RealPolynomial& divisor) {
  if (divisor.is_zero()) throw ValidationError("divide: zero divisor");
  std::vector<double> rem = dividend.coeffs();
  const auto& d = divisor.coeffs();
  if (rem.size() < d.size()) return {RealPolynomial(), dividend};
  std::vector<double> quot(rem.size() - d.size() + 1, 0.0);
  for (std::size_t i = quot.size(); i-- > 0;) {
    const double q = rem[i + d.size() - 1] / d.back();
    quot[i] = q;
    for (std::size_t j = 0; j < d.size(); ++j) rem[i + j] -= q * d[j];
    rem[i + d.size() - 1] = 0.0;
  }
  rem.resize(d.size() - 1);
  return {RealPolynomial(std::move(quot)), RealPolynomial(std::move(rem))};
}

double max_coefficient_deviation(const RealPolynomial& a, const RealPolynomial& b) {
  const std::size_t n = std::max(a.coeffs().size(), b.coeffs().size());
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::abs(a.coeff(i) - b.coeff(i)));
  return m;
}

double cauchy_bound(const RealPolynomial& p) {
  if (p.degree() == 0) return 1.0;
  double m = 0.0;
  for (std::size_t i = 0; i < p.degree(); ++i) m = std::max(m, std::abs(p.coeff(i) / p.leading()));
  return 1.0 + m;
}

RealPolynomial derivative(const RealPolynomial& p, std::size_t m) {
  const auto& c = p.coeffs();
  if (m >= c.size()) return {};
  std::vector<double> out(c.size() - m);
  for (std::size_t i = 0; i < out.size(); ++i) {
    double f = 1.0;
    for (std::size_t t = 0; t < m; ++t) f *= static_cast<double>(i + m - t);
    out[i] = c[i + m] * f;
  }
  return RealPolynomial(std::move(out));
}

SturmChain::SturmChain(const RealPolynomial& p, double zero_tol) {
  auto normalized = [](RealPolynomial q) {
    const double m = q.max_abs_coeff();
    return m > 0.0 ? q * (1.0 / m) : q;
  };
  if (p.is_zero()) throw ValidationError("SturmChain: zero polynomial");
  chain_.push_back(normalized(p));
  if (p.degree() == 0) return;
  chain_.push_back(normalized(derivative(p, 1)));
  while (chain_.back().degree() > 0) {
    const auto& prev = chain_[chain_.size() - 2];
    std::vector<double> rem = divide(prev, chain_.back()).remainder.coeffs();
    for (double& v : rem) {
      if (std::abs(v) <= zero_tol) v = 0.0;
      v = -v;
    }
    RealPolynomial r(std::move(rem));
    if (r.is_zero()) break;
    chain_.push_back(normalized(r));
  }
}

int SturmChain::sign_changes(double x) const {
  int changes = 0;
  int last = 0;
  for (const auto& q : chain_) {
    const double v = q(x);
    const int s = v > 0.0 ? 1 : (v < 0.0 ? -1 : 0);
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

int SturmChain::sign_changes_at_infinity(bool positive) const {
  int changes = 0;
  int last = 0;
  for (const auto& q : chain_) {
    if (q.is_zero()) continue;
    int s = q.leading() > 0.0 ? 1 : -1;
    if (!positive && q.degree() % 2 == 1) s = -s;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

int SturmChain::distinct_real_roots() const {
  return sign_changes_at_infinity(false) - sign_changes_at_infinity(true);
}

double largest_root(const RealPolynomial& p) {
  if (p.degree() == 0) throw ValidationError("largest_root: polynomial has degree 0");
  if (!p.all_finite()) throw ValidationError("largest_root: non-finite coefficient");
  const RealPolynomial mp = p.monic();
  const auto& c = mp.coeffs();
  if (mp.degree() == 1) return -c[0];
  // Everything right of the largest critical point is monotone increasing.
  const RealPolynomial dp = derivative(mp, 1);
  const double bound = cauchy_bound(mp);
  const double a = std::min(largest_root(dp), bound);
  const double fa = horner(c, a);
  if (fa < 0.0) return bracketed_newton(c, dp.coeffs(), a, bound, fa);
  if (imaginary_estimate(c, a) > kExtractionImagTol * (1.0 + std::abs(a))) {
    throw NotRealRooted("largest_root: complex root pair near " + std::to_string(a));
  }
  return a;
}

std::vector<double> all_real_roots(const RealPolynomial& p) {
  if (p.is_zero()) throw ValidationError("all_real_roots: zero polynomial");
  if (!p.all_finite()) throw ValidationError("all_real_roots: non-finite coefficient");
  RootScan scan = scan_roots(p);
  if (scan.imag_ratio > kExtractionImagTol) {
    throw NotRealRooted("all_real_roots: polynomial has non-real roots");
  }
  return scan.roots;
}

bool is_real_rooted(const RealPolynomial& p, double tol) {
  if (!(tol > 0.0)) throw ValidationError("is_real_rooted: tol must be positive");
  if (p.is_zero() || !p.all_finite()) return false;
  return scan_roots(p).imag_ratio <= tol;
}

bool common_interlacer_check(std::span<const RealPolynomial> ps, std::size_t samples,
                             std::uint64_t seed) {
  constexpr double kTol = 1e-7;
  if (ps.empty()) return true;
  const std::size_t d = ps.front().degree();
  for (const auto& p : ps) {
    if (p.degree() != d) throw ValidationError("common_interlacer_check: degree mismatch");
  }
  for (const auto& p : ps)
    if (!is_real_rooted(p, kTol)) return false;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t i = 0; i < ps.size(); ++i)
    for (std::size_t j = i + 1; j < ps.size(); ++j)
      for (std::size_t s = 0; s < samples; ++s) {
        const double alpha = unit(rng);
        if (!is_real_rooted(alpha * ps[i] + (1.0 - alpha) * ps[j], kTol)) return false;
      }
  return true;
}

RealPolynomial scale_argument(const RealPolynomial& p, double k, bool normalize_monic) {
  if (!(k > 0.0)) throw ValidationError("scale_argument: k must be positive");
  std::vector<double> c = p.coeffs();
  double f = 1.0;
  for (double& v : c) {
    v *= f;
    f *= k;
  }
  RealPolynomial out(std::move(c));
  return normalize_monic ? out.monic() : out;
}

RootStatistics root_statistics(const RealPolynomial& p) {
  const std::size_t d = p.degree();
  if (d == 0) throw ValidationError("root_statistics: polynomial has degree 0");
  const double cd = p.coeff(d);
  const double c1 = p.coeff(d - 1);
  const double c2 = d >= 2 ? p.coeff(d - 2) : 0.0;
  const double dd = static_cast<double>(d);
  return {-c1 / (dd * cd), (c1 * c1 - 2.0 * cd * c2) / (dd * cd * cd)};
}

}  // namespace mixdet
