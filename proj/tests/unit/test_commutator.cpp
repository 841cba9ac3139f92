#include <cmath>

#include "doctest.h"
#include "mixdet/commutator.hpp"
#include "mixdet/error.hpp"
#include "testing.hpp"

using namespace mixdet;
using mixdet::testing::Rng;

namespace {
double max_diff(const ComplexMatrix& a, const ComplexMatrix& b) { return (a - b).max_abs(); }

ComplexMatrix commutator(const ComplexMatrix& b, const ComplexMatrix& c) { return b * c - c * b; }

void check_result(const ComplexMatrix& a, const CommutatorResult& res, double tol) {
  CHECK(operator_norm(a - commutator(res.b, res.c)) <= tol * std::max(1.0, operator_norm(a)));
  CHECK(res.residual <= tol * std::max(1.0, operator_norm(a)));
  for (Complex z : res.b_spectrum) CHECK(SpectralSquare::root().contains(z, 1e-12));
  CHECK(res.norm_b <= std::sqrt(2.0) + 1e-10);
}
}  // namespace

TEST_CASE("spectral squares") {
  const auto s = SpectralSquare::root();
  CHECK(s.contains({1.0, -1.0}));
  CHECK_FALSE(s.contains({1.1, 0.0}));
  CHECK(s.margin({0.5, 0.0}) == doctest::Approx(0.5));
  const auto t = tile_of_root_square(0, 2);
  CHECK(t.half_side == doctest::Approx(0.5));
  CHECK(t.center.real() == doctest::Approx(-0.5));
  // Tiles of a 3x3 grid cover the root square without overlap.
  for (std::size_t i = 0; i < 9; ++i)
    for (std::size_t j = i + 1; j < 9; ++j) {
      const auto a = tile_of_root_square(i, 3);
      const auto b = tile_of_root_square(j, 3);
      CHECK(a.center != b.center);
      CHECK(std::max(std::abs(a.center.real() - b.center.real()), std::abs(a.center.imag() - b.center.imag())) >=
            2.0 * a.half_side - 1e-12);
    }
}

TEST_CASE("zero diagonal conjugation") {
  const ComplexMatrix zd{{0.0, 1.0}, {2.0, 0.0}};
  auto z = zero_diagonal_conjugation(zd);
  CHECK(max_diff(z.unitary, ComplexMatrix::identity(2)) < 1e-15);
  CHECK(max_diff(z.conjugated, zd) < 1e-15);

  z = zero_diagonal_conjugation(ComplexMatrix{{1.0, 0.0}, {0.0, -1.0}});
  CHECK(max_diff(z.conjugated, ComplexMatrix{{0.0, -1.0}, {-1.0, 0.0}}) < 1e-14);
  CHECK(max_diff(z.unitary.adjoint() * z.unitary, ComplexMatrix::identity(2)) < 1e-14);

  const ComplexMatrix d3{{2.0, 0.0, 0.0}, {0.0, -1.0, 0.0}, {0.0, 0.0, -1.0}};
  z = zero_diagonal_conjugation(d3);
  CHECK(has_zero_diagonal(z.conjugated, 1e-12));
  CHECK(max_diff(z.unitary.adjoint() * d3 * z.unitary, z.conjugated) < 1e-12);

  Rng rng(41);
  for (std::size_t m : {3, 5, 8, 13}) {
    const ComplexMatrix a = testing::random_zero_trace(m, rng);
    z = zero_diagonal_conjugation(a);
    CHECK(has_zero_diagonal(z.conjugated, 1e-12));
    CHECK(max_diff(z.unitary.adjoint() * z.unitary, ComplexMatrix::identity(m)) < 1e-12);
    CHECK(max_diff(z.unitary.adjoint() * a * z.unitary, z.conjugated) < 1e-12);
    CHECK(std::abs(z.conjugated.trace() - a.trace()) < 1e-12);
  }
  CHECK_THROWS_AS(zero_diagonal_conjugation(ComplexMatrix::identity(2)), ValidationError);
}

TEST_CASE("sylvester") {
  auto x = sylvester_solve(ComplexMatrix{{2.0}}, ComplexMatrix{{-1.0}}, ComplexMatrix{{3.0}});
  CHECK(std::abs(x(0, 0) - Complex(1.0)) < 1e-15);
  Rng rng(42);
  const ComplexMatrix a = testing::random_matrix(3, rng);
  x = sylvester_solve(ComplexMatrix::identity(3), -ComplexMatrix::identity(3), a);
  CHECK(max_diff(x, a * Complex(0.5)) < 1e-14);
  ComplexMatrix s(2);
  s(0, 0) = 1.0;
  s(1, 1) = 2.0;
  ComplexMatrix col(2, 1);
  col(0, 0) = 1.0;
  col(1, 0) = 1.0;
  x = sylvester_solve(s, ComplexMatrix{{-1.0}}, col);
  CHECK(std::abs(x(0, 0) - Complex(0.5)) < 1e-15);
  CHECK(std::abs(x(1, 0) - Complex(1.0 / 3.0)) < 1e-15);
  CHECK_THROWS_AS(sylvester_solve(ComplexMatrix::identity(2), ComplexMatrix::identity(2), a), ValidationError);
  CHECK_THROWS_AS(sylvester_solve(ComplexMatrix{{1.0}}, ComplexMatrix{{1.0}}, ComplexMatrix{{1.0}}),
                  NumericalError);
}

TEST_CASE("spectrum placement") {
  const SpectralSquare tile{{0.5, 0.5}, 0.5};
  auto p = place_spectrum({0.0, 0.0}, tile, 4);
  CHECK(p.diagonal[0] == Complex(0.5, 0.5));
  p = place_spectrum({1.0, -1.0}, SpectralSquare{{0.0, 0.0}, 0.5}, 4);
  CHECK(p.scale == doctest::Approx(0.25));
  CHECK(p.diagonal[0].real() == doctest::Approx(0.25));
  CHECK(p.diagonal[1].real() == doctest::Approx(-0.25));
  CHECK(SpectralSquare{{0.0, 0.0}, 0.5}.margin(p.diagonal[0]) == doctest::Approx(0.25));
}

TEST_CASE("base case") {
  auto res = base_case_commutator(ComplexMatrix(1));
  CHECK(res.residual == 0.0);
  const Complex a(0.3, 0.1);
  const Complex b(-0.7, 0.2);
  const ComplexMatrix two{{0.0, a}, {b, 0.0}};
  res = base_case_commutator(two);
  CHECK(std::abs(res.b_spectrum[0] - Complex(1.0)) < 1e-15);
  CHECK(std::abs(res.b_spectrum[1] - Complex(-1.0)) < 1e-15);
  CHECK(max_diff(res.c, ComplexMatrix{{0.0, a / 2.0}, {-b / 2.0, 0.0}}) < 1e-15);
  Rng rng(43);
  ComplexMatrix three = testing::random_matrix(3, rng);
  for (std::size_t i = 0; i < 3; ++i) three(i, i) = 0.0;
  res = base_case_commutator(three);
  CHECK(operator_norm(three - commutator(res.b, res.c)) <= 1e-12);
}

TEST_CASE("block parameter schedule") {
  for (std::size_t m : {2, 10, 100, 1000, 100000}) {
    const std::size_t r = commutator_block_parameter(m);
    const double target = std::exp(std::sqrt(8.0 / 3.0) * std::sqrt(std::log(static_cast<double>(m))));
    CHECK(static_cast<double>(r) >= target);
    const auto side = static_cast<std::size_t>(std::llround(std::sqrt(2.0 * static_cast<double>(r))));
    CHECK(side * side == 2 * r);
  }
}

TEST_CASE("recursive commutator") {
  const ComplexMatrix d{{1.0, 0.0}, {0.0, -1.0}};
  auto res = recursive_commutator(d);
  check_result(d, res, 1e-10);

  Rng rng(44);
  const ComplexMatrix a = testing::random_zero_trace(12, rng);
  CommutatorOptions opts;
  opts.base_threshold = 4;
  opts.fixed_r = 2;
  res = recursive_commutator(a, opts);
  check_result(a, res, 1e-8);
  // (rk)^n = 8^12 exceeds the default budget, so the top level falls back.
  CHECK(res.trace.front().mode == "fallback");

  opts.budget.max_terms = std::uint64_t{1} << 40;
  res = recursive_commutator(a, opts);
  check_result(a, res, 1e-8);
  bool paved = false;
  for (const auto& level : res.trace) {
    if (level.mode == "paved") {
      paved = true;
      CHECK(level.min_margin >= 1.0 / (2.0 * std::sqrt(static_cast<double>(level.tiles))) - 1e-12);
    }
  }
  CHECK(paved);

  for (std::size_t m : {3, 7, 16, 20}) {
    const ComplexMatrix b = testing::random_zero_trace(m, rng) * Complex(3.0);
    res = recursive_commutator(b);
    check_result(b, res, 1e-8);
    const auto rep = commutator_norm_report(res, m);
    CHECK(rep.product_norm <= rep.paper_bound * res.norm_a);
  }
  CHECK_THROWS_AS(recursive_commutator(ComplexMatrix::identity(3)), ValidationError);
}

TEST_CASE("norm report") {
  auto rep = commutator_norm_report(base_case_commutator(ComplexMatrix(1)), 1);
  CHECK(rep.product_norm == 0.0);
  const ComplexMatrix swap{{0.0, 1.0}, {1.0, 0.0}};
  const auto res = base_case_commutator(swap);
  rep = commutator_norm_report(res, 2);
  CHECK(res.norm_b == doctest::Approx(1.0));
  CHECK(rep.product_norm <= rep.paper_bound);
  CHECK(rep.paper_bound == doctest::Approx(300.0 * std::exp(9.0 * std::sqrt(std::log(2.0)))));
}
