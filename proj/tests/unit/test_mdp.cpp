#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "mixdet/error.hpp"
#include "mixdet/mdp.hpp"
#include "testing.hpp"

using namespace mixdet;
using mixdet::testing::Rng;

namespace {
const ComplexMatrix kSwap{{0.0, 1.0}, {1.0, 0.0}};

HermitianTuple tuple_of(std::vector<ComplexMatrix> ms) { return HermitianTuple(std::move(ms)); }
}  // namespace

TEST_CASE("assignments") {
  const Assignment a(2, {0, 1, 1});
  const auto blocks = a.blocks();
  REQUIRE(blocks.size() == 2);
  CHECK(blocks[0] == IndexSet{0});
  CHECK(blocks[1] == IndexSet{1, 2});
  CHECK(Assignment::from_blocks(blocks, 3) == a);
  CHECK_THROWS_AS(Assignment(2, {0, 2}), ValidationError);
  const auto t = PartialAssignment::empty(2, 3).extended(1).extended(0);
  CHECK(t.complete());
  CHECK(t.to_assignment() == Assignment(3, {1, 0}));
}

TEST_CASE("mixed determinant") {
  const std::vector<ComplexMatrix> ids{ComplexMatrix::identity(2), ComplexMatrix::identity(2)};
  CHECK(std::abs(mixed_determinant(ids) - Complex(4.0)) < 1e-14);
  for (double x : {-1.5, 0.0, 0.3, 2.0}) {
    const ComplexMatrix m = ComplexMatrix::identity(2) * Complex(x) - kSwap;
    const std::vector<ComplexMatrix> pair{m, m};
    CHECK(std::abs(mixed_determinant(pair) - Complex(4.0 * x * x - 2.0)) < 1e-13);
  }
}

TEST_CASE("mixed determinant against enumeration") {
  Rng rng(21);
  for (std::size_t k = 1; k <= 3; ++k)
    for (std::size_t n = 1; n <= 4; ++n) {
      std::vector<ComplexMatrix> ms;
      for (std::size_t i = 0; i < k; ++i) ms.push_back(testing::random_matrix(n, rng));
      Complex expected = 0.0;
      testing::for_each_assignment(n, k, [&](const std::vector<std::size_t>& parts) {
        Complex term = 1.0;
        for (std::size_t i = 0; i < k; ++i) {
          IndexSet s;
          for (std::size_t e = 0; e < n; ++e)
            if (parts[e] == i) s.push_back(e);
          term *= determinant(principal_submatrix(ms[i], s));
        }
        expected += term;
      });
      CHECK(std::abs(mixed_determinant(ms) - expected) < 1e-10 * (1.0 + std::abs(expected)));
    }
}

TEST_CASE("mdp small cases") {
  CHECK(max_coefficient_deviation(mdp(tuple_of({kSwap})), RealPolynomial{-1.0, 0.0, 1.0}) < 1e-14);
  const auto t = tuple_of({kSwap});
  CHECK(mdp_delete(t, {}) == mdp(t));
  CHECK(mdp_delete(t, {0, 1}) == RealPolynomial::constant(1.0));
  CHECK(max_coefficient_deviation(mdp_delete(t, {0}), RealPolynomial{0.0, 1.0}) < 1e-15);
  CHECK(mdp_keep(t, {0, 1}) == mdp(t));
  CHECK(mdp_keep(t, {}) == RealPolynomial::constant(1.0));
  const auto z = tuple_of({kSwap, -kSwap});
  CHECK(max_coefficient_deviation(mdp_keep(z, {1}), RealPolynomial{0.0, 1.0}) < 1e-15);
}

TEST_CASE("mdp matches brute force") {
  Rng rng(22);
  for (std::size_t k = 1; k <= 3; ++k)
    for (std::size_t n = 1; n <= 5; ++n) {
      const HermitianTuple t = testing::random_hermitian_tuple(n, k, rng);
      CHECK(testing::max_relative_deviation(mdp(t), testing::oracle_mdp(t.matrices())) < 1e-10);
    }
}

TEST_CASE("mdp structural invariants") {
  Rng rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + trial % 5;
    const std::size_t k = 1 + trial % 3;
    const HermitianTuple t = testing::random_hermitian_tuple(n, k, rng);
    const RealPolynomial p = mdp(t);
    CHECK(p.degree() == n);
    CHECK(p.leading() == doctest::Approx(1.0));
    double trace = 0.0;
    for (const auto& a : t.matrices()) trace += a.trace().real();
    CHECK(p.coeff(n - 1) == doctest::Approx(-trace / static_cast<double>(k)));
    CHECK(is_real_rooted(p, 1e-7));

    std::vector<ComplexMatrix> reversed(t.matrices().rbegin(), t.matrices().rend());
    CHECK(max_coefficient_deviation(mdp(HermitianTuple(reversed)), p) < 1e-12 * (1.0 + p.max_abs_coeff()));

    const IndexSet s{0, n - 1};
    std::vector<ComplexMatrix> deleted;
    for (const auto& a : t.matrices()) deleted.push_back(delete_submatrix(a, s));
    const RealPolynomial d = mdp_delete(t, s);
    CHECK(d.degree() == n - 2);
    CHECK(max_coefficient_deviation(d, mdp(HermitianTuple(deleted))) < 1e-12 * (1.0 + d.max_abs_coeff()));
  }
}

TEST_CASE("zero-diagonal tuples have a zero subleading coefficient") {
  Rng rng(24);
  const HermitianTuple t = testing::random_zero_diagonal_tuple(5, 3, rng);
  CHECK(std::abs(mdp(t).coeff(4)) < 1e-14);
}

TEST_CASE("largest eigenvalue transfers through the mdp root") {
  Rng rng(25);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 2 + trial % 5;
    const std::size_t k = 1 + trial % 3;
    const HermitianTuple t = testing::random_zero_diagonal_tuple(n, k, rng, true);
    double top = -1e300;
    for (const auto& a : t.matrices()) top = std::max(top, lambda_max(a));
    CHECK(top <= static_cast<double>(k) * largest_root(mdp(t)) + 1e-8);
  }
}

TEST_CASE("paving polynomial") {
  const auto t = tuple_of({kSwap});
  CHECK(paving_polynomial(t, Assignment(1, {0, 0})) == mdp(t));
  CHECK(max_coefficient_deviation(paving_polynomial(t, Assignment(2, {0, 1})), RealPolynomial::monomial(2)) < 1e-15);
  Rng rng(26);
  const HermitianTuple z = testing::random_zero_diagonal_tuple(4, 2, rng);
  CHECK(max_coefficient_deviation(paving_polynomial(z, Assignment(4, {0, 1, 2, 3})), RealPolynomial::monomial(4)) <
        1e-15);
  const Assignment pav(3, {0, 2, 0, 1});
  CHECK(testing::max_relative_deviation(paving_polynomial(z, pav), testing::oracle_paving_polynomial(z, pav)) < 1e-12);
}

TEST_CASE("paving average equals the repeated-tuple mdp") {
  Rng rng(27);
  for (auto [n, k, r] : std::vector<std::array<std::size_t, 3>>{{3, 1, 2}, {4, 2, 3}, {5, 1, 3}, {6, 2, 4}}) {
    const HermitianTuple t = testing::random_hermitian_tuple(n, k, rng);
    RealPolynomial avg;
    testing::for_each_assignment(n, r, [&](const std::vector<std::size_t>& parts) {
      avg += paving_polynomial(t, Assignment(r, parts));
    });
    avg *= std::pow(static_cast<double>(r), -static_cast<double>(n));
    CHECK(testing::max_relative_deviation(avg, mdp(t.repeated(r))) < 1e-10);
  }
}

TEST_CASE("single matrix identity") {
  auto check = single_matrix_identity_check(HermitianMatrix(kSwap), 2);
  CHECK(check.deviation < 1e-14);
  CHECK(max_coefficient_deviation(check.lhs, RealPolynomial{-0.25, 0.0, 1.0}) < 1e-14);
  check = single_matrix_identity_check(HermitianMatrix(kSwap), 1);
  CHECK(max_coefficient_deviation(check.lhs, char_poly(kSwap)) < 1e-14);
  check = single_matrix_identity_check(HermitianMatrix(ComplexMatrix(3)), 3);
  CHECK(check.lhs == RealPolynomial::monomial(3));
  CHECK(check.rhs == RealPolynomial::monomial(3));
}

TEST_CASE("monotonicity experiment") {
  const std::vector<double> grid{0.0, 1.0, 1.0};
  const auto f = monotonicity_experiment(tuple_of({kSwap}), HermitianMatrix(kSwap), grid);
  CHECK(f[0] == doctest::Approx(0.5));
  CHECK(f[1] == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(f[1] == f[2]);
  const auto flat = monotonicity_experiment(tuple_of({kSwap}), HermitianMatrix(ComplexMatrix(2)), grid);
  CHECK(flat[0] == doctest::Approx(flat[1]));
  CHECK_THROWS_AS(monotonicity_experiment(tuple_of({kSwap}), HermitianMatrix(ComplexMatrix::identity(2)), grid),
                  ValidationError);
}

TEST_CASE("rank mixture") {
  const double h = 1.0 / std::sqrt(2.0);
  const std::vector<std::vector<ComplexVector>> fam{{{h, 0.0}, {h, 0.0}}};
  CHECK(max_coefficient_deviation(mixed_char_poly_rank_mixture(fam), RealPolynomial{0.0, -1.0, 1.0}) < 1e-14);
  const std::vector<std::vector<ComplexVector>> zero{{{0.0, 0.0}}, {{0.0, 0.0}}};
  CHECK(mixed_char_poly_rank_mixture(zero) == RealPolynomial::monomial(4));
}

TEST_CASE("bridge identity") {
  const HermitianMatrix b((ComplexMatrix::identity(2) + kSwap) * Complex(0.5));
  auto check = mdp_mcp_bridge_check(std::vector<HermitianMatrix>{b});
  CHECK(check.deviation < 1e-13);
  CHECK(max_coefficient_deviation(check.lhs, RealPolynomial{0.0, -1.0, 1.0}) < 1e-13);

  const HermitianMatrix half(ComplexMatrix::identity(2) * Complex(0.5));
  check = mdp_mcp_bridge_check(std::vector<HermitianMatrix>{half, half});
  const RealPolynomial expected = RealPolynomial{1.0, -2.0, 1.0}.shifted_up(2);
  CHECK(max_coefficient_deviation(check.lhs, expected) < 1e-13);
  CHECK(check.deviation < 1e-13);

  Rng rng(28);
  for (std::size_t k = 1; k <= 3; ++k) {
    std::vector<HermitianMatrix> psd{HermitianMatrix(ComplexMatrix(3))};
    for (std::size_t i = 1; i < k; ++i) psd.emplace_back(testing::random_psd(3, rng));
    check = mdp_mcp_bridge_check(psd);
    CHECK(check.deviation < 1e-9);
    for (std::size_t j = 0; j < 3; ++j) CHECK(std::abs(check.lhs.coeff(j)) < 1e-12);
  }
  CHECK_THROWS_AS(gram_vectors(HermitianMatrix(-ComplexMatrix::identity(2))), ValidationError);
}

TEST_CASE("budget") {
  EnumerationBudget tight;
  tight.max_terms = 10;
  Rng rng(29);
  const HermitianTuple t = testing::random_hermitian_tuple(5, 2, rng);
  CHECK_THROWS_AS(mdp(t, tight), BudgetExceeded);
  CHECK(EnumerationBudget::power(2, 70) == UINT64_MAX);
}
