#include <cmath>
#include <random>

#include "doctest.h"
#include "mixdet/error.hpp"
#include "mixdet/polynomial.hpp"

using namespace mixdet;

namespace {
RealPolynomial from_roots(std::vector<double> roots) { return RealPolynomial::from_roots(roots); }
}  // namespace

TEST_CASE("arithmetic and trimming") {
  const RealPolynomial p{1.0, 2.0, 0.0};
  CHECK(p.degree() == 1);
  CHECK(RealPolynomial{}.is_zero());
  CHECK((p - p).is_zero());
  CHECK(p * RealPolynomial{0.0, 1.0} == RealPolynomial{0.0, 1.0, 2.0});
  CHECK(RealPolynomial{-1.0, 0.0, 1.0}.shifted_up(2) == RealPolynomial{0.0, 0.0, -1.0, 0.0, 1.0});
  CHECK(RealPolynomial{2.0, 4.0}.monic() == RealPolynomial{0.5, 1.0});
  const auto qr = divide(RealPolynomial{-1.0, 0.0, 1.0}, RealPolynomial{1.0, 1.0});
  CHECK(max_coefficient_deviation(qr.quotient, RealPolynomial{-1.0, 1.0}) < 1e-15);
  CHECK(qr.remainder.max_abs_coeff() < 1e-15);
  CHECK_THROWS_AS(divide(p, RealPolynomial{}), ValidationError);
}

TEST_CASE("derivatives") {
  const RealPolynomial p{-1.0, 0.0, 1.0};
  CHECK(derivative(p, 1) == RealPolynomial{0.0, 2.0});
  CHECK(derivative(p, 3).is_zero());
  CHECK(derivative(RealPolynomial::monomial(5), 5) == RealPolynomial::constant(120.0));
  CHECK(derivative(p, 0) == p);
}

TEST_CASE("largest root") {
  CHECK(largest_root(RealPolynomial{-1.0, 0.0, 1.0}) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(largest_root(RealPolynomial{-0.5, 0.0, 1.0}) == doctest::Approx(0.70710678118654752).epsilon(1e-14));
  CHECK(largest_root(from_roots({3.0, -5.0, -5.0})) == doctest::Approx(3.0).epsilon(1e-13));
  CHECK(largest_root(from_roots({2.0, 2.0, 2.0, -1.0})) == doctest::Approx(2.0).epsilon(1e-5));
  CHECK(largest_root(RealPolynomial{0.0, 3.0}) == doctest::Approx(0.0));
  CHECK_THROWS_AS(largest_root(RealPolynomial::constant(2.0)), ValidationError);
  CHECK_THROWS_AS(largest_root(RealPolynomial{1.0, 0.0, 1.0}), NotRealRooted);
}

TEST_CASE("all real roots") {
  auto r = all_real_roots(RealPolynomial{-1.0, 0.0, 1.0});
  REQUIRE(r.size() == 2);
  CHECK(r[0] == doctest::Approx(-1.0));
  CHECK(r[1] == doctest::Approx(1.0));
  r = all_real_roots(RealPolynomial{-2.0, -3.0, 0.0, 1.0});
  REQUIRE(r.size() == 3);
  CHECK(r[0] == doctest::Approx(-1.0).epsilon(1e-7));
  CHECK(r[1] == doctest::Approx(-1.0).epsilon(1e-7));
  CHECK(r[2] == doctest::Approx(2.0));
  CHECK_THROWS_AS(all_real_roots(RealPolynomial{1.0, 0.0, 1.0}), NotRealRooted);
}

TEST_CASE("random real-rooted polynomials round-trip") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> roots(1 + trial % 9);
    for (auto& x : roots) x = u(rng);
    std::sort(roots.begin(), roots.end());
    const RealPolynomial p = from_roots(roots);
    CHECK(largest_root(p) == doctest::Approx(roots.back()).epsilon(1e-6));
    CHECK(is_real_rooted(p, 1e-7));
    const auto found = all_real_roots(p);
    REQUIRE(found.size() == roots.size());
    for (std::size_t i = 0; i < roots.size(); ++i) CHECK(std::abs(found[i] - roots[i]) < 1e-4);
  }
}

TEST_CASE("real-rootedness") {
  CHECK(is_real_rooted(RealPolynomial{-1.0, 0.0, 1.0}, 1e-9));
  CHECK_FALSE(is_real_rooted(RealPolynomial{1.0, 0.0, 1.0}, 1e-9));
  CHECK(is_real_rooted(RealPolynomial{1.0, -2.0, 1.0} * RealPolynomial{-5.0, 1.0}, 1e-9));
  CHECK_FALSE(is_real_rooted(from_roots({0.0, 1.0}) * RealPolynomial{0.01, 0.0, 1.0}, 1e-9));
}

TEST_CASE("common interlacer") {
  const std::vector<RealPolynomial> good{{-1.0, 0.0, 1.0}, {-4.0, 0.0, 1.0}};
  CHECK(common_interlacer_check(good));
  const std::vector<RealPolynomial> bad{{-1.0, 0.0, 1.0}, {1.0, 0.0, 1.0}};
  CHECK_FALSE(common_interlacer_check(bad));
  const std::vector<RealPolynomial> single{{-1.0, 0.0, 1.0}};
  CHECK(common_interlacer_check(single));
  // Roots {0, 1} and {2, 3} do not interlace; the midpoint has complex roots.
  const std::vector<RealPolynomial> apart{from_roots({0.0, 1.0}), from_roots({2.0, 3.0})};
  CHECK_FALSE(common_interlacer_check(apart));
  const std::vector<RealPolynomial> mismatch{{-1.0, 0.0, 1.0}, {0.0, 1.0}};
  CHECK_THROWS_AS(common_interlacer_check(mismatch), ValidationError);
}

TEST_CASE("argument scaling") {
  CHECK(max_coefficient_deviation(scale_argument(RealPolynomial{-1.0, 0.0, 1.0}, 2.0, true),
                                  RealPolynomial{-0.25, 0.0, 1.0}) < 1e-15);
  CHECK(scale_argument(RealPolynomial{0.0, 1.0}, 3.0, false) == RealPolynomial{0.0, 3.0});
  CHECK(scale_argument(RealPolynomial::constant(4.0), 7.0, false) == RealPolynomial::constant(4.0));
  CHECK(scale_argument(RealPolynomial::constant(4.0), 7.0, true) == RealPolynomial::constant(1.0));
}

TEST_CASE("root statistics") {
  auto s = root_statistics(RealPolynomial{-1.0, 0.0, 1.0});
  CHECK(s.mean == doctest::Approx(0.0));
  CHECK(s.mean_square == doctest::Approx(1.0));
  s = root_statistics(RealPolynomial{-0.5, 0.0, 1.0});
  CHECK(s.mean_square == doctest::Approx(0.5));
  s = root_statistics(from_roots({1.0, 3.0}));
  CHECK(s.mean == doctest::Approx(2.0));
  CHECK(s.mean_square == doctest::Approx(5.0));
}

TEST_CASE("sturm chain counts distinct roots") {
  const SturmChain chain(from_roots({-2.0, 0.5, 0.5, 3.0}), 1e-12);
  CHECK(chain.distinct_real_roots() == 3);
  CHECK(chain.roots_in(0.0, 1.0) == 1);
  CHECK(SturmChain(RealPolynomial{1.0, 0.0, 1.0}, 1e-12).distinct_real_roots() == 0);
}

TEST_CASE("cauchy bound") {
  const RealPolynomial p = from_roots({-7.0, 1.0, 2.0});
  CHECK(cauchy_bound(p) > 7.0);
}
