// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria (0 when everything passes).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "mixdet/commutator.hpp"
#include "mixdet/constructions.hpp"
#include "mixdet/error.hpp"
#include "mixdet/mdp.hpp"
#include "mixdet/selection.hpp"
#include "testing.hpp"

using namespace mixdet;
using mixdet::testing::Rng;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double time_limit_s;  // 0 = none
  std::function<Outcome()> run;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

Outcome expected_mdp() {
  Rng rng(101);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = uniform(rng, 1, 5);
    const std::size_t k = uniform(rng, 1, 2);
    const std::size_t r = uniform(rng, 1, 3);
    const HermitianTuple t = testing::random_zero_diagonal_tuple(n, k, rng);
    RealPolynomial avg;
    testing::for_each_assignment(n, r, [&](const std::vector<std::size_t>& parts) {
      avg += paving_polynomial(t, Assignment(r, parts));
    });
    avg *= std::pow(static_cast<double>(r), -static_cast<double>(n));
    worst = std::max(worst, max_coefficient_deviation(avg, mdp(t.repeated(r))));
  }
  return {worst <= 1e-10, fmt("max deviation %.2e", worst)};
}

Outcome derivative_identity() {
  Rng rng(102);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = uniform(rng, 1, 6);
    const std::size_t k = uniform(rng, 1, 2);
    const HermitianTuple t = testing::random_zero_diagonal_tuple(n, k, rng);
    for (std::size_t m = 0; m <= n; ++m) worst = std::max(worst, derivative_identity_check(t, m).deviation);
  }
  return {worst <= 1e-10, fmt("max deviation %.2e", worst)};
}

Outcome scaling_identity() {
  Rng rng(103);
  double worst = 0.0;
  for (std::size_t n = 1; n <= 6; ++n)
    for (std::size_t k = 1; k <= 4; ++k) {
      const ComplexMatrix a = testing::random_zero_diagonal(n, rng, false, 1.0);
      worst = std::max(worst, single_matrix_identity_check(HermitianMatrix(a), k).deviation);
    }
  return {worst <= 1e-11, fmt("max deviation %.2e", worst)};
}

Outcome shrink_transfer() {
  Rng rng(104);
  double worst = -1e300;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = uniform(rng, 1, 6);
    const std::size_t k = uniform(rng, 1, 3);
    const HermitianTuple t = testing::random_zero_diagonal_tuple(n, k, rng, true);
    double top = -1e300;
    for (const auto& a : t.matrices()) top = std::max(top, lambda_max(a));
    worst = std::max(worst, top - static_cast<double>(k) * largest_root(mdp(t)));
  }
  return {worst <= 1e-8, fmt("max(lambda_max - k root) = %.2e", worst)};
}

Outcome monotonicity() {
  Rng rng(105);
  std::vector<double> grid(20);
  for (std::size_t i = 0; i < grid.size(); ++i) grid[i] = 2.0 * static_cast<double>(i) / 19.0;
  double worst_drop = 0.0;
  double worst_gap = -1e300;
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = uniform(rng, 2, 5);
    const std::size_t k = uniform(rng, 1, 2);
    const HermitianTuple a = testing::random_zero_diagonal_tuple(n, k, rng);
    const ComplexMatrix b = testing::random_zero_diagonal(n, rng);
    const auto f = monotonicity_experiment(a, HermitianMatrix(b), grid);
    for (std::size_t i = 1; i < f.size(); ++i) worst_drop = std::max(worst_drop, f[i - 1] - f[i]);
    const double with_b = largest_root(mdp(a.appended(b)));
    const double with_zero = largest_root(mdp(a.appended(ComplexMatrix(n))));
    worst_gap = std::max(worst_gap, with_zero - with_b);
  }
  const bool pass = worst_drop <= 1e-8 && worst_gap <= 1e-8;
  return {pass, fmt("max drop %.2e", worst_drop) + fmt(", max(root[A,0] - root[A,B]) %.2e", worst_gap)};
}

Outcome root_bound() {
  Rng rng(106);
  double worst = -1e300;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = uniform(rng, 1, 6);
    const std::size_t k = uniform(rng, 2, 4);
    const HermitianTuple t = testing::random_zero_diagonal_tuple(n, k, rng);
    worst = std::max(worst, largest_root(mdp(t)) - rootbound_value(k));
  }
  double chain_worst = -1e300;
  double bound_worst = -1e300;
  for (std::size_t r = 2; r <= 3; ++r)
    for (std::size_t k = 1; k <= 2; ++k)
      for (std::size_t n = 1; n <= 5; ++n) {
        const HermitianTuple t = testing::random_zero_diagonal_tuple(n, k, rng);
        const auto rep = greedy_paving(t, r);
        chain_worst = std::max(chain_worst, rep.greedy_root - rep.expected_poly_root);
        bound_worst = std::max(bound_worst, rep.expected_poly_root - rootbound_value(r * k));
      }
  const bool pass = worst < 1e-8 && chain_worst <= 1e-9 && bound_worst < 1e-8;
  return {pass, fmt("max(root - bound) %.3f", worst) + fmt(", chain %.2e", chain_worst) +
                    fmt(", expected root - bound %.3f", bound_worst)};
}

Outcome greedy_trace() {
  Rng rng(107);
  double worst_rise = -1e300;
  double worst_avg = 0.0;
  for (int run = 0; run < 12; ++run) {
    const std::size_t n = uniform(rng, 3, 7);
    const std::size_t k = uniform(rng, 1, 2);
    const std::size_t r = uniform(rng, 2, 3);
    const HermitianTuple t = testing::random_zero_diagonal_tuple(n, k, rng);
    const auto rep = greedy_paving(t, r);
    for (std::size_t i = 1; i < rep.greedy_root_trace.size(); ++i)
      worst_rise = std::max(worst_rise, rep.greedy_root_trace[i] - rep.greedy_root_trace[i - 1]);
    std::vector<PartialAssignment> visited{PartialAssignment::empty(n, r)};
    for (std::size_t m = 0; m + 1 < n; ++m) visited.push_back(visited.back().extended(rep.paving[m]));
    for (int s = 0; s < 20; ++s) {
      const auto& node = visited[uniform(rng, 0, visited.size() - 1)];
      worst_avg = std::max(worst_avg, interlacing_average_check(t, node));
    }
  }
  const bool pass = worst_rise <= 1e-9 && worst_avg <= 1e-10;
  return {pass, fmt("max step rise %.2e", worst_rise) + fmt(", max average deviation %.2e", worst_avg)};
}

Outcome bridge() {
  Rng rng(108);
  double worst = 0.0;
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = uniform(rng, 1, 4);
    const std::size_t k = uniform(rng, 1, 3);
    std::vector<HermitianMatrix> psd;
    for (std::size_t i = 0; i < k; ++i) psd.emplace_back(testing::random_psd(n, rng));
    worst = std::max(worst, mdp_mcp_bridge_check(psd).deviation);
  }
  return {worst <= 1e-9, fmt("max deviation %.2e", worst)};
}

Outcome restricted_pipeline() {
  Rng rng(109);
  bool pass = true;
  double worst = -1e300;
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = uniform(rng, 40, 60);
    const std::size_t k = uniform(rng, 1, 2);
    const double eps = trial % 2 == 0 ? 0.8 : 0.9;
    const HermitianTuple t = testing::random_zero_diagonal_tuple(n, k, rng);
    const auto rep = joint_restricted_invertibility(t, eps);
    const auto keep = static_cast<std::size_t>(std::floor(static_cast<double>(n) * eps * eps / (6.0 * static_cast<double>(k)) + 1e-9));
    pass = pass && rep.kept.size() == keep;
    for (const auto& a : t.matrices()) {
      const double top = hermitian_eigenvalues(HermitianMatrix(principal_submatrix(a, rep.kept))).back();
      worst = std::max(worst, top - eps);
    }
  }
  pass = pass && worst < 0.0;
  return {pass, fmt("max(lambda_max - eps) %.3f", worst)};
}

Outcome commutator() {
  Rng rng(110);
  double worst_res = 0.0;
  double worst_b = 0.0;
  double worst_ratio = 0.0;
  bool inside = true;
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t m = uniform(rng, 2, 16);
    const double scale = std::uniform_real_distribution<double>(0.1, 5.0)(rng);
    const ComplexMatrix a = testing::random_zero_trace(m, rng) * Complex(scale);
    const auto res = recursive_commutator(a);
    const double norm_a = operator_norm(a);
    worst_res = std::max(worst_res, operator_norm(a - (res.b * res.c - res.c * res.b)) / norm_a);
    for (Complex z : res.b_spectrum) inside = inside && SpectralSquare::root().contains(z, 1e-12);
    worst_b = std::max(worst_b, operator_norm(res.b));
    const auto rep = commutator_norm_report(res, m);
    worst_ratio = std::max(worst_ratio, rep.product_norm / (rep.paper_bound * norm_a));
  }
  const bool pass = worst_res <= 1e-8 && inside && worst_b <= std::sqrt(2.0) + 1e-10 && worst_ratio <= 1.0;
  return {pass, fmt("max residual/||A|| %.2e", worst_res) + fmt(", max ||B|| %.4f", worst_b) +
                    fmt(", max product/bound %.2e", worst_ratio)};
}

Outcome tightness() {
  bool pass = true;
  std::string detail;
  for (std::size_t k = 1; k <= 2; ++k) {
    const auto t = tightness_tuple(k, 0.40);
    const auto res = verify_singleton_necessity(t.matrices, 0.40);
    pass = pass && t.m == 6 && res.holds;
    detail += "k=" + std::to_string(k) + fmt(" min pair norm %.4f; ", res.min_pair_norm);
  }
  return {pass, detail};
}

Outcome matching_identity() {
  double worst = 0.0;
  for (const auto& g : {SimpleGraph::path(2), SimpleGraph::path(3), SimpleGraph::cycle(4)}) {
    const auto rep = signed_mdp_identity_check(g);
    worst = std::max(worst, max_coefficient_deviation(rep.lhs.monic(), rep.rhs.monic()));
  }
  const auto c4 = signed_mdp_identity_check(SimpleGraph::cycle(4));
  const bool spread_ok = c4.best_signing_spread && *c4.best_signing_spread <= 2.0 * std::sqrt(2.0) + 1e-8;
  return {worst <= 1e-10 && spread_ok,
          fmt("max deviation %.2e", worst) + fmt(", C4 best spread %.4f", c4.best_signing_spread.value_or(NAN))};
}

Outcome oracle_equivalence() {
  Rng rng(113);
  double worst = 0.0;
  for (std::size_t n = 1; n <= 4; ++n)
    for (std::size_t k = 1; k <= 2; ++k)
      for (int trial = 0; trial < 5; ++trial) {
        const HermitianTuple t = testing::random_hermitian_tuple(n, k, rng);
        const auto xs = testing::sample_points(n + 1);
        std::vector<double> ys;
        for (double x : xs) {
          std::vector<ComplexMatrix> shifted;
          for (const auto& a : t.matrices()) shifted.push_back(ComplexMatrix::identity(n) * Complex(x) - a);
          ys.push_back(mixed_determinant(shifted).real() * std::pow(static_cast<double>(k), -static_cast<double>(n)));
        }
        worst = std::max(worst, max_coefficient_deviation(mdp(t), testing::interpolate(xs, ys)));
      }
  return {worst <= 1e-11, fmt("max deviation %.2e", worst)};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "expected-mdp identity", 60.0, expected_mdp},
      {2, "derivative identity", 0.0, derivative_identity},
      {3, "scaling identity", 0.0, scaling_identity},
      {4, "shrink transfer", 0.0, shrink_transfer},
      {5, "monotonicity", 0.0, monotonicity},
      {6, "root bound and paving chain", 0.0, root_bound},
      {7, "greedy monotone trace", 0.0, greedy_trace},
      {8, "mdp-mcp bridge", 0.0, bridge},
      {9, "restricted invertibility pipeline", 300.0, restricted_pipeline},
      {10, "commutator decomposition", 120.0, commutator},
      {11, "tightness", 0.0, tightness},
      {12, "matching identity", 0.0, matching_identity},
      {13, "oracle equivalence", 0.0, oracle_equivalence},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.time_limit_s > 0.0 && secs >= c.time_limit_s) {
      out.pass = false;
      out.detail += fmt(" (over time limit %.0fs)", c.time_limit_s);
    }
    std::printf("criterion %2d %-36s %s  %s [%.2fs]\n", c.id, c.name.c_str(), out.pass ? "PASS" : "FAIL",
                out.detail.c_str(), secs);
    std::fflush(stdout);
    if (!out.pass) ++failed;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed;
}
