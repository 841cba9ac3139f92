#include "verify.hpp"

#include "json_io.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <random>

#include "mixdet/constructions.hpp"
#include "mixdet/linalg.hpp"
#include "mixdet/mdp.hpp"
#include "mixdet/selection.hpp"

namespace mixdet::cli {

namespace {

using Rng = std::mt19937_64;

std::size_t pick(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

ComplexMatrix zero_diagonal(std::size_t n, Rng& rng, double scale) {
  std::normal_distribution<double> g;
  ComplexMatrix a(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      a(i, j) = Complex(g(rng), g(rng));
      a(j, i) = std::conj(a(i, j));
    }
  const double norm = operator_norm(a);
  if (norm > 0.0) a *= Complex(scale / norm);
  return a;
}

HermitianTuple zero_diagonal_tuple(std::size_t n, std::size_t k, Rng& rng) {
  std::uniform_real_distribution<double> u(0.3, 1.0);
  std::vector<ComplexMatrix> ms;
  for (std::size_t i = 0; i < k; ++i) ms.push_back(zero_diagonal(n, rng, u(rng)));
  return HermitianTuple(ms);
}

ComplexMatrix psd(std::size_t n, Rng& rng) {
  std::normal_distribution<double> g;
  ComplexMatrix f(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) f(i, j) = Complex(g(rng), g(rng));
  ComplexMatrix p = f * f.adjoint();
  p *= Complex(1.0 / std::max(1.0, operator_norm(p)));
  return (p + p.adjoint()) * Complex(0.5);
}

void each_assignment(std::size_t n, std::size_t r, const std::function<void(const std::vector<std::size_t>&)>& fn) {
  std::vector<std::size_t> parts(n, 0);
  while (true) {
    fn(parts);
    std::size_t i = 0;
    while (i < n && ++parts[i] == r) parts[i++] = 0;
    if (i == n) return;
  }
}

using Suite = std::function<SuiteResult(Rng&, const VerifyConfig&)>;

SuiteResult expected_mdp(Rng& rng, const VerifyConfig& cfg) {
  SuiteResult out{"expected-mdp", false, 0.0, 1e-10, 0};
  for (int t = 0; t < 12; ++t) {
    const std::size_t n = t == 0 ? 4 : pick(rng, 1, 5);
    const std::size_t k = t == 0 ? 2 : pick(rng, 1, 2);
    const std::size_t r = t == 0 ? 2 : pick(rng, 1, 3);
    const HermitianTuple tuple = zero_diagonal_tuple(n, k, rng);
    RealPolynomial avg;
    each_assignment(n, r, [&](const std::vector<std::size_t>& parts) {
      avg += paving_polynomial(tuple, Assignment(r, parts), cfg.budget);
    });
    avg *= std::pow(static_cast<double>(r), -static_cast<double>(n));
    out.max_deviation = std::max(out.max_deviation, max_coefficient_deviation(avg, mdp(tuple.repeated(r), cfg.budget)));
    ++out.instances;
  }
  out.pass = out.max_deviation <= out.tolerance;
  return out;
}

SuiteResult derivative(Rng& rng, const VerifyConfig& cfg) {
  SuiteResult out{"derivative", false, 0.0, 1e-10, 0};
  for (int t = 0; t < 12; ++t) {
    const std::size_t n = pick(rng, 1, 6);
    const HermitianTuple tuple = zero_diagonal_tuple(n, pick(rng, 1, 2), rng);
    for (std::size_t m = 0; m <= n; ++m)
      out.max_deviation = std::max(out.max_deviation, derivative_identity_check(tuple, m, cfg.budget).deviation);
    ++out.instances;
  }
  out.pass = out.max_deviation <= out.tolerance;
  return out;
}

SuiteResult scaling(Rng& rng, const VerifyConfig& cfg) {
  SuiteResult out{"scaling", false, 0.0, 1e-11, 0};
  for (std::size_t n = 1; n <= 6; ++n)
    for (std::size_t k = 1; k <= 4; ++k) {
      const HermitianMatrix a(zero_diagonal(n, rng, 1.0));
      out.max_deviation = std::max(out.max_deviation, single_matrix_identity_check(a, k, cfg.budget).deviation);
      ++out.instances;
    }
  out.pass = out.max_deviation <= out.tolerance;
  return out;
}

SuiteResult shrink_transfer(Rng& rng, const VerifyConfig& cfg) {
  SuiteResult out{"shrink-transfer", false, -1e300, 1e-8, 0};
  for (int t = 0; t < 30; ++t) {
    const std::size_t k = pick(rng, 1, 3);
    const HermitianTuple tuple = zero_diagonal_tuple(pick(rng, 1, 6), k, rng);
    double top = -1e300;
    for (const auto& a : tuple.matrices()) top = std::max(top, lambda_max(a));
    out.max_deviation = std::max(out.max_deviation, top - static_cast<double>(k) * largest_root(mdp(tuple, cfg.budget)));
    ++out.instances;
  }
  out.pass = out.max_deviation <= out.tolerance;
  return out;
}

SuiteResult monotonicity(Rng& rng, const VerifyConfig& cfg) {
  SuiteResult out{"monotonicity", false, 0.0, 1e-8, 0};
  std::vector<double> grid(20);
  for (std::size_t i = 0; i < grid.size(); ++i) grid[i] = 2.0 * static_cast<double>(i) / 19.0;
  for (int t = 0; t < 8; ++t) {
    const std::size_t n = pick(rng, 2, 5);
    const HermitianTuple a = zero_diagonal_tuple(n, pick(rng, 1, 2), rng);
    const ComplexMatrix b = zero_diagonal(n, rng, 1.0);
    const auto f = monotonicity_experiment(a, HermitianMatrix(b), grid, cfg.budget);
    for (std::size_t i = 1; i < f.size(); ++i) out.max_deviation = std::max(out.max_deviation, f[i - 1] - f[i]);
    const double with_zero = largest_root(mdp(a.appended(ComplexMatrix(n)), cfg.budget));
    const double with_b = largest_root(mdp(a.appended(b), cfg.budget));
    out.max_deviation = std::max(out.max_deviation, with_zero - with_b);
    ++out.instances;
  }
  out.pass = out.max_deviation <= out.tolerance;
  return out;
}

SuiteResult rootbound(Rng& rng, const VerifyConfig& cfg) {
  SuiteResult out{"rootbound", false, -1e300, 1e-8, 0};
  for (int t = 0; t < 30; ++t) {
    const std::size_t k = pick(rng, 2, 4);
    const HermitianTuple tuple = zero_diagonal_tuple(pick(rng, 1, 6), k, rng);
    out.max_deviation = std::max(out.max_deviation, largest_root(mdp(tuple, cfg.budget)) - rootbound_value(k));
    ++out.instances;
  }
  out.pass = out.max_deviation < out.tolerance;
  return out;
}

SuiteResult interlacing(Rng& rng, const VerifyConfig& cfg) {
  SuiteResult out{"interlacing", false, 0.0, 1e-10, 0};
  double worst_rise = -1e300;
  SelectionOptions opts;
  opts.budget = cfg.budget;
  opts.threads = cfg.threads;
  for (int t = 0; t < 6; ++t) {
    const std::size_t n = pick(rng, 2, 6);
    const std::size_t r = pick(rng, 2, 3);
    const HermitianTuple tuple = zero_diagonal_tuple(n, pick(rng, 1, 2), rng);
    const PavingReport rep = greedy_paving(tuple, r, opts);
    for (std::size_t i = 1; i < rep.greedy_root_trace.size(); ++i)
      worst_rise = std::max(worst_rise, rep.greedy_root_trace[i] - rep.greedy_root_trace[i - 1]);
    PartialAssignment node = PartialAssignment::empty(n, r);
    for (std::size_t m = 0; m < n; ++m) {
      out.max_deviation = std::max(out.max_deviation, interlacing_average_check(tuple, node, cfg.budget));
      node = node.extended(rep.paving[m]);
    }
    ++out.instances;
  }
  out.pass = worst_rise <= 1e-9 && out.max_deviation <= out.tolerance;
  return out;
}

SuiteResult bridge(Rng& rng, const VerifyConfig& cfg) {
  SuiteResult out{"bridge", false, 0.0, 1e-9, 0};
  for (int t = 0; t < 10; ++t) {
    const std::size_t n = pick(rng, 1, 4);
    const std::size_t k = pick(rng, 1, 3);
    std::vector<HermitianMatrix> tuple;
    for (std::size_t i = 0; i < k; ++i) tuple.emplace_back(psd(n, rng));
    out.max_deviation = std::max(out.max_deviation, mdp_mcp_bridge_check(tuple, cfg.budget).deviation);
    ++out.instances;
  }
  out.pass = out.max_deviation <= out.tolerance;
  return out;
}

SuiteResult matching(Rng&, const VerifyConfig& cfg) {
  SuiteResult out{"matching", false, 0.0, 1e-10, 0};
  bool spread_ok = true;
  for (const auto& g : {SimpleGraph::path(2), SimpleGraph::path(3), SimpleGraph::cycle(4), SimpleGraph::cycle(5)}) {
    const auto rep = signed_mdp_identity_check(g, cfg.budget);
    out.max_deviation = std::max(out.max_deviation, max_coefficient_deviation(rep.lhs.monic(), rep.rhs.monic()));
    if (rep.best_signing_spread && rep.spread_bound)
      spread_ok = spread_ok && *rep.best_signing_spread <= *rep.spread_bound + 1e-8;
    ++out.instances;
  }
  out.pass = spread_ok && out.max_deviation <= out.tolerance;
  return out;
}

const std::map<std::string, Suite>& registry() {
  static const std::map<std::string, Suite> suites{
      {"expected-mdp", expected_mdp}, {"derivative", derivative}, {"scaling", scaling},
      {"shrink-transfer", shrink_transfer}, {"monotonicity", monotonicity}, {"rootbound", rootbound},
      {"interlacing", interlacing}, {"bridge", bridge}, {"matching", matching},
  };
  return suites;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, suite] : registry()) out.push_back(name);
    return out;
  }();
  return names;
}

std::optional<SuiteResult> run_suite(const std::string& name, const VerifyConfig& config) {
  const auto it = registry().find(name);
  if (it == registry().end()) return std::nullopt;
  // Each suite draws from its own stream so that results do not depend on
  // which other suites ran.
  Rng rng(config.seed ^ fnv1a(name));
  return it->second(rng, config);
}

}  // namespace mixdet::cli
