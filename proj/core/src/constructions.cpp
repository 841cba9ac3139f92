#include "mixdet/constructions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <string>
#include <utility>

#include "mixdet/error.hpp"
#include "mixdet/mdp.hpp"

namespace mixdet {

ComplexMatrix fourier_matrix(std::size_t m) {
  if (m == 0) throw ValidationError("fourier_matrix: m must be positive");
  ComplexMatrix f(m);
  const double norm = 1.0 / std::sqrt(static_cast<double>(m));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      const double angle = 2.0 * std::numbers::pi * static_cast<double>((i * j) % m) / static_cast<double>(m);
      f(i, j) = std::polar(norm, angle);
    }
  return f;
}

ComplexMatrix cyclic_shift(std::size_t k) {
  if (k == 0) throw ValidationError("cyclic_shift: k must be positive");
  ComplexMatrix u(k);
  for (std::size_t j = 0; j < k; ++j) u((j + k - 1) % k, j) = 1.0;
  return u;
}

namespace {

bool is_prime(std::size_t q) {
  if (q < 2) return false;
  for (std::size_t d = 2; d * d <= q; ++d)
    if (q % d == 0) return false;
  return true;
}

int legendre(std::size_t a, std::size_t q) {
  a %= q;
  if (a == 0) return 0;
  std::size_t result = 1;
  std::size_t base = a;
  std::size_t e = (q - 1) / 2;
  while (e > 0) {
    if (e & 1U) result = result * base % q;
    base = base * base % q;
    e >>= 1U;
  }
  return result == 1 ? 1 : -1;
}

ComplexMatrix matrix_power(const ComplexMatrix& a, std::size_t e) {
  ComplexMatrix out = ComplexMatrix::identity(a.dim());
  for (std::size_t i = 0; i < e; ++i) out = out * a;
  return out;
}

}  // namespace

ComplexMatrix paley_conference_matrix(std::size_t m) {
  if (m < 2) throw ValidationError("paley_conference_matrix: unsupported m = " + std::to_string(m));
  const std::size_t q = m - 1;
  if (q % 4 != 1 || !is_prime(q)) {
    throw ValidationError("paley_conference_matrix: unsupported m = " + std::to_string(m) +
                          " (needs m - 1 prime and 1 mod 4)");
  }
  ComplexMatrix c(m);
  for (std::size_t j = 1; j < m; ++j) {
    c(0, j) = 1.0;
    c(j, 0) = 1.0;
  }
  for (std::size_t a = 0; a < q; ++a)
    for (std::size_t b = 0; b < q; ++b) c(a + 1, b + 1) = static_cast<double>(legendre(b + q - a, q));
  return c;
}

TightnessTuple tightness_tuple(std::size_t k, double epsilon) {
  if (k == 0) throw ValidationError("tightness_tuple: k must be positive");
  if (!(epsilon > 0.0 && epsilon <= 1.0)) throw ValidationError("tightness_tuple: epsilon must be in (0, 1]");
  TightnessTuple out;
  out.k = k;
  out.m = static_cast<std::size_t>(std::floor(1.0 / (epsilon * epsilon) * (1.0 + 1e-12)));
  const ComplexMatrix conference = paley_conference_matrix(out.m);
  const ComplexMatrix f = fourier_matrix(out.m);
  const ComplexMatrix u = cyclic_shift(k);
  for (std::size_t j = 1; j < k; ++j) out.matrices.push_back(kronecker(matrix_power(u, j), f));
  out.matrices.push_back(kronecker(ComplexMatrix::identity(k), conference) *
                         Complex(1.0 / std::sqrt(static_cast<double>(out.m - 1))));
  return out;
}

SingletonNecessity verify_singleton_necessity(const std::vector<ComplexMatrix>& tuple, double epsilon) {
  if (tuple.empty()) throw ValidationError("verify_singleton_necessity: empty tuple");
  const std::size_t n = tuple.front().dim();
  for (const auto& a : tuple)
    if (a.dim() != n) throw ValidationError("verify_singleton_necessity: dimension mismatch");
  SingletonNecessity out;
  out.holds = true;
  out.min_pair_norm = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t t = s + 1; t < n; ++t) {
      double best = 0.0;
      for (const auto& a : tuple) best = std::max(best, operator_norm(principal_submatrix(a, {s, t})));
      out.min_pair_norm = std::min(out.min_pair_norm, best);
      if (best < epsilon && out.holds) {
        out.holds = false;
        out.witness = std::make_pair(s, t);
      }
    }
  if (n < 2) out.min_pair_norm = 0.0;
  return out;
}

SimpleGraph::SimpleGraph(std::size_t vertices, std::vector<std::pair<std::size_t, std::size_t>> edges)
    : vertices_(vertices) {
  for (auto [u, v] : edges) {
    if (u >= vertices || v >= vertices) throw ValidationError("SimpleGraph: endpoint out of range");
    if (u == v) throw ValidationError("SimpleGraph: loops are not allowed");
    const auto e = std::minmax(u, v);
    for (const auto& f : edges_)
      if (f == std::pair<std::size_t, std::size_t>(e.first, e.second)) {
        throw ValidationError("SimpleGraph: duplicate edge");
      }
    edges_.emplace_back(e.first, e.second);
  }
}

SimpleGraph SimpleGraph::cycle(std::size_t n) {
  if (n < 3) throw ValidationError("SimpleGraph::cycle: n must be at least 3");
  std::vector<std::pair<std::size_t, std::size_t>> e;
  for (std::size_t i = 0; i < n; ++i) e.emplace_back(i, (i + 1) % n);
  return SimpleGraph(n, std::move(e));
}

SimpleGraph SimpleGraph::path(std::size_t n) {
  std::vector<std::pair<std::size_t, std::size_t>> e;
  for (std::size_t i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return SimpleGraph(n, std::move(e));
}

std::optional<std::size_t> SimpleGraph::regular_degree() const {
  std::vector<std::size_t> deg(vertices_, 0);
  for (auto [u, v] : edges_) {
    ++deg[u];
    ++deg[v];
  }
  if (deg.empty()) return std::nullopt;
  for (std::size_t d : deg)
    if (d != deg.front()) return std::nullopt;
  return deg.front();
}

ComplexMatrix SimpleGraph::signed_adjacency(const std::vector<int>& signs) const {
  if (!signs.empty() && signs.size() != edges_.size()) {
    throw ValidationError("signed_adjacency: one sign per edge required");
  }
  ComplexMatrix a(vertices_);
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    const double s = signs.empty() ? 1.0 : static_cast<double>(signs[e]);
    a(edges_[e].first, edges_[e].second) = s;
    a(edges_[e].second, edges_[e].first) = s;
  }
  return a;
}

RealPolynomial matching_polynomial(const SimpleGraph& g) {
  if (g.vertices() > 64) throw ValidationError("matching_polynomial: more than 64 vertices");
  const auto& edges = g.edges();
  std::map<std::pair<std::uint64_t, std::size_t>, RealPolynomial> memo;
  // m(alive, i) over edges i, i+1, ... with both endpoints alive:
  // m_G = m_{G - e} - m_{G - u - v}.
  auto rec = [&](auto&& self, std::uint64_t alive, std::size_t i) -> RealPolynomial {
    while (i < edges.size() &&
           !((alive >> edges[i].first & 1U) && (alive >> edges[i].second & 1U))) {
      ++i;
    }
    if (i == edges.size()) return RealPolynomial::monomial(static_cast<std::size_t>(__builtin_popcountll(alive)));
    const auto key = std::make_pair(alive, i);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    const std::uint64_t removed = alive & ~(std::uint64_t{1} << edges[i].first) & ~(std::uint64_t{1} << edges[i].second);
    RealPolynomial out = self(self, alive, i + 1) - self(self, removed, i + 1);
    memo.emplace(key, out);
    return out;
  };
  const std::uint64_t all = g.vertices() == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << g.vertices()) - 1;
  return rec(rec, all, 0);
}

SignedIdentityReport signed_mdp_identity_check(const SimpleGraph& g, const EnumerationBudget& budget) {
  const std::size_t n = g.vertices();
  const std::size_t e = g.edges().size();
  budget.require(EnumerationBudget::mul(EnumerationBudget::power(2, e), EnumerationBudget::power(2, n)),
                 "signed_mdp_identity_check");
  SignedIdentityReport out;
  const auto regular = g.regular_degree();
  double best_spread = std::numeric_limits<double>::infinity();
  RealPolynomial sum;
  const std::uint64_t signings = std::uint64_t{1} << e;
  for (std::uint64_t s = 0; s < signings; ++s) {
    std::vector<int> signs(e);
    for (std::size_t i = 0; i < e; ++i) signs[i] = (s >> i & 1U) ? -1 : 1;
    const ComplexMatrix a = g.signed_adjacency(signs);
    const std::vector<ComplexMatrix> pair{a, -a};
    sum += mdp(std::span<const ComplexMatrix>(pair), budget);
    if (regular && n > 0) {
      const auto ev = hermitian_eigenvalues(HermitianMatrix(a));
      best_spread = std::min(best_spread, std::max(ev.back(), -ev.front()));
    }
  }
  out.lhs = sum * (1.0 / static_cast<double>(signings));
  out.normalization = std::pow(2.0, static_cast<double>(n) / 2.0);
  out.rhs = scale_argument(matching_polynomial(g), std::sqrt(2.0), false) * (1.0 / out.normalization);
  out.deviation = max_coefficient_deviation(out.lhs, out.rhs);
  if (regular && n > 0) {
    out.best_signing_spread = best_spread;
    if (*regular >= 2) out.spread_bound = 2.0 * std::sqrt(2.0) * std::sqrt(static_cast<double>(*regular - 1));
  }
  return out;
}

}  // namespace mixdet
