#include "json_io.hpp"

#include <cmath>
#include <cstdio>

#include "mixdet/error.hpp"

namespace mixdet::cli {

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Json number(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

Json numbers(const std::vector<double>& xs) {
  Json out = Json::array();
  for (double x : xs) out.push_back(number(x));
  return out;
}

namespace {

std::size_t size_field(const Json& j, const char* key, const char* what) {
  if (!j.is_object() || !j.contains(key) || !j[key].is_number_integer() || j[key].get<long long>() < 0) {
    throw ValidationError(std::string(what) + ": missing or invalid \"" + key + "\"");
  }
  return j[key].get<std::size_t>();
}

double real_field(const Json& j, const char* what) {
  if (!j.is_number()) throw ValidationError(std::string(what) + ": entry is not a number");
  return j.get<double>();
}

}  // namespace

ComplexMatrix matrix_from_json(const Json& j) {
  const std::size_t n = size_field(j, "n", "matrix");
  if (!j.contains("entries") || !j["entries"].is_array() || j["entries"].size() != n) {
    throw ValidationError("matrix: \"entries\" must hold n rows");
  }
  ComplexMatrix a(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Json& row = j["entries"][i];
    if (!row.is_array() || row.size() != n) throw ValidationError("matrix: every row must hold n entries");
    for (std::size_t c = 0; c < n; ++c) {
      const Json& e = row[c];
      if (e.is_array()) {
        if (e.size() != 2) throw ValidationError("matrix: complex entries are [re, im]");
        a(i, c) = Complex(real_field(e[0], "matrix"), real_field(e[1], "matrix"));
      } else {
        a(i, c) = real_field(e, "matrix");
      }
    }
  }
  if (!a.all_finite()) throw ValidationError("matrix: non-finite entry");
  return a;
}

Json complex_to_json(Complex z) { return Json::array({number(z.real()), number(z.imag())}); }

Json matrix_to_json(const ComplexMatrix& a) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t c = 0; c < a.cols(); ++c) row.push_back(complex_to_json(a(i, c)));
    rows.push_back(std::move(row));
  }
  Json out{{"n", a.rows()}, {"entries", std::move(rows)}};
  if (!a.is_square()) out["cols"] = a.cols();
  return out;
}

HermitianTuple tuple_from_json(const Json& j, double hermitian_tol) {
  const std::size_t k = size_field(j, "k", "tuple");
  const std::size_t n = size_field(j, "n", "tuple");
  if (!j.contains("matrices") || !j["matrices"].is_array() || j["matrices"].size() != k || k == 0) {
    throw ValidationError("tuple: \"matrices\" must hold k >= 1 matrices");
  }
  std::vector<ComplexMatrix> ms;
  for (std::size_t i = 0; i < k; ++i) {
    ComplexMatrix a = matrix_from_json(j["matrices"][i]);
    if (a.rows() != n) throw ValidationError("tuple: matrix " + std::to_string(i + 1) + " is not n x n");
    if (!is_hermitian(a, hermitian_tol)) {
      throw ValidationError("tuple: matrix " + std::to_string(i + 1) + " is not Hermitian");
    }
    ms.push_back((a + a.adjoint()) * Complex(0.5));
  }
  return HermitianTuple(std::move(ms));
}

SimpleGraph graph_from_json(const Json& j) {
  const std::size_t n = size_field(j, "n", "graph");
  if (!j.contains("edges") || !j["edges"].is_array()) throw ValidationError("graph: \"edges\" must be an array");
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (const Json& e : j["edges"]) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer()) {
      throw ValidationError("graph: edges are [u, v] pairs of integers");
    }
    const long long u = e[0].get<long long>();
    const long long v = e[1].get<long long>();
    if (u < 1 || v < 1) throw ValidationError("graph: vertices are numbered from 1");
    edges.emplace_back(static_cast<std::size_t>(u - 1), static_cast<std::size_t>(v - 1));
  }
  return SimpleGraph(n, std::move(edges));
}

Json polynomial_to_json(const RealPolynomial& p) { return numbers(p.coeffs()); }

Json indices_to_json(const IndexSet& s) {
  Json out = Json::array();
  for (std::size_t i : s) out.push_back(i + 1);
  return out;
}

Json blocks_to_json(const Assignment& a) {
  Json out = Json::array();
  for (const auto& b : a.blocks()) out.push_back(indices_to_json(b));
  return out;
}

namespace {

Json optional_number(const std::optional<double>& x) { return x ? number(*x) : Json(nullptr); }

}  // namespace

Json paving_report_to_json(const PavingReport& r) {
  Json per_block = Json::array();
  for (const auto& row : r.per_block_per_matrix_lambda_max) per_block.push_back(numbers(row));
  return Json{
      {"n", r.n},
      {"k", r.k},
      {"r", r.r},
      {"blocks", blocks_to_json(r.paving)},
      {"per_block_per_matrix_lambda_max", std::move(per_block)},
      {"block_mdp_roots", numbers(r.block_mdp_roots)},
      {"greedy_root_trace", numbers(r.greedy_root_trace)},
      {"expected_poly_root", number(r.expected_poly_root)},
      {"greedy_root", number(r.greedy_root)},
      {"rootbound", optional_number(r.rootbound)},
      {"analytic_bound", optional_number(r.analytic)},
      {"epsilon", optional_number(r.epsilon)},
      {"block_norms", numbers(r.block_norms)},
      {"tolerance_relaxed", r.tolerance_relaxed},
  };
}

Json selection_report_to_json(const SelectionReport& r) {
  return Json{
      {"n", r.n},
      {"k", r.k},
      {"keep", r.keep},
      {"sigma", indices_to_json(r.kept)},
      {"deletion_order", indices_to_json(r.deletion_order)},
      {"per_matrix_lambda_max", numbers(r.per_matrix_lambda_max)},
      {"certified_root_bound", number(r.certified_root_bound)},
      {"root_trace", numbers(r.root_trace)},
      {"final_root", number(r.final_root)},
      {"theorem_bound", optional_number(r.theorem_bound)},
      {"c", number(r.c)},
      {"alpha", number(r.alpha)},
      {"shrink_bound", optional_number(r.shrink_bound)},
      {"degenerate", r.degenerate},
      {"tolerance_relaxed", r.tolerance_relaxed},
  };
}

Json commutator_result_to_json(const CommutatorResult& r, const CommutatorNormReport& norms) {
  Json spectrum = Json::array();
  for (Complex z : r.b_spectrum) spectrum.push_back(complex_to_json(z));
  Json levels = Json::array();
  for (const auto& level : r.trace) {
    Json squares = Json::array();
    for (const auto& s : level.squares)
      squares.push_back(Json{{"center", complex_to_json(s.center)}, {"half_side", number(s.half_side)}});
    levels.push_back(Json{
        {"depth", level.depth},
        {"m", level.m},
        {"r", level.r},
        {"tiles", level.tiles},
        {"mode", level.mode},
        {"block_sizes", level.block_sizes},
        {"block_norms", numbers(level.block_norms)},
        {"squares", std::move(squares)},
        {"min_margin", number(level.min_margin)},
        {"norm_c", number(level.norm_c)},
    });
  }
  return Json{
      {"b", matrix_to_json(r.b)},
      {"c", matrix_to_json(r.c)},
      {"b_spectrum", std::move(spectrum)},
      {"unitary", matrix_to_json(r.unitary)},
      {"residual", number(r.residual)},
      {"norm_a", number(r.norm_a)},
      {"norm_b", number(r.norm_b)},
      {"norm_c", number(r.norm_c)},
      {"product_norm", number(norms.product_norm)},
      {"norm_bound", number(norms.paper_bound)},
      {"levels", std::move(levels)},
  };
}

}  // namespace mixdet::cli
