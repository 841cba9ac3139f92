#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "mixdet/commutator.hpp"
#include "mixdet/constructions.hpp"
#include "mixdet/linalg.hpp"
#include "mixdet/mdp.hpp"
#include "mixdet/polynomial.hpp"
#include "mixdet/selection.hpp"

namespace mixdet::cli {

using Json = nlohmann::json;

std::uint64_t fnv1a(std::string_view bytes);
std::string hex64(std::uint64_t h);

/// Finite doubles as numbers, anything else as null.
Json number(double x);
Json numbers(const std::vector<double>& xs);

/// {"n": n, "entries": [[[re, im], ...], ...]}. Entries may also be plain
/// real numbers. Throws ValidationError on malformed input.
ComplexMatrix matrix_from_json(const Json& j);
Json matrix_to_json(const ComplexMatrix& a);

/// {"k": k, "n": n, "matrices": [...]}. Every member must be Hermitian to
/// within `hermitian_tol` (relative); it is then symmetrized.
HermitianTuple tuple_from_json(const Json& j, double hermitian_tol);

/// {"n": n, "edges": [[u, v], ...]} with 1-based vertices.
SimpleGraph graph_from_json(const Json& j);

Json polynomial_to_json(const RealPolynomial& p);
/// 0-based index set to a 1-based list.
Json indices_to_json(const IndexSet& s);
Json blocks_to_json(const Assignment& a);
Json complex_to_json(Complex z);

Json paving_report_to_json(const PavingReport& r);
Json selection_report_to_json(const SelectionReport& r);
Json commutator_result_to_json(const CommutatorResult& r, const CommutatorNormReport& norms);

}  // namespace mixdet::cli
