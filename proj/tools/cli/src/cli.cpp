#include "mixdet_cli/cli.hpp"

#include <cmath>
#include <fstream>
#include <iterator>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json_io.hpp"
#include "mixdet/error.hpp"
#include "verify.hpp"

namespace mixdet::cli {

namespace {

struct RunConfig {
  std::uint64_t budget = EnumerationBudget::kDefaultMaxTerms;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  double tol_root = 1e-9;
  double tol_hermitian = 1e-12;
  double tol_residual = 1e-8;
  std::string out;

  std::optional<double> epsilon;
  std::optional<std::size_t> r;
  std::optional<std::size_t> base_threshold;
  std::optional<std::size_t> m;
  std::optional<std::size_t> k;
  std::string input;
  std::string suite;

  Json to_json() const {
    Json j{{"budget", budget},           {"seed", seed},
           {"threads", threads},         {"tol_root", tol_root},
           {"tol_hermitian", tol_hermitian}, {"tol_residual", tol_residual}};
    if (epsilon) j["epsilon"] = *epsilon;
    if (r) j["r"] = *r;
    if (base_threshold) j["base_threshold"] = *base_threshold;
    if (m) j["m"] = *m;
    if (k) j["k"] = *k;
    return j;
  }

  EnumerationBudget enumeration_budget() const { return EnumerationBudget{budget}; }

  SelectionOptions selection() const {
    SelectionOptions o;
    o.budget = enumeration_budget();
    o.root_tol = tol_root;
    o.relaxed_root_tol = std::max(o.relaxed_root_tol, tol_root);
    o.threads = threads;
    return o;
  }
};

/// Raw bytes of the input file plus the parsed document.
struct Input {
  std::string bytes;
  Json doc;
};

Input read_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read input file '" + path + "'");
  Input out;
  out.bytes.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  try {
    out.doc = Json::parse(out.bytes);
  } catch (const Json::parse_error& e) {
    throw ValidationError("input is not valid JSON: " + std::string(e.what()));
  }
  return out;
}

class Reporter {
 public:
  Reporter(const RunConfig& cfg, std::ostream& out) : cfg_(cfg), out_(out) {}

  /// Emits {"command", "config", "hashes", "status", "result"}.
  void emit(const std::string& command, const std::optional<std::string>& input_bytes, Json result,
            const std::string& status) {
    const Json config = cfg_.to_json();
    Json doc{{"command", command},
             {"config", config},
             {"hashes",
              {{"input", input_bytes ? Json(hex64(fnv1a(*input_bytes))) : Json(nullptr)},
               {"config", hex64(fnv1a(config.dump()))}}},
             {"status", status},
             {"result", std::move(result)}};
    const std::string text = doc.dump(2) + "\n";
    if (cfg_.out.empty()) {
      out_ << text;
    } else {
      std::ofstream f(cfg_.out, std::ios::binary);
      if (!f) throw ValidationError("cannot write output file '" + cfg_.out + "'");
      f << text;
    }
  }

 private:
  const RunConfig& cfg_;
  std::ostream& out_;
};

int cmd_multipave(const RunConfig& cfg, Reporter& rep) {
  const Input in = read_input(cfg.input);
  const HermitianTuple tuple = tuple_from_json(in.doc, cfg.tol_hermitian);
  if (cfg.epsilon.has_value() == cfg.r.has_value()) throw ValidationError("multipave: give exactly one of --epsilon and --r");
  const PavingReport report =
      cfg.r ? multipave_with_blocks(tuple, *cfg.r, cfg.selection()) : multipave(tuple, *cfg.epsilon, cfg.selection());
  rep.emit("multipave", in.bytes, paving_report_to_json(report), "ok");
  return kOk;
}

int cmd_pave2sided(const RunConfig& cfg, Reporter& rep) {
  const Input in = read_input(cfg.input);
  const ComplexMatrix a = matrix_from_json(in.doc);
  if (cfg.epsilon.has_value() == cfg.r.has_value()) throw ValidationError("pave2sided: give exactly one of --epsilon and --r");
  std::size_t r = 0;
  if (cfg.r) {
    r = *cfg.r;
  } else {
    if (!(*cfg.epsilon > 0.0)) throw ValidationError("pave2sided: epsilon must be positive");
    // 12 sqrt(2) / sqrt(r) <= eps.
    r = static_cast<std::size_t>(std::ceil(288.0 / (*cfg.epsilon * *cfg.epsilon) * (1.0 - 1e-12)));
  }
  const PavingReport report = two_sided_pave(a, r, cfg.selection());
  Json result = paving_report_to_json(report);
  result["balanced_blocks"] = blocks_to_json(balance_blocks(report.paving, r, a.dim()));
  rep.emit("pave2sided", in.bytes, std::move(result), "ok");
  return kOk;
}

int cmd_restrict(const RunConfig& cfg, Reporter& rep) {
  const Input in = read_input(cfg.input);
  const HermitianTuple tuple = tuple_from_json(in.doc, cfg.tol_hermitian);
  if (!cfg.epsilon) throw ValidationError("restrict: --epsilon is required");
  const SelectionReport report = joint_restricted_invertibility(tuple, *cfg.epsilon, cfg.selection());
  rep.emit("restrict", in.bytes, selection_report_to_json(report), "ok");
  return kOk;
}

int cmd_commutator(const RunConfig& cfg, Reporter& rep) {
  const Input in = read_input(cfg.input);
  const ComplexMatrix a = matrix_from_json(in.doc);
  CommutatorOptions opts;
  if (cfg.base_threshold) opts.base_threshold = *cfg.base_threshold;
  opts.fixed_r = cfg.r;
  opts.budget = cfg.enumeration_budget();
  const CommutatorResult res = recursive_commutator(a, opts);
  const CommutatorNormReport norms = commutator_norm_report(res, a.dim());
  bool ok = res.residual <= cfg.tol_residual * std::max(1.0, res.norm_a);
  for (Complex z : res.b_spectrum) ok = ok && SpectralSquare::root().contains(z, 1e-12);
  ok = ok && norms.product_norm <= norms.paper_bound * std::max(res.norm_a, 1e-300) * (1.0 + 1e-12);
  rep.emit("commutator", in.bytes, commutator_result_to_json(res, norms), ok ? "ok" : "bound_violation");
  return ok ? kOk : kBoundViolation;
}

int cmd_fourier(const RunConfig& cfg, Reporter& rep) {
  rep.emit("construct fourier", std::nullopt, matrix_to_json(fourier_matrix(cfg.m.value_or(0))), "ok");
  return kOk;
}

int cmd_conference(const RunConfig& cfg, Reporter& rep) {
  rep.emit("construct conference", std::nullopt, matrix_to_json(paley_conference_matrix(cfg.m.value_or(0))), "ok");
  return kOk;
}

int cmd_tightness(const RunConfig& cfg, Reporter& rep) {
  if (!cfg.epsilon) throw ValidationError("tightness: --epsilon is required");
  const TightnessTuple t = tightness_tuple(cfg.k.value_or(1), *cfg.epsilon);
  const SingletonNecessity nec = verify_singleton_necessity(t.matrices, *cfg.epsilon);
  Json matrices = Json::array();
  for (const auto& a : t.matrices) matrices.push_back(matrix_to_json(a));
  Json witness = nullptr;
  if (nec.witness) witness = Json::array({nec.witness->first + 1, nec.witness->second + 1});
  Json result{{"k", t.k},
              {"m", t.m},
              {"n", t.k * t.m},
              {"matrices", std::move(matrices)},
              {"singleton_necessity",
               {{"holds", nec.holds}, {"witness", witness}, {"min_pair_norm", number(nec.min_pair_norm)}}},
              {"minimum_blocks", nec.holds ? Json(t.k * t.m) : Json(nullptr)}};
  rep.emit("construct tightness", std::nullopt, std::move(result), "ok");
  return kOk;
}

int cmd_graph_identity(const RunConfig& cfg, Reporter& rep) {
  const Input in = read_input(cfg.input);
  const SimpleGraph g = graph_from_json(in.doc);
  const SignedIdentityReport r = signed_mdp_identity_check(g, cfg.enumeration_budget());
  const double deviation = max_coefficient_deviation(r.lhs.monic(), r.rhs.monic());
  Json result{{"lhs", polynomial_to_json(r.lhs)},
              {"rhs", polynomial_to_json(r.rhs)},
              {"matching_polynomial", polynomial_to_json(matching_polynomial(g))},
              {"normalization", number(r.normalization)},
              {"deviation", number(deviation)},
              {"best_signing_spread", r.best_signing_spread ? number(*r.best_signing_spread) : Json(nullptr)},
              {"spread_bound", r.spread_bound ? number(*r.spread_bound) : Json(nullptr)}};
  const bool ok = deviation <= 1e-10;
  rep.emit("construct graph-identity", in.bytes, std::move(result), ok ? "ok" : "bound_violation");
  return ok ? kOk : kBoundViolation;
}

int cmd_verify(const RunConfig& cfg, Reporter& rep, std::ostream& err) {
  std::vector<std::string> names;
  if (cfg.suite == "all") {
    names = suite_names();
  } else {
    names = {cfg.suite};
  }
  VerifyConfig vc{cfg.seed, cfg.enumeration_budget(), cfg.threads};
  Json suites = Json::array();
  bool all = true;
  for (const auto& name : names) {
    const auto res = run_suite(name, vc);
    if (!res) {
      err << "mixdet: unknown suite '" << name << "'; known suites: all";
      for (const auto& n : suite_names()) err << ", " << n;
      err << "\n";
      return kUsage;
    }
    all = all && res->pass;
    suites.push_back(Json{{"name", res->name},
                          {"pass", res->pass},
                          {"max_deviation", number(res->max_deviation)},
                          {"tolerance", number(res->tolerance)},
                          {"instances", res->instances}});
  }
  rep.emit("verify " + cfg.suite, std::nullopt, Json{{"suites", std::move(suites)}, {"all_pass", all}},
           all ? "ok" : "bound_violation");
  return all ? kOk : kBoundViolation;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Mixed determinantal polynomials, joint pavings and commutator decompositions"};
  app.name("mixdet");
  app.require_subcommand(1);
  app.fallthrough();

  app.add_option("--budget", cfg.budget, "Maximum terms for any exhaustive enumeration")->check(CLI::PositiveNumber);
  app.add_option("--seed", cfg.seed, "Seed for randomized verification suites");
  app.add_option("--threads", cfg.threads, "Worker threads for enumeration loops")->check(CLI::Range(1U, 256U));
  app.add_option("--tol-root", cfg.tol_root, "Allowed increase of a greedy root per step")->check(CLI::PositiveNumber);
  app.add_option("--tol-hermitian", cfg.tol_hermitian, "Relative Hermiticity tolerance for inputs")
      ->check(CLI::PositiveNumber);
  app.add_option("--tol-residual", cfg.tol_residual, "Relative residual tolerance for commutators")
      ->check(CLI::PositiveNumber);
  app.add_option("--out", cfg.out, "Write the report here instead of standard output");

  std::function<int()> action;
  Reporter rep(cfg, out);
  auto on = [&](CLI::App* sub, std::function<int()> fn) { sub->callback([&action, fn] { action = fn; }); };

  auto* multipave_cmd = app.add_subcommand("multipave", "Joint one-sided paving of a tuple");
  multipave_cmd->add_option("input", cfg.input, "Tuple JSON file")->required();
  multipave_cmd->add_option("--epsilon", cfg.epsilon, "Target accuracy; r = ceil(18k/eps^2)");
  multipave_cmd->add_option("--r", cfg.r, "Explicit number of blocks (verification mode)");
  on(multipave_cmd, [&] { return cmd_multipave(cfg, rep); });

  auto* pave2_cmd = app.add_subcommand("pave2sided", "Two-sided paving of a zero-diagonal contraction");
  pave2_cmd->add_option("input", cfg.input, "Matrix JSON file")->required();
  pave2_cmd->add_option("--epsilon", cfg.epsilon, "Target block norm; r = ceil(288/eps^2)");
  pave2_cmd->add_option("--r", cfg.r, "Explicit number of blocks");
  on(pave2_cmd, [&] { return cmd_pave2sided(cfg, rep); });

  auto* restrict_cmd = app.add_subcommand("restrict", "Joint restricted invertibility");
  restrict_cmd->add_option("input", cfg.input, "Tuple JSON file")->required();
  restrict_cmd->add_option("--epsilon", cfg.epsilon, "Target bound, 0 < eps < 1")->required();
  on(restrict_cmd, [&] { return cmd_restrict(cfg, rep); });

  auto* comm_cmd = app.add_subcommand("commutator", "Write a zero-trace matrix as a commutator [B, C]");
  comm_cmd->add_option("input", cfg.input, "Matrix JSON file")->required();
  comm_cmd->add_option("--base-threshold", cfg.base_threshold, "Solve directly at or below this size");
  comm_cmd->add_option("--r", cfg.r, "Fixed paving parameter (2r must be a perfect square)");
  on(comm_cmd, [&] { return cmd_commutator(cfg, rep); });

  auto* construct_cmd = app.add_subcommand("construct", "Explicit constructions");
  construct_cmd->require_subcommand(1);
  auto* fourier_cmd = construct_cmd->add_subcommand("fourier", "Unitary Fourier matrix F_m");
  fourier_cmd->add_option("--m", cfg.m, "Order")->required();
  on(fourier_cmd, [&] { return cmd_fourier(cfg, rep); });
  auto* conference_cmd = construct_cmd->add_subcommand("conference", "Paley conference matrix C_m");
  conference_cmd->add_option("--m", cfg.m, "Order (m - 1 prime, 1 mod 4)")->required();
  on(conference_cmd, [&] { return cmd_conference(cfg, rep); });
  auto* tight_cmd = construct_cmd->add_subcommand("tightness", "Tuple needing k floor(eps^-2) blocks");
  tight_cmd->add_option("--k", cfg.k, "Tuple length")->required();
  tight_cmd->add_option("--epsilon", cfg.epsilon, "Accuracy")->required();
  on(tight_cmd, [&] { return cmd_tightness(cfg, rep); });
  auto* graph_cmd = construct_cmd->add_subcommand("graph-identity", "Signed adjacency versus matching polynomial");
  graph_cmd->add_option("input", cfg.input, "Graph JSON file")->required();
  on(graph_cmd, [&] { return cmd_graph_identity(cfg, rep); });

  auto* verify_cmd = app.add_subcommand("verify", "Run identity suites on random instances");
  verify_cmd->add_option("suite", cfg.suite, "Suite name or 'all'")->required();
  on(verify_cmd, [&] { return cmd_verify(cfg, rep, err); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    return action();
  } catch (const ValidationError& e) {
    err << "mixdet: validation error: " << e.what() << "\n";
    return kValidation;
  } catch (const BudgetExceeded& e) {
    err << "mixdet: budget exceeded: " << e.what() << "\n";
    return kBudget;
  } catch (const BoundViolation& e) {
    err << "mixdet: bound violation: " << e.what() << "\n";
    return kBoundViolation;
  } catch (const NotRealRooted& e) {
    err << "mixdet: not real-rooted: " << e.what() << "\n";
    return kBoundViolation;
  } catch (const NumericalError& e) {
    err << "mixdet: numerical failure: " << e.what() << "\n";
    return kBoundViolation;
  } catch (const std::exception& e) {
    err << "mixdet: " << e.what() << "\n";
    return kUsage;
  }
}

}  // namespace mixdet::cli
