// Command-line front end: compute, verify, axioms, basis.
// Exit codes: 0 pass, 1 check or computation failure, 2 usage or input error.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "flatf/engine.hpp"
#include "flatf/io.hpp"
#include "flatf/verifier.hpp"

namespace {

using namespace flatf;
using nlohmann::json;

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

template <class... Args>
void log(fmt::format_string<Args...> f, Args&&... args) {
  fmt::print(stderr, "flatf: {}\n", fmt::format(f, std::forward<Args>(args)...));
}

void print_json(const json& j) { std::cout << j.dump(2) << '\n'; }

std::optional<GBasisWithCofactors> load_cached_gb(const std::optional<std::filesystem::path>& dir,
                                                  const ProblemFile& pf) {
  if (!dir) return std::nullopt;
  const auto path = gb_cache_path(*dir, pf.hash());
  if (!std::filesystem::exists(path)) return std::nullopt;
  try {
    auto gb = gb_from_json(read_json(path), pf.problem.variables, jacobian_generators(pf.problem.potential),
                           pf.problem.order);
    log("using cached Gröbner basis {}", path.string());
    return gb;
  } catch (const Error& e) {
    log("ignoring cache file {}: {}", path.string(), e.what());
    return std::nullopt;
  }
}

void store_cached_gb(const std::optional<std::filesystem::path>& dir, const ProblemFile& pf,
                     const GBasisWithCofactors& gb) {
  if (!dir) return;
  const auto path = gb_cache_path(*dir, pf.hash());
  if (std::filesystem::exists(path)) return;
  try {
    write_json(path, gb_to_json(gb, pf.problem.variables));
  } catch (const std::exception& e) {
    log("could not write cache file {}: {}", path.string(), e.what());
  }
}

int cmd_compute(const std::string& problem_path, const std::string& out, std::optional<std::size_t> max_level,
                const std::optional<std::string>& cache_dir, std::size_t threads) {
  const auto t0 = std::chrono::steady_clock::now();
  ProblemFile pf = load_problem(problem_path);
  if (max_level) {
    if (*max_level < 2) throw InputError("--max-level must be at least 2");
    pf.max_level = *max_level;
  }
  const auto dir = resolve_cache_dir(cache_dir, pf);
  auto cached = load_cached_gb(dir, pf);
  const bool had_cache = cached.has_value();
  const JacobianQuotient quotient = JacobianQuotient::build(pf.problem, std::move(cached));
  if (!had_cache) store_cached_gb(dir, pf, quotient.gb());
  for (const auto& w : quotient.basis().warnings) log("warning: {}", w);

  EngineOptions opts;
  opts.threads = threads;
  FlatFStructure s = run(quotient, pf.max_level, opts);
  s.problem_hash = pf.hash();
  const json doc = result_to_json(s, pf);
  if (out.empty())
    print_json(doc);
  else
    write_json(out, doc);

  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  log("dim J_S = {}, level {}, {} ({:.3f} s)", s.dimension(), s.max_level, quotient.basis().status, secs);
  return kPass;
}

std::vector<std::string> split_checks(const std::string& list) {
  std::vector<std::string> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

int cmd_verify(const std::string& result_path, const std::string& checks) {
  const auto names = split_checks(checks);
  if (names.empty()) throw InputError("no checks selected");
  for (const auto& n : names)
    if (n != "fqm11" && n != "flatf" && n != "unit") throw InputError("unknown check '" + n + "'");

  const LoadedResult loaded = load_result(result_path);
  json reports = json::array();
  bool ok = true;
  for (const auto& n : names) {
    Report r = n == "fqm11" ? check_fqm11(loaded.structure)
               : n == "flatf" ? check_flat_f(loaded.structure)
                              : check_unit(loaded.structure);
    log("{:<6} {} ({} failures)", r.name, r.passed ? "PASS" : "FAIL", r.failure_count);
    ok = ok && r.passed;
    reports.push_back(r.to_json());
  }
  print_json({{"problem_hash", loaded.problem.hash()}, {"passed", ok}, {"reports", reports}});
  return ok ? kPass : kFail;
}

int cmd_axioms(const std::string& problem_path, long long trials, std::uint64_t seed) {
  if (trials <= 0) throw InputError("--trials must be positive");
  const ProblemFile pf = load_problem(problem_path);
  const Report r = check_dgbv_axioms(pf.problem.potential, pf.problem.charges, static_cast<std::size_t>(trials), seed,
                                     pf.problem.variables);
  json j = r.to_json();
  j["problem_hash"] = pf.hash();
  print_json(j);
  log("axioms {} ({} failures)", r.passed ? "PASS" : "FAIL", r.failure_count);
  return r.passed ? kPass : kFail;
}

int cmd_basis(const std::string& problem_path, const std::optional<std::string>& cache_dir) {
  const ProblemFile pf = load_problem(problem_path);
  const auto& vars = pf.problem.variables;
  const auto dir = resolve_cache_dir(cache_dir, pf);
  auto cached = load_cached_gb(dir, pf);
  const bool had_cache = cached.has_value();
  const GBasisWithCofactors gb = had_cache ? std::move(*cached) : buchberger(jacobian_generators(pf.problem.potential),
                                                                             pf.problem.order);
  if (!had_cache) store_cached_gb(dir, pf, gb);

  json j;
  j["problem_hash"] = pf.hash();
  try {
    const Basis b = compute_basis(pf.problem, gb);
    json reps = json::array();
    for (const auto& u : b.reps()) reps.push_back(to_string(u, vars));
    j["basis"] = std::move(reps);
    j["dimension"] = b.size();
    j["complete"] = b.complete;
    j["status"] = b.status;
    j["identity"] = b.identity() ? json(*b.identity()) : json(nullptr);
    j["warnings"] = b.warnings;
    print_json(j);
    return kPass;
  } catch (const ComputationError& e) {
    // surface what the enumeration found, flagged as incomplete
    std::optional<ChargeFilter> filter;
    if (pf.problem.charges) filter = ChargeFilter{*pf.problem.charges, 0};
    const StandardMonomials sm = standard_monomials(gb, filter, pf.problem.bound);
    json reps = json::array();
    for (const auto& m : sm.monomials) reps.push_back(to_string(m, vars));
    j["basis"] = std::move(reps);
    j["dimension"] = sm.monomials.size();
    j["complete"] = false;
    j["status"] = sm.status;
    j["error"] = e.what();
    print_json(j);
    log("{}", e.what());
    return kFail;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Flat F-manifold structures of Landau-Ginzburg potentials"};
  app.require_subcommand(1);

  std::string problem_path, result_path, out, checks = "fqm11,flatf";
  std::optional<std::size_t> max_level;
  std::optional<std::string> cache_dir;
  std::size_t threads = 1;
  long long trials = 200;
  std::uint64_t seed = 0;

  auto* compute = app.add_subcommand("compute", "Compute the structure constants up to a level");
  compute->add_option("problem", problem_path, "Problem JSON file")->required();
  compute->add_option("--out", out, "Result file (standard output when omitted)");
  compute->add_option("--max-level", max_level, "Override the problem's max_level");
  compute->add_option("--cache-dir", cache_dir, "Directory for cached Gröbner bases");
  compute->add_option("--threads", threads, "Worker threads per level (0 = all cores)");

  auto* verify = app.add_subcommand("verify", "Re-check a result file");
  verify->add_option("result", result_path, "Result JSON file")->required();
  verify->add_option("--checks", checks, "Comma-separated subset of fqm11,flatf,unit");

  auto* axioms = app.add_subcommand("axioms", "Randomized check of the dGBV axioms");
  axioms->add_option("problem", problem_path, "Problem JSON file")->required();
  axioms->add_option("--trials", trials, "Number of random trials");
  axioms->add_option("--seed", seed, "Random seed");

  auto* basis = app.add_subcommand("basis", "Print the quotient basis and its completeness flag");
  basis->add_option("problem", problem_path, "Problem JSON file")->required();
  basis->add_option("--cache-dir", cache_dir, "Directory for cached Gröbner bases");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*compute) return cmd_compute(problem_path, out, max_level, cache_dir, threads);
    if (*verify) return cmd_verify(result_path, checks);
    if (*axioms) return cmd_axioms(problem_path, trials, seed);
    if (*basis) return cmd_basis(problem_path, cache_dir);
  } catch (const InputError& e) {
    log("error: {}", e.what());
    return kUsage;
  } catch (const ComputationError& e) {
    log("error: {}", e.what());
    return kFail;
  } catch (const std::exception& e) {
    log("error: {}", e.what());
    return kFail;
  }
  return kUsage;
}
