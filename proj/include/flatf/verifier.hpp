#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "flatf/engine.hpp"
#include "flatf/polyvector.hpp"
#include "flatf/quotient.hpp"

namespace flatf {

/// A failed exact identity: which identity, on which inputs, and the
/// (nonzero) residual.
struct Counterexample {
  std::string check;
  nlohmann::json detail;
};

/// Outcome of one verifier check. Every decision is an exact zero test.
struct Report {
  static constexpr std::size_t kMaxStoredFailures = 20;

  std::string name;
  bool passed = true;
  std::size_t failure_count = 0;
  std::vector<Counterexample> failures;           // first kMaxStoredFailures
  std::map<std::string, std::size_t> identities;  // sub-check -> identities tested
  std::vector<std::string> notes;
  nlohmann::json stats = nlohmann::json::object();

  void count(const std::string& check, std::size_t n = 1) { identities[check] += n; }
  void fail(const std::string& check, nlohmann::json detail);

  nlohmann::json to_json() const;
};

/// The two differentials the axiom suite is run against. The bracket is
/// always derived from `laplacian` and the product.
struct DgbvOperators {
  std::function<PolyVector(const PolyVector&)> delta;
  std::function<PolyVector(const PolyVector&)> laplacian;

  static DgbvOperators standard(const Poly& S);
};

struct AxiomOptions {
  unsigned max_degree = 4;  // monomial degree bound of random elements
  unsigned max_terms = 3;   // terms per random element
};

/// Seeded random homogeneous elements (charge zero when `charges` is given)
/// checked against: δ² = 0, Δ² = 0, (δ+Δ)² = 0, the Leibniz rule of δ,
/// supercommutativity, graded symmetry, Jacobi and Poisson rules of ℓ₂^Δ,
/// Δ as a derivation of ℓ₂^Δ and, with charges, charge preservation.
Report check_dgbv_axioms(const Poly& S, const std::optional<ChargeSpec>& charges, std::size_t trials,
                         std::uint64_t seed, const std::vector<std::string>& vars,
                         const AxiomOptions& options = {},
                         const std::optional<DgbvOperators>& operators = std::nullopt);

/// Searches for c = Σ_i q_i η_i with deg q_i <= max_degree (charge zero when
/// `charges` is given) such that δ_S(c) = target_delta and, when given,
/// Δ(c) = target_laplacian. Exact sparse elimination; nullopt when no such
/// element exists within the degree bound.
std::optional<PolyVector> solve_lambda(const std::vector<Poly>& gradient, const Poly& target_delta,
                                       const std::optional<Poly>& target_laplacian, unsigned max_degree,
                                       const std::optional<ChargeSpec>& charges = std::nullopt);

/// Checks, as power series in t truncated at total degree level-2,
///   ∂_αΓ ∂_βΓ = Σ_ρ A_{αβ}^ρ ∂_ρΓ + δ_{S+Γ}(Λ_{αβ})   and   ∂_α∂_βΓ = Δ(Λ_{αβ})
/// for all α <= β, with Γ and A assembled from the coefficient table.
///
/// Λ_{αβ} is an unknown of the system. Its coefficient at t^e starts from the
/// table entry λ of the multiset {α,β} ∪ e; when that entry does not solve the
/// order-e equations (the table holds one λ per multiset while Λ_{αβ} may
/// depend on the split into {α,β} and e) a correction in B^{-1} is solved for
/// exactly. A failure means no Λ coefficient exists within the degree bound;
/// it names the pair, the t-exponent and the residual of the table entry.
/// `level` defaults to the computed level; larger values are an error.
Report check_fqm11(const FlatFStructure& structure, std::optional<std::size_t> level = std::nullopt);

/// Unit law at t = 0 (when the identity is a basis element), commutativity
/// of the structure constants, and associativity of Σ_ρ A_{αβ}^ρ A_{γρ}^δ
/// order by order up to `max_order` (default: level-2).
Report check_flat_f(const FlatFStructure& structure, std::optional<int> max_order = std::nullopt);

/// Only the unit law at t = 0.
Report check_unit(const FlatFStructure& structure);

/// f·(∂_jS η_k − ∂_kS η_j), an element of ker δ_S.
PolyVector koszul_syzygy(const std::vector<Poly>& gradient, std::size_t j, std::size_t k, const Poly& f);

/// Re-runs the algorithm with `addend` added to λ at cascade stage `stage` of
/// `index` and reports whether every a coefficient of the same and higher
/// levels is unchanged. Throws InputError if δ_S(addend) ≠ 0, if the addend
/// is not a single-η element (of charge zero when charges are active), or if
/// the index/stage are outside the computed range.
Report ambiguity_probe(const JacobianQuotient& quotient, const FlatFStructure& baseline, const MultiIndex& index,
                       std::size_t stage, const PolyVector& addend);

/// Compares every a coefficient of multisets of size >= from_level.
Report compare_a_tables(const FlatFStructure& baseline, const FlatFStructure& other, std::size_t from_level);

}  // namespace flatf
