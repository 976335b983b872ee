#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "flatf/poly.hpp"
#include "flatf/polyvector.hpp"
#include "flatf/quotient.hpp"

namespace flatf {

/// A multiset of basis indices, stored sorted. Every coefficient of the
/// expansion is keyed by one of these, so symmetry in the indices holds by
/// construction.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<std::size_t> indices);
  MultiIndex(std::initializer_list<std::size_t> indices)
      : MultiIndex(std::vector<std::size_t>(indices)) {}

  std::size_t size() const noexcept { return idx_.size(); }
  bool empty() const noexcept { return idx_.empty(); }
  std::size_t operator[](std::size_t k) const { return idx_[k]; }
  auto begin() const noexcept { return idx_.begin(); }
  auto end() const noexcept { return idx_.end(); }
  const std::vector<std::size_t>& indices() const noexcept { return idx_; }

  /// Multiset union.
  MultiIndex operator+(const MultiIndex& other) const;
  /// Multiplicity of each index 0..dim-1.
  std::vector<std::uint32_t> multiplicities(std::size_t dim) const;

  std::string to_string() const;

  auto operator<=>(const MultiIndex&) const = default;

 private:
  std::vector<std::size_t> idx_;
};

/// All multisets of size m over {0..dim-1}, in lexicographic order.
std::vector<MultiIndex> multisets_of_size(std::size_t dim, std::size_t m);

/// Taylor data of the expansion: u for every multiset (the basis at size 1),
/// a and the final λ of the cascade for every multiset of size >= 2.
struct CoeffTable {
  std::map<MultiIndex, Poly> u;
  std::map<MultiIndex, std::vector<Rational>> a;
  std::map<MultiIndex, PolyVector> lambda;
  std::size_t level = 0;  // highest completed multiset size
};

/// u^{(i)} of a multiset of size m: the sum over set partitions of its m
/// positions into m-i blocks of the product of the u of the blocks. Repeated
/// block shapes are multiplied once and weighted by their multiplicity.
/// Throws ComputationError if a needed entry is missing from the table.
Poly assemble_u_i(const CoeffTable& table, const MultiIndex& index, std::size_t i, std::size_t nvars);

/// One stage of the cascade: input = Σ a^ρ u_ρ + δ_S(lambda).
struct CascadeStage {
  Poly input;
  std::vector<Rational> a;
  PolyVector lambda;
  Poly delta_lambda;
};

struct StepResult {
  std::vector<Rational> a;  // a of the last stage
  Poly u;                   // Δ(λ) of the last stage
  PolyVector lambda;        // λ of the last stage
  std::vector<CascadeStage> chain;
};

/// Adds `addend` (an element of ker δ_S) to λ at the given cascade stage of
/// the given multiset. Used to probe how results depend on the choice of λ.
struct LambdaPerturbation {
  MultiIndex target;
  std::size_t stage = 0;
  PolyVector addend;
};

/// Runs the cascade for a multiset of size m >= 2:
/// v_0 = u^{(0)}, and v_{i+1} = u^{(i+1)} - Δλ^{(i)} for i < m-2.
StepResult step(const MultiIndex& index, const CoeffTable& table, const JacobianQuotient& quotient,
                const std::vector<LambdaPerturbation>& perturbations = {});

struct EngineOptions {
  /// Worker threads per level; 0 picks the hardware concurrency.
  std::size_t threads = 1;
  /// Shuffles the processing order of multisets within each level.
  std::optional<std::uint64_t> shuffle_seed;
  std::vector<LambdaPerturbation> perturbations;
};

/// The truncated structure: basis data, the coefficient table through
/// max_level and enough of the problem to re-verify it.
struct FlatFStructure {
  std::vector<std::string> variables;
  Poly potential;
  std::vector<Poly> basis;
  std::optional<std::size_t> identity;
  std::size_t max_level = 0;
  CoeffTable table;
  std::string problem_hash;
  /// Charge grading of the problem, when the charge-zero subcomplex is used.
  std::optional<ChargeSpec> charges;

  std::size_t dimension() const noexcept { return basis.size(); }
  std::size_t nvars() const noexcept { return variables.size(); }

  /// Taylor coefficient a_{αβ rest}^ρ, read from the multiset {α,β} ∪ rest.
  /// Throws ComputationError if that multiset exceeds max_level.
  Rational series_coefficient(std::size_t alpha, std::size_t beta, std::size_t rho,
                              const MultiIndex& rest = {}) const;
};

/// Computes levels 2..max_level in order. Within a level every multiset only
/// depends on lower levels, so the order (and the thread count) does not
/// affect the result.
FlatFStructure run(const JacobianQuotient& quotient, std::size_t max_level, const EngineOptions& options = {});

}  // namespace flatf
