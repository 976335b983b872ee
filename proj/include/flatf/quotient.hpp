#pragma once

#include <optional>
#include <string>
#include <vector>

#include "flatf/groebner.hpp"
#include "flatf/poly.hpp"
#include "flatf/polyvector.hpp"

namespace flatf {

/// The mathematical input: a potential S in named variables, an optional
/// charge grading (the charge-zero subcomplex is then used), an optional
/// user-chosen basis of the quotient and enumeration settings.
struct Problem {
  std::vector<std::string> variables;
  Poly potential;
  std::optional<ChargeSpec> charges;
  std::optional<std::vector<Poly>> user_basis;
  MonomialOrder order;
  unsigned bound = 16;
  bool skip_spanning_check = false;

  std::size_t nvars() const { return variables.size(); }
};

/// (∂S/∂x_1, ..., ∂S/∂x_n).
std::vector<Poly> jacobian_generators(const Poly& S);

/// Representatives u_α of a basis of the quotient together with the data
/// needed to express any normal form in the span of their normal forms.
class Basis {
 public:
  Basis() = default;
  /// Throws ComputationError("dependent basis ...") if the normal forms are
  /// linearly dependent.
  Basis(std::vector<Poly> reps, const GBasisWithCofactors& gb);

  std::size_t size() const noexcept { return reps_.size(); }
  const std::vector<Poly>& reps() const noexcept { return reps_; }
  const std::vector<Poly>& normal_forms() const noexcept { return normal_forms_; }
  /// Index α with [u_α] = [1], when such a basis element exists.
  std::optional<std::size_t> identity() const noexcept { return identity_; }

  /// Coordinates a with nf = Σ a_α NF(u_α); nullopt when nf is not in the span.
  std::optional<std::vector<Rational>> coordinates(const Poly& nf) const;

  bool complete = false;
  std::string status;
  std::vector<std::string> warnings;

 private:
  struct Row {
    Monomial pivot;
    Poly vec;                       // pivot coefficient 1
    std::vector<Rational> combination;  // vec = Σ combination_α NF(u_α)
  };

  std::vector<Poly> reps_;
  std::vector<Poly> normal_forms_;
  std::vector<Row> rows_;
  std::optional<std::size_t> identity_;

  friend class JacobianQuotient;
};

/// v = Σ_ρ coeffs[ρ] u_ρ + δ_S(lambda), lambda = Σ_i q_i η_i and
/// delta_lambda = Δ(lambda).
struct ReductionResult {
  std::vector<Rational> coeffs;
  PolyVector lambda;
  Poly delta_lambda;
};

/// J_S = B^0 / δ_S(B^{-1}) realized through a Gröbner basis of the Jacobian
/// ideal. Immutable after construction; reduce() may be called concurrently.
class JacobianQuotient {
 public:
  /// Builds (or adopts `cached_gb`, which must match the generators and order)
  /// the Gröbner basis and the basis of the quotient. Automatic bases are the
  /// (charge-zero) standard monomials; user bases are validated.
  static JacobianQuotient build(const Problem& problem,
                                std::optional<GBasisWithCofactors> cached_gb = std::nullopt);

  const Problem& problem() const noexcept { return problem_; }
  const GBasisWithCofactors& gb() const noexcept { return gb_; }
  const Basis& basis() const noexcept { return basis_; }
  const std::vector<Poly>& gradient() const noexcept { return gradient_; }
  std::size_t nvars() const noexcept { return problem_.nvars(); }

  /// Throws ChargeError when a charge grading is active and v is not
  /// charge-zero, and ComputationError("not in span") when NF(v) is outside
  /// the span of the basis normal forms.
  ReductionResult reduce(const Poly& v) const;

  /// Builds Σ_i q_i η_i from cofactors over the partial derivatives.
  PolyVector lambda_from_cofactors(const std::vector<Poly>& cofactors) const;

 private:
  Problem problem_;
  GBasisWithCofactors gb_;
  Basis basis_;
  std::vector<Poly> gradient_;
};

/// Basis computation as a free function.
Basis compute_basis(const Problem& problem, const GBasisWithCofactors& gb);

inline ReductionResult reduce_to_basis(const Poly& v, const JacobianQuotient& q) { return q.reduce(v); }

}  // namespace flatf
