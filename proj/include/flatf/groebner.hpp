#pragma once

#include <optional>
#include <string>
#include <vector>

#include "flatf/poly.hpp"
#include "flatf/polyvector.hpp"

namespace flatf {

/// Reduced Gröbner basis of the ideal spanned by `generators`, where every
/// basis element also carries its expression over the original generators:
/// gb[k] = Σ_i cofactors[k][i] * generators[i].
struct GBasisWithCofactors {
  std::vector<Poly> generators;
  MonomialOrder order;
  std::vector<Poly> gb;
  std::vector<std::vector<Poly>> cofactors;

  std::size_t nvars() const { return order.nvars(); }
  std::vector<Monomial> leading_monomials() const;
  /// Every variable has a pure power among the leading monomials, so the
  /// quotient ring is finite-dimensional.
  bool is_zero_dimensional() const;
};

/// p = remainder + Σ_i cofactors[i] * generators[i].
struct ReductionOutcome {
  Poly remainder;
  std::vector<Poly> cofactors;
};

/// Buchberger's algorithm with cofactor tracking. Pairs are processed by the
/// normal strategy (smallest lcm first, ties by index) and pairs with coprime
/// leading monomials are skipped. The result is reduced, monic and sorted by
/// increasing leading monomial. Zero generators are ignored.
GBasisWithCofactors buchberger(const std::vector<Poly>& generators, const MonomialOrder& order);

/// Full division by the basis: the order-largest reducible term is always
/// cancelled first, against the basis element of smallest index whose
/// leading monomial divides it.
ReductionOutcome reduce_full(const Poly& p, const GBasisWithCofactors& basis);
/// Same remainder as reduce_full without cofactor bookkeeping.
Poly normal_form(const Poly& p, const GBasisWithCofactors& basis);

/// Checks gb[k] == Σ cofactors[k][i] generators[i] for every k.
bool verify_reconstruction(const GBasisWithCofactors& basis);
/// Checks that every S-polynomial of gb reduces to zero.
bool verify_groebner_criterion(const GBasisWithCofactors& basis);

struct ChargeFilter {
  ChargeSpec spec;
  long target = 0;
};

struct StandardMonomials {
  std::vector<Monomial> monomials;  // ascending in the basis order
  bool complete = false;
  std::string status;               // how completeness was (or was not) established
};

/// Monomials divisible by no leading monomial of the basis.
///
/// Zero-dimensional ideals are enumerated exhaustively and reported complete.
/// Otherwise, with a charge filter, monomials are enumerated slice by slice
/// (slice k = total degree k in the negatively charged variables, k <= bound)
/// and the result is complete once two consecutive slices contribute nothing.
/// Without a filter, monomials up to total degree `bound` are listed and the
/// result is marked possibly incomplete.
StandardMonomials standard_monomials(const GBasisWithCofactors& basis,
                                     const std::optional<ChargeFilter>& filter,
                                     unsigned bound);

}  // namespace flatf
