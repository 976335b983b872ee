#include "flatf/quotient.hpp"

#include "flatf/error.hpp"

namespace flatf {

std::vector<Poly> jacobian_generators(const Poly& S) { return gradient(S); }

Basis::Basis(std::vector<Poly> reps, const GBasisWithCofactors& gb) : reps_(std::move(reps)) {
  const std::size_t n = gb.nvars();
  for (std::size_t a = 0; a < reps_.size(); ++a) {
    Poly nf = normal_form(reps_[a], gb);
    normal_forms_.push_back(nf);
    std::vector<Rational> comb(reps_.size(), 0);
    comb[a] = 1;
    for (const auto& row : rows_) {
      const Rational c = nf.coefficient(row.pivot);
      if (sgn(c) == 0) continue;
      nf -= row.vec * c;
      for (std::size_t b = 0; b < comb.size(); ++b) comb[b] -= c * row.combination[b];
    }
    if (nf.is_zero()) {
      std::string msg = "dependent basis: the combination";
      for (std::size_t b = 0; b < comb.size(); ++b)
        if (sgn(comb[b]) != 0) msg += " (" + format_rational(comb[b]) + ")*u" + std::to_string(b);
      throw ComputationError(msg + " vanishes in the quotient");
    }
    auto [pivot, lc] = nf.leading_term(gb.order);
    const Rational inv = Rational(1) / lc;
    nf *= inv;
    for (auto& c : comb) c *= inv;
    rows_.push_back({pivot, std::move(nf), std::move(comb)});
  }

  if (auto one = coordinates(normal_form(Poly::constant(n, 1), gb))) {
    for (std::size_t a = 0; a < one->size(); ++a) {
      bool unit = true;
      for (std::size_t b = 0; b < one->size(); ++b)
        if ((*one)[b] != (a == b ? 1 : 0)) unit = false;
      if (unit) identity_ = a;
    }
    if (!identity_) warnings.push_back("[1] is not a basis element; unit checks will be skipped");
  } else {
    warnings.push_back("[1] is not in the span of the basis; unit checks will be skipped");
  }
}

std::optional<std::vector<Rational>> Basis::coordinates(const Poly& nf) const {
  Poly target = nf;
  std::vector<Rational> a(reps_.size(), 0);
  for (const auto& row : rows_) {
    const Rational c = target.coefficient(row.pivot);
    if (sgn(c) == 0) continue;
    target -= row.vec * c;
    for (std::size_t b = 0; b < a.size(); ++b) a[b] += c * row.combination[b];
  }
  if (!target.is_zero()) return std::nullopt;
  return a;
}

Basis compute_basis(const Problem& problem, const GBasisWithCofactors& gb) {
  std::optional<ChargeFilter> filter;
  if (problem.charges) filter = ChargeFilter{*problem.charges, 0};
  const StandardMonomials sm = standard_monomials(gb, filter, problem.bound);

  if (!problem.user_basis) {
    if (!sm.complete)
      throw ComputationError("quotient not finite-dimensional at this filter/bound (" + sm.status + ")");
    std::vector<Poly> reps;
    for (const auto& m : sm.monomials) reps.push_back(Poly::term(m, 1));
    Basis b(std::move(reps), gb);
    b.complete = true;
    b.status = sm.status;
    return b;
  }

  const auto& reps = *problem.user_basis;
  if (problem.charges)
    for (std::size_t a = 0; a < reps.size(); ++a)
      if (charge_check(reps[a], *problem.charges) != 0 && !reps[a].is_zero())
        throw ChargeError("basis element u" + std::to_string(a) + " is not of charge zero");
  Basis b(reps, gb);
  if (sm.complete) {
    if (sm.monomials.size() != reps.size())
      throw ComputationError("basis does not span the quotient: dimension is " +
                             std::to_string(sm.monomials.size()) + " but " +
                             std::to_string(reps.size()) + " elements were given");
    b.complete = true;
    b.status = "user basis, spanning verified (" + sm.status + ")";
  } else if (problem.skip_spanning_check) {
    b.status = "user basis, spanning not verified (" + sm.status + ")";
    b.warnings.push_back("spanning check skipped on request");
  } else {
    throw ComputationError("cannot verify that the user basis spans the quotient (" + sm.status +
                           "); set skip_spanning_check to proceed");
  }
  return b;
}

JacobianQuotient JacobianQuotient::build(const Problem& problem,
                                         std::optional<GBasisWithCofactors> cached_gb) {
  if (problem.potential.nvars() != problem.nvars())
    throw InputError("potential has the wrong number of variables");
  JacobianQuotient q;
  q.problem_ = problem;
  q.gradient_ = jacobian_generators(problem.potential);
  if (cached_gb) {
    if (cached_gb->generators != q.gradient_ || !(cached_gb->order == problem.order))
      throw InputError("cached Gröbner basis does not match the problem");
    q.gb_ = std::move(*cached_gb);
  } else {
    q.gb_ = buchberger(q.gradient_, problem.order);
  }
  q.basis_ = compute_basis(problem, q.gb_);
  return q;
}

PolyVector JacobianQuotient::lambda_from_cofactors(const std::vector<Poly>& cofactors) const {
  PolyVector lambda(nvars());
  for (std::size_t i = 0; i < cofactors.size(); ++i) lambda.add(EtaSet::single(i), cofactors[i]);
  return lambda;
}

ReductionResult JacobianQuotient::reduce(const Poly& v) const {
  if (v.nvars() != nvars()) throw InputError("element has the wrong number of variables");
  if (problem_.charges && !v.is_zero() && charge_check(v, *problem_.charges) != 0)
    throw ChargeError("charge violation: element to reduce is not of charge zero");

  auto coords = basis_.coordinates(normal_form(v, gb_));
  if (!coords)
    throw ComputationError("not in span: normal form lies outside the span of the basis");

  Poly w = v;
  for (std::size_t a = 0; a < coords->size(); ++a)
    if (sgn((*coords)[a]) != 0) w -= basis_.reps()[a] * (*coords)[a];
  ReductionOutcome red = reduce_full(w, gb_);
  if (!red.remainder.is_zero()) throw ComputationError("internal error: nonzero remainder after projection");

  ReductionResult out;
  out.coeffs = std::move(*coords);
  out.lambda = lambda_from_cofactors(red.cofactors);
  out.delta_lambda = Poly(nvars());
  for (std::size_t i = 0; i < red.cofactors.size(); ++i) out.delta_lambda += red.cofactors[i].partial(i);
  return out;
}

}  // namespace flatf
