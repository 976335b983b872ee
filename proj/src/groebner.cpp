#include "flatf/groebner.hpp"

#include <algorithm>
#include <functional>
#include <map>

#include "flatf/error.hpp"

namespace flatf {

namespace {

struct OrderLess {
  const MonomialOrder* order;
  bool operator()(const Monomial& a, const Monomial& b) const { return order->compare(a, b) < 0; }
};

using OrderedTerms = std::map<Monomial, Rational, OrderLess>;

struct Divisor {
  const Poly* poly;
  Monomial lm;
  Rational lc;
};

std::vector<Divisor> make_divisors(const std::vector<Poly>& polys, const MonomialOrder& order) {
  std::vector<Divisor> out;
  out.reserve(polys.size());
  for (const auto& p : polys) {
    auto [lm, lc] = p.leading_term(order);
    out.push_back({&p, std::move(lm), std::move(lc)});
  }
  return out;
}

/// Division of p by `divisors`. Returns the remainder; when `quotients` is
/// non-null it receives q_k with p = remainder + Σ q_k divisors[k]. Divisors
/// equal to `skip` are not used.
Poly divide(const Poly& p, const std::vector<Divisor>& divisors, const MonomialOrder& order,
            std::vector<Poly>* quotients, std::size_t skip = static_cast<std::size_t>(-1)) {
  const std::size_t n = p.nvars();
  if (quotients) quotients->assign(divisors.size(), Poly(n));
  OrderedTerms work(OrderLess{&order});
  for (const auto& [m, c] : p.terms()) work.emplace(m, c);
  Poly remainder(n);
  while (!work.empty()) {
    auto top = std::prev(work.end());
    const Monomial m = top->first;
    const Rational c = top->second;
    std::size_t k = 0;
    for (; k < divisors.size(); ++k)
      if (k != skip && divisors[k].lm.divides(m)) break;
    if (k == divisors.size()) {
      remainder.add_term(m, c);
      work.erase(top);
      continue;
    }
    const Monomial shift = m / divisors[k].lm;
    const Rational factor = c / divisors[k].lc;
    if (quotients) (*quotients)[k].add_term(shift, factor);
    for (const auto& [gm, gc] : divisors[k].poly->terms()) {
      const Monomial t = gm * shift;
      auto [it, inserted] = work.try_emplace(t, -factor * gc);
      if (!inserted) {
        it->second -= factor * gc;
        if (sgn(it->second) == 0) work.erase(it);
      }
    }
  }
  return remainder;
}

std::vector<Poly> combine_cofactors(const std::vector<Poly>& quotients,
                                    const std::vector<std::vector<Poly>>& rows, std::size_t ngens,
                                    std::size_t nvars) {
  std::vector<Poly> out(ngens, Poly(nvars));
  for (std::size_t k = 0; k < quotients.size(); ++k) {
    if (quotients[k].is_zero()) continue;
    for (std::size_t i = 0; i < ngens; ++i)
      if (!rows[k][i].is_zero()) out[i] += quotients[k] * rows[k][i];
  }
  return out;
}

struct Element {
  Poly poly;
  std::vector<Poly> cof;
};

}  // namespace

std::vector<Monomial> GBasisWithCofactors::leading_monomials() const {
  std::vector<Monomial> out;
  for (const auto& g : gb) out.push_back(g.leading_term(order).first);
  return out;
}

bool GBasisWithCofactors::is_zero_dimensional() const {
  const auto lms = leading_monomials();
  for (std::size_t v = 0; v < nvars(); ++v) {
    const bool found = std::any_of(lms.begin(), lms.end(), [&](const Monomial& m) {
      for (std::size_t w = 0; w < m.nvars(); ++w)
        if (w != v && m[w] != 0) return false;
      return true;
    });
    if (!found) return false;
  }
  return true;
}

GBasisWithCofactors buchberger(const std::vector<Poly>& generators, const MonomialOrder& order) {
  const std::size_t n = order.nvars();
  const std::size_t ngens = generators.size();
  for (const auto& g : generators)
    if (g.nvars() != n) throw InputError("generator has the wrong number of variables");

  std::vector<Element> elems;
  for (std::size_t i = 0; i < ngens; ++i) {
    if (generators[i].is_zero()) continue;
    std::vector<Poly> cof(ngens, Poly(n));
    cof[i] = Poly::constant(n, 1);
    elems.push_back({generators[i], std::move(cof)});
  }

  auto lead = [&](const Element& e) { return e.poly.leading_term(order); };

  struct Pair {
    std::size_t i, j;
    Monomial lcm;
  };
  std::vector<Pair> pairs;
  auto add_pairs_for = [&](std::size_t j) {
    const Monomial lj = lead(elems[j]).first;
    for (std::size_t i = 0; i < j; ++i) {
      const Monomial li = lead(elems[i]).first;
      if (li.coprime(lj)) continue;
      pairs.push_back({i, j, Monomial::lcm(li, lj)});
    }
  };
  for (std::size_t j = 0; j < elems.size(); ++j) add_pairs_for(j);

  while (!pairs.empty()) {
    auto best = std::min_element(pairs.begin(), pairs.end(), [&](const Pair& a, const Pair& b) {
      const int c = order.compare(a.lcm, b.lcm);
      if (c != 0) return c < 0;
      return std::tie(a.j, a.i) < std::tie(b.j, b.i);
    });
    const Pair pr = *best;
    pairs.erase(best);

    const auto [lmi, lci] = lead(elems[pr.i]);
    const auto [lmj, lcj] = lead(elems[pr.j]);
    const Monomial si = pr.lcm / lmi;
    const Monomial sj = pr.lcm / lmj;
    const Rational fi = Rational(1) / lci;
    const Rational fj = Rational(1) / lcj;
    Poly spoly = elems[pr.i].poly.mul_term(si, fi) - elems[pr.j].poly.mul_term(sj, fj);
    std::vector<Poly> cof(ngens, Poly(n));
    for (std::size_t g = 0; g < ngens; ++g)
      cof[g] = elems[pr.i].cof[g].mul_term(si, fi) - elems[pr.j].cof[g].mul_term(sj, fj);

    std::vector<Poly> polys;
    std::vector<std::vector<Poly>> rows;
    for (const auto& e : elems) {
      polys.push_back(e.poly);
      rows.push_back(e.cof);
    }
    const auto divisors = make_divisors(polys, order);
    std::vector<Poly> quot;
    Poly rem = divide(spoly, divisors, order, &quot);
    if (rem.is_zero()) continue;
    const auto q = combine_cofactors(quot, rows, ngens, n);
    for (std::size_t g = 0; g < ngens; ++g) cof[g] -= q[g];
    elems.push_back({std::move(rem), std::move(cof)});
    add_pairs_for(elems.size() - 1);
  }

  // minimalize: drop elements whose leading monomial is divisible by another's
  std::vector<Monomial> lms;
  for (const auto& e : elems) lms.push_back(lead(e).first);
  std::vector<Element> minimal;
  for (std::size_t k = 0; k < elems.size(); ++k) {
    bool redundant = false;
    for (std::size_t l = 0; l < elems.size() && !redundant; ++l) {
      if (l == k) continue;
      if (lms[l].divides(lms[k]) && (lms[l] != lms[k] || l < k)) redundant = true;
    }
    if (!redundant) minimal.push_back(std::move(elems[k]));
  }

  // inter-reduce tails and normalize
  std::sort(minimal.begin(), minimal.end(), [&](const Element& a, const Element& b) {
    return order.compare(lead(a).first, lead(b).first) < 0;
  });
  for (std::size_t k = 0; k < minimal.size(); ++k) {
    std::vector<Poly> polys;
    std::vector<std::vector<Poly>> rows;
    for (const auto& e : minimal) {
      polys.push_back(e.poly);
      rows.push_back(e.cof);
    }
    const auto divisors = make_divisors(polys, order);
    std::vector<Poly> quot;
    Poly rem = divide(minimal[k].poly, divisors, order, &quot, k);
    const auto q = combine_cofactors(quot, rows, ngens, n);
    for (std::size_t g = 0; g < ngens; ++g) minimal[k].cof[g] -= q[g];
    const Rational inv = Rational(1) / rem.leading_term(order).second;
    minimal[k].poly = rem * inv;
    for (auto& c : minimal[k].cof) c *= inv;
  }

  GBasisWithCofactors out;
  out.generators = generators;
  out.order = order;
  for (auto& e : minimal) {
    out.gb.push_back(std::move(e.poly));
    out.cofactors.push_back(std::move(e.cof));
  }
  return out;
}

ReductionOutcome reduce_full(const Poly& p, const GBasisWithCofactors& basis) {
  if (p.nvars() != basis.nvars()) throw InputError("polynomial and basis over different variables");
  const auto divisors = make_divisors(basis.gb, basis.order);
  std::vector<Poly> quot;
  ReductionOutcome out;
  out.remainder = divide(p, divisors, basis.order, &quot);
  out.cofactors = combine_cofactors(quot, basis.cofactors, basis.generators.size(), p.nvars());
  return out;
}

Poly normal_form(const Poly& p, const GBasisWithCofactors& basis) {
  if (p.nvars() != basis.nvars()) throw InputError("polynomial and basis over different variables");
  return divide(p, make_divisors(basis.gb, basis.order), basis.order, nullptr);
}

bool verify_reconstruction(const GBasisWithCofactors& basis) {
  if (basis.cofactors.size() != basis.gb.size()) return false;
  for (std::size_t k = 0; k < basis.gb.size(); ++k) {
    if (basis.cofactors[k].size() != basis.generators.size()) return false;
    Poly sum(basis.nvars());
    for (std::size_t i = 0; i < basis.generators.size(); ++i)
      sum += basis.cofactors[k][i] * basis.generators[i];
    if (sum != basis.gb[k]) return false;
  }
  return true;
}

bool verify_groebner_criterion(const GBasisWithCofactors& basis) {
  const auto& order = basis.order;
  for (const auto& g : basis.gb)
    if (g.is_zero()) return false;
  for (std::size_t j = 0; j < basis.gb.size(); ++j) {
    for (std::size_t i = 0; i < j; ++i) {
      const auto [li, ci] = basis.gb[i].leading_term(order);
      const auto [lj, cj] = basis.gb[j].leading_term(order);
      const Monomial l = Monomial::lcm(li, lj);
      Poly s = basis.gb[i].mul_term(l / li, Rational(1) / ci) - basis.gb[j].mul_term(l / lj, Rational(1) / cj);
      if (!normal_form(s, basis).is_zero()) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// standard monomials

namespace {

/// Calls f on every exponent vector over `vars` (others zero) with
/// Σ weights[v] * e_v == total. Weights are positive.
void for_each_weighted(const std::vector<std::size_t>& vars, const std::vector<long>& weights,
                       long total, std::size_t nvars, const std::function<void(const Monomial&)>& f) {
  std::vector<std::uint32_t> exps(nvars, 0);
  std::function<void(std::size_t, long)> rec = [&](std::size_t k, long left) {
    if (k == vars.size()) {
      if (left == 0) f(Monomial(exps));
      return;
    }
    const long w = weights[k];
    for (long e = 0; e * w <= left; ++e) {
      exps[vars[k]] = static_cast<std::uint32_t>(e);
      rec(k + 1, left - e * w);
    }
    exps[vars[k]] = 0;
  };
  if (total >= 0) rec(0, total);
}

bool is_standard(const Monomial& m, const std::vector<Monomial>& lms) {
  return std::none_of(lms.begin(), lms.end(), [&](const Monomial& l) { return l.divides(m); });
}

}  // namespace

StandardMonomials standard_monomials(const GBasisWithCofactors& basis,
                                     const std::optional<ChargeFilter>& filter, unsigned bound) {
  const std::size_t n = basis.nvars();
  const auto lms = basis.leading_monomials();
  StandardMonomials out;
  auto passes = [&](const Monomial& m) {
    return !filter || filter->spec.term_charge(m, EtaSet{}) == filter->target;
  };
  auto sort_result = [&] {
    std::sort(out.monomials.begin(), out.monomials.end(),
              [&](const Monomial& a, const Monomial& b) { return basis.order.compare(a, b) < 0; });
  };

  if (basis.is_zero_dimensional()) {
    std::vector<std::uint32_t> box(n, 0);
    for (std::size_t v = 0; v < n; ++v) {
      std::uint32_t best = UINT32_MAX;
      for (const auto& l : lms) {
        bool pure = true;
        for (std::size_t w = 0; w < n; ++w)
          if (w != v && l[w] != 0) pure = false;
        if (pure) best = std::min(best, l[v]);
      }
      box[v] = best;
    }
    if (std::find(box.begin(), box.end(), 0u) == box.end()) {
      std::vector<std::uint32_t> e(n, 0);
      for (;;) {
        Monomial m(e);
        if (is_standard(m, lms) && passes(m)) out.monomials.push_back(m);
        std::size_t k = 0;
        while (k < n && ++e[k] == box[k]) e[k++] = 0;
        if (k == n) break;
      }
    }
    out.complete = true;
    out.status = "complete: zero-dimensional ideal";
    sort_result();
    return out;
  }

  if (filter) {
    const auto& ch = filter->spec.charges;
    if (ch.size() != n) throw InputError("charge vector length does not match variables");
    std::vector<std::size_t> neg, pos;
    std::vector<long> neg_w, pos_w;
    for (std::size_t v = 0; v < n; ++v) {
      if (ch[v] == 0) throw InputError("charges must be nonzero");
      if (ch[v] < 0) {
        neg.push_back(v);
        neg_w.push_back(-ch[v]);
      } else {
        pos.push_back(v);
        pos_w.push_back(ch[v]);
      }
    }
    int empty_run = 0;
    for (unsigned slice = 0; slice <= bound; ++slice) {
      std::size_t added = 0;
      std::vector<long> ones(neg.size(), 1);
      for_each_weighted(neg, ones, slice, n, [&](const Monomial& mneg) {
        long need = filter->target;
        for (std::size_t k = 0; k < neg.size(); ++k) need += neg_w[k] * mneg[neg[k]];
        for_each_weighted(pos, pos_w, need, n, [&](const Monomial& mpos) {
          const Monomial m = mneg * mpos;
          if (is_standard(m, lms)) {
            out.monomials.push_back(m);
            ++added;
          }
        });
      });
      empty_run = added == 0 ? empty_run + 1 : 0;
      if (neg.empty() || empty_run == 2) {
        out.complete = true;
        out.status = neg.empty() ? "complete: charge slice is finite"
                                 : "complete: charge slices stabilized at slice " + std::to_string(slice);
        sort_result();
        return out;
      }
    }
    out.status = "possibly incomplete: charge slices did not stabilize within bound " +
                 std::to_string(bound);
    sort_result();
    return out;
  }

  for (unsigned d = 0; d <= bound; ++d) {
    std::vector<std::size_t> all(n);
    for (std::size_t v = 0; v < n; ++v) all[v] = v;
    std::vector<long> ones(n, 1);
    for_each_weighted(all, ones, d, n, [&](const Monomial& m) {
      if (is_standard(m, lms)) out.monomials.push_back(m);
    });
  }
  out.status = "possibly incomplete: ideal is not zero-dimensional and no charge filter was given";
  sort_result();
  return out;
}

}  // namespace flatf
