#include "flatf/verifier.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <random>

#include "flatf/error.hpp"
#include "flatf/series.hpp"

namespace flatf {

using nlohmann::json;

void Report::fail(const std::string& check, json detail) {
  passed = false;
  ++failure_count;
  if (failures.size() < kMaxStoredFailures) failures.push_back({check, std::move(detail)});
}

json Report::to_json() const {
  json j;
  j["check"] = name;
  j["passed"] = passed;
  j["failure_count"] = failure_count;
  j["identities"] = identities;
  j["stats"] = stats;
  j["notes"] = notes;
  json fs = json::array();
  for (const auto& f : failures) fs.push_back({{"check", f.check}, {"detail", f.detail}});
  j["counterexamples"] = std::move(fs);
  return j;
}

DgbvOperators DgbvOperators::standard(const Poly& S) {
  auto grad = gradient(S);
  return {[grad](const PolyVector& a) { return apply_delta(grad, a); },
          [](const PolyVector& a) { return apply_Delta(a); }};
}

namespace {

int parity(const PolyVector& a) { return (-a.degree().value_or(0)) & 1; }
Rational sign(int exponent) { return (exponent & 1) ? Rational(-1) : Rational(1); }

class RandomElements {
 public:
  RandomElements(std::size_t nvars, const std::optional<ChargeSpec>& charges, const AxiomOptions& options,
                 std::uint64_t seed)
      : n_(nvars), charges_(charges), options_(options), rng_(seed) {}

  /// A random element of a single degree -k, k uniform in 0..n.
  PolyVector next() {
    const auto k = std::uniform_int_distribution<std::size_t>(0, n_)(rng_);
    const auto terms = std::uniform_int_distribution<unsigned>(1, std::max(1u, options_.max_terms))(rng_);
    PolyVector out(n_);
    for (unsigned t = 0; t < terms; ++t) {
      for (int attempt = 0; attempt < 400; ++attempt) {
        EtaSet j = random_subset(k);
        Monomial m = random_monomial();
        if (charges_ && charges_->term_charge(m, j) != 0) continue;
        out.add(j, Poly::term(m, random_coefficient()));
        break;
      }
    }
    return out;
  }

 private:
  EtaSet random_subset(std::size_t k) {
    std::vector<std::size_t> idx(n_);
    for (std::size_t i = 0; i < n_; ++i) idx[i] = i;
    std::shuffle(idx.begin(), idx.end(), rng_);
    idx.resize(k);
    return EtaSet::of(idx);
  }

  Monomial random_monomial() {
    const auto deg = std::uniform_int_distribution<unsigned>(0, options_.max_degree)(rng_);
    std::vector<std::uint32_t> e(n_, 0);
    std::uniform_int_distribution<std::size_t> pick(0, n_ - 1);
    for (unsigned d = 0; d < deg; ++d) ++e[pick(rng_)];
    return Monomial(std::move(e));
  }

  Rational random_coefficient() {
    long p = 0;
    while (p == 0) p = std::uniform_int_distribution<long>(-5, 5)(rng_);
    const long q = std::uniform_int_distribution<long>(1, 3)(rng_);
    Rational r(p, q);
    r.canonicalize();
    return r;
  }

  std::size_t n_;
  std::optional<ChargeSpec> charges_;
  AxiomOptions options_;
  std::mt19937_64 rng_;
};

}  // namespace

Report check_dgbv_axioms(const Poly& S, const std::optional<ChargeSpec>& charges, std::size_t trials,
                         std::uint64_t seed, const std::vector<std::string>& vars, const AxiomOptions& options,
                         const std::optional<DgbvOperators>& operators) {
  const std::size_t n = S.nvars();
  if (n == 0) throw InputError("potential has no variables");
  const DgbvOperators ops = operators ? *operators : DgbvOperators::standard(S);
  auto bracket = [&](const PolyVector& a, const PolyVector& b) {
    return ops.laplacian(a * b) - ops.laplacian(a) * b - sign(parity(a)) * (a * ops.laplacian(b));
  };

  Report report;
  report.name = "axioms";
  report.stats = {{"trials", trials}, {"seed", seed}};
  RandomElements gen(n, charges, options, seed);

  auto text = [&](const PolyVector& v) { return to_string(v, vars); };
  for (std::size_t trial = 0; trial < trials; ++trial) {
    const PolyVector a = gen.next(), b = gen.next(), c = gen.next();
    const int pa = parity(a), pb = parity(b);
    auto expect_zero = [&](const std::string& check, const PolyVector& residual, json inputs) {
      report.count(check);
      if (!residual.is_zero()) {
        inputs["trial"] = trial;
        inputs["residual"] = text(residual);
        report.fail(check, std::move(inputs));
      }
    };
    const json ja = {{"a", text(a)}}, jab = {{"a", text(a)}, {"b", text(b)}};
    const json jabc = {{"a", text(a)}, {"b", text(b)}, {"c", text(c)}};

    expect_zero("delta_squared", ops.delta(ops.delta(a)), ja);
    expect_zero("laplacian_squared", ops.laplacian(ops.laplacian(a)), ja);
    {
      auto total = [&](const PolyVector& v) { return ops.delta(v) + ops.laplacian(v); };
      expect_zero("total_squared", total(total(a)), ja);
    }
    expect_zero("delta_leibniz", ops.delta(a * b) - ops.delta(a) * b - sign(pa) * (a * ops.delta(b)), jab);
    expect_zero("supercommutativity", a * b - sign(pa * pb) * (b * a), jab);
    expect_zero("bracket_symmetry", bracket(a, b) - sign(pa * pb) * bracket(b, a), jab);
    expect_zero("bracket_jacobi",
                bracket(a, bracket(b, c)) - sign(pa + 1) * bracket(bracket(a, b), c) -
                    sign((pa + 1) * (pb + 1)) * bracket(b, bracket(a, c)),
                jabc);
    expect_zero("bracket_poisson", bracket(a, b * c) - bracket(a, b) * c - sign((pa + 1) * pb) * (b * bracket(a, c)),
                jabc);
    expect_zero("laplacian_bracket_derivation",
                ops.laplacian(bracket(a, b)) + bracket(ops.laplacian(a), b) + sign(pa) * bracket(a, ops.laplacian(b)),
                jab);

    if (charges) {
      for (const auto& [label, image] : {std::pair<const char*, PolyVector>{"delta", ops.delta(a)},
                                         std::pair<const char*, PolyVector>{"laplacian", ops.laplacian(a)}}) {
        report.count("charge_preservation");
        std::string problem;
        try {
          const long ch = charge_check(image, *charges);
          if (ch != 0) problem = "image has charge " + std::to_string(ch);
        } catch (const ChargeError& e) {
          problem = e.what();
        }
        if (!problem.empty())
          report.fail("charge_preservation",
                      {{"operator", label}, {"a", text(a)}, {"image", text(image)}, {"trial", trial}, {"reason", problem}});
      }
    }
  }
  return report;
}

namespace {

TExponent exponent_of(const MultiIndex& rest, std::size_t dim) { return rest.multiplicities(dim); }

/// Γ(t) = Σ_{|m|>=1} u_m t^m / m!, to the given order.
TruncatedSeries<Poly> gamma_series(const FlatFStructure& s, int order) {
  const std::size_t d = s.dimension();
  TruncatedSeries<Poly> g(d, order, Poly(s.nvars()));
  for (const auto& [m, u] : s.table.u) {
    if (static_cast<int>(m.size()) > order) continue;
    const TExponent e = exponent_of(m, d);
    g.add(e, u * (Rational(1) / factorial(e)));
  }
  return g;
}

/// Generating series of the coefficients keyed by {α,β} ∪ rest, to the given order.
template <class C, class Table>
TruncatedSeries<C> pair_series(const FlatFStructure& s, const Table& table, std::size_t alpha, std::size_t beta,
                               int order, C zero) {
  const std::size_t d = s.dimension();
  TruncatedSeries<C> r(d, order, zero);
  for (int k = 0; k <= order; ++k) {
    for (const auto& rest : multisets_of_size(d, static_cast<std::size_t>(k))) {
      const MultiIndex key = MultiIndex{alpha, beta} + rest;
      auto it = table.find(key);
      if (it == table.end()) throw ComputationError("coefficient " + key.to_string() + " missing from table");
      const TExponent e = exponent_of(rest, d);
      r.add(e, it->second * (Rational(1) / factorial(e)));
    }
  }
  return r;
}

TruncatedSeries<Rational> a_series(const FlatFStructure& s, std::size_t alpha, std::size_t beta, std::size_t rho,
                                   int order) {
  const std::size_t d = s.dimension();
  TruncatedSeries<Rational> r(d, order, Rational(0));
  for (int k = 0; k <= order; ++k) {
    for (const auto& rest : multisets_of_size(d, static_cast<std::size_t>(k))) {
      const TExponent e = exponent_of(rest, d);
      r.add(e, s.series_coefficient(alpha, beta, rho, rest) / factorial(e));
    }
  }
  return r;
}

json exponent_json(const TExponent& e) { return json(e); }

}  // namespace

namespace {

std::vector<Monomial> monomials_up_to(std::size_t n, unsigned degree) {
  std::vector<Monomial> out;
  std::vector<std::uint32_t> e(n, 0);
  std::function<void(std::size_t, unsigned)> rec = [&](std::size_t v, unsigned left) {
    if (v == n) {
      out.emplace_back(e);
      return;
    }
    for (unsigned k = 0; k <= left; ++k) {
      e[v] = k;
      rec(v + 1, left - k);
    }
    e[v] = 0;
  };
  rec(0, degree);
  return out;
}

/// Incremental row echelon form over Q with sparse rows; the pivot of a row
/// is its smallest unknown.
class SparseSystem {
 public:
  using Row = std::map<std::size_t, Rational>;

  /// Returns false when the row reduces to 0 = nonzero.
  bool add(Row row, Rational rhs) {
    while (!row.empty()) {
      auto lead = row.begin();
      auto piv = pivots_.find(lead->first);
      if (piv == pivots_.end()) break;
      const Rational f = lead->second;
      for (const auto& [k, v] : piv->second.row) {
        auto [it, inserted] = row.try_emplace(k, -f * v);
        if (!inserted) {
          it->second -= f * v;
          if (sgn(it->second) == 0) row.erase(it);
        }
      }
      rhs -= f * piv->second.rhs;
    }
    if (row.empty()) return sgn(rhs) == 0;
    const Rational inv = Rational(1) / row.begin()->second;
    for (auto& [k, v] : row) v *= inv;
    rhs *= inv;
    const std::size_t key = row.begin()->first;
    pivots_.emplace(key, Pivot{std::move(row), std::move(rhs)});
    return true;
  }

  /// A solution with every free unknown set to zero.
  std::map<std::size_t, Rational> solve() const {
    std::map<std::size_t, Rational> x;
    for (auto it = pivots_.rbegin(); it != pivots_.rend(); ++it) {
      Rational v = it->second.rhs;
      for (const auto& [k, c] : it->second.row)
        if (k != it->first)
          if (auto xi = x.find(k); xi != x.end()) v -= c * xi->second;
      if (sgn(v) != 0) x.emplace(it->first, v);
    }
    return x;
  }

 private:
  struct Pivot {
    Row row;
    Rational rhs;
  };
  std::map<std::size_t, Pivot> pivots_;
};

}  // namespace

std::optional<PolyVector> solve_lambda(const std::vector<Poly>& gradient, const Poly& target_delta,
                                       const std::optional<Poly>& target_laplacian, unsigned max_degree,
                                       const std::optional<ChargeSpec>& charges) {
  const std::size_t n = gradient.size();
  struct Unknown {
    std::size_t i;
    Monomial m;
  };
  std::vector<Unknown> unknowns;
  for (const auto& m : monomials_up_to(n, max_degree))
    for (std::size_t i = 0; i < n; ++i)
      if (!charges || charges->term_charge(m, EtaSet::single(i)) == 0) unknowns.push_back({i, m});

  // equations: one per monomial of δ_S(c), and one per monomial of Δ(c)
  std::map<Monomial, SparseSystem::Row> delta_rows, lap_rows;
  for (std::size_t k = 0; k < unknowns.size(); ++k) {
    const PolyVector basis_vec(Poly::term(unknowns[k].m, 1), EtaSet::single(unknowns[k].i));
    const Poly image = apply_delta(gradient, basis_vec).component(EtaSet{});
    for (const auto& [m, c] : image.terms()) delta_rows[m][k] += c;
    if (target_laplacian) {
      const Poly div = apply_Delta(basis_vec).component(EtaSet{});
      for (const auto& [m, c] : div.terms()) lap_rows[m][k] += c;
    }
  }
  for (const auto& [m, c] : target_delta.terms()) delta_rows.try_emplace(m);
  if (target_laplacian)
    for (const auto& [m, c] : target_laplacian->terms()) lap_rows.try_emplace(m);

  SparseSystem sys;
  for (auto& [m, row] : delta_rows)
    if (!sys.add(std::move(row), target_delta.coefficient(m))) return std::nullopt;
  for (auto& [m, row] : lap_rows)
    if (!sys.add(std::move(row), target_laplacian->coefficient(m))) return std::nullopt;

  PolyVector c(n);
  for (const auto& [k, v] : sys.solve()) c.add(EtaSet::single(unknowns[k].i), Poly::term(unknowns[k].m, v));
  // the elimination is exact; the identities are re-checked anyway
  if (apply_delta(gradient, c).component(EtaSet{}) != target_delta) return std::nullopt;
  if (target_laplacian && apply_Delta(c).component(EtaSet{}) != *target_laplacian) return std::nullopt;
  return c;
}

Report check_fqm11(const FlatFStructure& s, std::optional<std::size_t> level) {
  const std::size_t L = level.value_or(s.max_level);
  if (L < 2) throw InputError("fqm11 needs level >= 2");
  if (L > s.max_level)
    throw InputError("level-insufficient: requested level " + std::to_string(L) + " but the structure is computed to " +
                     std::to_string(s.max_level));
  const std::size_t d = s.dimension(), n = s.nvars();
  const int N = static_cast<int>(L) - 2;

  Report report;
  report.name = "fqm11";
  report.stats = {{"level", L}, {"t_order", N}, {"dimension", d}};

  const Poly zero_p(n);
  const auto gamma = gamma_series(s, static_cast<int>(L));
  std::vector<TruncatedSeries<Poly>> dgamma;
  for (std::size_t a = 0; a < d; ++a) dgamma.push_back(gamma.derivative(a));
  const auto grad = gradient(s.potential);
  int min_grad_degree = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (!grad[i].is_zero()) min_grad_degree = i == 0 ? grad[i].degree() : std::min(min_grad_degree, grad[i].degree());
  // ∂_{x_i}Γ; the ∂_iS part of δ_{S+Γ} is applied separately
  std::vector<TruncatedSeries<Poly>> xgrad;
  for (std::size_t i = 0; i < n; ++i)
    xgrad.push_back(gamma.map([i](const Poly& p) { return p.partial(i); }, zero_p).truncated(N));

  auto pmul = [](const Poly& x, const Poly& y) { return x * y; };
  auto scal = [](const Rational& c, const Poly& p) { return p * c; };
  auto text = [&](const Poly& p) { return to_string(p, s.variables); };
  const auto exps = exponents_up_to(d, N);
  std::size_t exact = 0, corrected = 0;

  for (std::size_t alpha = 0; alpha < d; ++alpha) {
    for (std::size_t beta = alpha; beta < d; ++beta) {
      // everything of the first equation except δ_{S+Γ}(Λ)
      TruncatedSeries<Poly> known = multiply(dgamma[alpha], dgamma[beta], pmul, zero_p).truncated(N);
      for (std::size_t rho = 0; rho < d; ++rho) known -= multiply(a_series(s, alpha, beta, rho, N), dgamma[rho], scal, zero_p);
      const TruncatedSeries<Poly> second = dgamma[alpha].derivative(beta).truncated(N);

      std::map<TExponent, PolyVector> Lambda;  // ordinary Taylor coefficients
      for (const auto& e : exps) {
        // order-e part of δ_{S+Γ}(Λ) coming from lower coefficients of Λ
        Poly target = known.coefficient(e);
        for (const auto& [el, lam] : Lambda) {
          TExponent rest(e);
          bool fits = true;
          for (std::size_t k = 0; k < d && fits; ++k) {
            if (el[k] > e[k]) fits = false;
            else rest[k] -= el[k];
          }
          if (!fits || total_degree(rest) == 0) continue;
          for (std::size_t i = 0; i < n; ++i) {
            const Poly li = lam.component(EtaSet::single(i));
            if (!li.is_zero()) target -= xgrad[i].coefficient(rest) * li;
          }
        }
        std::vector<std::size_t> rest_idx;
        for (std::size_t k = 0; k < d; ++k) rest_idx.insert(rest_idx.end(), e[k], k);
        const MultiIndex key = MultiIndex{alpha, beta} + MultiIndex(rest_idx);
        auto it = s.table.lambda.find(key);
        if (it == s.table.lambda.end()) throw ComputationError("coefficient " + key.to_string() + " missing from table");
        PolyVector lam = it->second * (Rational(1) / factorial(e));

        const Poly r1 = target - apply_delta(grad, lam).component(EtaSet{});
        const Poly r2 = second.coefficient(e) - apply_Delta(lam).component(EtaSet{});
        report.count("product_equation");
        report.count("laplacian_equation");
        if (r1.is_zero() && r2.is_zero()) {
          ++exact;
        } else {
          const int base = std::max({r1.degree() - min_grad_degree, r2.degree() + 1, 0});
          std::optional<PolyVector> fix;
          unsigned bound = static_cast<unsigned>(base);
          for (; bound <= static_cast<unsigned>(base) + 2 && !fix; ++bound)
            fix = solve_lambda(grad, r1, r2, bound, s.charges);
          if (fix) {
            lam += *fix;
            ++corrected;
          } else {
            const unsigned searched = static_cast<unsigned>(base) + 2;
            const bool product_solvable = solve_lambda(grad, r1, std::nullopt, searched, s.charges).has_value();
            report.fail(product_solvable ? "laplacian_equation" : "product_equation",
                        {{"alpha", alpha},
                         {"beta", beta},
                         {"t_exponent", exponent_json(e)},
                         {"product_residual", text(r1)},
                         {"laplacian_residual", text(r2)},
                         {"search_degree", searched}});
          }
        }
        if (!lam.is_zero()) Lambda.emplace(e, std::move(lam));
      }
    }
  }
  report.stats["lambda_from_table"] = exact;
  report.stats["lambda_corrected"] = corrected;
  if (corrected > 0)
    report.notes.push_back(std::to_string(corrected) +
                           " Λ coefficients differ from the multiset table entry by an exactly solved correction");
  return report;
}

namespace {

void unit_law(const FlatFStructure& s, Report& report) {
  if (!s.identity) {
    report.notes.push_back("no basis element represents 1; unit law skipped");
    report.stats["unit_checked"] = false;
    return;
  }
  report.stats["unit_checked"] = true;
  const std::size_t d = s.dimension(), e = *s.identity;
  for (std::size_t beta = 0; beta < d; ++beta) {
    for (std::size_t rho = 0; rho < d; ++rho) {
      report.count("unit");
      const Rational got = s.series_coefficient(e, beta, rho);
      const Rational want = beta == rho ? 1 : 0;
      if (got != want)
        report.fail("unit", {{"identity", e},
                             {"beta", beta},
                             {"rho", rho},
                             {"value", format_rational(got)},
                             {"expected", format_rational(want)}});
    }
  }
}

}  // namespace

Report check_unit(const FlatFStructure& s) {
  Report report;
  report.name = "unit";
  unit_law(s, report);
  return report;
}

Report check_flat_f(const FlatFStructure& s, std::optional<int> max_order) {
  const int N = max_order.value_or(static_cast<int>(s.max_level) - 2);
  if (N < 0) throw InputError("order must be non-negative");
  if (N > static_cast<int>(s.max_level) - 2)
    throw InputError("level-insufficient: order " + std::to_string(N) + " needs level " + std::to_string(N + 2));
  const std::size_t d = s.dimension();

  Report report;
  report.name = "flatf";
  report.stats = {{"t_order", N}, {"dimension", d}, {"level", s.max_level}};
  unit_law(s, report);

  // commutativity of a_{αβ rest}^ρ as read through the table
  for (int k = 0; k <= N; ++k) {
    for (const auto& rest : multisets_of_size(d, static_cast<std::size_t>(k))) {
      for (std::size_t alpha = 0; alpha < d; ++alpha)
        for (std::size_t beta = alpha + 1; beta < d; ++beta)
          for (std::size_t rho = 0; rho < d; ++rho) {
            report.count("commutativity");
            const Rational x = s.series_coefficient(alpha, beta, rho, rest);
            const Rational y = s.series_coefficient(beta, alpha, rho, rest);
            if (x != y)
              report.fail("commutativity", {{"alpha", alpha},
                                            {"beta", beta},
                                            {"rho", rho},
                                            {"rest", rest.to_string()},
                                            {"residual", format_rational(x - y)}});
          }
    }
  }

  // P[{α,β}][γ][δ] = Σ_ρ A_{αβ}^ρ A_{γρ}^δ; associativity is its full symmetry in α, β, γ.
  std::vector<TruncatedSeries<Rational>> A(d * d * d, TruncatedSeries<Rational>(d, N, Rational(0)));
  auto aidx = [d](std::size_t x, std::size_t y, std::size_t r) { return (x * d + y) * d + r; };
  for (std::size_t x = 0; x < d; ++x)
    for (std::size_t y = x; y < d; ++y)
      for (std::size_t r = 0; r < d; ++r) {
        A[aidx(x, y, r)] = a_series(s, x, y, r, N);
        A[aidx(y, x, r)] = A[aidx(x, y, r)];
      }
  auto qmul = [](const Rational& x, const Rational& y) { return Rational(x * y); };
  std::map<std::array<std::size_t, 4>, TruncatedSeries<Rational>> P;
  auto product = [&](std::size_t x, std::size_t y, std::size_t g, std::size_t dl) -> const TruncatedSeries<Rational>& {
    std::array<std::size_t, 4> key{std::min(x, y), std::max(x, y), g, dl};
    auto it = P.find(key);
    if (it != P.end()) return it->second;
    TruncatedSeries<Rational> acc(d, N, Rational(0));
    for (std::size_t r = 0; r < d; ++r) {
      if (A[aidx(x, y, r)].is_zero() || A[aidx(g, r, dl)].is_zero()) continue;
      acc += multiply(A[aidx(x, y, r)], A[aidx(g, r, dl)], qmul, Rational(0));
    }
    return P.emplace(key, std::move(acc)).first->second;
  };

  std::vector<std::size_t> checked_by_order(static_cast<std::size_t>(N) + 1, 0);
  for (std::size_t x = 0; x < d; ++x)
    for (std::size_t y = 0; y < d; ++y)
      for (std::size_t g = 0; g < d; ++g)
        for (std::size_t dl = 0; dl < d; ++dl) {
          // (u_x u_y) u_g against u_x (u_y u_g)
          TruncatedSeries<Rational> diff = product(x, y, g, dl);
          diff -= product(y, g, x, dl);
          report.count("associativity");
          for (const auto& [e, c] : diff.coefficients())
            report.fail("associativity", {{"alpha", x},
                                          {"beta", y},
                                          {"gamma", g},
                                          {"delta", dl},
                                          {"t_exponent", exponent_json(e)},
                                          {"order", total_degree(e)},
                                          {"residual", format_rational(c)}});
        }
  report.stats["associativity_slots"] = d * d * d * d;
  return report;
}

PolyVector koszul_syzygy(const std::vector<Poly>& gradient, std::size_t j, std::size_t k, const Poly& f) {
  const std::size_t n = gradient.size();
  if (j >= n || k >= n) throw InputError("syzygy index out of range");
  PolyVector out(n);
  out.add(EtaSet::single(k), f * gradient[j]);
  out.add(EtaSet::single(j), -(f * gradient[k]));
  return out;
}

Report ambiguity_probe(const JacobianQuotient& quotient, const FlatFStructure& baseline, const MultiIndex& index,
                       std::size_t stage, const PolyVector& addend) {
  if (index.size() < 2 || index.size() > baseline.max_level)
    throw InputError("probe index " + index.to_string() + " outside the computed levels 2.." +
                     std::to_string(baseline.max_level));
  for (std::size_t i : index)
    if (i >= baseline.dimension()) throw InputError("probe index out of range");
  if (stage + 1 > index.size() - 1)
    throw InputError("cascade of " + index.to_string() + " has " + std::to_string(index.size() - 1) + " stages");
  for (const auto& [j, p] : addend.components())
    if (j.size() != 1) throw InputError("invalid syzygy: expected a single-η element");
  if (!apply_delta(quotient.gradient(), addend).is_zero()) throw InputError("invalid syzygy: δ_S does not vanish");
  if (const auto& ch = quotient.problem().charges) {
    if (charge_check(addend, ChargeSpec{*ch}) != 0) throw InputError("invalid syzygy: charge is not zero");
  }

  EngineOptions opts;
  opts.perturbations.push_back({index, stage, addend});
  const FlatFStructure perturbed = run(quotient, baseline.max_level, opts);
  Report report = compare_a_tables(baseline, perturbed, index.size());
  report.name = "ambiguity";
  report.stats["index"] = index.to_string();
  report.stats["stage"] = stage;
  report.stats["addend"] = to_string(addend, baseline.variables);
  return report;
}

Report compare_a_tables(const FlatFStructure& baseline, const FlatFStructure& other, std::size_t from_level) {
  Report report;
  report.name = "a_tables";
  report.stats = {{"from_level", from_level}, {"level", baseline.max_level}};
  for (const auto& [m, a] : baseline.table.a) {
    if (m.size() < from_level) continue;
    report.count("a_unchanged");
    auto it = other.table.a.find(m);
    if (it == other.table.a.end()) {
      report.fail("a_unchanged", {{"index", m.to_string()}, {"reason", "missing"}});
      continue;
    }
    for (std::size_t r = 0; r < a.size(); ++r)
      if (a[r] != it->second.at(r))
        report.fail("a_unchanged", {{"index", m.to_string()},
                                    {"rho", r},
                                    {"baseline", format_rational(a[r])},
                                    {"other", format_rational(it->second.at(r))}});
  }
  return report;
}

}  // namespace flatf
