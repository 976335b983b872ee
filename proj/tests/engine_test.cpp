#include <gtest/gtest.h>

#include <functional>
#include <map>

#include "flatf/engine.hpp"
#include "flatf/error.hpp"

using namespace flatf;

namespace {

Problem make_problem(std::vector<std::string> vars, const std::string& potential) {
  Problem p;
  p.potential = parse_poly(potential, vars);
  p.order = MonomialOrder::degrevlex(vars.size());
  p.variables = std::move(vars);
  return p;
}

/// Hand recursion for S = x^3/3 with basis {1, x}, written against dense
/// univariate coefficient vectors and ordered set partitions.
class A2Oracle {
 public:
  using U = std::vector<Rational>;  // coefficient of x^k at position k

  explicit A2Oracle(std::size_t level) {
    u_[{0}] = {1};
    u_[{1}] = {0, 1};
    for (std::size_t m = 2; m <= level; ++m)
      for (const auto& idx : multisets(m)) solve(idx);
  }

  const std::map<std::vector<std::size_t>, U>& u() const { return u_; }
  const std::map<std::vector<std::size_t>, std::vector<Rational>>& a() const { return a_; }

 private:
  static std::vector<std::vector<std::size_t>> multisets(std::size_t m) {
    std::vector<std::vector<std::size_t>> out;
    for (std::size_t ones = 0; ones <= m; ++ones) {
      std::vector<std::size_t> v(m - ones, 0);
      v.insert(v.end(), ones, 1);
      out.push_back(v);
    }
    return out;
  }

  static U mul(const U& p, const U& q) {
    if (p.empty() || q.empty()) return {};
    U r(p.size() + q.size() - 1, 0);
    for (std::size_t i = 0; i < p.size(); ++i)
      for (std::size_t j = 0; j < q.size(); ++j) r[i + j] += p[i] * q[j];
    return r;
  }
  static void add(U& p, const U& q, const Rational& c) {
    if (p.size() < q.size()) p.resize(q.size(), 0);
    for (std::size_t i = 0; i < q.size(); ++i) p[i] += c * q[i];
  }

  /// Σ over surjections of the m positions onto k labelled blocks of Π u_block, divided by k!.
  U u_i(const std::vector<std::size_t>& idx, std::size_t k) const {
    const std::size_t m = idx.size();
    U total;
    std::vector<std::size_t> label(m, 0);
    std::function<void(std::size_t)> rec = [&](std::size_t pos) {
      if (pos == m) {
        std::vector<std::vector<std::size_t>> blocks(k);
        for (std::size_t p = 0; p < m; ++p) blocks[label[p]].push_back(idx[p]);
        for (const auto& b : blocks)
          if (b.empty()) return;
        U prod = {1};
        for (auto& b : blocks) {
          std::sort(b.begin(), b.end());
          prod = mul(prod, u_.at(b));
        }
        add(total, prod, 1);
        return;
      }
      for (std::size_t l = 0; l < k; ++l) {
        label[pos] = l;
        rec(pos + 1);
      }
    };
    rec(0);
    Rational fact = 1;
    for (std::size_t j = 2; j <= k; ++j) fact *= j;
    for (auto& c : total) c /= fact;
    return total;
  }

  /// v = c0 + c1 x + x^2 q(x) = c0·1 + c1·x + δ_S(q η); returns (c0, c1) and Δ(q η) = q'.
  static std::pair<std::vector<Rational>, U> reduce(const U& v) {
    std::vector<Rational> c = {v.size() > 0 ? v[0] : Rational(0), v.size() > 1 ? v[1] : Rational(0)};
    U dq;
    for (std::size_t k = 3; k < v.size(); ++k) dq.resize(k - 2, 0), dq[k - 3] = v[k] * Rational(k - 2);
    return {c, dq};
  }

  void solve(const std::vector<std::size_t>& idx) {
    const std::size_t m = idx.size();
    U dl;
    std::vector<Rational> coeffs;
    for (std::size_t i = 0; i + 1 < m; ++i) {
      U v = u_i(idx, m - i);
      add(v, dl, -1);
      std::tie(coeffs, dl) = reduce(v);
    }
    a_[idx] = coeffs;
    u_[idx] = dl;
  }

  std::map<std::vector<std::size_t>, U> u_;
  std::map<std::vector<std::size_t>, std::vector<Rational>> a_;
};

Poly to_poly(const A2Oracle::U& u) {
  Poly p(1);
  for (std::size_t k = 0; k < u.size(); ++k) p.add_term(Monomial(std::vector<std::uint32_t>{std::uint32_t(k)}), u[k]);
  return p;
}

}  // namespace

TEST(MultiIndex, SortedMultiset) {
  EXPECT_EQ(MultiIndex({2, 0, 1}).indices(), (std::vector<std::size_t>{0, 1, 2}));
  EXPECT_EQ((MultiIndex{1} + MultiIndex{0, 1}).to_string(), "(0,1,1)");
  EXPECT_EQ(MultiIndex({1, 1, 0}).multiplicities(3), (std::vector<std::uint32_t>{1, 2, 0}));
  EXPECT_EQ(multisets_of_size(3, 2).size(), 6u);
  EXPECT_EQ(multisets_of_size(8, 4).size(), 330u);
}

TEST(Engine, A2GoldenValues) {
  const auto q = JacobianQuotient::build(make_problem({"x"}, "1/3*x^3"));
  const auto s = run(q, 3);
  ASSERT_EQ(s.dimension(), 2u);
  const std::size_t e = 0, one = 1;  // basis {1, x}: index 1 is the coordinate of x
  EXPECT_EQ(s.table.a.at({one, one}), (std::vector<Rational>{0, 0}));
  EXPECT_EQ(s.table.lambda.at({one, one}), PolyVector::eta(1, 0));
  EXPECT_TRUE(s.table.u.at({one, one}).is_zero());
  EXPECT_EQ(s.table.a.at({one, one, one})[e], Rational(-1));
  EXPECT_TRUE(s.table.u.at({one, one, one}).is_zero());
  EXPECT_EQ(s.table.a.at({e, one, one}), (std::vector<Rational>{0, 0}));
}

TEST(Engine, A2MatchesHandRecursion) {
  constexpr std::size_t kLevel = 6;
  const A2Oracle oracle(kLevel);
  const auto s = run(JacobianQuotient::build(make_problem({"x"}, "1/3*x^3")), kLevel);
  for (const auto& [idx, u] : oracle.u()) EXPECT_EQ(s.table.u.at(MultiIndex(idx)), to_poly(u)) << MultiIndex(idx).to_string();
  for (const auto& [idx, a] : oracle.a()) EXPECT_EQ(s.table.a.at(MultiIndex(idx)), a) << MultiIndex(idx).to_string();
}

TEST(Engine, CascadeIdentityAtEveryStage) {
  const auto q = JacobianQuotient::build(make_problem({"x1", "x2", "x3"}, "1/3*(x1^3+x2^3+x3^3)"));
  const auto s = run(q, 3);
  for (const auto& idx : multisets_of_size(8, 4)) {
    const auto r = step(idx, s.table, q);
    ASSERT_EQ(r.chain.size(), 3u);
    Poly prev_dl(3);
    for (std::size_t i = 0; i < r.chain.size(); ++i) {
      const auto& st = r.chain[i];
      EXPECT_EQ(st.input, assemble_u_i(s.table, idx, i, 3) - prev_dl);
      Poly rhs = apply_delta(q.gradient(), st.lambda).component(EtaSet{});
      for (std::size_t a = 0; a < st.a.size(); ++a) rhs += q.basis().reps()[a] * st.a[a];
      EXPECT_EQ(st.input, rhs) << idx.to_string() << " stage " << i;
      prev_dl = st.delta_lambda;
    }
  }
}

TEST(Engine, UiMatchesOrderedPartitionSum) {
  // naive: Σ over surjections onto k labelled blocks, divided by k!
  const auto s = run(JacobianQuotient::build(make_problem({"x1", "x2", "x3"}, "1/3*(x1^3+x2^3+x3^3)")), 3);
  auto naive = [&](const MultiIndex& idx, std::size_t k) {
    const std::size_t m = idx.size();
    Poly total(3);
    std::vector<std::size_t> label(m, 0);
    std::function<void(std::size_t)> rec = [&](std::size_t pos) {
      if (pos == m) {
        std::vector<std::vector<std::size_t>> blocks(k);
        for (std::size_t p = 0; p < m; ++p) blocks[label[p]].push_back(idx[p]);
        for (const auto& b : blocks)
          if (b.empty()) return;
        Poly prod = Poly::constant(3, 1);
        for (const auto& b : blocks) {
          prod = prod * s.table.u.at(MultiIndex(b));
        }
        total += prod;
        return;
      }
      for (std::size_t l = 0; l < k; ++l) label[pos] = l, rec(pos + 1);
    };
    rec(0);
    Rational fact = 1;
    for (std::size_t j = 2; j <= k; ++j) fact *= j;
    return total * (Rational(1) / fact);
  };
  for (const auto& idx : {MultiIndex{1, 2, 4, 7}, MultiIndex{4, 4, 4, 7}, MultiIndex{7, 7, 7, 7}, MultiIndex{0, 3, 5, 6}})
    for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(assemble_u_i(s.table, idx, i, 3), naive(idx, 4 - i)) << idx.to_string();
}

TEST(Engine, ParallelAndShuffledRunsAreIdentical) {
  const auto q = JacobianQuotient::build(make_problem({"x1", "x2", "x3"}, "1/3*(x1^3+x2^3+x3^3)"));
  const auto base = run(q, 4);
  for (std::uint64_t seed : {1u, 99u}) {
    EngineOptions opts;
    opts.threads = 4;
    opts.shuffle_seed = seed;
    const auto other = run(q, 4, opts);
    EXPECT_EQ(other.table.a, base.table.a);
    EXPECT_EQ(other.table.u, base.table.u);
    EXPECT_EQ(other.table.lambda, base.table.lambda);
  }
}

TEST(Engine, LevelOutOfRange) {
  const auto q = JacobianQuotient::build(make_problem({"x"}, "1/3*x^3"));
  EXPECT_THROW(run(q, 1), InputError);
  const auto s = run(q, 3);
  EXPECT_THROW(s.series_coefficient(1, 1, 0, {1, 1}), ComputationError);
}

TEST(Engine, DworkLevelThree) {
  Problem p = make_problem({"y", "z0", "z1", "z2"}, "y*(z0^3+z1^3+z2^3)");
  p.charges = ChargeSpec{{-3, 1, 1, 1}};
  p.bound = 6;
  const auto s = run(JacobianQuotient::build(p), 3);
  EXPECT_EQ(s.table.a.at({1, 1}), (std::vector<Rational>{0, 0}));
  EXPECT_TRUE(s.table.u.at({1, 1}).is_zero());
  EXPECT_EQ(s.identity, 0u);
}
