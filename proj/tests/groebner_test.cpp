#include <gtest/gtest.h>

#include <random>

#include "flatf/groebner.hpp"
#include "flatf/quotient.hpp"

using namespace flatf;

namespace {

std::vector<Poly> parse_all(const std::vector<std::string>& texts, const std::vector<std::string>& vars) {
  std::vector<Poly> out;
  for (const auto& t : texts) out.push_back(parse_poly(t, vars));
  return out;
}

const std::vector<std::string> kDwork = {"y", "z0", "z1", "z2"};

}  // namespace

TEST(Buchberger, FermatCubicIsMonomial) {
  const std::vector<std::string> v = {"x1", "x2", "x3"};
  const auto gens = jacobian_generators(parse_poly("1/3*(x1^3+x2^3+x3^3)", v));
  const auto gb = buchberger(gens, MonomialOrder::degrevlex(3));
  EXPECT_EQ(gb.gb, parse_all({"x3^2", "x2^2", "x1^2"}, v));
  EXPECT_TRUE(gb.is_zero_dimensional());
  EXPECT_TRUE(verify_reconstruction(gb));
}

TEST(Buchberger, DworkGolden) {
  // reduced grevlex basis on (y, z0, z1, z2), computed with an independent CAS
  const auto gens = jacobian_generators(parse_poly("y*(z0^3+z1^3+z2^3)", kDwork));
  const auto gb = buchberger(gens, MonomialOrder::degrevlex(4));
  const auto expected = parse_all({"y*z2^2", "y*z1^2", "y*z0^2", "z0^3 + z1^3 + z2^3"}, kDwork);
  ASSERT_EQ(gb.gb.size(), expected.size());
  for (const auto& g : expected) EXPECT_NE(std::find(gb.gb.begin(), gb.gb.end(), g), gb.gb.end()) << to_string(g, kDwork);
  EXPECT_FALSE(gb.is_zero_dimensional());
  EXPECT_TRUE(verify_reconstruction(gb));
  EXPECT_TRUE(verify_groebner_criterion(gb));
}

TEST(Buchberger, MixedPotential) {
  const std::vector<std::string> v = {"x", "y"};
  const auto gens = jacobian_generators(parse_poly("x^3 + x*y^2 + y^4", v));
  for (auto order : {MonomialOrder::degrevlex(2), MonomialOrder::deglex(2)}) {
    const auto gb = buchberger(gens, order);
    EXPECT_TRUE(verify_reconstruction(gb));
    EXPECT_TRUE(verify_groebner_criterion(gb));
    EXPECT_TRUE(gb.is_zero_dimensional());
  }
}

TEST(Reduction, CofactorsOverOriginalGenerators) {
  const std::vector<std::string> v = {"x", "y"};
  const auto gens = jacobian_generators(parse_poly("x^3 + x*y^2 + y^4", v));
  const auto gb = buchberger(gens, MonomialOrder::degrevlex(2));
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<int> e(0, 6), c(-5, 5);
  for (int trial = 0; trial < 100; ++trial) {
    Poly p(2);
    for (int t = 0; t < 4; ++t) p.add_term(Monomial({std::uint32_t(e(rng)), std::uint32_t(e(rng))}), c(rng));
    const auto out = reduce_full(p, gb);
    Poly rebuilt = out.remainder;
    for (std::size_t i = 0; i < gens.size(); ++i) rebuilt += out.cofactors[i] * gens[i];
    EXPECT_EQ(rebuilt, p);
    EXPECT_EQ(out.remainder, normal_form(p, gb));
    // the remainder has no term divisible by a leading monomial
    for (const auto& [m, q] : out.remainder.terms())
      for (const auto& lm : gb.leading_monomials()) EXPECT_FALSE(lm.divides(m));
  }
}

TEST(Reduction, NormalFormIsIdealInvariant) {
  const std::vector<std::string> v = {"x", "y"};
  const auto gens = jacobian_generators(parse_poly("x^3 + x*y^2 + y^4", v));
  const auto gb = buchberger(gens, MonomialOrder::degrevlex(2));
  const Poly p = parse_poly("x^5*y - 3*y^3 + 2", v);
  const Poly shifted = p + parse_poly("x*y + 1", v) * gens[0] - parse_poly("y^3", v) * gens[1];
  EXPECT_EQ(normal_form(p, gb), normal_form(shifted, gb));
}

TEST(StandardMonomials, FermatBox) {
  const std::vector<std::string> v = {"x1", "x2", "x3"};
  const auto gb = buchberger(jacobian_generators(parse_poly("1/3*(x1^3+x2^3+x3^3)", v)), MonomialOrder::degrevlex(3));
  const auto sm = standard_monomials(gb, std::nullopt, 2);
  EXPECT_TRUE(sm.complete);
  EXPECT_EQ(sm.monomials.size(), 8u);  // (3-1)^3, independent of the bound
}

TEST(StandardMonomials, DworkChargeZero) {
  const auto gb = buchberger(jacobian_generators(parse_poly("y*(z0^3+z1^3+z2^3)", kDwork)), MonomialOrder::degrevlex(4));
  const ChargeFilter filter{ChargeSpec{{-3, 1, 1, 1}}, 0};
  const auto sm = standard_monomials(gb, filter, 6);
  EXPECT_TRUE(sm.complete) << sm.status;
  ASSERT_EQ(sm.monomials.size(), 2u);
  EXPECT_EQ(sm.monomials[0], Monomial({0, 0, 0, 0}));
  EXPECT_EQ(sm.monomials[1], Monomial({1, 1, 1, 1}));

  // oracle: brute-force charge-zero monomials up to y-degree 6 that no leading monomial divides
  std::size_t count = 0;
  for (std::uint32_t a = 0; a <= 6; ++a)
    for (std::uint32_t b = 0; b <= 3 * a; ++b)
      for (std::uint32_t c = 0; b + c <= 3 * a; ++c) {
        const Monomial m({a, b, c, 3 * a - b - c});
        bool standard = true;
        for (const auto& lm : gb.leading_monomials()) standard = standard && !lm.divides(m);
        count += standard;
      }
  EXPECT_EQ(count, 2u);
}

TEST(StandardMonomials, UnfilteredNonIsolatedIsFlagged) {
  const auto gb = buchberger(jacobian_generators(parse_poly("y*(z0^3+z1^3+z2^3)", kDwork)), MonomialOrder::degrevlex(4));
  const auto sm = standard_monomials(gb, std::nullopt, 4);
  EXPECT_FALSE(sm.complete);
  EXPECT_NE(sm.status.find("incomplete"), std::string::npos);
}
