#include <gtest/gtest.h>

#include "flatf/error.hpp"
#include "flatf/io.hpp"
#include "flatf/verifier.hpp"

using namespace flatf;

namespace {

struct Fixture {
  ProblemFile file;
  JacobianQuotient quotient;
  FlatFStructure structure;
};

Fixture load(const std::string& name, std::optional<std::size_t> level = std::nullopt) {
  ProblemFile pf = load_problem(std::string(FLATF_TEST_DATA) + "/" + name);
  JacobianQuotient q = JacobianQuotient::build(pf.problem);
  FlatFStructure s = run(q, level.value_or(pf.max_level));
  return {std::move(pf), std::move(q), std::move(s)};
}

const Fixture& a2() {
  static const Fixture f = load("a2.json");
  return f;
}
const Fixture& fermat() {
  static const Fixture f = load("fermat.json", 3);
  return f;
}
const Fixture& dwork() {
  static const Fixture f = load("dwork.json");
  return f;
}

bool has_failure(const Report& r, const std::string& check) {
  for (const auto& c : r.failures)
    if (c.check == check) return true;
  return false;
}

}  // namespace

TEST(Axioms, HoldForCubic) {
  const auto& f = a2();
  const Report r = check_dgbv_axioms(f.file.problem.potential, std::nullopt, 100, 1, f.file.problem.variables);
  EXPECT_TRUE(r.passed) << r.to_json().dump(2);
  EXPECT_EQ(r.identities.at("bracket_jacobi"), 100u);
}

TEST(Axioms, HoldForFermatCubic) {
  const auto& f = fermat();
  const Report r = check_dgbv_axioms(f.file.problem.potential, std::nullopt, 60, 2, f.file.problem.variables);
  EXPECT_TRUE(r.passed) << r.to_json().dump(2);
}

TEST(Axioms, HoldForDworkWithCharges) {
  const auto& f = dwork();
  const Report r =
      check_dgbv_axioms(f.file.problem.potential, f.file.problem.charges, 60, 3, f.file.problem.variables);
  EXPECT_TRUE(r.passed) << r.to_json().dump(2);
  EXPECT_GE(r.identities.at("charge_preservation"), 60u);
}

TEST(Axioms, SameSeedSameReport) {
  const auto& f = a2();
  const auto& p = f.file.problem;
  EXPECT_EQ(check_dgbv_axioms(p.potential, std::nullopt, 30, 9, p.variables).to_json(),
            check_dgbv_axioms(p.potential, std::nullopt, 30, 9, p.variables).to_json());
}

TEST(Axioms, NonGradientDeltaBreaksTotalSquare) {
  const auto& p = fermat().file.problem;
  DgbvOperators ops = DgbvOperators::standard(p.potential);
  std::vector<Poly> field = gradient(p.potential);
  field[0] += parse_poly("x2", p.variables);  // not a gradient any more
  ops.delta = [field](const PolyVector& a) { return apply_delta(field, a); };
  const Report r = check_dgbv_axioms(p.potential, std::nullopt, 40, 5, p.variables, {}, ops);
  EXPECT_FALSE(r.passed);
  EXPECT_TRUE(has_failure(r, "total_squared"));
  EXPECT_EQ(r.identities.count("delta_squared"), 1u);
  ASSERT_FALSE(r.failures.empty());
  EXPECT_TRUE(r.failures.front().detail.contains("a"));
  EXPECT_TRUE(r.failures.front().detail.contains("residual"));
}

TEST(Axioms, ScaledLaplacianIsCaught) {
  const auto& p = fermat().file.problem;
  DgbvOperators ops = DgbvOperators::standard(p.potential);
  const Poly w = parse_poly("1 + x1", p.variables);
  ops.laplacian = [w](const PolyVector& a) { return PolyVector(w) * apply_Delta(a); };
  const Report r = check_dgbv_axioms(p.potential, std::nullopt, 40, 5, p.variables, {}, ops);
  EXPECT_FALSE(r.passed);
  EXPECT_TRUE(has_failure(r, "laplacian_squared"));
}

TEST(Axioms, ChargeBreakingDeltaIsCaught) {
  const auto& p = dwork().file.problem;
  DgbvOperators ops = DgbvOperators::standard(p.potential);
  std::vector<Poly> field = gradient(p.potential);
  field[1] += parse_poly("z0^2", p.variables);
  ops.delta = [field](const PolyVector& a) { return apply_delta(field, a); };
  const Report r = check_dgbv_axioms(p.potential, p.charges, 40, 5, p.variables, {}, ops);
  EXPECT_FALSE(r.passed);
  EXPECT_TRUE(has_failure(r, "charge_preservation"));
}

TEST(Axioms, RejectsConstantPotential) {
  EXPECT_THROW(check_dgbv_axioms(Poly::constant(0, 1), std::nullopt, 1, 0, {}), InputError);
}

TEST(SolveLambda, FindsWitnessForJacobianElement) {
  const std::vector<std::string> vars{"x1", "x2"};
  const auto grad = gradient(parse_poly("1/3*x1^3 + 1/3*x2^3", vars));
  const Poly target = parse_poly("x1^2*x2 + 2*x2^3", vars);
  const auto c = solve_lambda(grad, target, std::nullopt, 1);
  ASSERT_TRUE(c.has_value());
  EXPECT_EQ(apply_delta(grad, *c).component(EtaSet{}), target);
}

TEST(SolveLambda, HonoursLaplacianTarget) {
  const std::vector<std::string> vars{"x"};
  const auto grad = gradient(parse_poly("1/3*x^3", vars));
  // δ(q η) = x^2 q forces q = x, whose divergence is 1
  EXPECT_TRUE(solve_lambda(grad, parse_poly("x^3", vars), parse_poly("1", vars), 2).has_value());
  EXPECT_FALSE(solve_lambda(grad, parse_poly("x^3", vars), parse_poly("2", vars), 2).has_value());
}

TEST(SolveLambda, NothingOutsideTheIdeal) {
  const std::vector<std::string> vars{"x"};
  const auto grad = gradient(parse_poly("1/3*x^3", vars));
  EXPECT_FALSE(solve_lambda(grad, parse_poly("x", vars), std::nullopt, 4).has_value());
}

TEST(Fqm11, PassesForCubic) {
  const Report r = check_fqm11(a2().structure);
  EXPECT_TRUE(r.passed) << r.to_json().dump(2);
  EXPECT_GT(r.identities.at("product_equation"), 0u);
}

TEST(Fqm11, PassesForFermat) {
  const Report r = check_fqm11(fermat().structure);
  EXPECT_TRUE(r.passed) << r.to_json().dump(2);
}

TEST(Fqm11, PassesForDwork) {
  const Report r = check_fqm11(dwork().structure);
  EXPECT_TRUE(r.passed) << r.to_json().dump(2);
}

TEST(Fqm11, LevelBeyondComputedIsAnError) {
  EXPECT_THROW(check_fqm11(a2().structure, a2().structure.max_level + 1), Error);
}

TEST(Fqm11, TamperedStructureConstantIsLocated) {
  FlatFStructure s = fermat().structure;
  s.table.a.at(MultiIndex{1, 2, 3})[4] += 1;
  const Report r = check_fqm11(s);
  ASSERT_FALSE(r.passed);
  const auto& d = r.failures.front().detail;
  EXPECT_TRUE(d.contains("alpha") && d.contains("beta") && d.contains("t_exponent"));
}

TEST(Fqm11, TamperedLevelTwoUIsLocated) {
  FlatFStructure s = a2().structure;
  s.table.u.at(MultiIndex{1, 1}) += Poly::constant(1, 1);
  const Report r = check_fqm11(s);
  ASSERT_FALSE(r.passed);
  EXPECT_GT(r.failure_count, 0u);
}

TEST(FlatF, PassesForAllExamples) {
  for (const Fixture* f : {&a2(), &fermat(), &dwork()}) {
    const Report r = check_flat_f(f->structure);
    EXPECT_TRUE(r.passed) << r.to_json().dump(2);
  }
}

TEST(FlatF, TamperedStructureConstantBreaksAssociativity) {
  FlatFStructure s = fermat().structure;
  const std::size_t e = *s.identity;
  const std::size_t other = e == 0 ? 1 : 0;
  s.table.a.at(MultiIndex{other, other})[other] += 1;
  const Report r = check_flat_f(s);
  ASSERT_FALSE(r.passed);
  EXPECT_TRUE(has_failure(r, "associativity"));
  const auto& d = r.failures.front().detail;
  EXPECT_TRUE(d.contains("t_exponent"));
}

TEST(FlatF, OrderAboveLevelIsRejected) {
  EXPECT_THROW(check_flat_f(a2().structure, static_cast<int>(a2().structure.max_level) - 1), InputError);
}

TEST(Unit, HoldsForComputedStructures) {
  for (const Fixture* f : {&a2(), &fermat(), &dwork()}) {
    const Report r = check_unit(f->structure);
    EXPECT_TRUE(r.passed) << r.to_json().dump(2);
    EXPECT_EQ(r.identities.at("unit"), f->structure.dimension() * f->structure.dimension());
  }
}

TEST(Unit, TamperedIdentityRowIsLocated) {
  FlatFStructure s = a2().structure;
  const std::size_t e = *s.identity;
  s.table.a.at(MultiIndex{e, 1 - e})[0] += 1;
  const Report r = check_unit(s);
  ASSERT_FALSE(r.passed);
  EXPECT_EQ(r.failures.front().detail.at("beta"), 1 - e);
  EXPECT_EQ(r.failures.front().detail.at("rho"), 0u);
  EXPECT_FALSE(check_flat_f(s).passed);
}

TEST(Koszul, SyzygyIsInKernel) {
  const auto& q = fermat().quotient;
  const Poly f = parse_poly("x1 - 2*x3", q.problem().variables);
  for (std::size_t j = 0; j < 3; ++j)
    for (std::size_t k = j + 1; k < 3; ++k)
      EXPECT_TRUE(apply_delta(q.gradient(), koszul_syzygy(q.gradient(), j, k, f)).is_zero());
}

TEST(Ambiguity, SyzygyLeavesStructureConstantsUnchanged) {
  const auto& f = fermat();
  const auto& vars = f.quotient.problem().variables;
  const PolyVector z = koszul_syzygy(f.quotient.gradient(), 0, 1, parse_poly("x3", vars));
  const Report r = ambiguity_probe(f.quotient, f.structure, MultiIndex{1, 2, 3}, 0, z);
  EXPECT_TRUE(r.passed) << r.to_json().dump(2);
  EXPECT_GT(r.identities.at("a_unchanged"), 0u);
}

TEST(Ambiguity, RejectsNonSyzygy) {
  const auto& f = fermat();
  const PolyVector bad = parse_polyvector("(x1)*e[1]", f.quotient.problem().variables);
  EXPECT_THROW(ambiguity_probe(f.quotient, f.structure, MultiIndex{1, 2, 3}, 0, bad), InputError);
  const PolyVector z = koszul_syzygy(f.quotient.gradient(), 0, 1, Poly::constant(3, 1));
  EXPECT_THROW(ambiguity_probe(f.quotient, f.structure, MultiIndex{1, 2, 3}, 2, z), InputError);
  EXPECT_THROW(ambiguity_probe(f.quotient, f.structure, MultiIndex{1, 2, 3, 4}, 0, z), InputError);
}

TEST(Ambiguity, ComparisonLocatesChangedCoefficients) {
  const auto& f = a2();
  FlatFStructure other = f.structure;
  other.table.a.at(MultiIndex{1, 1, 1})[0] += Rational(1, 2);
  const Report r = compare_a_tables(f.structure, other, 2);
  ASSERT_FALSE(r.passed);
  EXPECT_EQ(r.failures.front().detail.at("index"), MultiIndex({1, 1, 1}).to_string());
  EXPECT_EQ(r.failures.front().detail.at("other"), "-1/2");
}
