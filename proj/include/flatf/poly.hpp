#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace flatf {

/// Exact coefficient field. Everything in the library is written against this
/// alias; nothing depends on the field being Q beyond exact equality tests.
using Rational = mpq_class;

/// "p" for integers, "p/q" otherwise.
std::string format_rational(const Rational& q);
/// Always "p/q", used by the result file format.
std::string format_rational_pq(const Rational& q);
/// Accepts "p" or "p/q" with an optional leading minus sign.
Rational parse_rational(const std::string& text);

/// Exponent vector x_1^{e_1} ... x_n^{e_n}.
class Monomial {
 public:
  Monomial() = default;
  explicit Monomial(std::size_t nvars) : exps_(nvars, 0) {}
  explicit Monomial(std::vector<std::uint32_t> exps) : exps_(std::move(exps)) {}

  static Monomial variable(std::size_t nvars, std::size_t i, std::uint32_t power = 1);

  std::size_t nvars() const noexcept { return exps_.size(); }
  std::uint32_t operator[](std::size_t i) const { return exps_[i]; }
  const std::vector<std::uint32_t>& exponents() const noexcept { return exps_; }

  std::uint32_t degree() const noexcept;
  bool is_one() const noexcept;
  bool divides(const Monomial& other) const noexcept;
  bool coprime(const Monomial& other) const noexcept;

  Monomial operator*(const Monomial& other) const;
  /// Exact quotient; requires divides(*this).
  Monomial operator/(const Monomial& divisor) const;
  static Monomial lcm(const Monomial& a, const Monomial& b);

  /// Structural (lexicographic on exponent vectors) ordering used for map keys.
  /// Unrelated to any MonomialOrder.
  auto operator<=>(const Monomial&) const = default;

 private:
  std::vector<std::uint32_t> exps_;
};

/// A term order on monomials in a fixed number of variables.
///
/// `precedence` lists variable indices from most to least significant; the
/// identity permutation gives the usual x_1 > x_2 > ... > x_n.
class MonomialOrder {
 public:
  enum class Kind { degrevlex, deglex, weighted_degrevlex };

  MonomialOrder() = default;
  static MonomialOrder degrevlex(std::size_t nvars);
  static MonomialOrder deglex(std::size_t nvars);
  static MonomialOrder weighted_degrevlex(std::vector<std::uint32_t> weights);

  /// Returns a copy with the given variable precedence. Throws InputError if
  /// `precedence` is not a permutation of 0..n-1.
  MonomialOrder with_precedence(std::vector<std::size_t> precedence) const;

  Kind kind() const noexcept { return kind_; }
  std::size_t nvars() const noexcept { return precedence_.size(); }
  const std::vector<std::size_t>& precedence() const noexcept { return precedence_; }
  const std::vector<std::uint32_t>& weights() const noexcept { return weights_; }
  std::string name() const;

  /// Negative, zero or positive as a <, =, > b.
  int compare(const Monomial& a, const Monomial& b) const;
  bool less(const Monomial& a, const Monomial& b) const { return compare(a, b) < 0; }

  bool operator==(const MonomialOrder&) const = default;

 private:
  std::uint64_t weighted_degree(const Monomial& m) const;

  Kind kind_ = Kind::degrevlex;
  std::vector<std::size_t> precedence_;
  std::vector<std::uint32_t> weights_;
};

/// Sparse polynomial over Rational in a fixed number of variables.
/// Canonical: no stored zero coefficients, so equality is structural.
class Poly {
 public:
  using TermMap = std::map<Monomial, Rational>;

  Poly() = default;
  explicit Poly(std::size_t nvars) : nvars_(nvars) {}

  static Poly constant(std::size_t nvars, const Rational& c);
  static Poly variable(std::size_t nvars, std::size_t i);
  static Poly term(const Monomial& m, const Rational& c);

  std::size_t nvars() const noexcept { return nvars_; }
  const TermMap& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool is_zero() const noexcept { return terms_.empty(); }
  /// Coefficient of m (zero when absent).
  Rational coefficient(const Monomial& m) const;
  /// Total degree; -1 for the zero polynomial.
  int degree() const noexcept;

  /// Largest term under `order`. Requires a nonzero polynomial.
  std::pair<Monomial, Rational> leading_term(const MonomialOrder& order) const;

  /// Adds c*m in place, dropping the term if it cancels.
  void add_term(const Monomial& m, const Rational& c);

  Poly& operator+=(const Poly& other);
  Poly& operator-=(const Poly& other);
  Poly& operator*=(const Rational& c);

  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(Poly a, const Rational& c) { return a *= c; }
  friend Poly operator*(const Rational& c, Poly a) { return a *= c; }
  Poly operator-() const;
  friend Poly operator*(const Poly& a, const Poly& b);

  /// Multiplies by c * m.
  Poly mul_term(const Monomial& m, const Rational& c) const;

  /// Formal partial derivative with respect to variable i.
  Poly partial(std::size_t i) const;

  friend bool operator==(const Poly& a, const Poly& b) {
    return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
  }

 private:
  std::size_t nvars_ = 0;
  TermMap terms_;
};

/// Standalone spelling of the ring operations.
inline Poly poly_mul(const Poly& p, const Poly& q) { return p * q; }
inline Poly poly_partial(const Poly& p, std::size_t i) { return p.partial(i); }

/// Canonical text: terms in descending degrevlex order (input variable
/// precedence), `*` between factors, `^` for powers. Parses back with
/// parse_poly.
std::string to_string(const Poly& p, const std::vector<std::string>& vars);
std::string to_string(const Monomial& m, const std::vector<std::string>& vars);

/// Parses the expression grammar: integers, rationals `a/b`, identifiers,
/// `+ - * ^`, unary minus and parentheses. `^` takes a non-negative integer
/// literal and there is no implicit multiplication. Throws ParseError.
Poly parse_poly(const std::string& text, const std::vector<std::string>& vars);

}  // namespace flatf
