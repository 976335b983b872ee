#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "flatf/poly.hpp"

namespace flatf {

/// A set J of odd-variable indices, stored as a bitmask; η_J is the product
/// η_{j1}···η_{jk} with j1 < ... < jk. Supports up to 64 variables.
struct EtaSet {
  std::uint64_t bits = 0;

  static EtaSet single(std::size_t i) { return EtaSet{std::uint64_t{1} << i}; }
  static EtaSet of(const std::vector<std::size_t>& indices);

  int size() const noexcept { return __builtin_popcountll(bits); }
  bool contains(std::size_t i) const noexcept { return (bits >> i) & 1u; }
  /// Number of elements strictly smaller than i.
  int rank(std::size_t i) const noexcept {
    return __builtin_popcountll(bits & ((std::uint64_t{1} << i) - 1));
  }
  std::vector<std::size_t> indices() const;

  auto operator<=>(const EtaSet&) const = default;
};

/// Element of Q[x_1..x_n][η_1..η_n]: a sparse map η_J -> polynomial
/// coefficient, written Σ_J p_J η_J. The η_i anticommute and have
/// cohomological degree -1, so the η_J component has degree -|J|.
class PolyVector {
 public:
  using ComponentMap = std::map<EtaSet, Poly>;

  PolyVector() = default;
  explicit PolyVector(std::size_t nvars) : nvars_(nvars) {}
  /// The η-free element p.
  explicit PolyVector(const Poly& p);
  /// p · η_J.
  PolyVector(const Poly& p, EtaSet j);

  /// The single generator η_i.
  static PolyVector eta(std::size_t nvars, std::size_t i);

  std::size_t nvars() const noexcept { return nvars_; }
  const ComponentMap& components() const noexcept { return components_; }
  bool is_zero() const noexcept { return components_.empty(); }
  Poly component(EtaSet j) const;

  /// Common degree -|J| of all components. The zero element counts as
  /// homogeneous of degree 0; nullopt when components of different degree
  /// are present.
  std::optional<int> degree() const;

  void add(EtaSet j, const Poly& p);

  PolyVector& operator+=(const PolyVector& other);
  PolyVector& operator-=(const PolyVector& other);
  PolyVector& operator*=(const Rational& c);
  friend PolyVector operator+(PolyVector a, const PolyVector& b) { return a += b; }
  friend PolyVector operator-(PolyVector a, const PolyVector& b) { return a -= b; }
  friend PolyVector operator*(PolyVector a, const Rational& c) { return a *= c; }
  friend PolyVector operator*(const Rational& c, PolyVector a) { return a *= c; }
  PolyVector operator-() const;

  /// Supercommutative product: η_J η_K = 0 if J∩K ≠ ∅, otherwise
  /// sign(J⧺K) η_{J∪K}.
  friend PolyVector operator*(const PolyVector& a, const PolyVector& b);
  /// Multiplication by an η-free polynomial.
  friend PolyVector operator*(const Poly& p, const PolyVector& a);

  friend bool operator==(const PolyVector& a, const PolyVector& b) {
    return a.nvars_ == b.nvars_ && a.components_ == b.components_;
  }

 private:
  std::size_t nvars_ = 0;
  ComponentMap components_;
};

/// Sign of η_J · η_K (0 when J and K intersect).
int koszul_sign(EtaSet j, EtaSet k) noexcept;

inline PolyVector pv_mul(const PolyVector& a, const PolyVector& b) { return a * b; }

/// Left odd derivative ∂/∂η_i: η_J -> (-1)^{#{j in J : j < i}} η_{J∖i}.
PolyVector odd_partial(const PolyVector& a, std::size_t i);

/// δ_S = Σ_i (∂S/∂x_i) ∂/∂η_i, given the gradient (∂S/∂x_i)_i.
PolyVector apply_delta(const std::vector<Poly>& gradient, const PolyVector& a);
PolyVector apply_delta_S(const Poly& S, const PolyVector& a);
/// Δ = Σ_i ∂/∂x_i ∂/∂η_i.
PolyVector apply_Delta(const PolyVector& a);

/// Gradient of S in variable order.
std::vector<Poly> gradient(const Poly& S);

/// ℓ₂^Δ(a,b) = Δ(ab) - Δ(a)b - (-1)^{|a|} aΔ(b). Both arguments must be
/// degree-homogeneous; throws InputError otherwise.
PolyVector bv_bracket(const PolyVector& a, const PolyVector& b);

/// Integer charge per even variable; ch(η_i) = -ch(x_i).
struct ChargeSpec {
  std::vector<int> charges;

  /// Charge of the term x^m η_J.
  long term_charge(const Monomial& m, EtaSet j) const;
};

/// Common charge of every term of a; zero has charge 0. Throws ChargeError
/// naming the offending terms when a is not charge-homogeneous.
long charge_check(const PolyVector& a, const ChargeSpec& spec);
long charge_check(const Poly& p, const ChargeSpec& spec);

/// Text form: `(poly)*e[i,j,...] + ...` with 1-based strictly increasing
/// index lists; the η-free part is written `(poly)`. Zero is `0`.
std::string to_string(const PolyVector& a, const std::vector<std::string>& vars);
PolyVector parse_polyvector(const std::string& text, const std::vector<std::string>& vars);

}  // namespace flatf
