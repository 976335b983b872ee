#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <vector>

#include "flatf/poly.hpp"
#include "flatf/polyvector.hpp"

namespace flatf {

inline bool is_zero_coefficient(const Rational& q) { return sgn(q) == 0; }
inline bool is_zero_coefficient(const Poly& p) { return p.is_zero(); }
inline bool is_zero_coefficient(const PolyVector& p) { return p.is_zero(); }

/// Exponent vector of a monomial t^e in the deformation parameters.
using TExponent = std::vector<std::uint32_t>;

/// e! = Π_k e_k!.
Rational factorial(const TExponent& e);
std::uint32_t total_degree(const TExponent& e);

/// Multivariate power series in t_0..t_{dim-1}, known exactly up to total
/// degree `order`; all higher terms are discarded. Coefficients are any
/// additive type with an `is_zero_coefficient` overload.
template <class C>
class TruncatedSeries {
 public:
  TruncatedSeries(std::size_t dim, int order, C zero) : dim_(dim), order_(order), zero_(std::move(zero)) {}

  std::size_t dim() const noexcept { return dim_; }
  int order() const noexcept { return order_; }
  const std::map<TExponent, C>& coefficients() const noexcept { return coeffs_; }
  const C& zero() const noexcept { return zero_; }

  C coefficient(const TExponent& e) const {
    auto it = coeffs_.find(e);
    return it == coeffs_.end() ? zero_ : it->second;
  }

  /// Adds c t^e; terms beyond the truncation order are dropped.
  void add(const TExponent& e, const C& c) {
    if (static_cast<int>(total_degree(e)) > order_ || is_zero_coefficient(c)) return;
    auto [it, inserted] = coeffs_.try_emplace(e, c);
    if (!inserted) {
      it->second += c;
      if (is_zero_coefficient(it->second)) coeffs_.erase(it);
    }
  }

  bool is_zero() const noexcept { return coeffs_.empty(); }

  TruncatedSeries truncated(int order) const {
    TruncatedSeries r(dim_, std::min(order, order_), zero_);
    for (const auto& [e, c] : coeffs_) r.add(e, c);
    return r;
  }

  TruncatedSeries& operator+=(const TruncatedSeries& other) {
    order_ = std::min(order_, other.order_);
    drop_above_order();
    for (const auto& [e, c] : other.coeffs_) add(e, c);
    return *this;
  }

  TruncatedSeries& operator-=(const TruncatedSeries& other) {
    order_ = std::min(order_, other.order_);
    drop_above_order();
    for (const auto& [e, c] : other.coeffs_) add(e, -c);
    return *this;
  }

  /// ∂/∂t_alpha; the result is known to one order less.
  TruncatedSeries derivative(std::size_t alpha) const {
    TruncatedSeries r(dim_, order_ - 1, zero_);
    for (const auto& [e, c] : coeffs_) {
      if (e[alpha] == 0) continue;
      TExponent f = e;
      const std::uint32_t k = f[alpha]--;
      r.add(f, c * Rational(k));
    }
    return r;
  }

  /// Applies a linear map to every coefficient.
  template <class F>
  auto map(F&& f, decltype(f(std::declval<const C&>())) zero) const {
    TruncatedSeries<decltype(f(std::declval<const C&>()))> r(dim_, order_, std::move(zero));
    for (const auto& [e, c] : coeffs_) r.add(e, f(c));
    return r;
  }

 private:
  void drop_above_order() {
    std::erase_if(coeffs_, [&](const auto& kv) { return static_cast<int>(total_degree(kv.first)) > order_; });
  }

  std::size_t dim_;
  int order_;
  C zero_;
  std::map<TExponent, C> coeffs_;
};

/// Truncated product with a bilinear coefficient product `mul`.
template <class A, class B, class F>
auto multiply(const TruncatedSeries<A>& a, const TruncatedSeries<B>& b, F&& mul,
              decltype(mul(std::declval<const A&>(), std::declval<const B&>())) zero) {
  using R = decltype(mul(std::declval<const A&>(), std::declval<const B&>()));
  const int order = std::min(a.order(), b.order());
  TruncatedSeries<R> r(a.dim(), order, std::move(zero));
  for (const auto& [ea, ca] : a.coefficients()) {
    const auto da = static_cast<int>(total_degree(ea));
    if (da > order) continue;
    for (const auto& [eb, cb] : b.coefficients()) {
      if (da + static_cast<int>(total_degree(eb)) > order) continue;
      TExponent e(ea);
      for (std::size_t k = 0; k < e.size(); ++k) e[k] += eb[k];
      r.add(e, mul(ca, cb));
    }
  }
  return r;
}

/// All exponent vectors in `dim` variables with total degree <= order, in
/// graded lexicographic order.
std::vector<TExponent> exponents_up_to(std::size_t dim, int order);

}  // namespace flatf
