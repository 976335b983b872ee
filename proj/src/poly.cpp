#include "flatf/poly.hpp"

#include <algorithm>
#include <numeric>

#include "flatf/error.hpp"

namespace flatf {

std::string format_rational(const Rational& q) { return q.get_str(); }

std::string format_rational_pq(const Rational& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Rational parse_rational(const std::string& text) {
  if (text.empty()) throw InputError("empty rational literal");
  std::size_t i = text[0] == '-' ? 1 : 0;
  const std::size_t slash = text.find('/');
  auto digits = [&](std::size_t from, std::size_t to) {
    if (from >= to) return false;
    for (std::size_t k = from; k < to; ++k)
      if (text[k] < '0' || text[k] > '9') return false;
    return true;
  };
  const std::size_t num_end = slash == std::string::npos ? text.size() : slash;
  if (!digits(i, num_end) || (slash != std::string::npos && !digits(slash + 1, text.size())))
    throw InputError("malformed rational literal '" + text + "'");
  Rational q;
  if (slash == std::string::npos) {
    q = Rational(mpz_class(text, 10));
  } else {
    mpz_class den(text.substr(slash + 1), 10);
    if (den == 0) throw InputError("zero denominator in '" + text + "'");
    q = Rational(mpz_class(text.substr(0, slash), 10), den);
    q.canonicalize();
  }
  return q;
}

// ---------------------------------------------------------------------------
// Monomial

Monomial Monomial::variable(std::size_t nvars, std::size_t i, std::uint32_t power) {
  Monomial m(nvars);
  m.exps_.at(i) = power;
  return m;
}

std::uint32_t Monomial::degree() const noexcept {
  return std::accumulate(exps_.begin(), exps_.end(), std::uint32_t{0});
}

bool Monomial::is_one() const noexcept {
  return std::all_of(exps_.begin(), exps_.end(), [](auto e) { return e == 0; });
}

bool Monomial::divides(const Monomial& other) const noexcept {
  for (std::size_t i = 0; i < exps_.size(); ++i)
    if (exps_[i] > other.exps_[i]) return false;
  return true;
}

bool Monomial::coprime(const Monomial& other) const noexcept {
  for (std::size_t i = 0; i < exps_.size(); ++i)
    if (exps_[i] != 0 && other.exps_[i] != 0) return false;
  return true;
}

Monomial Monomial::operator*(const Monomial& other) const {
  Monomial r(*this);
  for (std::size_t i = 0; i < exps_.size(); ++i) r.exps_[i] += other.exps_[i];
  return r;
}

Monomial Monomial::operator/(const Monomial& divisor) const {
  Monomial r(*this);
  for (std::size_t i = 0; i < exps_.size(); ++i) r.exps_[i] -= divisor.exps_[i];
  return r;
}

Monomial Monomial::lcm(const Monomial& a, const Monomial& b) {
  Monomial r(a);
  for (std::size_t i = 0; i < a.exps_.size(); ++i) r.exps_[i] = std::max(a.exps_[i], b.exps_[i]);
  return r;
}

// ---------------------------------------------------------------------------
// MonomialOrder

namespace {
std::vector<std::size_t> identity_permutation(std::size_t n) {
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), std::size_t{0});
  return p;
}
}  // namespace

MonomialOrder MonomialOrder::degrevlex(std::size_t nvars) {
  MonomialOrder o;
  o.kind_ = Kind::degrevlex;
  o.precedence_ = identity_permutation(nvars);
  return o;
}

MonomialOrder MonomialOrder::deglex(std::size_t nvars) {
  MonomialOrder o = degrevlex(nvars);
  o.kind_ = Kind::deglex;
  return o;
}

MonomialOrder MonomialOrder::weighted_degrevlex(std::vector<std::uint32_t> weights) {
  if (std::any_of(weights.begin(), weights.end(), [](auto w) { return w == 0; }))
    throw InputError("weighted order requires positive weights");
  MonomialOrder o = degrevlex(weights.size());
  o.kind_ = Kind::weighted_degrevlex;
  o.weights_ = std::move(weights);
  return o;
}

MonomialOrder MonomialOrder::with_precedence(std::vector<std::size_t> precedence) const {
  std::vector<std::size_t> sorted = precedence;
  std::sort(sorted.begin(), sorted.end());
  if (sorted != identity_permutation(nvars()))
    throw InputError("variable precedence is not a permutation of the variables");
  MonomialOrder o(*this);
  o.precedence_ = std::move(precedence);
  return o;
}

std::string MonomialOrder::name() const {
  switch (kind_) {
    case Kind::degrevlex: return "degrevlex";
    case Kind::deglex: return "deglex";
    case Kind::weighted_degrevlex: return "weighted-degrevlex";
  }
  return "?";
}

std::uint64_t MonomialOrder::weighted_degree(const Monomial& m) const {
  if (kind_ != Kind::weighted_degrevlex) return m.degree();
  std::uint64_t d = 0;
  for (std::size_t i = 0; i < m.nvars(); ++i) d += std::uint64_t{weights_[i]} * m[i];
  return d;
}

int MonomialOrder::compare(const Monomial& a, const Monomial& b) const {
  const auto da = weighted_degree(a);
  const auto db = weighted_degree(b);
  if (da != db) return da < db ? -1 : 1;
  if (kind_ == Kind::deglex) {
    for (std::size_t v : precedence_)
      if (a[v] != b[v]) return a[v] > b[v] ? 1 : -1;
    return 0;
  }
  // reverse lexicographic tie break: the smaller exponent in the least
  // significant differing variable wins
  for (auto it = precedence_.rbegin(); it != precedence_.rend(); ++it)
    if (a[*it] != b[*it]) return a[*it] < b[*it] ? 1 : -1;
  return 0;
}

// ---------------------------------------------------------------------------
// Poly

Poly Poly::constant(std::size_t nvars, const Rational& c) {
  Poly p(nvars);
  p.add_term(Monomial(nvars), c);
  return p;
}

Poly Poly::variable(std::size_t nvars, std::size_t i) {
  Poly p(nvars);
  p.add_term(Monomial::variable(nvars, i), 1);
  return p;
}

Poly Poly::term(const Monomial& m, const Rational& c) {
  Poly p(m.nvars());
  p.add_term(m, c);
  return p;
}

Rational Poly::coefficient(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Rational(0) : it->second;
}

int Poly::degree() const noexcept {
  int d = -1;
  for (const auto& [m, c] : terms_) d = std::max(d, static_cast<int>(m.degree()));
  return d;
}

std::pair<Monomial, Rational> Poly::leading_term(const MonomialOrder& order) const {
  if (terms_.empty()) throw ComputationError("leading term of the zero polynomial");
  auto best = terms_.begin();
  for (auto it = std::next(best); it != terms_.end(); ++it)
    if (order.compare(it->first, best->first) > 0) best = it;
  return *best;
}

void Poly::add_term(const Monomial& m, const Rational& c) {
  if (m.nvars() != nvars_) throw InputError("monomial has the wrong number of variables");
  if (sgn(c) == 0) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (sgn(it->second) == 0) terms_.erase(it);
  }
}

Poly& Poly::operator+=(const Poly& other) {
  if (other.nvars_ != nvars_) throw InputError("polynomials over different variable sets");
  for (const auto& [m, c] : other.terms_) add_term(m, c);
  return *this;
}

Poly& Poly::operator-=(const Poly& other) {
  if (other.nvars_ != nvars_) throw InputError("polynomials over different variable sets");
  for (const auto& [m, c] : other.terms_) add_term(m, -c);
  return *this;
}

Poly& Poly::operator*=(const Rational& c) {
  if (sgn(c) == 0) {
    terms_.clear();
  } else {
    for (auto& [m, coeff] : terms_) coeff *= c;
  }
  return *this;
}

Poly Poly::operator-() const {
  Poly r(*this);
  for (auto& [m, c] : r.terms_) c = -c;
  return r;
}

Poly operator*(const Poly& a, const Poly& b) {
  if (a.nvars_ != b.nvars_) throw InputError("polynomials over different variable sets");
  Poly r(a.nvars_);
  for (const auto& [ma, ca] : a.terms_)
    for (const auto& [mb, cb] : b.terms_) r.add_term(ma * mb, ca * cb);
  return r;
}

Poly Poly::mul_term(const Monomial& m, const Rational& c) const {
  Poly r(nvars_);
  if (sgn(c) == 0) return r;
  // lexicographic key order is translation invariant, so keys stay sorted
  for (const auto& [mm, cc] : terms_) r.terms_.emplace_hint(r.terms_.end(), mm * m, cc * c);
  return r;
}

Poly Poly::partial(std::size_t i) const {
  if (i >= nvars_) throw InputError("partial derivative index out of range");
  Poly r(nvars_);
  for (const auto& [m, c] : terms_) {
    if (m[i] == 0) continue;
    auto exps = m.exponents();
    const std::uint32_t e = exps[i]--;
    r.add_term(Monomial(std::move(exps)), c * e);
  }
  return r;
}

// ---------------------------------------------------------------------------
// printing

std::string to_string(const Monomial& m, const std::vector<std::string>& vars) {
  std::string out;
  for (std::size_t i = 0; i < m.nvars(); ++i) {
    if (m[i] == 0) continue;
    if (!out.empty()) out += '*';
    out += vars.at(i);
    if (m[i] > 1) out += '^' + std::to_string(m[i]);
  }
  return out.empty() ? "1" : out;
}

std::string to_string(const Poly& p, const std::vector<std::string>& vars) {
  if (p.is_zero()) return "0";
  const MonomialOrder order = MonomialOrder::degrevlex(p.nvars());
  std::vector<const Poly::TermMap::value_type*> terms;
  for (const auto& t : p.terms()) terms.push_back(&t);
  std::sort(terms.begin(), terms.end(),
            [&](auto* a, auto* b) { return order.compare(a->first, b->first) > 0; });

  std::string out;
  for (const auto* t : terms) {
    const Rational& c = t->second;
    const bool negative = sgn(c) < 0;
    if (out.empty()) {
      if (negative) out += '-';
    } else {
      out += negative ? " - " : " + ";
    }
    const Rational mag = abs(c);
    if (t->first.is_one()) {
      out += format_rational(mag);
    } else {
      if (mag != 1) out += format_rational(mag) + "*";
      out += to_string(t->first, vars);
    }
  }
  return out;
}

}  // namespace flatf
