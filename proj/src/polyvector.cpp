#include "flatf/polyvector.hpp"

#include <cctype>

#include "flatf/error.hpp"

namespace flatf {

EtaSet EtaSet::of(const std::vector<std::size_t>& indices) {
  EtaSet s;
  for (std::size_t i : indices) {
    if (i >= 64) throw InputError("odd variable index out of range");
    s.bits |= std::uint64_t{1} << i;
  }
  return s;
}

std::vector<std::size_t> EtaSet::indices() const {
  std::vector<std::size_t> out;
  for (std::uint64_t b = bits; b != 0; b &= b - 1) out.push_back(__builtin_ctzll(b));
  return out;
}

int koszul_sign(EtaSet j, EtaSet k) noexcept {
  if (j.bits & k.bits) return 0;
  int inversions = 0;
  for (std::uint64_t b = k.bits; b != 0; b &= b - 1) {
    const int i = __builtin_ctzll(b);
    inversions += __builtin_popcountll(j.bits >> (i + 1));
  }
  return inversions % 2 == 0 ? 1 : -1;
}

// ---------------------------------------------------------------------------

PolyVector::PolyVector(const Poly& p) : nvars_(p.nvars()) { add(EtaSet{}, p); }

PolyVector::PolyVector(const Poly& p, EtaSet j) : nvars_(p.nvars()) { add(j, p); }

PolyVector PolyVector::eta(std::size_t nvars, std::size_t i) {
  return PolyVector(Poly::constant(nvars, 1), EtaSet::single(i));
}

Poly PolyVector::component(EtaSet j) const {
  auto it = components_.find(j);
  return it == components_.end() ? Poly(nvars_) : it->second;
}

std::optional<int> PolyVector::degree() const {
  if (components_.empty()) return 0;
  const int d = components_.begin()->first.size();
  for (const auto& [j, p] : components_)
    if (j.size() != d) return std::nullopt;
  return -d;
}

void PolyVector::add(EtaSet j, const Poly& p) {
  if (p.nvars() != nvars_) throw InputError("polyvector component over the wrong variables");
  if (p.is_zero()) return;
  if (nvars_ < 64 && (j.bits >> nvars_) != 0) throw InputError("odd variable index out of range");
  auto [it, inserted] = components_.try_emplace(j, p);
  if (!inserted) {
    it->second += p;
    if (it->second.is_zero()) components_.erase(it);
  }
}

PolyVector& PolyVector::operator+=(const PolyVector& other) {
  if (other.nvars_ != nvars_) throw InputError("polyvectors over different variable sets");
  for (const auto& [j, p] : other.components_) add(j, p);
  return *this;
}

PolyVector& PolyVector::operator-=(const PolyVector& other) {
  if (other.nvars_ != nvars_) throw InputError("polyvectors over different variable sets");
  for (const auto& [j, p] : other.components_) add(j, -p);
  return *this;
}

PolyVector& PolyVector::operator*=(const Rational& c) {
  if (sgn(c) == 0) {
    components_.clear();
  } else {
    for (auto& [j, p] : components_) p *= c;
  }
  return *this;
}

PolyVector PolyVector::operator-() const {
  PolyVector r(*this);
  for (auto& [j, p] : r.components_) p = -p;
  return r;
}

PolyVector operator*(const PolyVector& a, const PolyVector& b) {
  if (a.nvars_ != b.nvars_) throw InputError("polyvectors over different variable sets");
  PolyVector r(a.nvars_);
  for (const auto& [ja, pa] : a.components_) {
    for (const auto& [jb, pb] : b.components_) {
      const int s = koszul_sign(ja, jb);
      if (s == 0) continue;
      Poly prod = pa * pb;
      if (s < 0) prod = -prod;
      r.add(EtaSet{ja.bits | jb.bits}, prod);
    }
  }
  return r;
}

PolyVector operator*(const Poly& p, const PolyVector& a) {
  if (p.nvars() != a.nvars_) throw InputError("polyvectors over different variable sets");
  PolyVector r(a.nvars_);
  if (p.is_zero()) return r;
  for (const auto& [j, q] : a.components_) r.add(j, p * q);
  return r;
}

// ---------------------------------------------------------------------------
// operators

PolyVector odd_partial(const PolyVector& a, std::size_t i) {
  if (i >= a.nvars()) throw InputError("odd derivative index out of range");
  PolyVector r(a.nvars());
  for (const auto& [j, p] : a.components()) {
    if (!j.contains(i)) continue;
    const EtaSet rest{j.bits & ~(std::uint64_t{1} << i)};
    r.add(rest, j.rank(i) % 2 == 0 ? p : -p);
  }
  return r;
}

std::vector<Poly> gradient(const Poly& S) {
  std::vector<Poly> g;
  g.reserve(S.nvars());
  for (std::size_t i = 0; i < S.nvars(); ++i) g.push_back(S.partial(i));
  return g;
}

PolyVector apply_delta(const std::vector<Poly>& grad, const PolyVector& a) {
  if (grad.size() != a.nvars()) throw InputError("gradient length does not match variables");
  PolyVector r(a.nvars());
  for (std::size_t i = 0; i < grad.size(); ++i) {
    if (grad[i].is_zero()) continue;
    r += grad[i] * odd_partial(a, i);
  }
  return r;
}

PolyVector apply_delta_S(const Poly& S, const PolyVector& a) { return apply_delta(gradient(S), a); }

PolyVector apply_Delta(const PolyVector& a) {
  PolyVector r(a.nvars());
  for (const auto& [j, p] : a.components()) {
    for (std::size_t i : j.indices()) {
      const EtaSet rest{j.bits & ~(std::uint64_t{1} << i)};
      Poly d = p.partial(i);
      r.add(rest, j.rank(i) % 2 == 0 ? d : -d);
    }
  }
  return r;
}

PolyVector bv_bracket(const PolyVector& a, const PolyVector& b) {
  const auto da = a.degree();
  if (!da || !b.degree()) throw InputError("bv_bracket requires degree-homogeneous arguments");
  PolyVector r = apply_Delta(a * b);
  r -= apply_Delta(a) * b;
  PolyVector last = a * apply_Delta(b);
  if (*da % 2 == 0) {
    r -= last;
  } else {
    r += last;
  }
  return r;
}

// ---------------------------------------------------------------------------
// charges

long ChargeSpec::term_charge(const Monomial& m, EtaSet j) const {
  if (charges.size() != m.nvars()) throw InputError("charge vector length does not match variables");
  long c = 0;
  for (std::size_t i = 0; i < m.nvars(); ++i) c += static_cast<long>(charges[i]) * m[i];
  for (std::size_t i : j.indices()) c -= charges[i];
  return c;
}

namespace {
std::string describe_term(const Monomial& m, EtaSet j) {
  std::string s = "x^[";
  for (std::size_t i = 0; i < m.nvars(); ++i) s += (i ? "," : "") + std::to_string(m[i]);
  s += "]";
  if (j.bits != 0) {
    s += "*e[";
    bool first = true;
    for (std::size_t i : j.indices()) {
      s += (first ? "" : ",") + std::to_string(i + 1);
      first = false;
    }
    s += "]";
  }
  return s;
}
}  // namespace

long charge_check(const PolyVector& a, const ChargeSpec& spec) {
  std::optional<long> common;
  std::string first_term;
  for (const auto& [j, p] : a.components()) {
    for (const auto& [m, c] : p.terms()) {
      const long ch = spec.term_charge(m, j);
      if (!common) {
        common = ch;
        first_term = describe_term(m, j);
      } else if (*common != ch) {
        throw ChargeError("not charge-homogeneous: " + first_term + " has charge " +
                          std::to_string(*common) + " but " + describe_term(m, j) +
                          " has charge " + std::to_string(ch));
      }
    }
  }
  return common.value_or(0);
}

long charge_check(const Poly& p, const ChargeSpec& spec) { return charge_check(PolyVector(p), spec); }

// ---------------------------------------------------------------------------
// text form

std::string to_string(const PolyVector& a, const std::vector<std::string>& vars) {
  if (a.is_zero()) return "0";
  // η-free part first, then by size and index
  std::vector<const PolyVector::ComponentMap::value_type*> parts;
  for (const auto& c : a.components()) parts.push_back(&c);
  std::stable_sort(parts.begin(), parts.end(), [](auto* x, auto* y) {
    if (x->first.size() != y->first.size()) return x->first.size() < y->first.size();
    return x->first.indices() < y->first.indices();
  });
  std::string out;
  for (const auto* part : parts) {
    if (!out.empty()) out += " + ";
    out += "(" + to_string(part->second, vars) + ")";
    if (part->first.bits != 0) {
      out += "*e[";
      bool first = true;
      for (std::size_t i : part->first.indices()) {
        out += (first ? "" : ",") + std::to_string(i + 1);
        first = false;
      }
      out += "]";
    }
  }
  return out;
}

PolyVector parse_polyvector(const std::string& text, const std::vector<std::string>& vars) {
  PolyVector r(vars.size());
  std::size_t pos = 0;
  auto skip = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  skip();
  if (text.compare(pos, std::string::npos, "0") == 0) return r;
  for (;;) {
    skip();
    if (pos >= text.size() || text[pos] != '(') throw ParseError(pos, "expected '('");
    const std::size_t open = pos;
    int depth = 0;
    for (; pos < text.size(); ++pos) {
      if (text[pos] == '(') ++depth;
      if (text[pos] == ')' && --depth == 0) break;
    }
    if (pos >= text.size()) throw ParseError(open, "unbalanced parenthesis");
    const std::string inner = text.substr(open + 1, pos - open - 1);
    ++pos;
    Poly p;
    try {
      p = parse_poly(inner, vars);
    } catch (const ParseError& e) {
      throw ParseError(open + 1 + e.position(), e.what());
    }
    EtaSet j;
    skip();
    if (pos < text.size() && text[pos] == '*') {
      ++pos;
      skip();
      if (text.compare(pos, 2, "e[") != 0) throw ParseError(pos, "expected 'e['");
      pos += 2;
      std::vector<std::size_t> idx;
      for (;;) {
        skip();
        const std::size_t start = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        if (start == pos) throw ParseError(pos, "expected index");
        const std::size_t k = std::stoul(text.substr(start, pos - start));
        if (k == 0 || k > vars.size()) throw ParseError(start, "odd variable index out of range");
        if (!idx.empty() && k - 1 <= idx.back()) throw ParseError(start, "indices must be strictly increasing");
        idx.push_back(k - 1);
        skip();
        if (pos < text.size() && text[pos] == ',') {
          ++pos;
          continue;
        }
        if (pos < text.size() && text[pos] == ']') {
          ++pos;
          break;
        }
        throw ParseError(pos, "expected ',' or ']'");
      }
      j = EtaSet::of(idx);
    }
    if (r.components().count(j)) throw ParseError(open, "repeated component");
    r.add(j, p);
    skip();
    if (pos >= text.size()) break;
    if (text[pos] != '+') throw ParseError(pos, "expected '+'");
    ++pos;
  }
  return r;
}

}  // namespace flatf
