#include <cctype>
#include <unordered_map>

#include "flatf/error.hpp"
#include "flatf/poly.hpp"

namespace flatf {

namespace {

constexpr std::uint32_t kMaxExponent = 1u << 16;

class PolyParser {
 public:
  PolyParser(const std::string& text, const std::vector<std::string>& vars)
      : text_(text), nvars_(vars.size()) {
    for (std::size_t i = 0; i < vars.size(); ++i) index_.emplace(vars[i], i);
  }

  Poly parse() {
    skip_space();
    if (at_end()) throw ParseError(pos_, "empty expression");
    Poly p = expr();
    skip_space();
    if (!at_end()) throw ParseError(pos_, std::string("unexpected '") + text_[pos_] + "'");
    return p;
  }

 private:
  bool at_end() const { return pos_ >= text_.size(); }

  void skip_space() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (!at_end() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Poly expr() {
    Poly acc = term();
    for (;;) {
      if (accept('+')) {
        acc += term();
      } else if (accept('-')) {
        acc -= term();
      } else {
        return acc;
      }
    }
  }

  Poly term() {
    Poly acc = unary();
    while (accept('*')) acc = acc * unary();
    return acc;
  }

  Poly unary() {
    if (accept('-')) return -unary();
    return power();
  }

  Poly power() {
    Poly base = primary();
    if (!accept('^')) return base;
    skip_space();
    const std::size_t at = pos_;
    if (at_end() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
      throw ParseError(at, "exponent must be a non-negative integer literal");
    const mpz_class e = integer();
    if (e > kMaxExponent) throw ParseError(at, "exponent too large");
    const auto n = static_cast<std::uint32_t>(e.get_ui());
    Poly r = Poly::constant(nvars_, 1);
    for (std::uint32_t k = 0; k < n; ++k) r = r * base;
    return r;
  }

  Poly primary() {
    skip_space();
    if (at_end()) throw ParseError(pos_, "unexpected end of expression");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Poly inner = expr();
      if (!accept(')')) throw ParseError(pos_, "expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      mpz_class num = integer();
      mpz_class den = 1;
      if (accept('/')) {
        skip_space();
        const std::size_t at = pos_;
        if (at_end() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
          throw ParseError(at, "expected denominator after '/'");
        den = integer();
        if (den == 0) throw ParseError(at, "zero denominator");
      }
      Rational q(num, den);
      q.canonicalize();
      return Poly::constant(nvars_, q);
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (!at_end() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      const std::string name = text_.substr(start, pos_ - start);
      auto it = index_.find(name);
      if (it == index_.end()) throw ParseError(start, "unknown variable '" + name + "'");
      return Poly::variable(nvars_, it->second);
    }
    throw ParseError(pos_, std::string("unexpected '") + c + "'");
  }

  mpz_class integer() {
    const std::size_t start = pos_;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    return mpz_class(text_.substr(start, pos_ - start), 10);
  }

  const std::string& text_;
  std::size_t nvars_;
  std::size_t pos_ = 0;
  std::unordered_map<std::string, std::size_t> index_;
};

}  // namespace

Poly parse_poly(const std::string& text, const std::vector<std::string>& vars) {
  return PolyParser(text, vars).parse();
}

}  // namespace flatf
