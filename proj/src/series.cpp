#include "flatf/series.hpp"

#include <functional>
#include <numeric>

namespace flatf {

Rational factorial(const TExponent& e) {
  mpz_class f = 1;
  for (std::uint32_t k : e) {
    mpz_class part;
    mpz_fac_ui(part.get_mpz_t(), k);
    f *= part;
  }
  return Rational(f);
}

std::uint32_t total_degree(const TExponent& e) { return std::accumulate(e.begin(), e.end(), std::uint32_t{0}); }

std::vector<TExponent> exponents_up_to(std::size_t dim, int order) {
  std::vector<TExponent> out;
  TExponent cur(dim, 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t k, int left) {
    if (k == dim) {
      if (left == 0) out.push_back(cur);
      return;
    }
    for (int v = left; v >= 0; --v) {
      cur[k] = static_cast<std::uint32_t>(v);
      rec(k + 1, left - v);
    }
    cur[k] = 0;
  };
  for (int d = 0; d <= order; ++d) rec(0, d);
  return out;
}

}  // namespace flatf
