#include "flatf/engine.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <functional>
#include <random>
#include <thread>

#include "flatf/error.hpp"

namespace flatf {

MultiIndex::MultiIndex(std::vector<std::size_t> indices) : idx_(std::move(indices)) {
  std::sort(idx_.begin(), idx_.end());
}

MultiIndex MultiIndex::operator+(const MultiIndex& other) const {
  std::vector<std::size_t> all(idx_);
  all.insert(all.end(), other.idx_.begin(), other.idx_.end());
  return MultiIndex(std::move(all));
}

std::vector<std::uint32_t> MultiIndex::multiplicities(std::size_t dim) const {
  std::vector<std::uint32_t> mult(dim, 0);
  for (std::size_t i : idx_) ++mult.at(i);
  return mult;
}

std::string MultiIndex::to_string() const {
  std::string s = "(";
  for (std::size_t k = 0; k < idx_.size(); ++k) s += (k ? "," : "") + std::to_string(idx_[k]);
  return s + ")";
}

std::vector<MultiIndex> multisets_of_size(std::size_t dim, std::size_t m) {
  std::vector<MultiIndex> out;
  if (dim == 0) return out;
  std::vector<std::size_t> cur(m, 0);
  for (;;) {
    out.emplace_back(cur);
    std::size_t k = m;
    while (k > 0 && cur[k - 1] == dim - 1) --k;
    if (k == 0) break;
    const std::size_t v = cur[k - 1] + 1;
    for (std::size_t j = k - 1; j < m; ++j) cur[j] = v;
  }
  return out;
}

// ---------------------------------------------------------------------------

Poly assemble_u_i(const CoeffTable& table, const MultiIndex& index, std::size_t i, std::size_t nvars) {
  const std::size_t m = index.size();
  if (m == 0 || i >= m) throw InputError("assemble_u_i requires 0 <= i < |index|");
  const std::size_t blocks = m - i;

  // Enumerate set partitions of the positions as restricted growth strings and
  // aggregate them by the resulting multiset of blocks.
  std::map<std::vector<MultiIndex>, std::uint64_t> shapes;
  std::vector<std::size_t> label(m, 0);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t pos, std::size_t used) {
    if (m - pos < blocks - used) return;
    if (pos == m) {
      std::vector<std::vector<std::size_t>> parts(blocks);
      for (std::size_t p = 0; p < m; ++p) parts[label[p]].push_back(index[p]);
      std::vector<MultiIndex> shape;
      for (auto& part : parts) shape.emplace_back(std::move(part));
      std::sort(shape.begin(), shape.end());
      ++shapes[shape];
      return;
    }
    for (std::size_t b = 0; b < used; ++b) {
      label[pos] = b;
      rec(pos + 1, used);
    }
    if (used < blocks) {
      label[pos] = used;
      rec(pos + 1, used + 1);
    }
  };
  rec(0, 0);

  Poly total(nvars);
  for (const auto& [shape, count] : shapes) {
    Poly prod = Poly::constant(nvars, Rational(static_cast<unsigned long>(count)));
    for (const auto& block : shape) {
      auto it = table.u.find(block);
      if (it == table.u.end())
        throw ComputationError("incomplete table: u" + block.to_string() + " has not been computed");
      prod = prod * it->second;
      if (prod.is_zero()) break;
    }
    total += prod;
  }
  return total;
}

StepResult step(const MultiIndex& index, const CoeffTable& table, const JacobianQuotient& quotient,
                const std::vector<LambdaPerturbation>& perturbations) {
  const std::size_t m = index.size();
  if (m < 2) throw InputError("step requires a multiset of size at least 2");
  const std::size_t n = quotient.nvars();
  StepResult out;
  Poly v = assemble_u_i(table, index, 0, n);
  for (std::size_t i = 0; i + 1 < m; ++i) {
    if (i > 0) v = assemble_u_i(table, index, i, n) - out.chain.back().delta_lambda;
    ReductionResult red = quotient.reduce(v);
    for (const auto& pert : perturbations) {
      if (pert.target != index || pert.stage != i) continue;
      red.lambda += pert.addend;
      red.delta_lambda += apply_Delta(pert.addend).component(EtaSet{});
    }
    out.chain.push_back({std::move(v), std::move(red.coeffs), std::move(red.lambda), std::move(red.delta_lambda)});
    v = Poly(n);
  }
  out.a = out.chain.back().a;
  out.u = out.chain.back().delta_lambda;
  out.lambda = out.chain.back().lambda;
  return out;
}

Rational FlatFStructure::series_coefficient(std::size_t alpha, std::size_t beta, std::size_t rho,
                                            const MultiIndex& rest) const {
  const std::size_t d = dimension();
  if (alpha >= d || beta >= d || rho >= d) throw InputError("basis index out of range");
  for (std::size_t r : rest)
    if (r >= d) throw InputError("basis index out of range");
  const MultiIndex key = MultiIndex{alpha, beta} + rest;
  if (key.size() > max_level)
    throw ComputationError("coefficient " + key.to_string() + " lies beyond the computed level " +
                           std::to_string(max_level));
  auto it = table.a.find(key);
  if (it == table.a.end()) throw ComputationError("coefficient " + key.to_string() + " missing from table");
  return it->second.at(rho);
}

FlatFStructure run(const JacobianQuotient& quotient, std::size_t max_level, const EngineOptions& options) {
  if (max_level < 2) throw InputError("max level must be at least 2");
  const Basis& basis = quotient.basis();
  const std::size_t dim = basis.size();

  FlatFStructure out;
  out.variables = quotient.problem().variables;
  out.potential = quotient.problem().potential;
  out.basis = basis.reps();
  out.identity = basis.identity();
  out.charges = quotient.problem().charges;
  out.max_level = max_level;
  for (std::size_t a = 0; a < dim; ++a) out.table.u.emplace(MultiIndex{a}, basis.reps()[a]);
  out.table.level = 1;

  std::size_t threads = options.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : options.threads;

  for (std::size_t m = 2; m <= max_level; ++m) {
    std::vector<MultiIndex> work = multisets_of_size(dim, m);
    if (options.shuffle_seed) {
      std::mt19937_64 rng(*options.shuffle_seed + m);
      std::shuffle(work.begin(), work.end(), rng);
    }
    std::vector<std::optional<StepResult>> results(work.size());
    std::vector<std::exception_ptr> errors(work.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t k; (k = next.fetch_add(1)) < work.size();) {
        try {
          results[k] = step(work[k], out.table, quotient, options.perturbations);
        } catch (...) {
          errors[k] = std::current_exception();
        }
      }
    };
    const std::size_t nthreads = std::min(threads, work.size());
    if (nthreads <= 1) {
      worker();
    } else {
      std::vector<std::jthread> pool;
      for (std::size_t t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    }
    // report the error of the lexicographically first failing multiset
    std::optional<std::size_t> first_error;
    for (std::size_t k = 0; k < work.size(); ++k)
      if (errors[k] && (!first_error || work[k] < work[*first_error])) first_error = k;
    if (first_error) std::rethrow_exception(errors[*first_error]);

    for (std::size_t k = 0; k < work.size(); ++k) {
      out.table.u.emplace(work[k], std::move(results[k]->u));
      out.table.a.emplace(work[k], std::move(results[k]->a));
      out.table.lambda.emplace(work[k], std::move(results[k]->lambda));
    }
    out.table.level = m;
  }
  return out;
}

}  // namespace flatf
