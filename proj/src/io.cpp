#include "flatf/io.hpp"

#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <openssl/evp.h>

namespace flatf {

using nlohmann::json;

namespace {

constexpr const char* kResultFormat = "flatf-result/1";
constexpr const char* kGbFormat = "flatf-gb/1";

const json& require(const json& obj, const std::string& key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError(path + "." + key, "missing required field");
  return *it;
}

std::string as_string(const json& j, const std::string& path) {
  if (!j.is_string()) throw SchemaError(path, "expected a string");
  return j.get<std::string>();
}

long long as_integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw SchemaError(path, "expected an integer");
  return j.get<long long>();
}

template <class F>
auto with_path(const std::string& path, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const SchemaError&) {
    throw;
  } catch (const ParseError& e) {
    throw ParseError(e.position(), path + ": " + std::string(e.what()));
  } catch (const ChargeError& e) {
    throw ChargeError(path + ": " + e.what());
  } catch (const InputError& e) {
    throw SchemaError(path, e.what());
  }
}

MonomialOrder parse_order(const json& spec, const std::vector<std::string>& vars) {
  const std::string path = "$.monomial_order";
  const std::size_t n = vars.size();
  std::string name;
  const json* obj = nullptr;
  if (spec.is_string()) {
    name = spec.get<std::string>();
  } else if (spec.is_object()) {
    obj = &spec;
    name = as_string(require(spec, "name", path), path + ".name");
  } else {
    throw SchemaError(path, "expected a name or an object");
  }

  MonomialOrder order;
  if (name == "degrevlex") {
    order = MonomialOrder::degrevlex(n);
  } else if (name == "deglex") {
    order = MonomialOrder::deglex(n);
  } else if (name == "weighted-degrevlex") {
    if (!obj || !obj->contains("weights")) throw SchemaError(path + ".weights", "required by weighted-degrevlex");
    const json& w = obj->at("weights");
    if (!w.is_array() || w.size() != n)
      throw SchemaError(path + ".weights", fmt::format("expected {} positive integers", n));
    std::vector<std::uint32_t> weights;
    for (std::size_t i = 0; i < n; ++i) {
      const auto v = as_integer(w[i], fmt::format("{}.weights[{}]", path, i));
      if (v <= 0 || v > 1'000'000) throw SchemaError(fmt::format("{}.weights[{}]", path, i), "expected a positive weight");
      weights.push_back(static_cast<std::uint32_t>(v));
    }
    order = MonomialOrder::weighted_degrevlex(std::move(weights));
  } else {
    throw SchemaError(obj ? path + ".name" : path, "unknown monomial order '" + name + "'");
  }

  if (obj && obj->contains("precedence")) {
    const std::string ppath = path + ".precedence";
    const json& p = obj->at("precedence");
    if (!p.is_array() || p.size() != n) throw SchemaError(ppath, fmt::format("expected {} variable names", n));
    std::vector<std::size_t> perm;
    for (std::size_t i = 0; i < n; ++i) {
      const std::string v = as_string(p[i], fmt::format("{}[{}]", ppath, i));
      auto it = std::find(vars.begin(), vars.end(), v);
      if (it == vars.end()) throw SchemaError(fmt::format("{}[{}]", ppath, i), "unknown variable '" + v + "'");
      perm.push_back(static_cast<std::size_t>(it - vars.begin()));
    }
    order = with_path(ppath, [&] { return order.with_precedence(perm); });
  }
  return order;
}

json order_to_json(const MonomialOrder& order, const std::vector<std::string>& vars) {
  json j;
  j["name"] = order.name();
  json prec = json::array();
  for (std::size_t i : order.precedence()) prec.push_back(vars[i]);
  j["precedence"] = std::move(prec);
  if (order.kind() == MonomialOrder::Kind::weighted_degrevlex) j["weights"] = order.weights();
  return j;
}

std::string text_of(const Poly& p, const std::vector<std::string>& vars) { return to_string(p, vars); }

MultiIndex parse_multi_index(const std::string& key, std::size_t dim, const std::string& path) {
  if (key.size() < 2 || key.front() != '(' || key.back() != ')') throw SchemaError(path, "malformed index '" + key + "'");
  std::vector<std::size_t> idx;
  std::stringstream ss(key.substr(1, key.size() - 2));
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos)
      throw SchemaError(path, "malformed index '" + key + "'");
    const auto v = std::stoull(tok);
    if (v >= dim) throw SchemaError(path, "index '" + key + "' out of range");
    idx.push_back(static_cast<std::size_t>(v));
  }
  MultiIndex m(idx);
  if (m.to_string() != key) throw SchemaError(path, "index '" + key + "' is not sorted");
  return m;
}

}  // namespace

ProblemFile parse_problem(const json& doc) {
  if (!doc.is_object()) throw SchemaError("$", "expected an object");
  static const std::set<std::string> known = {"variables", "potential", "charges",  "basis",
                                              "monomial_order", "max_level", "bounds", "options"};
  for (const auto& [k, v] : doc.items())
    if (!known.contains(k)) throw SchemaError("$." + k, "unknown field");

  ProblemFile pf;
  Problem& p = pf.problem;

  const json& vars = require(doc, "variables", "$");
  if (!vars.is_array() || vars.empty()) throw SchemaError("$.variables", "expected a non-empty list of names");
  if (vars.size() > 64) throw SchemaError("$.variables", "at most 64 variables are supported");
  for (std::size_t i = 0; i < vars.size(); ++i) {
    const std::string path = fmt::format("$.variables[{}]", i);
    std::string name = as_string(vars[i], path);
    if (name.empty() || !(std::isalpha(static_cast<unsigned char>(name[0])) || name[0] == '_') ||
        name.find_first_not_of("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_") != std::string::npos)
      throw SchemaError(path, "invalid variable name '" + name + "'");
    if (std::find(p.variables.begin(), p.variables.end(), name) != p.variables.end())
      throw SchemaError(path, "duplicate variable '" + name + "'");
    p.variables.push_back(std::move(name));
  }
  const std::size_t n = p.variables.size();

  const std::string potential = as_string(require(doc, "potential", "$"), "$.potential");
  p.potential = with_path("$.potential", [&] { return parse_poly(potential, p.variables); });
  if (p.potential.is_zero()) throw SchemaError("$.potential", "potential is zero");

  if (doc.contains("charges") && !doc.at("charges").is_null()) {
    const json& ch = doc.at("charges");
    if (!ch.is_array() || ch.size() != n)
      throw SchemaError("$.charges", fmt::format("expected {} integers (one per variable), got {}", n,
                                                 ch.is_array() ? std::to_string(ch.size()) : std::string("a non-list")));
    ChargeSpec spec;
    for (std::size_t i = 0; i < n; ++i) {
      const std::string path = fmt::format("$.charges[{}]", i);
      const auto v = as_integer(ch[i], path);
      if (v == 0) throw SchemaError(path, "charges must be nonzero");
      if (v < -1'000'000 || v > 1'000'000) throw SchemaError(path, "charge out of range");
      spec.charges.push_back(static_cast<int>(v));
    }
    const long total = with_path("$.potential", [&] { return charge_check(p.potential, spec); });
    if (total != 0) throw ChargeError("$.potential: potential has charge " + std::to_string(total) + ", expected 0");
    p.charges = std::move(spec);
  }

  if (doc.contains("basis") && !doc.at("basis").is_null()) {
    const json& b = doc.at("basis");
    if (!b.is_array() || b.empty()) throw SchemaError("$.basis", "expected a non-empty list of expressions");
    std::vector<Poly> reps;
    for (std::size_t i = 0; i < b.size(); ++i) {
      const std::string path = fmt::format("$.basis[{}]", i);
      const std::string text = as_string(b[i], path);
      reps.push_back(with_path(path, [&] { return parse_poly(text, p.variables); }));
      if (reps.back().is_zero()) throw SchemaError(path, "basis element is zero");
    }
    p.user_basis = std::move(reps);
  }

  p.order = doc.contains("monomial_order") ? parse_order(doc.at("monomial_order"), p.variables)
                                           : MonomialOrder::degrevlex(n);

  const auto level = as_integer(require(doc, "max_level", "$"), "$.max_level");
  if (level < 2) throw SchemaError("$.max_level", "must be at least 2");
  if (level > 64) throw SchemaError("$.max_level", "must be at most 64");
  pf.max_level = static_cast<std::size_t>(level);

  if (doc.contains("bounds")) {
    const auto bound = as_integer(doc.at("bounds"), "$.bounds");
    if (bound < 0 || bound > 4096) throw SchemaError("$.bounds", "expected an integer in 0..4096");
    p.bound = static_cast<unsigned>(bound);
  }

  if (doc.contains("options")) {
    const json& o = doc.at("options");
    if (!o.is_object()) throw SchemaError("$.options", "expected an object");
    for (const auto& [k, v] : o.items()) {
      if (k == "skip_spanning_check") {
        if (!v.is_boolean()) throw SchemaError("$.options.skip_spanning_check", "expected a boolean");
        p.skip_spanning_check = v.get<bool>();
      } else if (k == "cache_dir") {
        pf.cache_dir = as_string(v, "$.options.cache_dir");
      } else {
        throw SchemaError("$.options." + k, "unknown option");
      }
    }
  }
  return pf;
}

json ProblemFile::canonical() const {
  const Problem& p = problem;
  json j;
  j["variables"] = p.variables;
  j["potential"] = text_of(p.potential, p.variables);
  j["charges"] = p.charges ? json(p.charges->charges) : json(nullptr);
  if (p.user_basis) {
    json b = json::array();
    for (const auto& u : *p.user_basis) b.push_back(text_of(u, p.variables));
    j["basis"] = std::move(b);
  } else {
    j["basis"] = nullptr;
  }
  j["monomial_order"] = order_to_json(p.order, p.variables);
  j["bounds"] = p.bound;
  j["options"] = {{"skip_spanning_check", p.skip_spanning_check}};
  return j;
}

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw Error("SHA-256 computation failed");
  std::string out;
  for (unsigned int i = 0; i < len; ++i) out += fmt::format("{:02x}", digest[i]);
  return out;
}

std::string ProblemFile::hash() const { return sha256_hex(canonical().dump()); }

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError("'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

void write_json(const std::filesystem::path& path, const json& doc) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw Error("cannot write '" + tmp.string() + "'");
    out << doc.dump(2) << '\n';
    if (!out) throw Error("write to '" + tmp.string() + "' failed");
  }
  std::filesystem::rename(tmp, path);
}

ProblemFile load_problem(const std::filesystem::path& path) { return parse_problem(read_json(path)); }

json result_to_json(const FlatFStructure& s, const ProblemFile& problem) {
  const auto& vars = s.variables;
  json j;
  j["format"] = kResultFormat;
  j["problem"] = problem.canonical();
  j["problem_hash"] = problem.hash();
  json basis = json::array();
  for (const auto& u : s.basis) basis.push_back(text_of(u, vars));
  j["basis"] = std::move(basis);
  j["identity"] = s.identity ? json(*s.identity) : json(nullptr);
  j["dimension"] = s.dimension();
  j["max_level"] = s.max_level;
  json u = json::object(), a = json::object(), lam = json::object();
  for (const auto& [m, p] : s.table.u) u[m.to_string()] = text_of(p, vars);
  for (const auto& [m, v] : s.table.a) {
    json row = json::array();
    for (const auto& q : v) row.push_back(format_rational_pq(q));
    a[m.to_string()] = std::move(row);
  }
  for (const auto& [m, v] : s.table.lambda) lam[m.to_string()] = to_string(v, vars);
  j["u_table"] = std::move(u);
  j["a_table"] = std::move(a);
  j["lambda_table"] = std::move(lam);
  return j;
}

LoadedResult result_from_json(const json& doc) {
  if (!doc.is_object()) throw SchemaError("$", "expected an object");
  if (as_string(require(doc, "format", "$"), "$.format") != kResultFormat)
    throw SchemaError("$.format", "unsupported result format");

  LoadedResult r;
  json problem_doc = require(doc, "problem", "$");
  if (!problem_doc.is_object()) throw SchemaError("$.problem", "expected an object");
  const auto level = as_integer(require(doc, "max_level", "$"), "$.max_level");
  problem_doc["max_level"] = level;
  for (auto it = problem_doc.begin(); it != problem_doc.end();)
    it = it.value().is_null() ? problem_doc.erase(it) : std::next(it);
  try {
    r.problem = parse_problem(problem_doc);
  } catch (const InputError& e) {
    throw SchemaError("$.problem", e.what());
  }
  const std::string stored = as_string(require(doc, "problem_hash", "$"), "$.problem_hash");
  const std::string actual = r.problem.hash();
  if (stored != actual) throw InputError("hash mismatch: result records " + stored + " but its problem hashes to " + actual);

  FlatFStructure& s = r.structure;
  const auto& vars = r.problem.problem.variables;
  s.variables = vars;
  s.potential = r.problem.problem.potential;
  s.charges = r.problem.problem.charges;
  s.problem_hash = stored;
  s.max_level = static_cast<std::size_t>(level);

  const json& basis = require(doc, "basis", "$");
  if (!basis.is_array() || basis.empty()) throw SchemaError("$.basis", "expected a non-empty list");
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const std::string path = fmt::format("$.basis[{}]", i);
    const std::string text = as_string(basis[i], path);
    s.basis.push_back(with_path(path, [&] { return parse_poly(text, vars); }));
  }
  const std::size_t dim = s.basis.size();
  if (const json& id = require(doc, "identity", "$"); !id.is_null()) {
    const auto e = as_integer(id, "$.identity");
    if (e < 0 || static_cast<std::size_t>(e) >= dim) throw SchemaError("$.identity", "out of range");
    s.identity = static_cast<std::size_t>(e);
  }

  auto table = [&](const char* name) -> const json& {
    const json& t = require(doc, name, "$");
    if (!t.is_object()) throw SchemaError(std::string("$.") + name, "expected an object");
    return t;
  };
  for (const auto& [key, val] : table("u_table").items()) {
    const std::string path = "$.u_table." + key;
    const MultiIndex m = parse_multi_index(key, dim, path);
    const std::string text = as_string(val, path);
    s.table.u.emplace(m, with_path(path, [&] { return parse_poly(text, vars); }));
  }
  for (const auto& [key, val] : table("a_table").items()) {
    const std::string path = "$.a_table." + key;
    const MultiIndex m = parse_multi_index(key, dim, path);
    if (!val.is_array() || val.size() != dim) throw SchemaError(path, fmt::format("expected {} rationals", dim));
    std::vector<Rational> row;
    for (std::size_t k = 0; k < dim; ++k) {
      const std::string text = as_string(val[k], fmt::format("{}[{}]", path, k));
      row.push_back(with_path(fmt::format("{}[{}]", path, k), [&] { return parse_rational(text); }));
    }
    s.table.a.emplace(m, std::move(row));
  }
  for (const auto& [key, val] : table("lambda_table").items()) {
    const std::string path = "$.lambda_table." + key;
    const MultiIndex m = parse_multi_index(key, dim, path);
    const std::string text = as_string(val, path);
    s.table.lambda.emplace(m, with_path(path, [&] { return parse_polyvector(text, vars); }));
  }

  // completeness of the tables up to the recorded level
  for (std::size_t m = 1; m <= s.max_level; ++m)
    for (const auto& idx : multisets_of_size(dim, m)) {
      if (!s.table.u.contains(idx)) throw SchemaError("$.u_table", "missing entry " + idx.to_string());
      if (m >= 2 && !s.table.a.contains(idx)) throw SchemaError("$.a_table", "missing entry " + idx.to_string());
      if (m >= 2 && !s.table.lambda.contains(idx)) throw SchemaError("$.lambda_table", "missing entry " + idx.to_string());
    }
  for (std::size_t a = 0; a < dim; ++a)
    if (s.table.u.at(MultiIndex{a}) != s.basis[a])
      throw SchemaError("$.u_table", "entry " + MultiIndex{a}.to_string() + " differs from the basis");
  s.table.level = s.max_level;
  return r;
}

LoadedResult load_result(const std::filesystem::path& path) { return result_from_json(read_json(path)); }

json gb_to_json(const GBasisWithCofactors& gb, const std::vector<std::string>& vars) {
  json j;
  j["format"] = kGbFormat;
  j["order"] = order_to_json(gb.order, vars);
  json gens = json::array(), basis = json::array(), cof = json::array();
  for (const auto& g : gb.generators) gens.push_back(text_of(g, vars));
  for (const auto& g : gb.gb) basis.push_back(text_of(g, vars));
  for (const auto& row : gb.cofactors) {
    json r = json::array();
    for (const auto& c : row) r.push_back(text_of(c, vars));
    cof.push_back(std::move(r));
  }
  j["generators"] = std::move(gens);
  j["gb"] = std::move(basis);
  j["cofactors"] = std::move(cof);
  return j;
}

GBasisWithCofactors gb_from_json(const json& doc, const std::vector<std::string>& vars,
                                 const std::vector<Poly>& generators, const MonomialOrder& order) {
  if (!doc.is_object() || !doc.contains("format") || doc.at("format") != kGbFormat)
    throw InputError("not a Gröbner basis cache document");
  if (doc.at("order") != order_to_json(order, vars)) throw InputError("cached basis uses a different monomial order");
  auto polys = [&](const json& arr, const std::string& path) {
    if (!arr.is_array()) throw SchemaError(path, "expected a list");
    std::vector<Poly> out;
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string text = as_string(arr[i], fmt::format("{}[{}]", path, i));
      out.push_back(parse_poly(text, vars));
    }
    return out;
  };
  GBasisWithCofactors gb;
  gb.order = order;
  gb.generators = polys(require(doc, "generators", "$"), "$.generators");
  if (gb.generators != generators) throw InputError("cached basis belongs to different generators");
  gb.gb = polys(require(doc, "gb", "$"), "$.gb");
  const json& cof = require(doc, "cofactors", "$");
  if (!cof.is_array() || cof.size() != gb.gb.size()) throw SchemaError("$.cofactors", "one row per basis element expected");
  for (std::size_t k = 0; k < cof.size(); ++k) {
    gb.cofactors.push_back(polys(cof[k], fmt::format("$.cofactors[{}]", k)));
    if (gb.cofactors.back().size() != generators.size())
      throw SchemaError(fmt::format("$.cofactors[{}]", k), "one cofactor per generator expected");
  }
  if (!verify_reconstruction(gb)) throw InputError("cached basis fails the reconstruction identity");
  return gb;
}

std::optional<std::filesystem::path> resolve_cache_dir(const std::optional<std::string>& cli_option,
                                                       const ProblemFile& problem) {
  if (cli_option && !cli_option->empty()) return std::filesystem::path(*cli_option);
  if (const char* env = std::getenv("FLATF_CACHE_DIR"); env && *env) return std::filesystem::path(env);
  if (problem.cache_dir && !problem.cache_dir->empty()) return std::filesystem::path(*problem.cache_dir);
  return std::nullopt;
}

std::filesystem::path gb_cache_path(const std::filesystem::path& dir, const std::string& hash) {
  return dir / (hash + ".gb.json");
}

}  // namespace flatf
