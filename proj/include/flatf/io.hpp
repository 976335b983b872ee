#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "flatf/engine.hpp"
#include "flatf/error.hpp"
#include "flatf/groebner.hpp"
#include "flatf/quotient.hpp"

namespace flatf {

/// A problem or result document that does not match its schema. The message
/// starts with the JSON path of the offending field, e.g. `$.charges`.
class SchemaError : public InputError {
 public:
  SchemaError(const std::string& path, const std::string& message) : InputError(path + ": " + message) {}
};

/// A validated problem document.
struct ProblemFile {
  Problem problem;
  std::size_t max_level = 2;
  std::optional<std::string> cache_dir;

  /// Canonical form of everything that determines the mathematics (the
  /// level and the cache location are excluded), with sorted keys and
  /// polynomials in canonical text.
  nlohmann::json canonical() const;
  /// Hex SHA-256 of the compact dump of canonical().
  std::string hash() const;
};

ProblemFile parse_problem(const nlohmann::json& doc);
/// Throws InputError when the file is missing or not JSON, SchemaError,
/// ParseError or ChargeError when the document is invalid.
ProblemFile load_problem(const std::filesystem::path& path);

std::string sha256_hex(const std::string& data);

/// Result document: the canonical problem, its hash, the basis and the
/// coefficient tables. Table keys are 0-based multisets such as "(0,1)";
/// rationals are "p/q" strings.
nlohmann::json result_to_json(const FlatFStructure& structure, const ProblemFile& problem);

struct LoadedResult {
  ProblemFile problem;
  FlatFStructure structure;
};

/// Parses a result document. Throws InputError("hash mismatch ...") when
/// the stored hash does not belong to the embedded problem.
LoadedResult result_from_json(const nlohmann::json& doc);
LoadedResult load_result(const std::filesystem::path& path);

nlohmann::json read_json(const std::filesystem::path& path);
/// Pretty-printed, sorted keys, trailing newline.
void write_json(const std::filesystem::path& path, const nlohmann::json& doc);

nlohmann::json gb_to_json(const GBasisWithCofactors& gb, const std::vector<std::string>& vars);
/// Throws InputError when the document is malformed, does not match the
/// expected generators and order, or fails the reconstruction identity.
GBasisWithCofactors gb_from_json(const nlohmann::json& doc, const std::vector<std::string>& vars,
                                 const std::vector<Poly>& generators, const MonomialOrder& order);

/// Cache directory in effect: the explicit option, else FLATF_CACHE_DIR,
/// else the problem file's option.
std::optional<std::filesystem::path> resolve_cache_dir(const std::optional<std::string>& cli_option,
                                                       const ProblemFile& problem);
std::filesystem::path gb_cache_path(const std::filesystem::path& dir, const std::string& hash);

}  // namespace flatf
