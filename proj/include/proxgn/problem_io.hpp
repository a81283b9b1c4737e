#pragma once

#include <string>

#include <json.hpp>

#include "proxgn/problem.hpp"

namespace proxgn {

/// Problem file schema (see docs/schemas.md). Parse and validation
/// errors are raised as ConfigError naming the offending field.
Problem problem_from_json(const nlohmann::json& j);
nlohmann::json problem_to_json(const Problem& problem);

/// Reads a problem file; the error message contains the path for
/// missing or malformed files.
Problem load_problem_file(const std::string& path);

}  // namespace proxgn
