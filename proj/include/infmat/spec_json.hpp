#pragma once
// JSON input formats.
//
// Matrix:
//   {"rows": "inf" | int, "cols": "inf" | int,
//    "kind": "dense" | "expr" | "banded" | "diag" | "finite-support",
//    "expr": formula in i, j            (expr, diag, finite-support)
//    "bands": {"-1": formula in i, ...} (banded; key is the offset j - i)
//    "data": [[...], ...]               (dense)
//    "support": {"rows": int, "cols": int} (finite-support)
//    "decay": {"kind": "geometric", "C": number, "r": number}}  optional
//
// Vector:  {"kind": "expr", "expr": formula in i, "extent": "inf" | int}
//          {"kind": "dense", "data": [...]}
// System:  {"A": matrix, "b": vector, "wanted": [int, ...]}
// Basis:   {"count": "inf" | int, "dim": "inf" | int,
//           "expr": formula in i (coordinate) and k (vector index)}
//          {"vectors": [[...], ...]}
//
// Violations throw SchemaError; formula syntax errors throw expr::ParseError.

#include <cstddef>
#include <string>
#include <vector>

#include <json.hpp>

#include "infmat/algebra.hpp"
#include "infmat/bases.hpp"
#include "infmat/error.hpp"
#include "infmat/matrix.hpp"

namespace infmat {

// Unreadable file.
class IoError : public Error {
 public:
  explicit IoError(const std::string& message) : Error("E_IO", message) {}
};

// Text that is not JSON at all.
class JsonSyntaxError : public Error {
 public:
  explicit JsonSyntaxError(const std::string& message)
      : Error("E_JSON", message) {}
};

struct SystemSpec {
  MatrixSpec A;
  Vector b;
  std::vector<std::size_t> wanted;
};

// A declared decay certificate is spot-checked and rejected when sampled
// entries exceed it.
MatrixSpec matrix_from_json(const nlohmann::json& doc);
Vector vector_from_json(const nlohmann::json& doc);
SystemSpec system_from_json(const nlohmann::json& doc);
BasisFamily basis_from_json(const nlohmann::json& doc);

nlohmann::json read_json_file(const std::string& path);

}  // namespace infmat
