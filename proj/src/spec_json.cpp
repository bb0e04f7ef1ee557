#include "infmat/spec_json.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "infmat/expr.hpp"

namespace infmat {

using nlohmann::json;

namespace {

void require_object(const json& doc, const std::string& what) {
  if (!doc.is_object()) throw SchemaError(what + " must be a JSON object");
}

void allow_keys(const json& doc, const std::string& what,
                std::initializer_list<const char*> keys) {
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& item : doc.items())
    if (!allowed.count(item.key()))
      throw SchemaError(what + ": unknown key \"" + item.key() + "\"");
}

const json& field(const json& doc, const std::string& what,
                  const std::string& key) {
  const auto it = doc.find(key);
  if (it == doc.end())
    throw SchemaError(what + ": missing \"" + key + "\"");
  return *it;
}

std::size_t positive_int(const json& v, const std::string& what) {
  if (!v.is_number_integer() || v.get<long long>() < 1)
    throw SchemaError(what + " must be a positive integer");
  return v.get<std::size_t>();
}

Extent extent_of(const json& v, const std::string& what) {
  if (v.is_string()) {
    if (v.get<std::string>() == "inf") return Extent::infinite();
    throw SchemaError(what + " must be \"inf\" or a positive integer");
  }
  return Extent(positive_int(v, what));
}

double number(const json& v, const std::string& what) {
  if (!v.is_number()) throw SchemaError(what + " must be a number");
  return v.get<double>();
}

expr::Expr formula(const json& v, const std::string& what) {
  if (!v.is_string()) throw SchemaError(what + " must be a formula string");
  return expr::Expr::parse(v.get<std::string>());
}

std::vector<double> number_row(const json& v, const std::string& what) {
  if (!v.is_array() || v.empty())
    throw SchemaError(what + " must be a non-empty array of numbers");
  std::vector<double> out;
  for (const auto& x : v) out.push_back(number(x, what));
  return out;
}

std::vector<std::vector<double>> number_rows(const json& v,
                                             const std::string& what) {
  if (!v.is_array() || v.empty())
    throw SchemaError(what + " must be a non-empty array of arrays");
  std::vector<std::vector<double>> out;
  for (const auto& row : v) out.push_back(number_row(row, what + " row"));
  for (const auto& row : out)
    if (row.size() != out.front().size())
      throw SchemaError(what + " rows must have equal length");
  return out;
}

long parse_offset(const std::string& key) {
  std::size_t used = 0;
  long offset = 0;
  try {
    offset = std::stol(key, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != key.size())
    throw SchemaError("band key \"" + key + "\" is not an integer offset");
  return offset;
}

}  // namespace

MatrixSpec matrix_from_json(const json& doc) {
  const std::string what = "matrix";
  require_object(doc, what);
  allow_keys(doc, what,
             {"rows", "cols", "kind", "expr", "bands", "data", "support",
              "decay"});
  const json& kind_field = field(doc, what, "kind");
  if (!kind_field.is_string()) throw SchemaError("matrix kind must be a string");
  const std::string kind = kind_field.get<std::string>();

  auto extents = [&]() {
    return std::make_pair(extent_of(field(doc, what, "rows"), "rows"),
                          extent_of(field(doc, what, "cols"), "cols"));
  };

  std::optional<MatrixSpec> spec;
  if (kind == "dense") {
    const auto rows = number_rows(field(doc, what, "data"), "data");
    DenseMatrix m(rows.size(), rows.front().size());
    for (std::size_t i = 1; i <= m.rows(); ++i)
      for (std::size_t j = 1; j <= m.cols(); ++j) m(i, j) = rows[i - 1][j - 1];
    if (doc.contains("rows") &&
        !(extent_of(doc["rows"], "rows") == Extent(m.rows())))
      throw SchemaError("rows does not match the data");
    if (doc.contains("cols") &&
        !(extent_of(doc["cols"], "cols") == Extent(m.cols())))
      throw SchemaError("cols does not match the data");
    spec = from_dense(m);
  } else if (kind == "expr") {
    const auto [rows, cols] = extents();
    const auto f = formula(field(doc, what, "expr"), "expr");
    spec = MatrixSpec(rows, cols,
                      [f](std::size_t i, std::size_t j) { return f.eval(i, j); });
  } else if (kind == "diag") {
    const auto [rows, cols] = extents();
    if (!(rows == cols)) throw SchemaError("diag matrices must be square");
    const auto f = formula(field(doc, what, "expr"), "expr");
    spec = diagonal_spec(rows, [f](std::size_t i) { return f.eval(i, i); });
  } else if (kind == "banded") {
    const auto [rows, cols] = extents();
    const json& bands = field(doc, what, "bands");
    if (!bands.is_object() || bands.empty())
      throw SchemaError("bands must be a non-empty object");
    std::vector<std::pair<long, std::function<double(std::size_t)>>> fns;
    for (const auto& item : bands.items()) {
      const long offset = parse_offset(item.key());
      const auto f = formula(item.value(), "band " + item.key());
      fns.emplace_back(offset, [f, offset](std::size_t i) {
        return f.eval(i, static_cast<std::size_t>(static_cast<long>(i) + offset));
      });
    }
    spec = banded_spec(rows, cols, std::move(fns));
  } else if (kind == "finite-support") {
    const auto [rows, cols] = extents();
    const json& support = field(doc, what, "support");
    require_object(support, "support");
    allow_keys(support, "support", {"rows", "cols"});
    const std::size_t sr = positive_int(field(support, "support", "rows"), "support rows");
    const std::size_t sc = positive_int(field(support, "support", "cols"), "support cols");
    if ((rows.is_finite() && sr > rows.value()) ||
        (cols.is_finite() && sc > cols.value()))
      throw SchemaError("support exceeds the matrix extent");
    const auto f = formula(field(doc, what, "expr"), "expr");
    spec = finite_support_spec(
        rows, cols, sr, sc,
        [f](std::size_t i, std::size_t j) { return f.eval(i, j); });
  } else {
    throw SchemaError("unknown matrix kind \"" + kind + "\"");
  }

  if (doc.contains("decay")) {
    const json& d = doc["decay"];
    require_object(d, "decay");
    allow_keys(d, "decay", {"kind", "C", "r"});
    if (field(d, "decay", "kind") != "geometric")
      throw SchemaError("decay kind must be \"geometric\"");
    DecayCertificate cert{number(field(d, "decay", "C"), "decay C"),
                          number(field(d, "decay", "r"), "decay r")};
    try {
      spec = spec->with_decay(cert);
    } catch (const InvalidArgument& e) {
      throw SchemaError(std::string("decay: ") + e.what());
    }
    if (const auto bad = find_decay_violation(*spec))
      throw SchemaError("decay certificate violated at (" +
                        std::to_string(bad->first) + "," +
                        std::to_string(bad->second) + ")");
  }
  return *spec;
}

Vector vector_from_json(const json& doc) {
  const std::string what = "vector";
  require_object(doc, what);
  allow_keys(doc, what, {"kind", "expr", "data", "extent"});
  const json& kind_field = field(doc, what, "kind");
  if (!kind_field.is_string()) throw SchemaError("vector kind must be a string");
  const std::string kind = kind_field.get<std::string>();
  if (kind == "dense") {
    auto data = number_row(field(doc, what, "data"), "data");
    if (doc.contains("extent") &&
        !(extent_of(doc["extent"], "extent") == Extent(data.size())))
      throw SchemaError("extent does not match the data");
    return Vector(std::move(data));
  }
  if (kind == "expr") {
    const Extent extent = doc.contains("extent")
                              ? extent_of(doc["extent"], "extent")
                              : Extent::infinite();
    const auto f = formula(field(doc, what, "expr"), "expr");
    return Vector(extent, [f](std::size_t i) {
      return f.eval(expr::Bindings{static_cast<double>(i), std::nullopt,
                                   std::nullopt});
    });
  }
  throw SchemaError("unknown vector kind \"" + kind + "\"");
}

SystemSpec system_from_json(const json& doc) {
  require_object(doc, "system");
  allow_keys(doc, "system", {"A", "b", "wanted"});
  SystemSpec out{matrix_from_json(field(doc, "system", "A")),
                 vector_from_json(field(doc, "system", "b")),
                 {}};
  if (doc.contains("wanted")) {
    const json& w = doc["wanted"];
    if (!w.is_array()) throw SchemaError("wanted must be an array of indices");
    for (const auto& x : w) out.wanted.push_back(positive_int(x, "wanted index"));
  }
  return out;
}

BasisFamily basis_from_json(const json& doc) {
  const std::string what = "basis";
  require_object(doc, what);
  if (doc.contains("vectors")) {
    allow_keys(doc, what, {"vectors"});
    return basis_from_vectors(number_rows(doc["vectors"], "vectors"));
  }
  allow_keys(doc, what, {"count", "dim", "expr"});
  const Extent count = extent_of(field(doc, what, "count"), "count");
  const Extent dim = extent_of(field(doc, what, "dim"), "dim");
  const auto f = formula(field(doc, what, "expr"), "expr");
  return {count, dim, [f](std::size_t i, std::size_t k) {
            return f.eval(expr::Bindings{static_cast<double>(i), std::nullopt,
                                         static_cast<double>(k)});
          }};
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return json::parse(buffer.str());
  } catch (const json::parse_error& e) {
    throw JsonSyntaxError(path + ": " + e.what());
  }
}

}  // namespace infmat
