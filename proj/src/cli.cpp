#include "infmat/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "infmat/algebra.hpp"
#include "infmat/bases.hpp"
#include "infmat/determinant.hpp"
#include "infmat/error.hpp"
#include "infmat/expr.hpp"
#include "infmat/inverse_solve.hpp"
#include "infmat/spec_json.hpp"
#include "infmat/spectral.hpp"

namespace infmat::cli {

using ojson = nlohmann::ordered_json;

namespace {

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write(const ojson& v, std::string& out, int depth) {
  const std::string pad(2 * (depth + 1), ' ');
  const std::string close_pad(2 * depth, ' ');
  switch (v.type()) {
    case ojson::value_t::object: {
      if (v.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& item : v.items()) {
        if (!first) out += ",\n";
        first = false;
        out += pad + ojson(item.key()).dump() + ": ";
        write(item.value(), out, depth + 1);
      }
      out += "\n" + close_pad + "}";
      return;
    }
    case ojson::value_t::array: {
      if (v.empty()) {
        out += "[]";
        return;
      }
      // Arrays of scalars stay on one line.
      const bool flat = std::none_of(v.begin(), v.end(), [](const ojson& x) {
        return x.is_structured();
      });
      out += flat ? "[" : "[\n";
      bool first = true;
      for (const auto& x : v) {
        if (!first) out += flat ? ", " : ",\n";
        first = false;
        if (!flat) out += pad;
        write(x, out, depth + 1);
      }
      out += flat ? "]" : "\n" + close_pad + "]";
      return;
    }
    case ojson::value_t::number_float: {
      const double d = v.get<double>();
      out += std::isfinite(d) ? format_number(d) : "null";
      return;
    }
    default:
      out += v.dump();
  }
}

int exit_for(Status s) {
  switch (s) {
    case Status::converged:
      return kOk;
    case Status::undetermined:
      return kUndetermined;
    case Status::diverged:
      return kFailed;
  }
  return kFailed;
}

// Worst of two exit statuses: failure beats undetermined beats success.
int combine(int a, int b) {
  if (a == kFailed || b == kFailed) return kFailed;
  if (a == kUndetermined || b == kUndetermined) return kUndetermined;
  return kOk;
}

ojson report_json(const ConvergenceReport& r) {
  ojson j;
  j["estimate"] = r.estimate;
  j["status"] = std::string(to_string(r.status));
  j["terms_used"] = r.terms_used;
  j["last_delta"] = r.last_delta;
  j["certified"] = r.certified;
  j["last_index"] = r.last_index;
  if (r.offending_index) j["offending_index"] = *r.offending_index;
  return j;
}

ojson matrix_json(const DenseMatrix& m) {
  ojson rows = ojson::array();
  for (std::size_t i = 1; i <= m.rows(); ++i) {
    ojson row = ojson::array();
    for (std::size_t j = 1; j <= m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string csv_of(const DenseMatrix& m) {
  std::string out;
  for (std::size_t i = 1; i <= m.rows(); ++i) {
    for (std::size_t j = 1; j <= m.cols(); ++j) {
      if (j > 1) out += ",";
      out += format_number(m(i, j));
    }
    out += "\n";
  }
  return out;
}

ojson config_json(const RunConfig& c) {
  ojson j;
  j["command"] = c.command;
  j["inputs"] = c.inputs;
  j["tol"] = c.policy.tol;
  j["window"] = c.policy.window;
  j["max_terms"] = c.policy.max_terms;
  j["start"] = c.schedule.start;
  j["growth"] = c.schedule.growth;
  j["max_size"] = c.schedule.max_size;
  j["n"] = c.n ? ojson(*c.n) : ojson(nullptr);
  j["interval"] = c.interval ? ojson::array({c.interval->first, c.interval->second})
                             : ojson(nullptr);
  j["wanted"] = c.wanted;
  j["route"] = c.route;
  j["format"] = c.format == Format::json ? "json" : "csv";
  return j;
}

struct Outcome {
  ojson result;
  int exit = kOk;
  std::optional<DenseMatrix> block;  // CSV payload
};

void need_inputs(const RunConfig& c, std::size_t count) {
  if (c.inputs.size() != count)
    throw InvalidArgument(c.command + " takes " + std::to_string(count) +
                          " input file(s), got " +
                          std::to_string(c.inputs.size()));
}

MatrixSpec load_matrix(const std::string& path) {
  return matrix_from_json(read_json_file(path));
}

Outcome run_det(const RunConfig& c) {
  need_inputs(c, 1);
  const auto r = det_infinite(load_matrix(c.inputs[0]), c.schedule, c.policy);
  Outcome o;
  o.result["value"] = r.value;
  o.result["route"] = to_string(r.route);
  o.result["log_terms_used"] = r.log_terms_used;
  o.result["report"] = report_json(r.report);
  o.exit = exit_for(r.report.status);
  return o;
}

Outcome run_inv(const RunConfig& c) {
  need_inputs(c, 1);
  const auto r =
      neumann_inverse(load_matrix(c.inputs[0]), c.policy, c.schedule, c.n.value_or(16));
  Outcome o;
  o.result["block"] = matrix_json(r.block);
  o.result["norm_check"] = r.norm_check;
  o.result["series_terms"] = r.series_terms;
  o.result["residual"] = r.residual;
  o.result["report"] = report_json(r.report);
  o.exit = exit_for(r.report.status);
  o.block = r.block;
  return o;
}

Outcome run_mul(const RunConfig& c) {
  need_inputs(c, 2);
  const MatrixSpec a = load_matrix(c.inputs[0]);
  const MatrixSpec b = load_matrix(c.inputs[1]);
  const std::size_t probe = c.n.value_or(8);
  const auto p = matmul(a, b, c.policy, probe);
  const std::size_t rows = p.matrix.rows().value_or(probe);
  const std::size_t cols = p.matrix.cols().value_or(probe);
  const std::size_t br = p.matrix.rows().is_finite() ? rows : std::min(rows, probe);
  const std::size_t bc = p.matrix.cols().is_finite() ? cols : std::min(cols, probe);
  DenseMatrix block(br, bc);
  for (std::size_t i = 1; i <= br; ++i)
    for (std::size_t j = 1; j <= bc; ++j) {
      const auto it = p.per_entry_reports.find({i, j});
      if (it == p.per_entry_reports.end())
        block(i, j) = p.matrix.entry(i, j);
      else
        block(i, j) = it->second.converged() ? it->second.estimate : NAN;
    }
  Outcome o;
  o.result["rows"] = p.matrix.rows().to_string();
  o.result["cols"] = p.matrix.cols().to_string();
  o.result["block"] = matrix_json(block);
  o.result["overall_status"] = to_string(p.overall_status);
  ojson entries = ojson::array();
  for (const auto& [key, report] : p.per_entry_reports) {
    ojson e;
    e["i"] = key.first;
    e["j"] = key.second;
    e["report"] = report_json(report);
    entries.push_back(std::move(e));
  }
  o.result["entries"] = std::move(entries);
  o.exit = p.overall_status == ProductStatus::converged ? kOk
           : p.overall_status == ProductStatus::partial ? kUndetermined
                                                         : kFailed;
  o.block = block;
  return o;
}

ojson solve_json(const SolveReport& s) {
  ojson j;
  j["verdict"] = to_string(s.compatible);
  j["route"] = to_string(s.route);
  j["rank_A"] = s.rank_A ? report_json(*s.rank_A) : ojson(nullptr);
  j["rank_Ab"] = s.rank_Ab ? report_json(*s.rank_Ab) : ojson(nullptr);
  ojson unknowns = ojson::array();
  for (const auto& [index, report] : s.unknowns) {
    ojson u;
    u["index"] = index;
    u["value"] = report.estimate;
    u["report"] = report_json(report);
    unknowns.push_back(std::move(u));
  }
  j["unknowns"] = std::move(unknowns);
  j["residual"] = s.residual;
  j["section"] = s.section;
  j["trace_condition"] =
      s.trace_condition ? ojson(*s.trace_condition) : ojson(nullptr);
  return j;
}

int solve_exit(const SolveReport& s) {
  int e = kOk;
  for (const auto& [index, report] : s.unknowns)
    e = combine(e, exit_for(report.status));
  return e;
}

Outcome run_solve(const RunConfig& c) {
  need_inputs(c, 1);
  const SystemSpec sys = system_from_json(read_json_file(c.inputs[0]));
  const std::vector<std::size_t> wanted = c.wanted.empty() ? sys.wanted : c.wanted;
  Outcome o;
  if (c.route == "compatibility") {
    const auto s = check_compatibility(sys.A, sys.b, c.schedule, c.policy);
    o.result = solve_json(s);
    o.exit = s.compatible == Verdict::undetermined ? kUndetermined : kOk;
    return o;
  }
  if (c.route == "inverse") {
    const auto s = solve_via_inverse(sys.A, sys.b, wanted, c.schedule, c.policy);
    o.result = solve_json(s);
    o.exit = solve_exit(s);
    return o;
  }
  if (c.route != "cramer" && c.route != "auto")
    throw InvalidArgument("unknown solve route \"" + c.route + "\"");
  std::optional<SolveReport> compat;
  if (c.route == "auto" && sys.A.is_finite()) {
    compat = check_compatibility(sys.A, sys.b, c.schedule, c.policy);
    if (compat->compatible == Verdict::incompatible) {
      o.result = solve_json(*compat);
      o.exit = kFailed;
      o.result["error"] = {{"code", "E_INCOMPATIBLE"},
                           {"message", "rank A differs from rank [A|b]"}};
      return o;
    }
  }
  SolveReport s = cramer_solve(sys.A, sys.b, wanted, c.schedule, c.policy);
  if (compat) {
    s.compatible = compat->compatible;
    s.rank_A = compat->rank_A;
    s.rank_Ab = compat->rank_Ab;
  }
  o.result = solve_json(s);
  o.exit = solve_exit(s);
  return o;
}

Outcome run_rank(const RunConfig& c) {
  need_inputs(c, 1);
  const auto r = rank_of(load_matrix(c.inputs[0]), c.schedule, c.policy);
  Outcome o;
  o.result["rank"] = r.converged() ? ojson(static_cast<std::size_t>(std::llround(r.estimate)))
                                   : ojson(nullptr);
  o.result["report"] = report_json(r);
  o.exit = exit_for(r.status);
  return o;
}

Outcome run_eig(const RunConfig& c) {
  need_inputs(c, 1);
  if (!c.interval) throw InvalidArgument("eig needs --interval LO HI");
  EigenSearch search;
  search.lo = c.interval->first;
  search.hi = c.interval->second;
  const auto pairs = find_eigenvalues(load_matrix(c.inputs[0]), search,
                                      c.schedule, c.policy);
  Outcome o;
  ojson list = ojson::array();
  for (const auto& p : pairs) {
    ojson e;
    e["lambda"] = p.lambda;
    e["vector"] = p.vector;
    e["char_residual"] = p.char_residual;
    e["vec_residual"] = p.vec_residual;
    e["section"] = p.section;
    e["stable"] = p.stable;
    if (!p.stable) o.exit = kUndetermined;
    list.push_back(std::move(e));
  }
  o.result["eigenvalues"] = std::move(list);
  return o;
}

Outcome run_orth(const RunConfig& c) {
  need_inputs(c, 1);
  const MatrixSpec a = load_matrix(c.inputs[0]);
  const auto r = orthogonalize(a, c.policy);
  Outcome o;
  o.result["G"] = matrix_json(r.G);
  o.result["combination"] = matrix_json(r.combination);
  o.result["gram"] = matrix_json(r.gram);
  o.result["max_offdiag_dot"] = r.max_offdiag_dot;
  o.result["max_row_norm2"] = r.max_row_norm2;
  o.result["orthogonal"] = r.orthogonal;
  ojson reports = ojson::array();
  for (const auto& [key, report] : r.gram_reports) {
    ojson e;
    e["p"] = key.first;
    e["q"] = key.second;
    e["report"] = report_json(report);
    reports.push_back(std::move(e));
  }
  o.result["gram_reports"] = std::move(reports);
  std::optional<std::size_t> width;
  if (a.cols().is_finite())
    width = c.n ? std::min(*c.n, a.cols().value()) : a.cols().value();
  else if (c.n)
    width = *c.n;
  if (width) {
    const DenseMatrix prime = truncate(r.a_prime, a.rows().value(), *width);
    o.result["a_prime"] = matrix_json(prime);
    o.block = prime;
  } else {
    o.result["a_prime"] = nullptr;
    o.block = r.combination;
  }
  o.exit = r.orthogonal ? kOk : kUndetermined;
  return o;
}

Outcome run_transition(const RunConfig& c) {
  need_inputs(c, 2);
  const BasisFamily from = basis_from_json(read_json_file(c.inputs[0]));
  const BasisFamily to = basis_from_json(read_json_file(c.inputs[1]));
  std::size_t count = 0;
  if (c.n)
    count = *c.n;
  else if (to.count.is_finite())
    count = to.count.value();
  else
    throw InvalidArgument("transition between infinite bases needs --n");
  const auto r = transition_matrix(from, to, count, c.schedule, c.policy);
  Outcome o;
  o.result["matrix"] = matrix_json(r.matrix);
  ojson status = ojson::array();
  for (Status s : r.column_status) {
    status.push_back(std::string(to_string(s)));
    o.exit = combine(o.exit, exit_for(s));
  }
  o.result["column_status"] = std::move(status);
  o.result["section"] = r.section;
  ojson reports = ojson::array();
  for (const auto& [key, report] : r.coordinate_reports) {
    ojson e;
    e["j"] = key.first;
    e["i"] = key.second;
    e["report"] = report_json(report);
    reports.push_back(std::move(e));
  }
  o.result["coordinate_reports"] = std::move(reports);
  o.block = r.matrix;
  return o;
}

Outcome run_truncate(const RunConfig& c) {
  need_inputs(c, 1);
  const MatrixSpec m = load_matrix(c.inputs[0]);
  if (!c.n && !m.is_finite())
    throw InvalidArgument("truncate of an infinite matrix needs --n");
  const std::size_t rows =
      c.n ? std::min(*c.n, m.rows().value_or(*c.n)) : m.rows().value();
  const std::size_t cols =
      c.n ? std::min(*c.n, m.cols().value_or(*c.n)) : m.cols().value();
  const DenseMatrix section = truncate(m, rows, cols);
  Outcome o;
  o.result["rows"] = rows;
  o.result["cols"] = cols;
  o.result["data"] = matrix_json(section);
  o.block = section;
  return o;
}

Outcome dispatch(const RunConfig& c) {
  c.policy.validate();
  c.schedule.validate();
  if (c.command == "det") return run_det(c);
  if (c.command == "inv") return run_inv(c);
  if (c.command == "mul") return run_mul(c);
  if (c.command == "solve") return run_solve(c);
  if (c.command == "rank") return run_rank(c);
  if (c.command == "eig") return run_eig(c);
  if (c.command == "orth") return run_orth(c);
  if (c.command == "transition") return run_transition(c);
  if (c.command == "truncate") return run_truncate(c);
  throw InvalidArgument("unknown command \"" + c.command + "\"");
}

ojson error_json(const std::string& code, const std::string& message) {
  ojson e;
  e["code"] = code;
  e["message"] = message;
  return e;
}

std::string status_name(int exit) {
  return exit == kOk ? "ok" : exit == kUndetermined ? "undetermined" : "failed";
}

}  // namespace

std::string dump(const ojson& doc) {
  std::string out;
  write(doc, out, 0);
  out += "\n";
  return out;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  ojson doc;
  doc["config"] = config_json(config);
  int exit = kOk;
  std::optional<DenseMatrix> block;
  try {
    Outcome o = dispatch(config);
    exit = o.exit;
    doc["result"] = std::move(o.result);
    block = std::move(o.block);
  } catch (const expr::ParseError& e) {
    exit = kFailed;
    ojson j = error_json(e.code(), e.what());
    j["position"] = e.position();
    doc["error"] = std::move(j);
  } catch (const NonFiniteEntry& e) {
    exit = kFailed;
    ojson j = error_json(e.code(), e.what());
    j["row"] = e.row();
    j["col"] = e.col();
    doc["error"] = std::move(j);
  } catch (const PreconditionError& e) {
    exit = kFailed;
    ojson j = error_json(e.code(), e.what());
    j["measured"] = e.measured();
    doc["error"] = std::move(j);
  } catch (const DependentRows& e) {
    exit = kFailed;
    ojson j = error_json(e.code(), e.what());
    j["row"] = e.row();
    doc["error"] = std::move(j);
  } catch (const Error& e) {
    exit = kFailed;
    doc["error"] = error_json(e.code(), e.what());
  } catch (const std::exception& e) {
    exit = kFailed;
    doc["error"] = error_json("E_INTERNAL", e.what());
  }
  if (!doc.contains("error") && doc.contains("result") &&
      doc["result"].contains("error"))
    doc["error"] = doc["result"]["error"];
  doc["status"] = status_name(exit);
  doc["exit_code"] = exit;

  if (doc.contains("error"))
    err << "infmat: " << doc["error"]["code"].get<std::string>() << ": "
        << doc["error"]["message"].get<std::string>() << "\n";

  std::string text;
  if (config.format == Format::csv && block && !doc.contains("error"))
    text = csv_of(*block);
  else
    text = dump(doc);

  if (config.output.empty()) {
    out << text;
  } else {
    std::ofstream file(config.output, std::ios::binary);
    if (!(file << text)) {
      err << "infmat: E_IO: cannot write " << config.output << "\n";
      return kFailed;
    }
  }
  return exit;
}

int main(int argc, const char* const* argv, std::ostream& out,
         std::ostream& err) {
  CLI::App app{"Computations with infinite matrices given by element formulas"};
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig config;
  std::size_t n = 0;
  std::vector<double> interval;
  std::string format = "json";
  app.add_option("--tol", config.policy.tol, "relative tolerance");
  app.add_option("--window", config.policy.window, "consecutive small steps");
  app.add_option("--max-terms", config.policy.max_terms, "series term cap");
  app.add_option("--start", config.schedule.start, "first section size");
  app.add_option("--growth", config.schedule.growth, "section growth factor");
  app.add_option("--max-size", config.schedule.max_size, "largest section size");
  auto* n_opt = app.add_option("--n", n, "explicit section size");
  auto* interval_opt =
      app.add_option("--interval", interval, "eigenvalue search interval")
          ->expected(2);
  app.add_option("--wanted", config.wanted, "unknowns to solve for")
      ->delimiter(',');
  app.add_option("--route", config.route, "solve route")
      ->check(CLI::IsMember({"auto", "cramer", "inverse", "compatibility"}));
  app.add_option("-o,--output", config.output, "report path");
  app.add_option("--format", format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));

  const std::vector<std::pair<const char*, const char*>> commands = {
      {"det", "determinant"},
      {"inv", "inverse by the Neumann series"},
      {"mul", "product of two matrices"},
      {"solve", "linear system"},
      {"rank", "numerical rank"},
      {"eig", "eigenvalues in an interval"},
      {"orth", "block orthogonalization of rows"},
      {"transition", "transition matrix between two bases"},
      {"truncate", "leading section"},
  };
  for (const auto& [name, help] : commands)
    app.add_subcommand(name, help)
        ->add_option("inputs", config.inputs, "input JSON files")
        ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "infmat: E_USAGE: " << e.what() << "\n";
    return kFailed;
  }

  config.command = app.get_subcommands().front()->get_name();
  if (*n_opt) config.n = n;
  if (*interval_opt) config.interval = std::make_pair(interval[0], interval[1]);
  config.format = format == "csv" ? Format::csv : Format::json;

  if (const char* cap = std::getenv("INFMAT_MAX_SIZE")) {
    char* end = nullptr;
    const unsigned long long value = std::strtoull(cap, &end, 10);
    if (end == cap || *end != '\0' || value == 0) {
      err << "infmat: E_ARGUMENT: INFMAT_MAX_SIZE must be a positive integer\n";
      return kFailed;
    }
    config.schedule.max_size =
        std::min<std::size_t>(config.schedule.max_size, value);
    config.schedule.start = std::min(config.schedule.start, config.schedule.max_size);
  }
  return run(config, out, err);
}

}  // namespace infmat::cli
