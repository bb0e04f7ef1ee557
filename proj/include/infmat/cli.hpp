#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "infmat/schedule.hpp"
#include "infmat/series.hpp"

namespace infmat::cli {

enum class Format { json, csv };

struct RunConfig {
  std::string command;  // det inv mul solve rank eig orth transition truncate
  std::vector<std::string> inputs;
  ConvergencePolicy policy;
  TruncationSchedule schedule;
  std::optional<std::size_t> n;
  std::optional<std::pair<double, double>> interval;
  std::vector<std::size_t> wanted;
  std::string route = "auto";  // solve: auto cramer inverse compatibility
  std::string output;          // empty: standard output
  Format format = Format::json;
};

// Exit statuses.
constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kUndetermined = 2;

// Runs one command and writes its report to `out` (or to config.output).
// Errors are reported in the document and as one line on `err`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

// Argument parsing plus run(). INFMAT_MAX_SIZE, when set, caps max_size.
int main(int argc, const char* const* argv, std::ostream& out,
         std::ostream& err);

// Pretty JSON with insertion-ordered keys, numbers as %.17g and non-finite
// numbers as null.
std::string dump(const nlohmann::ordered_json& doc);

}  // namespace infmat::cli
