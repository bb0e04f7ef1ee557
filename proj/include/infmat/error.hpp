#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace infmat {

// Base of every error the library raises. `code()` is a stable
// machine-readable identifier that the CLI prints verbatim.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

class ExtentMismatch : public Error {
 public:
  explicit ExtentMismatch(const std::string& message)
      : Error("E_EXTENT", message) {}
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& message)
      : Error("E_ARGUMENT", message) {}
};

// An element oracle produced NaN or an infinity.
class NonFiniteEntry : public Error {
 public:
  NonFiniteEntry(std::size_t row, std::size_t col)
      : Error("E_NONFINITE", "non-finite entry at (" + std::to_string(row) +
                                 "," + std::to_string(col) + ")"),
        row_(row),
        col_(col) {}

  std::size_t row() const noexcept { return row_; }
  std::size_t col() const noexcept { return col_; }

 private:
  std::size_t row_;
  std::size_t col_;
};

// A norm or contraction precondition failed; carries the measured value.
class PreconditionError : public Error {
 public:
  PreconditionError(const std::string& message, double measured)
      : Error("E_PRECONDITION", message), measured_(measured) {}

  double measured() const noexcept { return measured_; }

 private:
  double measured_;
};

class SingularSystem : public Error {
 public:
  explicit SingularSystem(const std::string& message)
      : Error("E_SINGULAR", message) {}
};

class DependentRows : public Error {
 public:
  DependentRows(std::size_t row, const std::string& message)
      : Error("E_DEPENDENT_ROWS", message), row_(row) {}

  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

// A series or limit needed for the result did not converge.
class ConvergenceFailure : public Error {
 public:
  explicit ConvergenceFailure(const std::string& message)
      : Error("E_CONVERGENCE", message) {}
};

class NotAnEigenvalue : public Error {
 public:
  explicit NotAnEigenvalue(const std::string& message)
      : Error("E_NOT_EIGENVALUE", message) {}
};

class SchemaError : public Error {
 public:
  explicit SchemaError(const std::string& message)
      : Error("E_SCHEMA", message) {}
};

}  // namespace infmat
