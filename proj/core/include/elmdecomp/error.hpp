#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace elm {

// Base of every library error. `module()` names the pipeline stage that
// raised it so the CLI can emit a machine-readable record.
class Error : public std::runtime_error {
 public:
  Error(std::string module, const std::string& what)
      : std::runtime_error(what), module_(std::move(module)) {}
  const std::string& module() const noexcept { return module_; }
  virtual std::string kind() const { return "error"; }

 private:
  std::string module_;
};

class SchemaError : public Error {
 public:
  SchemaError(const std::string& what, std::string column = {})
      : Error("dataset", what), column_(std::move(column)) {}
  const std::string& column() const noexcept { return column_; }
  std::string kind() const override { return "schema_error"; }

 private:
  std::string column_;
};

class RowError : public Error {
 public:
  RowError(std::size_t line, const std::string& what)
      : Error("dataset", "line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }
  std::string kind() const override { return "row_error"; }

 private:
  std::size_t line_;
};

class EmptyFileError : public Error {
 public:
  explicit EmptyFileError(const std::string& path)
      : Error("dataset", "no data in file '" + path + "'") {}
  std::string kind() const override { return "empty_file"; }
};

class DegenerateDesignError : public Error {
 public:
  explicit DegenerateDesignError(std::string column)
      : Error("dataset", "design column '" + column + "' is constant across all rows"),
        column_(std::move(column)) {}
  const std::string& column() const noexcept { return column_; }
  std::string kind() const override { return "degenerate_design"; }

 private:
  std::string column_;
};

class NumericalError : public Error {
 public:
  NumericalError(std::string module, const std::string& what, double smallest_eigenvalue)
      : Error(std::move(module), what), smallest_eigenvalue_(smallest_eigenvalue) {}
  double smallest_eigenvalue() const noexcept { return smallest_eigenvalue_; }
  std::string kind() const override { return "numerical_error"; }

 private:
  double smallest_eigenvalue_;
};

class NonConvergenceError : public Error {
 public:
  NonConvergenceError(const std::string& what, std::vector<double> last_iterate)
      : Error("diagnostics", what), last_iterate_(std::move(last_iterate)) {}
  const std::vector<double>& last_iterate() const noexcept { return last_iterate_; }
  std::string kind() const override { return "non_convergence"; }

 private:
  std::vector<double> last_iterate_;
};

// Precondition violations on user-supplied arguments or configuration.
class InvalidArgument : public Error {
 public:
  InvalidArgument(std::string module, const std::string& what)
      : Error(std::move(module), what) {}
  std::string kind() const override { return "invalid_argument"; }
};

}  // namespace elm
