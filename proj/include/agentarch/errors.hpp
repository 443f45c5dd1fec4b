#pragma once

#include <stdexcept>
#include <string>

namespace agentarch {

// Library errors carry a stable machine-readable kind next to the human
// message. Validators return Verdicts instead of throwing; exceptions are
// reserved for misuse (bad arguments, unknown names, malformed input).
class Error : public std::runtime_error {
public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(message), kind_(std::move(kind)) {}

  const std::string& kind() const { return kind_; }

private:
  std::string kind_;
};

inline Error boundary_type_mismatch(const std::string& msg) { return {"BoundaryTypeMismatch", msg}; }
inline Error undeclared_symbol(const std::string& msg) { return {"UndeclaredSymbol", msg}; }
inline Error unknown_ref(const std::string& msg) { return {"UnknownRef", msg}; }
inline Error unknown_name(const std::string& msg) { return {"UnknownName", msg}; }
inline Error domain_mismatch(const std::string& msg) { return {"DomainMismatch", msg}; }
inline Error missing_binding(const std::string& msg) { return {"MissingBinding", msg}; }
inline Error uninterpretable_spider(const std::string& msg) { return {"UninterpretableSpider", msg}; }
inline Error hyperparam_out_of_range(const std::string& msg) { return {"HyperparamOutOfRange", msg}; }
inline Error max_iter_exceeded(const std::string& msg) { return {"MaxIterExceeded", msg}; }
inline Error shape_mismatch(const std::string& msg) { return {"ShapeMismatch", msg}; }

// Parse errors additionally carry an exact source position (1-based).
class SyntaxError : public Error {
public:
  SyntaxError(std::string file, int line, int column, const std::string& message)
      : Error("SyntaxError", file.empty()
                  ? std::to_string(line) + ":" + std::to_string(column) + ": " + message
                  : file + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        file_(std::move(file)), line_(line), column_(column), detail_(message) {}

  const std::string& file() const { return file_; }
  int line() const { return line_; }
  int column() const { return column_; }
  const std::string& detail() const { return detail_; }

private:
  std::string file_;
  int line_;
  int column_;
  std::string detail_;
};

}  // namespace agentarch
