#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cwflab {

enum class ErrorKind {
  structural,
  lookup,
  domain_mismatch,
  capacity,
  precondition,
  validation,
  parse,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::structural: return "structural";
    case ErrorKind::lookup: return "lookup";
    case ErrorKind::domain_mismatch: return "domain-mismatch";
    case ErrorKind::capacity: return "capacity";
    case ErrorKind::precondition: return "precondition";
    case ErrorKind::validation: return "validation";
    case ErrorKind::parse: return "parse";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind), message_(what) {}

  ErrorKind kind() const noexcept { return kind_; }
  /// what() without the kind prefix.
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorKind kind_;
  std::string message_;
};

/// One failed law, with the tuple that witnesses the failure.
struct Violation {
  std::string law;
  std::string witness;

  friend bool operator==(const Violation&, const Violation&) = default;
};

using ValidationReport = std::vector<Violation>;

class ValidationError : public Error {
 public:
  ValidationError(const std::string& what, ValidationReport report)
      : Error(ErrorKind::validation, what + summarize(report)), report_(std::move(report)) {}

  const ValidationReport& report() const noexcept { return report_; }

 private:
  static std::string summarize(const ValidationReport& report) {
    if (report.empty()) return {};
    std::string out = " (" + std::to_string(report.size()) + " violation(s); first: " +
                      report.front().law + " at " + report.front().witness + ")";
    return out;
  }

  ValidationReport report_;
};

inline void throw_if_invalid(const std::string& what, ValidationReport report) {
  if (!report.empty()) throw ValidationError(what, std::move(report));
}

}  // namespace cwflab
